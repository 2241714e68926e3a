#pragma once

// Verification suite: numerical checks of the model's theoretical claims.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "xcsbm/experiment.hpp"

namespace xcsbm {

enum class Scale { quick, full };

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  Scale scale = Scale::quick;
  std::uint64_t seed = 1;
  int jobs = 0;
  /// Misclassification floor used by the Bayes check; replaceable for mutation tests.
  std::function<double(double)> floor = theory::misclassification_floor;
  /// When nonempty, the phase-diagram CSV and thresholds are written here.
  std::string phase_csv;
};

/// Names of the checks run at `scale`, in execution order.
std::vector<std::string> check_names(Scale scale);

std::vector<CheckResult> verify_suite(const VerifyOptions& opts);

/// Runs one named check. Throws ParameterError for an unknown name.
CheckResult run_check(const std::string& name, const VerifyOptions& opts);

CheckResult check_bayes_floor(const VerifyOptions& opts);
CheckResult check_zeta_oracle(const VerifyOptions& opts);
CheckResult check_placement_equivalence(const VerifyOptions& opts);
CheckResult check_closed_form_oracle(const VerifyOptions& opts);
CheckResult check_loss_formula(const VerifyOptions& opts);
CheckResult check_variance_reduction(const VerifyOptions& opts);
CheckResult check_first_layer_collapse(const VerifyOptions& opts);
CheckResult check_gradients(const VerifyOptions& opts);
CheckResult check_concentration(const VerifyOptions& opts);
CheckResult check_phase_diagram(const VerifyOptions& opts);

/// ‖g_fd − g‖₂ / max(‖g_fd‖₂, ‖g‖₂) over every parameter, with central differences
/// of step h on subset_loss.
double gradient_check_error(const Network& net, const ConvOperator* op, const Matrix& x,
                            const PlacementPlan& plan, std::span<const std::uint8_t> labels,
                            double h = 1e-6);

/// Smallest |pre-activation| over all hidden units; finite differences are
/// unreliable when this is close to 0.
double min_hidden_margin(const Network& net, const ConvOperator* op, const Matrix& x,
                         const PlacementPlan& plan);

/// Every plan with k_l ∈ {0, 1, 2} for depths 2 and 3.
std::vector<PlacementPlan> all_small_plans();

/// ‖a − b‖∞ / ‖b‖∞ (absolute when b = 0).
double relative_diff(const Vector& a, const Vector& b);

/// Copy of ds with every η = 0 row negated, so X_i = mean(ε_i) + noise.
Dataset force_signs(const Dataset& ds);

/// Sweep configuration behind the phase-diagram check.
SweepConfig phase_diagram_config(std::uint64_t seed);

}  // namespace xcsbm
