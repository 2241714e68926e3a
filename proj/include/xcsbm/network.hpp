#pragma once

// Multi-layer ReLU networks with per-layer graph convolutions:
//   H⁰ = X,  f⁽ˡ⁾ = M^{k_l} H⁽ˡ⁻¹⁾ W⁽ˡ⁾ + b⁽ˡ⁾,  H⁽ˡ⁾ = ReLU(f⁽ˡ⁾),  logits = f⁽ᴸ⁾
// with M = D⁻¹A. Weights are stored (fan_in x fan_out) so activations stay
// node-major.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "xcsbm/graphops.hpp"
#include "xcsbm/synthdata.hpp"
#include "xcsbm/types.hpp"

namespace xcsbm {

/// Number of graph convolutions in each layer.
struct PlacementPlan {
  std::vector<int> k;

  std::size_t depth() const { return k.size(); }
  int total() const;
  /// Sum over layers ≥ 2.
  int total_after_first() const;
  friend bool operator==(const PlacementPlan&, const PlacementPlan&) = default;
};

/// An architecture as written in figure legends: "kL-j₁…j_k", e.g. "2L-01" is
/// two layers with one convolution in layer 2. "MLP2"/"MLP3" alias the
/// zero-convolution plans.
struct Architecture {
  std::string label;
  PlacementPlan plan;

  std::size_t depth() const { return plan.depth(); }
};

/// Throws ParameterError on a malformed label.
Architecture parse_architecture(const std::string& label);

/// Canonical "kL-j…" form of a plan.
std::string architecture_label(const PlacementPlan& plan);

struct Layer {
  Matrix w;  // fan_in x fan_out
  Vector b;  // fan_out
};

struct Network {
  std::vector<Layer> layers;
  double r = 1.0;  // first-layer spectral-norm budget

  std::size_t depth() const { return layers.size(); }
  std::size_t input_dim() const;
  /// Throws ShapeError when consecutive layer dims disagree or the output is not scalar.
  void validate() const;
  friend bool operator==(const Network&, const Network&) = default;
};

/// sgn(p − q)^{total_convs}, with sgn(0) = +1.
int default_orientation(double p, double q, int total_convs);

/// The Bayes-realizing construction with zero biases:
///   L = 2:  W¹ = R[μ̂, −μ̂, ν̂, −ν̂],  W² = ξ·(−1, −1, 1, 1)ᵀ
///   L = 3:  W¹ as above,  W² = [[−1,1],[−1,1],[1,−1],[1,−1]],  W³ = ξ·(1, −1)ᵀ
/// Raw logit without convolutions: ξR(|⟨x,ν̂⟩| − |⟨x,μ̂⟩|).
/// The orientation ξ ∈ {+1, −1} multiplies the output layer.
Network build_ansatz(int depth, double r, const Vector& mu, const Vector& nu, int xi = 1);

/// Uniform(±1/√fan_in) weights and biases, widths d → hidden... → 1.
Network init_network(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                     std::uint64_t seed);

/// Intermediate values needed by backpropagation. For layer l (0-based):
/// conv[l] = M^{k_l} H_{l-1}, pre[l] = conv[l]·W + b, act[l] = ReLU(pre[l])·mask.
struct ForwardTrace {
  std::vector<Matrix> conv;
  std::vector<Matrix> pre;
  std::vector<Matrix> act;
};

/// Per-hidden-layer multiplicative dropout masks (already scaled by 1/(1−p)).
using DropoutMasks = std::vector<Matrix>;

/// Raw logits (one per node). `op == nullptr` means A = I and every k_l must be 0.
/// Throws ShapeError / ParameterError on inconsistent inputs.
Vector forward(const Network& net, const ConvOperator* op, const Matrix& x,
               const PlacementPlan& plan, ForwardTrace* trace = nullptr,
               const DropoutMasks* masks = nullptr);

/// Mean of log(1 + exp((1 − 2y)·f)) over all entries, evaluated as a stable softplus.
double bce_loss(const Vector& logits, std::span<const std::uint8_t> labels);

/// softplus(z) = log(1 + e^z) without overflow.
double softplus(double z);
double sigmoid(double z);

/// Largest singular value by power iteration on WᵀW.
double spectral_norm(const Matrix& w, int iterations = 100, double tol = 1e-10);

/// Rescales W¹ to ‖W¹‖₂ ≤ R and each later W to ‖W‖₂ ≤ 1. Biases are untouched.
Network project_constraints(const Network& net, double r);

/// Output of the ansatz with convolutions after the first layer:
///   one conv:  R·sgn(p − q)/deg(i) · Σ_j a_ij h(X_j)
///   two convs: R/deg(i) · Σ_j τ_ij h(X_j),  τ_ij = Σ_k a_ik a_jk / deg(k)
/// where h(x) = |⟨x,ν̂⟩| − |⟨x,μ̂⟩|. τ is formed explicitly (O(n·Σdeg²)), so
/// this is an independent check of forward, meant for small n.
Vector closed_form_logits(const Matrix& x, const Graph& g, int total_convs, double r, double p,
                          double q, const Vector& mu, const Vector& nu);

/// Plain-text checkpoint:
///   xcsbm-network 1
///   R <r>
///   layers <L>
///   then per layer: "layer <fan_in> <fan_out>", fan_in rows of weights, one bias row.
void save_network(const Network& net, std::ostream& out);
Network load_network(std::istream& in);

}  // namespace xcsbm
