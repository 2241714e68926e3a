#pragma once

// Normalized graph operators, K-step convolution, neighborhood statistics,
// variance reduction ρ(K) and concentration diagnostics.

#include <cstdint>
#include <string>
#include <vector>

#include "xcsbm/kernels.hpp"
#include "xcsbm/synthdata.hpp"
#include "xcsbm/types.hpp"

namespace xcsbm {

enum class NormMode { row, symmetric };

/// Normalized adjacency on the graph's sparsity pattern.
///   row:        M = D⁻¹A           (rows sum to 1)
///   symmetric:  M = D^{-1/2} A D^{-1/2}
/// The adjacency pattern is symmetric, so Mᵀ lives on the same pattern with
/// its own value array.
class ConvOperator {
 public:
  NormMode mode() const { return mode_; }
  std::size_t size() const { return row_ptr_.size() - 1; }

  CsrView matrix() const { return {size(), row_ptr_, cols_, values_}; }
  CsrView transpose() const { return {size(), row_ptr_, cols_, values_t_}; }

  /// Dense copy, for tests on small graphs.
  Matrix dense() const;

  friend ConvOperator normalize(const Graph& g, NormMode mode);

 private:
  NormMode mode_ = NormMode::row;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> cols_;
  std::vector<double> values_;
  std::vector<double> values_t_;
};

/// Throws DegenerateInputError on a zero-degree node.
ConvOperator normalize(const Graph& g, NormMode mode = NormMode::row);

/// op^K · X, evaluated as K successive sparse products (op·(op·(…·X))).
/// K = 0 returns X unchanged. Throws ShapeError when X.rows() != n.
Matrix convolve(const ConvOperator& op, const Matrix& x, int k, Backend backend = Backend::omp);

/// (opᵀ)^K · X, the adjoint of convolve.
Matrix convolve_transpose(const ConvOperator& op, const Matrix& x, int k,
                          Backend backend = Backend::omp);

/// |N_i ∩ N_j| = Σ_k a_ik a_jk (self-loops included in N_i).
std::uint32_t common_neighbors(const Graph& g, std::size_t i, std::size_t j);

/// Variance multiplier of a K-step row-normalized convolution at node i.
struct RhoValue {
  double exact = 0.0;      // Σ_j M_ij², M = (D⁻¹A)^K
  double degree_approx = 0.0;  // Δ^{-2K} Σ_j (A^K)_ij², Δ = (n/2)(p+q)
};

/// Exact ρ(K) at node i. Throws ParameterError for K < 1, IndexError for bad i.
double variance_reduction_rho(const Graph& g, int k, std::size_t i);

/// ρ(K) at each listed node, with the degree-concentrated approximation from
/// Δ = (n/2)(p+q). Materializes one row of M^K at a time.
std::vector<RhoValue> variance_reduction_rho(const Graph& g, int k,
                                             std::span<const std::uint32_t> nodes, double p,
                                             double q, Backend backend = Backend::omp);

/// (2(p²+q²)² + 8p²q²)/(p+q)⁴: the n·ρ(2) value implied by common-neighbour
/// concentration on a balanced two-block SBM.
double rho2_closed_form_times_n(double p, double q);

struct ConcentrationReport {
  std::string quantity;
  double center = 0.0;           // for multi-center reports, the smallest center
  double max_rel_deviation = 0.0;
  double predicted_bound = 0.0;
  bool pass = false;
  std::size_t samples = 0;
};

/// Default implementation constant for concentration bounds.
inline constexpr double kConcentrationConstant = 5.0;

/// max_i |deg(i) − Δ|/Δ against C·sqrt((c+1)·log n/(n(p+q))), Δ = (n/2)(p+q).
ConcentrationReport degree_concentration_report(const Graph& g, double p, double q, double c,
                                                double big_c = kConcentrationConstant);

/// max over pairs of |N_i ∩ N_j| relative to (n/2)(p²+q²) (same class) or
/// npq (cross class), against C·sqrt((c+2)·log n / min center). Uses all
/// pairs when n(n−1)/2 ≤ max_pairs, else max_pairs pairs drawn from `seed`.
ConcentrationReport common_neighbor_concentration_report(
    const Graph& g, std::span<const std::uint8_t> eps, double p, double q, double c,
    double big_c = kConcentrationConstant, std::size_t max_pairs = 100000,
    std::uint64_t seed = 0, Backend backend = Backend::omp);

/// ‖mean(X̃|C_0) − mean(X̃|C_1)‖ / ‖mean(X|C_0) − mean(X|C_1)‖ with X̃ = D⁻¹AX.
/// Throws DegenerateInputError when the raw class means coincide.
double mean_collapse_ratio(const Dataset& ds, const Graph& g);

}  // namespace xcsbm
