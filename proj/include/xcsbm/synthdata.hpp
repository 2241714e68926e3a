#pragma once

// XOR-GMM features, two-block SBM graphs, and their coupling (XOR-CSBM).

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "xcsbm/kernels.hpp"
#include "xcsbm/types.hpp"

namespace xcsbm {

/// Generative description of one synthetic instance.
struct CsbmParams {
  std::size_t n = 0;
  std::size_t d = 0;
  Vector mu;
  Vector nu;
  double sigma = 0.0;
  double p = 0.0;
  double q = 0.0;

  /// Throws ParameterError unless mu ⟂ nu, ‖mu‖ = ‖nu‖ (relative 1e-12),
  /// sigma ≥ 0 and p, q ∈ [0, 1].
  void validate() const;

  /// gamma = ‖mu − nu‖₂.
  double gamma() const { return (mu - nu).norm(); }
};

/// mu = (gamma/√2)·e1, nu = (gamma/√2)·e2, so that ‖mu − nu‖ = gamma. Needs d ≥ 2.
std::pair<Vector, Vector> default_means(std::size_t d, double gamma);

/// Convenience constructor using default_means.
CsbmParams make_params(std::size_t n, std::size_t d, double gamma, double sigma, double p,
                       double q);

struct Dataset {
  Matrix x;                        // n x d
  std::vector<std::uint8_t> eps;   // class label
  std::vector<std::uint8_t> eta;   // mixture sign

  std::size_t size() const { return eps.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(x.cols()); }
};

/// Undirected graph with self-loops in CSR form. Column indices are sorted
/// within each row and every row contains its own index.
class Graph {
 public:
  Graph() = default;

  /// Builds from upper-triangle neighbor lists (j > i), mirroring them and
  /// adding self-loops.
  static Graph from_upper(const std::vector<std::vector<std::uint32_t>>& upper);

  /// Builds from an arbitrary edge list; duplicates collapse, edges are
  /// mirrored, self-loops added. Throws IndexError on out-of-range ids.
  static Graph from_edges(std::size_t n,
                          const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges);

  std::size_t size() const { return degrees_.size(); }
  std::size_t nnz() const { return cols_.size(); }
  std::uint32_t degree(std::size_t i) const { return degrees_[i]; }
  const std::vector<std::uint32_t>& degrees() const { return degrees_; }
  double mean_degree() const;

  std::span<const std::uint32_t> neighbors(std::size_t i) const {
    return {cols_.data() + row_ptr_[i], cols_.data() + row_ptr_[i + 1]};
  }
  bool has_edge(std::size_t i, std::size_t j) const;

  /// Pattern view (all stored values 1).
  CsrView csr() const { return {size(), row_ptr_, cols_, {}}; }
  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::uint32_t>& cols() const { return cols_; }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> cols_;
  std::vector<std::uint32_t> degrees_;
};

/// Samples X ~ XOR-GMM: eps_i, eta_i fair coins, X_i = (2eta_i − 1)((1 − eps_i)mu + eps_i nu) + sigma·g_i.
/// Only n, d, mu, nu, sigma are read; p and q are still validated.
Dataset sample_xor_gmm(const CsbmParams& params, std::uint64_t seed);

/// Samples A ~ SBM(n, p, q) conditioned on `eps`: a_ij ~ Ber(p) when eps_i = eps_j,
/// Ber(q) otherwise, a_ii = 1.
Graph sample_sbm(std::size_t n, double p, double q, std::span<const std::uint8_t> eps,
                 std::uint64_t seed, Backend backend = Backend::omp);

/// Features from derive_seed(seed, stream::data), graph from derive_seed(seed, stream::graph).
std::pair<Dataset, Graph> sample_xor_csbm(const CsbmParams& params, std::uint64_t seed,
                                          Backend backend = Backend::omp);

/// Empirical mean of X over C_0 and over C_1. Throws DegenerateInputError on an empty class.
std::pair<Vector, Vector> class_means(const Dataset& ds);

}  // namespace xcsbm
