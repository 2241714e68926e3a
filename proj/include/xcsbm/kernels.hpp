#pragma once

// Data-parallel inner loops. Every kernel exists twice: a plain serial
// reference in `kernels::serial` and an OpenMP version in `kernels::omp`.
// Both produce bit-identical output: the OpenMP versions only partition the
// outer (row / node / pair) loop, never a reduction.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "xcsbm/types.hpp"

namespace xcsbm {

/// Compressed sparse rows. `values` empty means every stored entry is 1.
struct CsrView {
  std::size_t rows = 0;
  std::span<const std::size_t> row_ptr;
  std::span<const std::uint32_t> cols;
  std::span<const double> values;
};

/// Dense bit rows of an n x n 0/1 matrix, `words` 64-bit words per row.
struct BitRows {
  std::size_t n = 0;
  std::size_t words = 0;
  std::vector<std::uint64_t> bits;

  static BitRows from_csr(const CsrView& pattern);
};

enum class Backend { serial, omp };

namespace kernels {

namespace serial {
// out = S * in; out is resized to S.rows x in.cols().
void spmm(const CsrView& s, const Matrix& in, Matrix& out);

// Upper-triangle SBM draws: result[i] lists j > i with a_ij = 1, ascending.
// Row i consumes its own stream seeded with derive_seed(graph_seed, i).
std::vector<std::vector<std::uint32_t>> sbm_upper_rows(std::span<const std::uint8_t> eps,
                                                       double p, double q,
                                                       std::uint64_t graph_seed);

// For each node i in `nodes`: sum_j ((S^K)_ij)^2, propagating e_i^T through S K times.
std::vector<double> row_power_sq_norms(const CsrView& s, std::span<const std::uint32_t> nodes,
                                       int k);

// |N_i ∩ N_j| for each pair via popcount over bit rows.
std::vector<std::uint32_t> pair_common_counts(
    const BitRows& rows, std::span<const std::pair<std::uint32_t, std::uint32_t>> pairs);
}  // namespace serial

namespace omp {
// out = S * in; out is resized to S.rows x in.cols().
void spmm(const CsrView& s, const Matrix& in, Matrix& out);

// Upper-triangle SBM draws: result[i] lists j > i with a_ij = 1, ascending.
// Row i consumes its own stream seeded with derive_seed(graph_seed, i).
std::vector<std::vector<std::uint32_t>> sbm_upper_rows(std::span<const std::uint8_t> eps,
                                                       double p, double q,
                                                       std::uint64_t graph_seed);

// For each node i in `nodes`: sum_j ((S^K)_ij)^2, propagating e_i^T through S K times.
std::vector<double> row_power_sq_norms(const CsrView& s, std::span<const std::uint32_t> nodes,
                                       int k);

// |N_i ∩ N_j| for each pair via popcount over bit rows.
std::vector<std::uint32_t> pair_common_counts(
    const BitRows& rows, std::span<const std::pair<std::uint32_t, std::uint32_t>> pairs);
}  // namespace omp

/// Number of OpenMP threads the `omp` kernels will use (1 without OpenMP).
int max_threads();
void set_threads(int n);

}  // namespace kernels
}  // namespace xcsbm
