#include <bit>

#include <omp.h>

#include "xcsbm/kernels.hpp"
#include "xcsbm/rng.hpp"

namespace xcsbm::kernels {

int max_threads() { return omp_get_max_threads(); }

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

namespace omp {

void spmm(const CsrView& s, const Matrix& in, Matrix& out) {
  const Eigen::Index cols = in.cols();
  out.setZero(static_cast<Eigen::Index>(s.rows), cols);
  const bool unit = s.values.empty();
  const auto rows = static_cast<std::int64_t>(s.rows);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < rows; ++i) {
    auto dst = out.row(i);
    for (std::size_t e = s.row_ptr[i]; e < s.row_ptr[i + 1]; ++e) {
      const double v = unit ? 1.0 : s.values[e];
      dst.noalias() += v * in.row(s.cols[e]);
    }
  }
}

std::vector<std::vector<std::uint32_t>> sbm_upper_rows(std::span<const std::uint8_t> eps,
                                                       double p, double q,
                                                       std::uint64_t graph_seed) {
  const auto n = static_cast<std::int64_t>(eps.size());
  std::vector<std::vector<std::uint32_t>> rows(eps.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    Engine eng(derive_seed(graph_seed, static_cast<std::uint64_t>(i)));
    auto& row = rows[i];
    for (std::int64_t j = i + 1; j < n; ++j) {
      const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
      if (u < (eps[i] == eps[j] ? p : q)) row.push_back(static_cast<std::uint32_t>(j));
    }
  }
  return rows;
}

std::vector<double> row_power_sq_norms(const CsrView& s, std::span<const std::uint32_t> nodes,
                                       int k) {
  const std::size_t n = s.rows;
  const bool unit = s.values.empty();
  std::vector<double> out(nodes.size());
  const auto count = static_cast<std::int64_t>(nodes.size());
#pragma omp parallel
  {
    std::vector<double> cur(n), next(n);
#pragma omp for schedule(dynamic, 4)
    for (std::int64_t t = 0; t < count; ++t) {
      std::fill(cur.begin(), cur.end(), 0.0);
      cur[nodes[t]] = 1.0;
      for (int step = 0; step < k; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t r = 0; r < n; ++r) {
          const double w = cur[r];
          if (w == 0.0) continue;
          for (std::size_t e = s.row_ptr[r]; e < s.row_ptr[r + 1]; ++e)
            next[s.cols[e]] += w * (unit ? 1.0 : s.values[e]);
        }
        cur.swap(next);
      }
      double acc = 0.0;
      for (double v : cur) acc += v * v;
      out[t] = acc;
    }
  }
  return out;
}

std::vector<std::uint32_t> pair_common_counts(
    const BitRows& rows, std::span<const std::pair<std::uint32_t, std::uint32_t>> pairs) {
  std::vector<std::uint32_t> out(pairs.size());
  const auto count = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < count; ++t) {
    const std::uint64_t* a = rows.bits.data() + pairs[t].first * rows.words;
    const std::uint64_t* b = rows.bits.data() + pairs[t].second * rows.words;
    std::uint32_t c = 0;
    for (std::size_t w = 0; w < rows.words; ++w) c += std::popcount(a[w] & b[w]);
    out[t] = c;
  }
  return out;
}

}  // namespace omp
}  // namespace xcsbm::kernels
