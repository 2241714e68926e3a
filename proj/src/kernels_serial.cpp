#include <bit>

#include "xcsbm/kernels.hpp"
#include "xcsbm/rng.hpp"

namespace xcsbm {

BitRows BitRows::from_csr(const CsrView& pattern) {
  BitRows out;
  out.n = pattern.rows;
  out.words = (pattern.rows + 63) / 64;
  out.bits.assign(out.n * out.words, 0);
  for (std::size_t i = 0; i < out.n; ++i) {
    std::uint64_t* row = out.bits.data() + i * out.words;
    for (std::size_t e = pattern.row_ptr[i]; e < pattern.row_ptr[i + 1]; ++e) {
      const std::uint32_t j = pattern.cols[e];
      row[j / 64] |= std::uint64_t{1} << (j % 64);
    }
  }
  return out;
}

namespace kernels::serial {

void spmm(const CsrView& s, const Matrix& in, Matrix& out) {
  const Eigen::Index cols = in.cols();
  out.setZero(static_cast<Eigen::Index>(s.rows), cols);
  const bool unit = s.values.empty();
  for (std::size_t i = 0; i < s.rows; ++i) {
    auto dst = out.row(static_cast<Eigen::Index>(i));
    for (std::size_t e = s.row_ptr[i]; e < s.row_ptr[i + 1]; ++e) {
      const double v = unit ? 1.0 : s.values[e];
      dst.noalias() += v * in.row(s.cols[e]);
    }
  }
}

std::vector<std::vector<std::uint32_t>> sbm_upper_rows(std::span<const std::uint8_t> eps,
                                                       double p, double q,
                                                       std::uint64_t graph_seed) {
  const std::size_t n = eps.size();
  std::vector<std::vector<std::uint32_t>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    Engine eng(derive_seed(graph_seed, i));
    auto& row = rows[i];
    for (std::size_t j = i + 1; j < n; ++j) {
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
  std::vector<double> cur(n), next(n);
  for (std::size_t t = 0; t < nodes.size(); ++t) {
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
  return out;
}

std::vector<std::uint32_t> pair_common_counts(
    const BitRows& rows, std::span<const std::pair<std::uint32_t, std::uint32_t>> pairs) {
  std::vector<std::uint32_t> out(pairs.size());
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    const std::uint64_t* a = rows.bits.data() + pairs[t].first * rows.words;
    const std::uint64_t* b = rows.bits.data() + pairs[t].second * rows.words;
    std::uint32_t c = 0;
    for (std::size_t w = 0; w < rows.words; ++w) c += std::popcount(a[w] & b[w]);
    out[t] = c;
  }
  return out;
}

}  // namespace kernels::serial
}  // namespace xcsbm
