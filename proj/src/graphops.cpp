#include "xcsbm/graphops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xcsbm/errors.hpp"
#include "xcsbm/rng.hpp"

namespace xcsbm {

namespace {

void spmm(Backend backend, const CsrView& s, const Matrix& in, Matrix& out) {
  if (backend == Backend::serial)
    kernels::serial::spmm(s, in, out);
  else
    kernels::omp::spmm(s, in, out);
}

Matrix apply_power(Backend backend, const CsrView& s, const Matrix& x, int k) {
  if (k < 0) throw ParameterError("convolution count must be >= 0");
  if (static_cast<std::size_t>(x.rows()) != s.rows)
    throw ShapeError("feature rows (" + std::to_string(x.rows()) + ") != graph size (" +
                     std::to_string(s.rows) + ")");
  if (k == 0) return x;
  Matrix cur = x, next;
  for (int step = 0; step < k; ++step) {
    spmm(backend, s, cur, next);
    cur.swap(next);
  }
  return cur;
}

}  // namespace

ConvOperator normalize(const Graph& g, NormMode mode) {
  ConvOperator op;
  op.mode_ = mode;
  op.row_ptr_ = g.row_ptr();
  op.cols_ = g.cols();
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i)
    if (g.degree(i) == 0)
      throw DegenerateInputError("node " + std::to_string(i) + " has zero degree");
  op.values_.resize(op.cols_.size());
  op.values_t_.resize(op.cols_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double di = g.degree(i);
    for (std::size_t e = op.row_ptr_[i]; e < op.row_ptr_[i + 1]; ++e) {
      const double dj = g.degree(op.cols_[e]);
      if (mode == NormMode::row) {
        op.values_[e] = 1.0 / di;
        op.values_t_[e] = 1.0 / dj;  // (D⁻¹A)ᵀ_ij = a_ji / deg(j)
      } else {
        op.values_[e] = 1.0 / std::sqrt(di * dj);
        op.values_t_[e] = op.values_[e];
      }
    }
  }
  return op;
}

Matrix ConvOperator::dense() const {
  const auto n = static_cast<Eigen::Index>(size());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e) m(i, cols_[e]) = values_[e];
  return m;
}

Matrix convolve(const ConvOperator& op, const Matrix& x, int k, Backend backend) {
  return apply_power(backend, op.matrix(), x, k);
}

Matrix convolve_transpose(const ConvOperator& op, const Matrix& x, int k, Backend backend) {
  return apply_power(backend, op.transpose(), x, k);
}

std::uint32_t common_neighbors(const Graph& g, std::size_t i, std::size_t j) {
  if (i >= g.size() || j >= g.size()) throw IndexError("node index out of range");
  auto a = g.neighbors(i);
  auto b = g.neighbors(j);
  std::uint32_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

double variance_reduction_rho(const Graph& g, int k, std::size_t i) {
  if (i >= g.size()) throw IndexError("node index out of range");
  const std::uint32_t node = static_cast<std::uint32_t>(i);
  return variance_reduction_rho(g, k, std::span<const std::uint32_t>(&node, 1), 0.5, 0.5)[0]
      .exact;
}

std::vector<RhoValue> variance_reduction_rho(const Graph& g, int k,
                                             std::span<const std::uint32_t> nodes, double p,
                                             double q, Backend backend) {
  if (k < 1) throw ParameterError("rho needs K >= 1");
  for (auto v : nodes)
    if (v >= g.size()) throw IndexError("node index out of range");
  const ConvOperator op = normalize(g, NormMode::row);
  const auto exact = backend == Backend::serial
                         ? kernels::serial::row_power_sq_norms(op.matrix(), nodes, k)
                         : kernels::omp::row_power_sq_norms(op.matrix(), nodes, k);
  const auto paths = backend == Backend::serial
                         ? kernels::serial::row_power_sq_norms(g.csr(), nodes, k)
                         : kernels::omp::row_power_sq_norms(g.csr(), nodes, k);
  const double delta = 0.5 * static_cast<double>(g.size()) * (p + q);
  const double scale = delta > 0.0 ? std::pow(delta, -2.0 * k) : 0.0;
  std::vector<RhoValue> out(nodes.size());
  for (std::size_t t = 0; t < nodes.size(); ++t) out[t] = {exact[t], paths[t] * scale};
  return out;
}

double rho2_closed_form_times_n(double p, double q) {
  const double s = p * p + q * q;
  return (2.0 * s * s + 8.0 * p * p * q * q) / std::pow(p + q, 4);
}

ConcentrationReport degree_concentration_report(const Graph& g, double p, double q, double c,
                                                double big_c) {
  const double n = static_cast<double>(g.size());
  ConcentrationReport r;
  r.quantity = "degree";
  r.center = 0.5 * n * (p + q);
  r.samples = g.size();
  for (auto d : g.degrees())
    r.max_rel_deviation = std::max(r.max_rel_deviation, std::abs(d - r.center) / r.center);
  r.predicted_bound = big_c * std::sqrt((c + 1.0) * std::log(n) / (n * (p + q)));
  r.pass = r.max_rel_deviation <= r.predicted_bound;
  return r;
}

ConcentrationReport common_neighbor_concentration_report(const Graph& g,
                                                         std::span<const std::uint8_t> eps,
                                                         double p, double q, double c,
                                                         double big_c, std::size_t max_pairs,
                                                         std::uint64_t seed, Backend backend) {
  const std::size_t n = g.size();
  if (eps.size() != n) throw ShapeError("label vector length must equal n");
  if (n < 2) throw DegenerateInputError("need at least two nodes");

  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  const std::size_t all = n * (n - 1) / 2;
  if (all <= max_pairs) {
    pairs.reserve(all);
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  } else {
    Engine eng = make_engine(derive_seed(seed, stream::pairs));
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
    pairs.reserve(max_pairs);
    while (pairs.size() < max_pairs) {
      const std::uint32_t i = pick(eng);
      const std::uint32_t j = pick(eng);
      if (i != j) pairs.emplace_back(i, j);
    }
  }

  const BitRows bits = BitRows::from_csr(g.csr());
  const auto counts = backend == Backend::serial ? kernels::serial::pair_common_counts(bits, pairs)
                                                 : kernels::omp::pair_common_counts(bits, pairs);

  const double nd = static_cast<double>(n);
  const double same = 0.5 * nd * (p * p + q * q);
  const double cross = nd * p * q;
  ConcentrationReport r;
  r.quantity = "common_neighbors";
  r.center = std::min(same, cross);
  r.samples = pairs.size();
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    const double center = eps[pairs[t].first] == eps[pairs[t].second] ? same : cross;
    const double dev = std::abs(counts[t] - center);
    const double rel = center > 0.0 ? dev / center : (dev > 0.0 ? HUGE_VAL : 0.0);
    r.max_rel_deviation = std::max(r.max_rel_deviation, rel);
  }
  r.predicted_bound =
      r.center > 0.0 ? big_c * std::sqrt((c + 2.0) * std::log(nd) / r.center) : 0.0;
  r.pass = r.max_rel_deviation <= r.predicted_bound;
  return r;
}

double mean_collapse_ratio(const Dataset& ds, const Graph& g) {
  if (ds.size() != g.size()) throw ShapeError("dataset and graph sizes differ");
  const auto [m0, m1] = class_means(ds);
  const double raw = (m0 - m1).norm();
  if (raw == 0.0) throw DegenerateInputError("raw class means coincide");
  Dataset conv{convolve(normalize(g, NormMode::row), ds.x, 1), ds.eps, ds.eta};
  const auto [c0, c1] = class_means(conv);
  return (c0 - c1).norm() / raw;
}

}  // namespace xcsbm
