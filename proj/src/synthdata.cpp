#include "xcsbm/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xcsbm/errors.hpp"
#include "xcsbm/rng.hpp"

namespace xcsbm {

namespace {

void check_prob(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0))
    throw ParameterError(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
}

}  // namespace

void CsbmParams::validate() const {
  if (n == 0) throw ParameterError("n must be positive");
  if (d == 0) throw ParameterError("d must be positive");
  if (static_cast<std::size_t>(mu.size()) != d || static_cast<std::size_t>(nu.size()) != d)
    throw ParameterError("mu and nu must have length d");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ParameterError("sigma must be >= 0");
  check_prob(p, "p");
  check_prob(q, "q");
  const double mn = mu.norm();
  const double nn = nu.norm();
  const double scale = std::max(mn, nn);
  if (scale == 0.0) return;  // both zero: gamma = 0, trivially orthogonal
  if (std::abs(mn - nn) > 1e-12 * scale) throw ParameterError("mu and nu must have equal norms");
  if (std::abs(mu.dot(nu)) > 1e-12 * scale * scale)
    throw ParameterError("mu and nu must be orthogonal");
}

std::pair<Vector, Vector> default_means(std::size_t d, double gamma) {
  if (d < 2) throw ParameterError("default mean construction needs d >= 2");
  if (!(gamma >= 0.0)) throw ParameterError("gamma must be >= 0");
  Vector mu = Vector::Zero(static_cast<Eigen::Index>(d));
  Vector nu = Vector::Zero(static_cast<Eigen::Index>(d));
  mu[0] = gamma / std::sqrt(2.0);
  nu[1] = gamma / std::sqrt(2.0);
  return {mu, nu};
}

CsbmParams make_params(std::size_t n, std::size_t d, double gamma, double sigma, double p,
                       double q) {
  auto [mu, nu] = default_means(d, gamma);
  CsbmParams params{n, d, std::move(mu), std::move(nu), sigma, p, q};
  params.validate();
  return params;
}

Graph Graph::from_upper(const std::vector<std::vector<std::uint32_t>>& upper) {
  const std::size_t n = upper.size();
  Graph g;
  g.degrees_.assign(n, 1);  // self-loop
  for (std::size_t i = 0; i < n; ++i) {
    g.degrees_[i] += static_cast<std::uint32_t>(upper[i].size());
    for (std::uint32_t j : upper[i]) ++g.degrees_[j];
  }
  g.row_ptr_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.row_ptr_[i + 1] = g.row_ptr_[i] + g.degrees_[i];
  g.cols_.resize(g.row_ptr_[n]);

  // Row j receives its lower neighbors while sources i < j are swept, then
  // its self-loop and upper neighbors, so every row comes out sorted.
  std::vector<std::size_t> fill(g.row_ptr_.begin(), g.row_ptr_.end() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    g.cols_[fill[i]++] = static_cast<std::uint32_t>(i);
    for (std::uint32_t j : upper[i]) {
      g.cols_[fill[i]++] = j;
      g.cols_[fill[j]++] = static_cast<std::uint32_t>(i);
    }
  }
  return g;
}

Graph Graph::from_edges(std::size_t n,
                        const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
  std::vector<std::vector<std::uint32_t>> upper(n);
  for (auto [a, b] : edges) {
    if (a >= n || b >= n)
      throw IndexError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                       ") out of range for n = " + std::to_string(n));
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    upper[a].push_back(b);
  }
  for (auto& row : upper) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return from_upper(upper);
}

double Graph::mean_degree() const {
  if (degrees_.empty()) return 0.0;
  double s = 0.0;
  for (auto d : degrees_) s += d;
  return s / static_cast<double>(degrees_.size());
}

bool Graph::has_edge(std::size_t i, std::size_t j) const {
  if (i >= size() || j >= size()) throw IndexError("node index out of range");
  auto row = neighbors(i);
  return std::binary_search(row.begin(), row.end(), static_cast<std::uint32_t>(j));
}

Dataset sample_xor_gmm(const CsbmParams& params, std::uint64_t seed) {
  params.validate();
  const auto n = static_cast<Eigen::Index>(params.n);
  const auto d = static_cast<Eigen::Index>(params.d);
  Dataset ds;
  ds.x.resize(n, d);
  ds.eps.resize(params.n);
  ds.eta.resize(params.n);
  Engine eng = make_engine(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::uint64_t coins = eng();
    const std::uint8_t e = coins >> 63;
    const std::uint8_t s = (coins >> 62) & 1U;
    ds.eps[i] = e;
    ds.eta[i] = s;
    const double sign = s ? 1.0 : -1.0;
    const Vector& mean = e ? params.nu : params.mu;
    for (Eigen::Index k = 0; k < d; ++k) {
      const double noise = params.sigma > 0.0 ? params.sigma * gauss(eng) : 0.0;
      ds.x(i, k) = sign * mean[k] + noise;
    }
  }
  return ds;
}

Graph sample_sbm(std::size_t n, double p, double q, std::span<const std::uint8_t> eps,
                 std::uint64_t seed, Backend backend) {
  check_prob(p, "p");
  check_prob(q, "q");
  if (eps.size() != n) throw ShapeError("label vector length must equal n");
  for (auto e : eps)
    if (e > 1) throw ParameterError("labels must be 0 or 1");
  auto upper = backend == Backend::serial ? kernels::serial::sbm_upper_rows(eps, p, q, seed)
                                          : kernels::omp::sbm_upper_rows(eps, p, q, seed);
  return Graph::from_upper(upper);
}

std::pair<Dataset, Graph> sample_xor_csbm(const CsbmParams& params, std::uint64_t seed,
                                          Backend backend) {
  Dataset ds = sample_xor_gmm(params, derive_seed(seed, stream::data));
  Graph g = sample_sbm(params.n, params.p, params.q, ds.eps, derive_seed(seed, stream::graph),
                       backend);
  return {std::move(ds), std::move(g)};
}

std::pair<Vector, Vector> class_means(const Dataset& ds) {
  const auto d = ds.x.cols();
  Vector m0 = Vector::Zero(d), m1 = Vector::Zero(d);
  std::size_t c0 = 0, c1 = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.eps[i]) {
      m1 += ds.x.row(static_cast<Eigen::Index>(i)).transpose();
      ++c1;
    } else {
      m0 += ds.x.row(static_cast<Eigen::Index>(i)).transpose();
      ++c0;
    }
  }
  if (c0 == 0 || c1 == 0) throw DegenerateInputError("class_means needs both classes nonempty");
  return {m0 / static_cast<double>(c0), m1 / static_cast<double>(c1)};
}

}  // namespace xcsbm
