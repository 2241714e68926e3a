#include <gtest/gtest.h>

#include <cmath>

#include "xcsbm/errors.hpp"
#include "xcsbm/graphops.hpp"
#include "xcsbm/rng.hpp"
#include "xcsbm/verify.hpp"

using namespace xcsbm;

namespace {

Graph path3() { return Graph::from_edges(3, {{0, 1}, {1, 2}}); }

Graph complete(std::size_t n) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph::from_edges(n, e);
}

Graph cycle(std::size_t n) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
  for (std::uint32_t i = 0; i < n; ++i) e.emplace_back(i, static_cast<std::uint32_t>((i + 1) % n));
  return Graph::from_edges(n, e);
}

std::vector<std::uint8_t> alternating(std::size_t n) {
  std::vector<std::uint8_t> eps(n);
  for (std::size_t i = 0; i < n; ++i) eps[i] = i % 2;
  return eps;
}

Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  Engine eng = make_engine(seed);
  std::normal_distribution<double> nd;
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = nd(eng);
  return m;
}

}  // namespace

TEST(Normalize, IdentityGraph) {
  const Graph g = Graph::from_edges(4, {});
  for (auto mode : {NormMode::row, NormMode::symmetric})
    EXPECT_EQ(normalize(g, mode).dense(), Matrix::Identity(4, 4));
}

TEST(Normalize, PathMiddleRow) {
  const Matrix m = normalize(path3()).dense();
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(m(1, j), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(m(0, 0), 0.5, 1e-15);
  EXPECT_EQ(m(0, 2), 0.0);
}

TEST(Normalize, RowSumsAndSymmetry) {
  const Graph g = sample_sbm(200, 0.1, 0.03, alternating(200), 4);
  const Matrix row = normalize(g, NormMode::row).dense();
  EXPECT_LT((row.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
  Matrix m3 = row * row * row;
  EXPECT_LT((m3.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
  const Matrix sym = normalize(g, NormMode::symmetric).dense();
  EXPECT_LT((sym - sym.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  // D^{-1/2} A D^{-1/2} from the dense adjacency.
  Matrix a = Matrix::Zero(200, 200);
  for (std::size_t i = 0; i < 200; ++i)
    for (auto j : g.neighbors(i)) a(static_cast<Eigen::Index>(i), j) = 1.0;
  for (Eigen::Index i = 0; i < 200; ++i)
    for (Eigen::Index j = 0; j < 200; ++j)
      a(i, j) /= std::sqrt(double(g.degree(static_cast<std::size_t>(i))) *
                           double(g.degree(static_cast<std::size_t>(j))));
  EXPECT_LT((sym - a).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Convolve, PathExample) {
  Matrix x(3, 2);
  x << 1, 0, 0, 1, 1, 1;
  const Matrix y = convolve(normalize(path3()), x, 1);
  // Row 0 averages nodes {0, 1}: ((1,0) + (0,1))/2.
  EXPECT_NEAR(y(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(y(0, 1), 0.5, 1e-15);
  EXPECT_NEAR(y(1, 0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(y(1, 1), 2.0 / 3.0, 1e-15);
}

TEST(Convolve, ZeroStepsAndComposition) {
  const Graph g = sample_sbm(120, 0.2, 0.05, alternating(120), 6);
  const ConvOperator op = normalize(g);
  const Matrix x = random_matrix(120, 3, 1);
  EXPECT_EQ(convolve(op, x, 0), x);
  EXPECT_EQ(convolve(op, x, 2), convolve(op, convolve(op, x, 1), 1));
  EXPECT_EQ(convolve(op, x, 2, Backend::serial), convolve(op, x, 2, Backend::omp));
}

TEST(Convolve, AdjointIdentity) {
  const Graph g = sample_sbm(150, 0.15, 0.05, alternating(150), 7);
  for (auto mode : {NormMode::row, NormMode::symmetric}) {
    const ConvOperator op = normalize(g, mode);
    for (int k = 1; k <= 3; ++k) {
      const Matrix u = random_matrix(150, 1, 10 + k);
      const Matrix v = random_matrix(150, 1, 20 + k);
      const double lhs = convolve(op, u, k).col(0).dot(v.col(0));
      const double rhs = u.col(0).dot(convolve_transpose(op, v, k).col(0));
      EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST(Convolve, ShapeAndParameterErrors) {
  const ConvOperator op = normalize(path3());
  EXPECT_THROW(convolve(op, Matrix::Zero(4, 1), 1), ShapeError);
  EXPECT_THROW(convolve(op, Matrix::Zero(3, 1), -1), ParameterError);
}

TEST(CommonNeighbors, HandCases) {
  const Graph tri = complete(3);
  EXPECT_EQ(common_neighbors(tri, 0, 1), 3u);
  EXPECT_EQ(common_neighbors(tri, 1, 2), 3u);
  const Graph id = Graph::from_edges(3, {});
  EXPECT_EQ(common_neighbors(id, 0, 2), 0u);
  const Graph k6 = complete(6);
  EXPECT_EQ(common_neighbors(k6, 2, 5), 6u);
}

TEST(Rho, IdentityAndComplete) {
  const Graph id = Graph::from_edges(5, {});
  for (int k = 1; k <= 3; ++k) EXPECT_DOUBLE_EQ(variance_reduction_rho(id, k, 2), 1.0);
  const Graph k7 = complete(7);
  EXPECT_NEAR(variance_reduction_rho(k7, 1, 0), 1.0 / 7.0, 1e-15);
  EXPECT_THROW(variance_reduction_rho(k7, 0, 0), ParameterError);
  EXPECT_THROW(variance_reduction_rho(k7, 1, 9), IndexError);
}

TEST(Rho, BoundsAndMonotoneOnVertexTransitiveGraphs) {
  for (const Graph& g : {complete(9), cycle(12)}) {
    double prev = 1.0;
    for (int k = 1; k <= 4; ++k) {
      const double r = variance_reduction_rho(g, k, 0);
      EXPECT_GT(r, 0.0);
      EXPECT_LE(r, prev + 1e-15);
      prev = r;
    }
  }
}

TEST(Rho, NodeListMatchesSingleNode) {
  const Graph g = sample_sbm(300, 0.2, 0.05, alternating(300), 9);
  std::vector<std::uint32_t> nodes{0, 10, 299};
  const auto v = variance_reduction_rho(g, 2, nodes, 0.2, 0.05);
  for (std::size_t t = 0; t < nodes.size(); ++t) {
    EXPECT_NEAR(v[t].exact, variance_reduction_rho(g, 2, nodes[t]), 1e-15);
    EXPECT_GT(v[t].degree_approx, 0.0);
  }
}

TEST(Rho, SparseSbmMedianNearDegreeApproximation) {
  const std::size_t n = 2000;
  const double p = 0.2, q = 0.02;
  const Graph g = sample_sbm(n, p, q, alternating(n), 14);
  std::vector<std::uint32_t> nodes(n);
  for (std::uint32_t i = 0; i < n; ++i) nodes[i] = i;
  std::vector<double> r;
  for (const auto& v : variance_reduction_rho(g, 1, nodes, p, q)) r.push_back(v.exact);
  std::nth_element(r.begin(), r.begin() + n / 2, r.end());
  const double want = 2.0 / (n * (p + q));
  EXPECT_NEAR(r[n / 2], want, 0.1 * want);
}

TEST(Rho, ClosedFormValue) {
  // (2(p²+q²)² + 8p²q²)/(p+q)⁴ at p = q: (8p⁴ + 8p⁴)/(16p⁴) = 1.
  EXPECT_NEAR(rho2_closed_form_times_n(0.3, 0.3), 1.0, 1e-15);
  EXPECT_NEAR(rho2_closed_form_times_n(0.2, 0.1), 0.0082 / 0.0081, 1e-12);
}

TEST(Concentration, DeterministicDegrees) {
  const std::size_t n = 40;
  const Graph g = sample_sbm(n, 1.0, 1.0, alternating(n), 1);
  const auto r = degree_concentration_report(g, 1.0, 1.0, 1.0);
  // With self-loops every degree is n against the center n.
  EXPECT_NEAR(r.max_rel_deviation, 0.0, 1e-15);
  EXPECT_TRUE(r.pass);
  const auto cn = common_neighbor_concentration_report(g, alternating(n), 1.0, 1.0, 1.0);
  EXPECT_NEAR(cn.max_rel_deviation, 0.0, 1e-15);
  EXPECT_TRUE(cn.pass);
}

TEST(Concentration, DegreeReportDenseSbm) {
  const std::size_t n = 5000;
  Engine eng = make_engine(3);
  std::vector<std::uint8_t> eps(n);
  for (auto& e : eps) e = static_cast<std::uint8_t>(eng() >> 63);
  const Graph g = sample_sbm(n, 0.2, 0.02, eps, 17);
  const auto r = degree_concentration_report(g, 0.2, 0.02, 1.0);
  EXPECT_TRUE(r.pass) << r.max_rel_deviation << " vs " << r.predicted_bound;
  EXPECT_EQ(r.samples, n);
}

TEST(Concentration, CommonNeighbourCentersAndVerdict) {
  const std::size_t n = 3000;
  const auto eps = alternating(n);
  const Graph g = sample_sbm(n, 0.3, 0.1, eps, 19);
  const auto r = common_neighbor_concentration_report(g, eps, 0.3, 0.1, 1.0);
  // Same-class center (n/2)(p²+q²) = 150, cross-class center npq = 90.
  EXPECT_NEAR(r.center, 90.0, 1e-9);
  EXPECT_TRUE(r.pass);
}

TEST(Concentration, SubsampledVerdictMatchesFullOnSmallGraph) {
  const std::size_t n = 500;
  const auto eps = alternating(n);
  const Graph g = sample_sbm(n, 0.5, 0.3, eps, 21);
  const auto full = common_neighbor_concentration_report(g, eps, 0.5, 0.3, 1.0,
                                                         kConcentrationConstant, 1000000);
  const auto sub = common_neighbor_concentration_report(g, eps, 0.5, 0.3, 1.0,
                                                        kConcentrationConstant, 20000, 5);
  EXPECT_EQ(full.samples, n * (n - 1) / 2);
  EXPECT_EQ(sub.samples, 20000u);
  EXPECT_EQ(full.pass, sub.pass);
  EXPECT_LE(sub.max_rel_deviation, full.max_rel_deviation + 1e-15);
}

TEST(Concentration, SparseGraphIsReportedNotThrown) {
  const Graph g = sample_sbm(50, 0.05, 0.01, alternating(50), 2);
  EXPECT_NO_THROW(degree_concentration_report(g, 0.05, 0.01, 1.0));
}

TEST(Collapse, IdentityGraphRatioOne) {
  const CsbmParams c = make_params(200, 2, 2.0, 0.5, 0.0, 0.0);
  const auto [ds, g] = sample_xor_csbm(c, 3);
  EXPECT_NEAR(mean_collapse_ratio(force_signs(ds), g), 1.0, 1e-12);
}

TEST(Collapse, EqualProbabilitiesErasesClassGap) {
  const CsbmParams c = make_params(2000, 2, 2.0, 0.5, 0.3, 0.3);
  const auto [ds, g] = sample_xor_csbm(c, 4);
  EXPECT_LE(mean_collapse_ratio(force_signs(ds), g), 0.1);
}

TEST(Collapse, MixedSignsCollapseAfterConvolution) {
  const CsbmParams c = make_params(2000, 2, 2.0, 0.5, 0.8, 0.2);
  const auto [ds, g] = sample_xor_csbm(c, 5);
  const Dataset conv{convolve(normalize(g), ds.x, 1), ds.eps, ds.eta};
  const auto [c0, c1] = class_means(conv);
  EXPECT_LE((c0 - c1).norm() / c.gamma(), 0.2);
  // Sign-forced data keeps the fraction |p − q|/(p + q) of the gap.
  EXPECT_NEAR(mean_collapse_ratio(force_signs(ds), g), 0.6, 0.05);
}

TEST(Collapse, CoincidingMeansThrow) {
  const CsbmParams c = make_params(20, 2, 0.0, 0.0, 0.5, 0.5);
  const auto [ds, g] = sample_xor_csbm(c, 1);
  EXPECT_THROW(mean_collapse_ratio(ds, g), DegenerateInputError);
}
