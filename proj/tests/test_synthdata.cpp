#include <gtest/gtest.h>

#include <cmath>

#include "xcsbm/errors.hpp"
#include "xcsbm/synthdata.hpp"

using namespace xcsbm;

namespace {

CsbmParams unit_params(std::size_t n, double sigma, double p = 0.5, double q = 0.5) {
  CsbmParams c;
  c.n = n;
  c.d = 2;
  c.mu = Vector::Unit(2, 0);
  c.nu = Vector::Unit(2, 1);
  c.sigma = sigma;
  c.p = p;
  c.q = q;
  return c;
}

void expect_graph_invariants(const Graph& g) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_TRUE(g.has_edge(i, i));
    EXPECT_GE(g.degree(i), 1u);
    EXPECT_EQ(g.degree(i), g.neighbors(i).size());
    for (auto j : g.neighbors(i)) EXPECT_TRUE(g.has_edge(j, i));
  }
}

}  // namespace

TEST(CsbmParams, ValidationRejectsBadMeans) {
  CsbmParams c = unit_params(10, 1.0);
  EXPECT_NO_THROW(c.validate());
  c.nu = Vector::Unit(2, 1) * 2.0;
  EXPECT_THROW(c.validate(), ParameterError);
  c.nu = Vector(2);
  c.nu << std::sqrt(0.5), std::sqrt(0.5);
  EXPECT_THROW(c.validate(), ParameterError);
}

TEST(CsbmParams, ValidationRejectsBadProbabilitiesAndSigma) {
  CsbmParams c = unit_params(10, 1.0, 1.2, 0.1);
  EXPECT_THROW(c.validate(), ParameterError);
  c = unit_params(10, -1.0);
  EXPECT_THROW(c.validate(), ParameterError);
}

TEST(CsbmParams, DefaultMeansHaveRequestedGap) {
  const auto [mu, nu] = default_means(4, 3.0);
  EXPECT_NEAR((mu - nu).norm(), 3.0, 1e-14);
  EXPECT_NEAR(mu.dot(nu), 0.0, 1e-15);
  EXPECT_NEAR(mu.norm(), nu.norm(), 1e-15);
  EXPECT_THROW(default_means(1, 1.0), ParameterError);
}

TEST(XorGmm, ZeroNoiseRowsAreSignedMeans) {
  const Dataset ds = sample_xor_gmm(unit_params(4, 0.0), 5);
  const CsbmParams c = unit_params(4, 0.0);
  for (std::size_t i = 0; i < 4; ++i) {
    const Vector mean = (2.0 * ds.eta[i] - 1.0) * (ds.eps[i] ? c.nu : c.mu);
    EXPECT_EQ(Vector(ds.x.row(static_cast<Eigen::Index>(i)).transpose()), mean);
  }
}

TEST(XorGmm, ZeroNoiseLargeSampleOnlyFourPoints) {
  const Dataset ds = sample_xor_gmm(unit_params(500, 0.0), 6);
  for (Eigen::Index i = 0; i < ds.x.rows(); ++i) {
    const double a = ds.x(i, 0), b = ds.x(i, 1);
    EXPECT_TRUE((std::abs(a) == 1.0 && b == 0.0) || (a == 0.0 && std::abs(b) == 1.0));
  }
}

TEST(XorGmm, LabelFractionAndConditionalMean) {
  const std::size_t n = 100000;
  const Dataset ds = sample_xor_gmm(unit_params(n, 1.0), 7);
  double ones = 0.0, proj = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ones += ds.eps[i];
    if (ds.eps[i] == 0 && ds.eta[i] == 1) {
      proj += ds.x(static_cast<Eigen::Index>(i), 0);
      ++count;
    }
  }
  EXPECT_NEAR(ones / n, 0.5, 0.01);
  EXPECT_NEAR(proj / static_cast<double>(count), 1.0, 0.02);
}

TEST(XorGmm, ClassMeansVanishUnderSignMixing) {
  const Dataset ds = sample_xor_gmm(unit_params(100000, 1.0), 8);
  const auto [m0, m1] = class_means(ds);
  EXPECT_LE(m0.norm(), 0.05);
  EXPECT_LE(m1.norm(), 0.05);
}

TEST(XorGmm, HalvesHaveMatchingFeatureMeans) {
  // Two disjoint halves of one sample are exchangeable: their coordinate means
  // agree within 4 standard errors.
  const std::size_t n = 100000;
  const Dataset ds = sample_xor_gmm(unit_params(n, 1.0), 9);
  const Eigen::Index h = static_cast<Eigen::Index>(n / 2);
  for (Eigen::Index j = 0; j < 2; ++j) {
    const double a = ds.x.col(j).head(h).mean();
    const double b = ds.x.col(j).tail(h).mean();
    const double var = (ds.x.col(j).array() - ds.x.col(j).mean()).square().mean();
    EXPECT_LE(std::abs(a - b), 4.0 * std::sqrt(2.0 * var / static_cast<double>(h)));
  }
}

TEST(XorGmm, Deterministic) {
  const CsbmParams c = make_params(300, 3, 1.5, 0.7, 0.3, 0.1);
  const auto a = sample_xor_csbm(c, 44);
  const auto b = sample_xor_csbm(c, 44);
  EXPECT_EQ(a.first.x, b.first.x);
  EXPECT_EQ(a.first.eps, b.first.eps);
  EXPECT_EQ(a.first.eta, b.first.eta);
  EXPECT_EQ(a.second, b.second);
  const auto other = sample_xor_csbm(c, 45);
  EXPECT_NE(a.first.x, other.first.x);
}

TEST(XorCsbm, SerialAndOmpSamplersAgree) {
  const CsbmParams c = make_params(400, 4, 1.0, 0.5, 0.2, 0.02);
  EXPECT_EQ(sample_xor_csbm(c, 3, Backend::serial).second,
            sample_xor_csbm(c, 3, Backend::omp).second);
}

TEST(Sbm, CertainEdges) {
  std::vector<std::uint8_t> eps{0, 1, 0, 1, 1};
  const Graph full = sample_sbm(5, 1.0, 1.0, eps, 1);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(full.degree(i), 5u);
  const Graph empty = sample_sbm(5, 0.0, 0.0, eps, 1);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(empty.degree(i), 1u);
    EXPECT_TRUE(empty.has_edge(i, i));
  }
}

TEST(Sbm, BlocksWhenQIsZero) {
  const CsbmParams c = make_params(60, 2, 1.0, 0.0, 1.0, 0.0);
  const auto [ds, g] = sample_xor_csbm(c, 12);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (auto j : g.neighbors(i)) EXPECT_EQ(ds.eps[i], ds.eps[j]);
  expect_graph_invariants(g);
}

TEST(Sbm, MeanDegreeNearExpectation) {
  const std::size_t n = 2000;
  std::vector<std::uint8_t> eps(n);
  for (std::size_t i = 0; i < n; ++i) eps[i] = i % 2;
  const Graph g = sample_sbm(n, 0.2, 0.02, eps, 13);
  expect_graph_invariants(g);
  const double delta = 0.5 * n * (0.2 + 0.02);
  EXPECT_NEAR(g.mean_degree(), delta, 0.05 * delta);
}

TEST(Graph, FromEdgesSymmetrizesAndDeduplicates) {
  const Graph g = Graph::from_edges(4, {{0, 1}, {1, 0}, {2, 3}, {0, 1}, {2, 2}});
  EXPECT_EQ(g.degree(0), 2u);
  EXPECT_EQ(g.degree(1), 2u);
  EXPECT_EQ(g.degree(2), 2u);
  EXPECT_EQ(g.degree(3), 2u);
  EXPECT_EQ(g.nnz(), 8u);
  expect_graph_invariants(g);
  EXPECT_THROW(Graph::from_edges(3, {{0, 3}}), IndexError);
}

TEST(ClassMeans, SinglePointPerClassAndEmptyClass) {
  Dataset ds;
  ds.x.resize(2, 2);
  ds.x << 1, 2, 3, 4;
  ds.eps = {0, 1};
  ds.eta = {1, 1};
  const auto [m0, m1] = class_means(ds);
  EXPECT_EQ(m0, Vector(ds.x.row(0).transpose()));
  EXPECT_EQ(m1, Vector(ds.x.row(1).transpose()));
  ds.eps = {0, 0};
  EXPECT_THROW(class_means(ds), DegenerateInputError);
}

TEST(ClassMeans, BalancedSignsCancel) {
  Dataset ds;
  ds.x.resize(4, 2);
  ds.x << 1, 0, -1, 0, 0, 1, 0, 1;
  ds.eps = {0, 0, 1, 1};
  ds.eta = {1, 0, 1, 1};
  const auto [m0, m1] = class_means(ds);
  EXPECT_EQ(m0, Vector::Zero(2));
}
