#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "xcsbm/errors.hpp"
#include "xcsbm/network.hpp"
#include "xcsbm/rng.hpp"
#include "xcsbm/theory.hpp"

using namespace xcsbm;

namespace {

Vector unit(std::size_t d, std::size_t i) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d));
  v[static_cast<Eigen::Index>(i)] = 1.0;
  return v;
}

Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  Engine eng = make_engine(seed);
  std::normal_distribution<double> nd;
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = nd(eng);
  return m;
}

Matrix rows(std::initializer_list<Vector> vs) {
  Matrix m(static_cast<Eigen::Index>(vs.size()), vs.begin()->size());
  Eigen::Index i = 0;
  for (const auto& v : vs) m.row(i++) = v.transpose();
  return m;
}

double svd_norm(const Matrix& w) {
  const Eigen::MatrixXd dense = w;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense);
  return svd.singularValues()[0];
}

}  // namespace

TEST(Architecture, ParsesLabels) {
  const auto a = parse_architecture("2L-01");
  EXPECT_EQ(a.plan.k, (std::vector<int>{0, 1}));
  EXPECT_EQ(a.plan.total(), 1);
  EXPECT_EQ(a.plan.total_after_first(), 1);
  EXPECT_EQ(parse_architecture("3L-011").plan.k, (std::vector<int>{0, 1, 1}));
  EXPECT_EQ(parse_architecture("3L-200").plan.total_after_first(), 0);
  EXPECT_EQ(parse_architecture("MLP2").plan.k, (std::vector<int>{0, 0}));
  EXPECT_EQ(parse_architecture("MLP3").depth(), 3u);
  EXPECT_EQ(architecture_label(parse_architecture("3L-010").plan), "3L-010");
}

TEST(Architecture, RejectsMalformed) {
  for (const char* bad : {"", "2L-0", "2L-001", "L-01", "2X-01", "2L-0a", "MLP", "MLPx", "0L-"})
    EXPECT_THROW(parse_architecture(bad), ParameterError) << bad;
}

TEST(Orientation, DefaultSign) {
  EXPECT_EQ(default_orientation(0.2, 0.1, 1), 1);
  EXPECT_EQ(default_orientation(0.1, 0.2, 1), -1);
  EXPECT_EQ(default_orientation(0.1, 0.2, 2), 1);
  EXPECT_EQ(default_orientation(0.1, 0.2, 0), 1);
  EXPECT_EQ(default_orientation(0.3, 0.3, 1), 1);
}

TEST(Ansatz, HandLogits) {
  const std::size_t d = 3;
  const Vector mu = 2.0 * unit(d, 0), nu = 2.0 * unit(d, 1);
  for (int depth : {2, 3}) {
    const Network net = build_ansatz(depth, 1.0, mu, nu);
    const Vector f = forward(net, nullptr, rows({unit(d, 0), unit(d, 1), unit(d, 0) + unit(d, 1),
                                                 -unit(d, 0), unit(d, 2)}),
                             PlacementPlan{std::vector<int>(static_cast<std::size_t>(depth), 0)});
    EXPECT_NEAR(f[0], -1.0, 1e-15);
    EXPECT_NEAR(f[1], 1.0, 1e-15);
    EXPECT_NEAR(f[2], 0.0, 1e-15);
    EXPECT_NEAR(f[3], -1.0, 1e-15);
    EXPECT_NEAR(f[4], 0.0, 1e-15);
  }
}

TEST(Ansatz, DepthsAgreeAndMatchBayes) {
  const std::size_t d = 5;
  const auto [mu, nu] = default_means(d, 1.7);
  const Matrix x = random_matrix(300, static_cast<Eigen::Index>(d), 3);
  const Vector f2 = forward(build_ansatz(2, 0.7, mu, nu), nullptr, x, {{0, 0}});
  const Vector f3 = forward(build_ansatz(3, 0.7, mu, nu), nullptr, x, {{0, 0, 0}});
  EXPECT_LE((f2 - f3).lpNorm<Eigen::Infinity>(), 1e-13);
  const Vector fn = forward(build_ansatz(2, 0.7, mu, nu), nullptr, -x, {{0, 0}});
  EXPECT_LE((f2 - fn).lpNorm<Eigen::Infinity>(), 1e-13);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Vector xi = x.row(i).transpose();
    EXPECT_EQ(f2[i] > 0 ? 1 : 0, theory::bayes_classify(xi, mu, nu));
  }
}

TEST(Ansatz, SignInvariantInR) {
  const auto [mu, nu] = default_means(4, 1.0);
  const Matrix x = random_matrix(100, 4, 8);
  const Vector a = forward(build_ansatz(2, 0.1, mu, nu), nullptr, x, {{0, 0}});
  const Vector b = forward(build_ansatz(2, 25.0, mu, nu), nullptr, x, {{0, 0}});
  EXPECT_LE((250.0 * a - b).lpNorm<Eigen::Infinity>(), 1e-11);
  const Vector c = forward(build_ansatz(2, 25.0, mu, nu, -1), nullptr, x, {{0, 0}});
  EXPECT_LE((b + c).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(Forward, IdentityGraphMatchesNoGraph) {
  const Graph g = Graph::from_edges(50, {});
  const ConvOperator op = normalize(g);
  const Network net = init_network(4, {6, 3}, 11);
  const Matrix x = random_matrix(50, 4, 12);
  const Vector a = forward(net, nullptr, x, {{0, 0, 0}});
  const Vector b = forward(net, &op, x, {{2, 1, 1}});
  EXPECT_LE((a - b).lpNorm<Eigen::Infinity>(), 1e-14);
}

TEST(Forward, CompleteGraphGivesConstantLogits) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
  for (std::uint32_t i = 0; i < 30; ++i)
    for (std::uint32_t j = i + 1; j < 30; ++j) e.emplace_back(i, j);
  const ConvOperator op = normalize(Graph::from_edges(30, e));
  const Network net = init_network(3, {5}, 2);
  const Vector f = forward(net, &op, random_matrix(30, 3, 1), {{1, 0}});
  EXPECT_LE(f.maxCoeff() - f.minCoeff(), 1e-13);
}

TEST(Forward, ShapeAndPlanErrors) {
  const Network net = init_network(3, {4}, 1);
  const Matrix x = random_matrix(10, 3, 1);
  EXPECT_THROW(forward(net, nullptr, random_matrix(10, 4, 1), {{0, 0}}), ShapeError);
  EXPECT_ANY_THROW(forward(net, nullptr, x, {{0, 0, 0}}));
  EXPECT_THROW(forward(net, nullptr, x, {{0, 1}}), ParameterError);
}

TEST(Loss, HandValues) {
  const std::vector<std::uint8_t> y{0, 1};
  Vector f(2);
  f << -1.0, 1.0;
  // log(1 + e^{-1})
  EXPECT_NEAR(bce_loss(f, y), 0.31326168751822286, 1e-15);
  EXPECT_NEAR(bce_loss(Vector::Zero(2), y), std::log(2.0), 1e-15);
  f << -100.0, 100.0;
  EXPECT_LE(bce_loss(f, y), 1e-20);
  f << 800.0, -800.0;
  EXPECT_NEAR(bce_loss(f, y), 800.0, 1e-9);
  EXPECT_NEAR(softplus(-800.0), 0.0, 1e-300);
  EXPECT_DOUBLE_EQ(sigmoid(0.0), 0.5);
}

TEST(SpectralNorm, MatchesSvd) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Matrix w = random_matrix(4 + static_cast<Eigen::Index>(s % 3), 4, s);
    EXPECT_NEAR(spectral_norm(w, 1000, 1e-14), svd_norm(w), 1e-8 * svd_norm(w));
  }
}

TEST(Projection, ScalesToBudget) {
  Network net = init_network(3, {3}, 1);
  net.layers[0].w = 2.0 * Matrix::Identity(3, 3);
  net.layers[1].w = 3.0 * random_matrix(3, 1, 2) / svd_norm(random_matrix(3, 1, 2));
  const Network p = project_constraints(net, 1.0);
  EXPECT_LE((p.layers[0].w - Matrix::Identity(3, 3)).lpNorm<Eigen::Infinity>(), 1e-9);
  EXPECT_NEAR(svd_norm(p.layers[1].w), 1.0, 1e-9);
  EXPECT_EQ(p.layers[1].b, net.layers[1].b);

  const Matrix r = random_matrix(4, 4, 9);
  net = init_network(4, {4}, 1);
  net.layers[0].w = 3.0 * r / svd_norm(r);
  const Network q = project_constraints(net, 0.5);
  EXPECT_NEAR(svd_norm(q.layers[0].w), 0.5, 1e-8);

  net = init_network(4, {4}, 3);
  net.layers[0].w *= 0.1 / svd_norm(net.layers[0].w);
  net.layers[1].w *= 0.1 / svd_norm(net.layers[1].w);
  const Network same = project_constraints(net, 1.0);
  for (std::size_t l = 0; l < 2; ++l) EXPECT_EQ(same.layers[l].w, net.layers[l].w);
}

TEST(ClosedForm, MatchesForwardOnSampledInstance) {
  const auto params = make_params(120, 3, 1.5, 0.4, 0.15, 0.05);
  const auto [ds, g] = sample_xor_csbm(params, 21);
  const ConvOperator op = normalize(g);
  for (const auto& plan : {PlacementPlan{{0, 1}}, PlacementPlan{{0, 2}}, PlacementPlan{{0, 1, 1}}}) {
    const int xi = default_orientation(params.p, params.q, plan.total());
    const Network net = build_ansatz(static_cast<int>(plan.depth()), 0.8, params.mu, params.nu, xi);
    const Vector f = forward(net, &op, ds.x, plan);
    const Vector c = closed_form_logits(ds.x, g, plan.total(), 0.8, params.p, params.q, params.mu,
                                        params.nu);
    EXPECT_LE((f - c).lpNorm<Eigen::Infinity>(), 1e-12 * std::max(1.0, c.lpNorm<Eigen::Infinity>()));
  }
}

TEST(Checkpoint, RoundTrip) {
  Network net = init_network(5, {7, 4}, 77);
  net.r = 0.3;
  std::stringstream ss;
  save_network(net, ss);
  const Network back = load_network(ss);
  ASSERT_EQ(back.depth(), net.depth());
  EXPECT_EQ(back.r, net.r);
  for (std::size_t l = 0; l < net.depth(); ++l) {
    EXPECT_EQ(back.layers[l].w, net.layers[l].w);
    EXPECT_EQ(back.layers[l].b, net.layers[l].b);
  }
  std::stringstream bad("xcsbm-network 2\n");
  EXPECT_THROW(load_network(bad), ParseError);
  std::stringstream truncated("xcsbm-network 1\nR 1\nlayers 1\nlayer 2 1\n0.5\n");
  EXPECT_THROW(load_network(truncated), ParseError);
}

TEST(Ansatz, LossDecreasesInRWhenSeparable) {
  const auto params = make_params(200, 2, 2.0, 0.0, 0.5, 0.5);
  const Dataset ds = sample_xor_gmm(params, 5);
  double prev = std::log(2.0) + 1e-12;
  for (double r : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const double l = bce_loss(forward(build_ansatz(2, r, params.mu, params.nu), nullptr, ds.x, {{0, 0}}), ds.eps);
    EXPECT_LT(l, prev);
    prev = l;
  }
}

TEST(Init, ShapesAndRange) {
  const Network net = init_network(6, {16, 16}, 4);
  ASSERT_EQ(net.depth(), 3u);
  EXPECT_EQ(net.layers[0].w.rows(), 6);
  EXPECT_EQ(net.layers[2].w.cols(), 1);
  EXPECT_LE(net.layers[0].w.cwiseAbs().maxCoeff(), 1.0 / std::sqrt(6.0));
  EXPECT_LE(net.layers[1].w.cwiseAbs().maxCoeff(), 0.25);
  EXPECT_EQ(init_network(6, {16, 16}, 4).layers[1].w, net.layers[1].w);
  EXPECT_NE(init_network(6, {16, 16}, 5).layers[1].w, net.layers[1].w);
}
