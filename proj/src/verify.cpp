#include "xcsbm/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "xcsbm/errors.hpp"
#include "xcsbm/rng.hpp"

namespace xcsbm {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  return 0.5 * (*mid + *std::max_element(v.begin(), mid));
}

std::vector<std::uint8_t> balanced_labels(std::size_t n) {
  std::vector<std::uint8_t> eps(n);
  for (std::size_t i = 0; i < n; ++i) eps[i] = i < n / 2 ? 0 : 1;
  return eps;
}

std::vector<std::uint8_t> random_labels(std::size_t n, std::uint64_t seed) {
  Engine eng = make_engine(seed);
  std::vector<std::uint8_t> eps(n);
  for (auto& e : eps) e = static_cast<std::uint8_t>(eng() >> 63);
  return eps;
}

// Random instance for the ansatz equivalence checks: n = 200, d = 4, p and q
// drawn so that both p > q and p < q occur.
struct Instance {
  CsbmParams params;
  Dataset ds;
  Graph g;
};

Instance ansatz_instance(std::uint64_t seed) {
  Engine eng = make_engine(derive_seed(seed, 0xa11ce));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double p = 0.02 + 0.4 * u(eng);
  const double q = 0.02 + 0.4 * u(eng);
  const double sigma = 0.2 + u(eng);
  const double gamma = sigma * std::pow(10.0, -1.0 + 2.0 * u(eng));
  Instance in;
  in.params = make_params(200, 4, gamma, sigma, p, q);
  auto [ds, g] = sample_xor_csbm(in.params, seed);
  in.ds = std::move(ds);
  in.g = std::move(g);
  return in;
}

}  // namespace

double relative_diff(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw ShapeError("relative_diff: length mismatch");
  const double num = (a - b).cwiseAbs().maxCoeff();
  const double den = b.cwiseAbs().maxCoeff();
  return den > 0.0 ? num / den : num;
}

Dataset force_signs(const Dataset& ds) {
  Dataset out = ds;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.eta[i] == 0) out.x.row(static_cast<Eigen::Index>(i)) *= -1.0;
    out.eta[i] = 1;
  }
  return out;
}

std::vector<PlacementPlan> all_small_plans() {
  std::vector<PlacementPlan> plans;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b) plans.push_back({{a, b}});
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b)
      for (int c = 0; c <= 2; ++c) plans.push_back({{a, b, c}});
  return plans;
}

double gradient_check_error(const Network& net, const ConvOperator* op, const Matrix& x,
                            const PlacementPlan& plan, std::span<const std::uint8_t> labels,
                            double h) {
  const Gradients g = backward(net, op, x, plan, labels);
  Network work = net;
  double diff2 = 0.0, fd2 = 0.0, an2 = 0.0;
  auto probe = [&](double& param, double analytic) {
    const double keep = param;
    param = keep + h;
    const double up = subset_loss(work, op, x, plan, labels);
    param = keep - h;
    const double down = subset_loss(work, op, x, plan, labels);
    param = keep;
    const double fd = (up - down) / (2.0 * h);
    diff2 += (fd - analytic) * (fd - analytic);
    fd2 += fd * fd;
    an2 += analytic * analytic;
  };
  for (std::size_t l = 0; l < work.depth(); ++l) {
    Layer& layer = work.layers[l];
    for (Eigen::Index i = 0; i < layer.w.rows(); ++i)
      for (Eigen::Index j = 0; j < layer.w.cols(); ++j) probe(layer.w(i, j), g.w[l](i, j));
    for (Eigen::Index j = 0; j < layer.b.size(); ++j) probe(layer.b[j], g.b[l][j]);
  }
  const double scale = std::sqrt(std::max(fd2, an2));
  return scale > 0.0 ? std::sqrt(diff2) / scale : std::sqrt(diff2);
}

double min_hidden_margin(const Network& net, const ConvOperator* op, const Matrix& x,
                         const PlacementPlan& plan) {
  ForwardTrace trace;
  forward(net, op, x, plan, &trace);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l + 1 < net.depth(); ++l)
    m = std::min(m, trace.pre[l].cwiseAbs().minCoeff());
  return m;
}

CheckResult check_bayes_floor(const VerifyOptions& opts) {
  const auto t0 = Clock::now();
  constexpr std::size_t n = 20000;
  constexpr double k = 1.0, sigma = 1.0, tol = 0.01, budget = 10.0;
  constexpr int seeds = 10;
  const double target = opts.floor(k);
  const auto params = make_params(n, 2, k * sigma, sigma, 0.5, 0.5);
  double worst = 0.0, sum = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const Dataset ds = sample_xor_gmm(params, derive_seed(opts.seed, 100 + s));
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < n; ++i)
      wrong += theory::bayes_classify(ds.x.row(static_cast<Eigen::Index>(i)).transpose(),
                                      params.mu, params.nu) != ds.eps[i];
    const double frac = static_cast<double>(wrong) / n;
    sum += frac;
    worst = std::max(worst, std::abs(frac - target));
  }
  const double secs = since(t0);
  // Exact error of the Bayes rule for orthogonal equal-norm means.
  const double exact = 2.0 * theory::normal_sf(0.5 * k) * (1.0 - theory::normal_sf(0.5 * k));
  CheckResult r;
  r.name = "bayes_floor";
  r.passed = worst <= tol && secs < budget;
  r.detail = "mean misclassification " + fmt("%.4f", sum / seeds) + " vs floor " +
             fmt("%.4f", target) + " (max |dev| " + fmt("%.4f", worst) + ", tol " +
             fmt("%.2f", tol) + "); exact Bayes error 2*Phi(K/2)*Phic(K/2) = " +
             fmt("%.4f", exact) + "; " + fmt("%.2f", secs) + " s";
  r.seconds = secs;
  return r;
}

CheckResult check_zeta_oracle(const VerifyOptions& opts) {
  const auto t0 = Clock::now();
  constexpr std::size_t samples = 1000000;
  constexpr double z_max = 3.0;
  const double xs[] = {0.1, 0.5, 1.0, 2.0};
  bool ok = true;
  std::string detail;
  for (double x : xs) {
    Engine eng = make_engine(derive_seed(opts.seed, 200 + static_cast<std::uint64_t>(x * 100)));
    std::normal_distribution<double> normal;
    // Paired samples: |x + g| − |g| has the same mean as the independent difference.
    double mean = 0.0, m2 = 0.0;
    for (std::size_t s = 1; s <= samples; ++s) {
      const double g = normal(eng);
      const double v = std::abs(x + g) - std::abs(g);
      const double delta = v - mean;
      mean += delta / static_cast<double>(s);
      m2 += delta * (v - mean);
    }
    const double se = std::sqrt(m2 / (samples - 1) / samples);
    const double z = std::abs(theory::zeta(x, 1.0) - mean) / se;
    ok = ok && z <= z_max;
    detail += "x=" + fmt("%g", x) + ": " + fmt("%.3f", z) + " SE; ";
  }
  const double x0 = 0.01;
  const double limit = theory::zeta(x0, 1.0) * std::sqrt(2.0 * std::numbers::pi) / (x0 * x0);
  ok = ok && limit >= 0.95 && limit <= 1.0;
  detail += "zeta(0.01,1)*sqrt(2pi)/x^2 = " + fmt("%.6f", limit);
  return {"zeta_oracle", ok, detail, since(t0)};
}

CheckResult check_placement_equivalence(const VerifyOptions& opts) {
  const auto t0 = Clock::now();
  constexpr int instances = 20;
  constexpr double tol = 1e-10;
  const std::vector<std::vector<PlacementPlan>> groups = {
      {{{0, 1, 0}}, {{0, 0, 1}}},
      {{{0, 2, 0}}, {{0, 1, 1}}, {{0, 0, 2}}}};
  double worst = 0.0;
  for (int s = 0; s < instances; ++s) {
    const Instance in = ansatz_instance(derive_seed(opts.seed, 300 + s));
    const ConvOperator op = normalize(in.g);
    for (const auto& group : groups) {
      const int xi = default_orientation(in.params.p, in.params.q, group.front().total());
      const Network net = build_ansatz(3, 1.0, in.params.mu, in.params.nu, xi);
      const Vector ref = forward(net, &op, in.ds.x, group.front());
      for (std::size_t i = 1; i < group.size(); ++i)
        worst = std::max(worst, relative_diff(forward(net, &op, in.ds.x, group[i]), ref));
    }
  }
  return {"placement_equivalence", worst <= tol,
          "max relative diff " + fmt("%.3e", worst) + " over " + std::to_string(instances) +
              " instances (tol " + fmt("%.0e", tol) + ")",
          since(t0)};
}

CheckResult check_closed_form_oracle(const VerifyOptions& opts) {
  const auto t0 = Clock::now();
  constexpr int instances = 20;
  constexpr double tol = 1e-10;
  const std::vector<PlacementPlan> plans = {{{0, 1}},    {{0, 2}},    {{0, 1, 0}},
                                            {{0, 0, 1}}, {{0, 2, 0}}, {{0, 1, 1}},
                                            {{0, 0, 2}}};
  double worst = 0.0;
  for (int s = 0; s < instances; ++s) {
    const Instance in = ansatz_instance(derive_seed(opts.seed, 300 + s));
    const ConvOperator op = normalize(in.g);
    const double r = 0.5 + s * 0.25;
    for (const auto& plan : plans) {
      const int total = plan.total();
      const int xi = default_orientation(in.params.p, in.params.q, total);
      const Network net = build_ansatz(static_cast<int>(plan.depth()), r, in.params.mu,
                                       in.params.nu, xi);
      const Vector got = forward(net, &op, in.ds.x, plan);
      const Vector want = closed_form_logits(in.ds.x, in.g, total, r, in.params.p, in.params.q,
                                             in.params.mu, in.params.nu);
      worst = std::max(worst, relative_diff(got, want));
    }
  }
  return {"closed_form_oracle", worst <= tol,
          "max relative diff " + fmt("%.3e", worst) + " over " + std::to_string(instances) +
              " instances x " + std::to_string(plans.size()) + " plans (tol " + fmt("%.0e", tol) +
              ")",
          since(t0)};
}

CheckResult check_loss_formula(const VerifyOptions& opts) {
  const auto t0 = Clock::now();
  constexpr std::size_t n = 1000;
  constexpr double sigma = 1.0, r = 1.0, lo = 0.85, hi = 1.15;
  constexpr int seeds = 10;
  const double gamma = 8.0 * sigma * std::sqrt(std::log(static_cast<double>(n)));
  const auto params = make_params(n, 4, gamma, sigma, 0.5, 0.5);
  const Network net = build_ansatz(2, r, params.mu, params.nu);
  const PlacementPlan plan{{0, 0}};
  double rmin = 1e300, rmax = -1e300;
  for (int s = 0; s < seeds; ++s) {
    const Dataset ds = sample_xor_gmm(params, derive_seed(opts.seed, 400 + s));
    const double loss = bce_loss(forward(net, nullptr, ds.x, plan), ds.eps);
    const double ratio = -std::log(loss) / (r * gamma / std::numbers::sqrt2);
    rmin = std::min(rmin, ratio);
    rmax = std::max(rmax, ratio);
  }
  return {"loss_formula", rmin >= lo && rmax <= hi,
          "-log(loss)/(R*gamma/sqrt2) in [" + fmt("%.4f", rmin) + ", " + fmt("%.4f", rmax) +
              "] over " + std::to_string(seeds) + " seeds (band [" + fmt("%.2f", lo) + ", " +
              fmt("%.2f", hi) + "])",
          since(t0)};
}

CheckResult check_variance_reduction(const VerifyOptions& opts) {
  const auto t0 = Clock::now();
  constexpr double p = 0.2, q = 0.1;
  constexpr double tol1 = 0.10, tol2 = 0.30, max_ratio = 3.0;
  constexpr std::size_t rho2_nodes = 500, rho3_nodes = 256;

  auto node_list = [](std::size_t n, std::size_t count) {
    std::vector<std::uint32_t> nodes;
    const std::size_t stride = std::max<std::size_t>(1, n / count);
    for (std::size_t i = 0; i < n && nodes.size() < count; i += stride)
      nodes.push_back(static_cast<std::uint32_t>(i));
    return nodes;
  };
  auto medians = [&](const Graph& g, int k, std::size_t count) {
    std::vector<double> v;
    for (const auto& rv : variance_reduction_rho(g, k, node_list(g.size(), count), p, q))
      v.push_back(rv.exact);
    return median(std::move(v));
  };

  const std::size_t n = 2000;
  const Graph g = sample_sbm(n, p, q, balanced_labels(n), derive_seed(opts.seed, 500));
  const double rho1 = medians(g, 1, n);
  const double rho1_want = 2.0 / (static_cast<double>(n) * (p + q));
  const double dev1 = std::abs(rho1 - rho1_want) / rho1_want;

  const double rho2n = medians(g, 2, rho2_nodes) * static_cast<double>(n);
  const double rho2_want = rho2_closed_form_times_n(p, q);
  const double dev2 = std::abs(rho2n - rho2_want) / rho2_want;

  std::string detail = "rho(1) median " + fmt("%.4e", rho1) + " vs " + fmt("%.4e", rho1_want) +
                       " (dev " + fmt("%.3f", dev1) + "); n*rho(2) " + fmt("%.4f", rho2n) +
                       " vs " + fmt("%.4f", rho2_want) + " (dev " + fmt("%.3f", dev2) + ")";
  bool ok = dev1 <= tol1 && dev2 <= tol2;
  for (std::size_t m : {std::size_t{1000}, std::size_t{2000}}) {
    const Graph gm =
        m == n ? g : sample_sbm(m, p, q, balanced_labels(m), derive_seed(opts.seed, 501));
    const double ratio = medians(gm, 3, rho3_nodes) / medians(gm, 2, rho3_nodes);
    ok = ok && ratio <= max_ratio;
    detail += "; rho(3)/rho(2) at n=" + std::to_string(m) + ": " + fmt("%.3f", ratio);
  }
  return {"variance_reduction", ok, detail, since(t0)};
}

CheckResult check_first_layer_collapse(const VerifyOptions& opts) {
  const auto t0 = Clock::now();
  constexpr std::size_t n = 2000;
  constexpr double p = 0.8, q = 0.2, sigma = 0.5, gamma = 2.0, tol = 0.2;
  constexpr int seeds = 5;
  const auto params = make_params(n, 2, gamma, sigma, p, q);
  double worst = 0.0, literal = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const auto [ds, g] = sample_xor_csbm(params, derive_seed(opts.seed, 600 + s));
    const Dataset forced = force_signs(ds);
    // Gap of the convolved mixed-sign class means, relative to the gap of the
    // same sample with every sign forced to +1 (which is ≈ ‖μ − ν‖).
    const Dataset conv{convolve(normalize(g), ds.x, 1), ds.eps, ds.eta};
    const auto [c0, c1] = class_means(conv);
    const auto [f0, f1] = class_means(forced);
    worst = std::max(worst, (c0 - c1).norm() / (f0 - f1).norm());
    literal = std::max(literal, mean_collapse_ratio(forced, g));
  }
  return {"first_layer_collapse", worst <= tol,
          "max convolved gap / sign-forced raw gap " + fmt("%.4f", worst) + " over " +
              std::to_string(seeds) + " samples (tol " + fmt("%.2f", tol) +
              "); mean_collapse_ratio on sign-forced data " + fmt("%.4f", literal) +
              " (|p-q|/(p+q) = " + fmt("%.4f", theory::signal_ratio(p, q)) + ")",
          since(t0)};
}

CheckResult check_gradients(const VerifyOptions& opts) {
  const auto t0 = Clock::now();
  constexpr double tol = 1e-5, min_margin = 1e-4;
  const auto params = make_params(40, 4, 1.5, 0.7, 0.3, 0.1);
  auto plans = all_small_plans();
  for (const auto& label : phase_diagram_config(opts.seed).archs) {
    const auto plan = parse_architecture(label).plan;
    if (std::find(plans.begin(), plans.end(), plan) == plans.end()) plans.push_back(plan);
  }
  double worst = 0.0;
  std::string worst_plan;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const auto& plan = plans[i];
    // Resample until no hidden unit sits near the ReLU kink.
    for (std::uint64_t attempt = 0;; ++attempt) {
      if (attempt == 50) throw DegenerateInputError("no kink-free gradient-check sample");
      const std::uint64_t seed = derive_seed(opts.seed, 700 + 1000 * i + attempt);
      const auto [ds, g] = sample_xor_csbm(params, seed);
      const ConvOperator op = normalize(g);
      const Network net = init_network(4, std::vector<std::size_t>(plan.depth() - 1, 5), seed);
      if (min_hidden_margin(net, &op, ds.x, plan) < min_margin) continue;
      const double err = gradient_check_error(net, &op, ds.x, plan, ds.eps);
      if (err > worst) {
        worst = err;
        worst_plan = architecture_label(plan);
      }
      break;
    }
  }
  return {"gradient_checks", worst <= tol,
          "max relative error " + fmt("%.3e", worst) + " (" + worst_plan + ") over " +
              std::to_string(plans.size()) + " plans (tol " + fmt("%.0e", tol) + ")",
          since(t0)};
}

CheckResult check_concentration(const VerifyOptions& opts) {
  const auto t0 = Clock::now();
  constexpr std::size_t n = 5000;
  constexpr int graphs = 20;
  constexpr double c = 1.0;
  // Degree concentration needs p, q ≳ log²n / n; the common-neighbour
  // statement needs p, q ≳ log n / √n ≈ 0.12 at this n.
  constexpr double dp = 0.2, dq = 0.02, cp = 0.5, cq = 0.2;
  int passed = 0;
  double worst_deg = 0.0, worst_cn = 0.0, deg_bound = 0.0, cn_bound = 0.0;
  for (int s = 0; s < graphs; ++s) {
    const auto eps = random_labels(n, derive_seed(opts.seed, 800 + s));
    const Graph gd = sample_sbm(n, dp, dq, eps, derive_seed(opts.seed, 900 + s));
    const auto rd = degree_concentration_report(gd, dp, dq, c);
    const Graph gc = sample_sbm(n, cp, cq, eps, derive_seed(opts.seed, 1000 + s));
    const auto rc = common_neighbor_concentration_report(gc, eps, cp, cq, c,
                                                         kConcentrationConstant, 100000,
                                                         derive_seed(opts.seed, 1100 + s));
    passed += rd.pass && rc.pass;
    worst_deg = std::max(worst_deg, rd.max_rel_deviation);
    worst_cn = std::max(worst_cn, rc.max_rel_deviation);
    deg_bound = rd.predicted_bound;
    cn_bound = rc.predicted_bound;
  }
  return {"concentration", passed == graphs,
          std::to_string(passed) + "/" + std::to_string(graphs) +
              " graphs pass; degree max dev " + fmt("%.4f", worst_deg) + " (bound " +
              fmt("%.4f", deg_bound) + "), common-neighbour max dev " + fmt("%.4f", worst_cn) +
              " (bound " + fmt("%.4f", cn_bound) + ")",
          since(t0)};
}

SweepConfig phase_diagram_config(std::uint64_t seed) {
  SweepConfig cfg;
  cfg.n = 400;
  cfg.d = 4;
  cfg.sigma = 0.5;
  cfg.pq = {{0.2, 0.02}, {0.5, 0.1}};
  cfg.archs = {"MLP2", "2L-01", "2L-02", "3L-010", "3L-011"};
  cfg.trials = 10;
  cfg.seed = seed;
  cfg.train.epochs = 500;
  cfg.record_time = false;
  return cfg;
}

CheckResult check_phase_diagram(const VerifyOptions& opts) {
  const auto t0 = Clock::now();
  constexpr double level = 0.9, ratio_lo = 1.5, ratio_hi = 6.0, max_gain = 0.05;
  constexpr double budget = 1800.0;
  SweepConfig cfg = phase_diagram_config(opts.seed);
  cfg.jobs = opts.jobs;
  std::vector<SweepRow> rows;
  if (opts.phase_csv.empty()) {
    rows = run_sweep_rows(cfg);
  } else {
    cfg.out = opts.phase_csv;
    rows = run_sweep(cfg);
  }
  const double secs = since(t0);

  const auto [sp, sq] = cfg.pq[0];
  auto crossing = [&](const std::string& arch) {
    return first_crossing(mean_curve(rows, arch, sp, sq), level);
  };
  const double k_mlp = crossing("MLP2");
  std::string detail = "(a) crossings of " + fmt("%.2f", level) + ": MLP2 " + fmt("%.3f", k_mlp);
  bool a = true;
  for (const char* arch : {"2L-01", "2L-02", "3L-010", "3L-011"}) {
    const double k = crossing(arch);
    a = a && k > 0.0 && (k_mlp < 0.0 || k < k_mlp);
    detail += std::string(", ") + arch + " " + fmt("%.3f", k);
  }
  const double k_one = crossing("2L-01");
  const double ratio = k_mlp > 0.0 && k_one > 0.0 ? k_mlp / k_one : 0.0;
  const bool b = ratio >= ratio_lo && ratio <= ratio_hi;
  detail += "; (b) MLP2/2L-01 crossing ratio " + fmt("%.3f", ratio) + " (band [" +
            fmt("%.1f", ratio_lo) + ", " + fmt("%.1f", ratio_hi) + "])";

  const auto [dp, dq] = cfg.pq[1];
  double gain = -1.0;
  for (const auto& [two, one] : {std::pair{"2L-02", "2L-01"}, std::pair{"3L-011", "3L-010"}}) {
    const auto c2 = mean_curve(rows, two, dp, dq);
    const auto c1 = mean_curve(rows, one, dp, dq);
    for (std::size_t i = 0; i < std::min(c1.size(), c2.size()); ++i)
      gain = std::max(gain, c2[i].mean_test_acc - c1[i].mean_test_acc);
  }
  const bool c = gain <= max_gain;
  detail += "; (c) max two-conv gain over one-conv at (p,q)=(" + fmt("%g", dp) + "," +
            fmt("%g", dq) + "): " + fmt("%.4f", gain);

  // Ordering between 2L-01 and MLP2 over K in [1, 3] (informational).
  const auto cm = mean_curve(rows, "MLP2", sp, sq);
  const auto co = mean_curve(rows, "2L-01", sp, sq);
  bool ordered = true;
  for (std::size_t i = 0; i < std::min(cm.size(), co.size()); ++i)
    if (cm[i].k >= 1.0 && cm[i].k <= 3.0) ordered = ordered && co[i].mean_test_acc > cm[i].mean_test_acc;
  detail += "; 2L-01 above MLP2 on K in [1,3]: " + std::string(ordered ? "yes" : "no");
  detail += "; " + fmt("%.1f", secs) + " s";

  return {"phase_diagram", a && b && c && secs < budget, detail, secs};
}

std::vector<std::string> check_names(Scale scale) {
  std::vector<std::string> names = {"bayes_floor",          "zeta_oracle",
                                    "placement_equivalence", "closed_form_oracle",
                                    "loss_formula",         "variance_reduction",
                                    "first_layer_collapse", "gradient_checks"};
  if (scale == Scale::full) {
    names.push_back("concentration");
    names.push_back("phase_diagram");
  }
  return names;
}

CheckResult run_check(const std::string& name, const VerifyOptions& opts) {
  using Fn = CheckResult (*)(const VerifyOptions&);
  static const std::pair<const char*, Fn> table[] = {
      {"bayes_floor", check_bayes_floor},
      {"zeta_oracle", check_zeta_oracle},
      {"placement_equivalence", check_placement_equivalence},
      {"closed_form_oracle", check_closed_form_oracle},
      {"loss_formula", check_loss_formula},
      {"variance_reduction", check_variance_reduction},
      {"first_layer_collapse", check_first_layer_collapse},
      {"gradient_checks", check_gradients},
      {"concentration", check_concentration},
      {"phase_diagram", check_phase_diagram}};
  for (const auto& [n, fn] : table) {
    if (name != n) continue;
    try {
      return fn(opts);
    } catch (const std::exception& e) {
      return {name, false, std::string("error: ") + e.what(), 0.0};
    }
  }
  throw ParameterError("unknown check '" + name + "'");
}

std::vector<CheckResult> verify_suite(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  for (const auto& name : check_names(opts.scale)) out.push_back(run_check(name, opts));
  return out;
}

}  // namespace xcsbm
