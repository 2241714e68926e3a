// xcsbm: sample instances, run sweeps, train single trials, print thresholds,
// and run the verification suite.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "xcsbm/errors.hpp"
#include "xcsbm/experiment.hpp"
#include "xcsbm/kernels.hpp"
#include "xcsbm/verify.hpp"

using namespace xcsbm;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string out;
  bool print_config = false;
};

SweepConfig effective_config(const Common& c) {
  SweepConfig cfg = c.config.empty() ? SweepConfig{} : load_sweep_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.jobs) cfg.jobs = *c.jobs;
  if (!c.out.empty()) cfg.out = c.out;
  cfg.validate();
  return cfg;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

void write_instance(const std::string& prefix, const Dataset& ds, const Graph& g) {
  auto edges = open_out(prefix + "_edges.txt");
  for (std::size_t i = 0; i < g.size(); ++i)
    for (auto j : g.neighbors(i))
      if (j > i) edges << i << ' ' << j << '\n';
  auto feats = open_out(prefix + "_features.csv");
  char buf[32];
  for (Eigen::Index i = 0; i < ds.x.rows(); ++i) {
    for (Eigen::Index j = 0; j < ds.x.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", ds.x(i, j));
      feats << (j ? "," : "") << buf;
    }
    feats << '\n';
  }
  auto labels = open_out(prefix + "_labels.txt");
  for (auto e : ds.eps) labels << int(e) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"XOR-CSBM graph convolution experiments"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  Common c;
  app.add_option("--config", c.config, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", c.seed, "base seed");
  app.add_option("--jobs", c.jobs, "worker threads (0 = all)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", c.out, "output path");
  app.add_flag("--print-config", c.print_config, "print the effective configuration and exit");

  auto* gen = app.add_subcommand("gen", "sample one XOR-CSBM instance to files");
  double gen_k = 2.0;
  std::optional<double> gen_p, gen_q;
  gen->add_option("--K", gen_k, "K = |mu - nu| / sigma");
  gen->add_option("--p", gen_p, "intra-class edge probability");
  gen->add_option("--q", gen_q, "inter-class edge probability");

  auto* sweep = app.add_subcommand("sweep", "run a sweep and write the CSV");
  bool no_timing = false;
  sweep->add_flag("--no-timing", no_timing, "write 0 in the seconds column");

  auto* verify = app.add_subcommand("verify", "run the verification suite");
  std::string scale = "quick";
  std::string check;
  std::string phase_csv;
  verify->add_option("--scale", scale, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--check", check, "run a single named check");
  verify->add_option("--phase-csv", phase_csv, "write the phase-diagram sweep here");

  auto* trainc = app.add_subcommand("train", "train one architecture on one instance");
  std::string arch = "2L-01";
  double train_k = 2.0;
  std::optional<double> train_p, train_q;
  std::string edges, features, labels;
  trainc->add_option("--arch", arch, "architecture label, e.g. 2L-01");
  trainc->add_option("--K", train_k, "K for a sampled instance");
  trainc->add_option("--p", train_p, "intra-class edge probability");
  trainc->add_option("--q", train_q, "inter-class edge probability");
  trainc->add_option("--edges", edges, "edge list file")->check(CLI::ExistingFile);
  trainc->add_option("--features", features, "feature CSV")->check(CLI::ExistingFile);
  trainc->add_option("--labels", labels, "label file")->check(CLI::ExistingFile);

  auto* thr = app.add_subcommand("thresholds", "print the threshold set for each (p, q)");

  CLI11_PARSE(app, argc, argv);

  try {
    SweepConfig cfg = effective_config(c);
    if (c.print_config) {
      std::cout << to_json(cfg).dump(2) << '\n';
      return 0;
    }
    if (cfg.jobs > 0) kernels::set_threads(cfg.jobs);

    if (*gen) {
      const double p = gen_p.value_or(cfg.pq.front().first);
      const double q = gen_q.value_or(cfg.pq.front().second);
      const auto params = make_params(cfg.n, cfg.d, gen_k * cfg.sigma, cfg.sigma, p, q);
      const auto [ds, g] = sample_xor_csbm(params, cfg.seed);
      const std::string prefix = c.out.empty() ? "instance" : c.out;
      write_instance(prefix, ds, g);
      std::cout << "wrote " << prefix << "_{edges.txt,features.csv,labels.txt}: n=" << g.size()
                << " edges=" << (g.nnz() - g.size()) / 2 << '\n';
    } else if (*sweep) {
      if (no_timing) cfg.record_time = false;
      const auto rows = run_sweep(cfg);
      std::cout << "wrote " << rows.size() << " rows to " << cfg.out << " and "
                << threshold_path(cfg.out).string() << '\n';
    } else if (*verify) {
      VerifyOptions opts;
      opts.scale = scale == "full" ? Scale::full : Scale::quick;
      opts.seed = c.seed.value_or(1);
      opts.jobs = cfg.jobs;
      opts.phase_csv = phase_csv;
      std::vector<CheckResult> results;
      if (check.empty())
        results = verify_suite(opts);
      else
        results.push_back(run_check(check, opts));
      bool all = true;
      for (const auto& r : results) {
        all = all && r.passed;
        std::printf("%s %-22s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
      }
      return all ? 0 : 1;
    } else if (*trainc) {
      const Architecture a = parse_architecture(arch);
      Dataset ds;
      Graph g;
      if (!edges.empty() || !features.empty() || !labels.empty()) {
        if (edges.empty() || features.empty() || labels.empty())
          throw ParameterError("--edges, --features and --labels go together");
        std::tie(ds, g) = load_graph_dataset(edges, features, labels);
      } else {
        const double p = train_p.value_or(cfg.pq.front().first);
        const double q = train_q.value_or(cfg.pq.front().second);
        const auto params = make_params(cfg.n, cfg.d, train_k * cfg.sigma, cfg.sigma, p, q);
        std::tie(ds, g) = sample_xor_csbm(params, cfg.seed);
      }
      Network net = init_network(ds.dim(), cfg.train.hidden_for_depth(a.depth()), cfg.seed);
      const auto [trained, res] =
          train(std::move(net), ds, a.plan.total() > 0 ? &g : nullptr, a.plan, cfg.train, cfg.seed);
      nlohmann::json j = {{"seed", res.seed},
                          {"arch", a.label},
                          {"epochs", res.epochs_run},
                          {"init", res.init},
                          {"train_acc", res.train_accuracy},
                          {"test_acc", res.test_accuracy},
                          {"train_loss", res.train_loss},
                          {"test_loss", res.test_loss}};
      std::cout << j.dump(2) << '\n';
      if (!c.out.empty()) {
        auto f = open_out(c.out);
        save_network(trained, f);
      }
    } else if (*thr) {
      if (c.out.empty()) {
        write_thresholds(std::cout, cfg);
      } else {
        auto f = open_out(c.out);
        write_thresholds(f, cfg);
      }
    } else {
      std::cout << app.help();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
