#include "xcsbm/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "xcsbm/errors.hpp"
#include "xcsbm/rng.hpp"

namespace xcsbm {

using nlohmann::json;

std::vector<double> KGrid::points() const {
  if (!values.empty()) return values;
  std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    out[static_cast<std::size_t>(i)] = std::pow(10.0, log10_min + t * (log10_max - log10_min));
  }
  return out;
}

void SweepConfig::validate() const {
  if (n < 2) throw ParameterError("n must be >= 2");
  if (d < 2) throw ParameterError("d must be >= 2");
  if (!(sigma > 0.0)) throw ParameterError("sigma must be > 0");
  const auto ks = k_grid.points();
  if (ks.empty()) throw ParameterError("K grid is empty");
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (!(ks[i] > 0.0)) throw ParameterError("K grid values must be positive");
    if (i > 0 && !(ks[i] > ks[i - 1])) throw ParameterError("K grid must be strictly increasing");
  }
  if (pq.empty()) throw ParameterError("(p, q) list is empty");
  for (const auto& [p, q] : pq)
    if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0))
      throw ParameterError("p and q must lie in [0, 1]");
  if (archs.empty()) throw ParameterError("architecture list is empty");
  for (const auto& a : archs) parse_architecture(a);
  if (trials < 1) throw ParameterError("trials must be >= 1");
  if (jobs < 0) throw ParameterError("jobs must be >= 0");
  train.validate();
}

namespace {

std::string optimizer_name(Optimizer o) { return o == Optimizer::adam ? "adam" : "sgd"; }

Optimizer parse_optimizer(const std::string& s) {
  if (s == "adam") return Optimizer::adam;
  if (s == "sgd") return Optimizer::sgd;
  throw ParameterError("unknown optimizer '" + s + "'");
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ParameterError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!known.contains(key)) throw ParameterError("unknown key '" + key + "' in " + where);
}

template <class T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

json to_json(const TrainConfig& c) {
  return {{"epochs", c.epochs},
          {"learning_rate", c.learning_rate},
          {"weight_decay", c.weight_decay},
          {"optimizer", optimizer_name(c.optimizer)},
          {"beta1", c.beta1},
          {"beta2", c.beta2},
          {"adam_eps", c.adam_eps},
          {"project", c.project},
          {"project_r", c.project_r},
          {"dropout", c.dropout},
          {"train_fraction", c.train_fraction},
          {"hidden_width", c.hidden_width},
          {"record_history", c.record_history}};
}

TrainConfig train_config_from_json(const json& j) {
  reject_unknown(j,
                 {"epochs", "learning_rate", "weight_decay", "optimizer", "beta1", "beta2",
                  "adam_eps", "project", "project_r", "dropout", "train_fraction",
                  "hidden_width", "record_history"},
                 "train");
  TrainConfig c;
  read_if(j, "epochs", c.epochs);
  read_if(j, "learning_rate", c.learning_rate);
  read_if(j, "weight_decay", c.weight_decay);
  if (j.contains("optimizer")) c.optimizer = parse_optimizer(j.at("optimizer").get<std::string>());
  read_if(j, "beta1", c.beta1);
  read_if(j, "beta2", c.beta2);
  read_if(j, "adam_eps", c.adam_eps);
  read_if(j, "project", c.project);
  read_if(j, "project_r", c.project_r);
  read_if(j, "dropout", c.dropout);
  read_if(j, "train_fraction", c.train_fraction);
  read_if(j, "hidden_width", c.hidden_width);
  read_if(j, "record_history", c.record_history);
  return c;
}

json to_json(const SweepConfig& c) {
  json pq = json::array();
  for (const auto& [p, q] : c.pq) pq.push_back({p, q});
  return {{"n", c.n},
          {"d", c.d},
          {"sigma", c.sigma},
          {"k_grid",
           {{"log10_min", c.k_grid.log10_min},
            {"log10_max", c.k_grid.log10_max},
            {"count", c.k_grid.count},
            {"values", c.k_grid.values}}},
          {"pq", pq},
          {"archs", c.archs},
          {"trials", c.trials},
          {"seed", c.seed},
          {"train", to_json(c.train)},
          {"threshold_epsilon", c.threshold_epsilon},
          {"out", c.out},
          {"jobs", c.jobs},
          {"record_time", c.record_time}};
}

SweepConfig sweep_config_from_json(const json& j) {
  reject_unknown(j,
                 {"n", "d", "sigma", "k_grid", "pq", "archs", "trials", "seed", "train",
                  "threshold_epsilon", "out", "jobs", "record_time"},
                 "config");
  SweepConfig c;
  try {
    read_if(j, "n", c.n);
    read_if(j, "d", c.d);
    read_if(j, "sigma", c.sigma);
    if (j.contains("k_grid")) {
      const json& g = j.at("k_grid");
      reject_unknown(g, {"log10_min", "log10_max", "count", "values"}, "k_grid");
      read_if(g, "log10_min", c.k_grid.log10_min);
      read_if(g, "log10_max", c.k_grid.log10_max);
      read_if(g, "count", c.k_grid.count);
      read_if(g, "values", c.k_grid.values);
    }
    if (j.contains("pq")) {
      c.pq.clear();
      for (const auto& e : j.at("pq")) {
        if (!e.is_array() || e.size() != 2) throw ParameterError("pq entries must be [p, q]");
        c.pq.emplace_back(e[0].get<double>(), e[1].get<double>());
      }
    }
    read_if(j, "archs", c.archs);
    read_if(j, "trials", c.trials);
    read_if(j, "seed", c.seed);
    if (j.contains("train")) c.train = train_config_from_json(j.at("train"));
    read_if(j, "threshold_epsilon", c.threshold_epsilon);
    read_if(j, "out", c.out);
    read_if(j, "jobs", c.jobs);
    read_if(j, "record_time", c.record_time);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what(), 0);
  }
  return sweep_config_from_json(j);
}

std::uint64_t trial_seed(std::uint64_t base, std::size_t pq_index, std::size_t k_index,
                         int trial) {
  std::uint64_t s = derive_seed(base, pq_index);
  s = derive_seed(s, k_index);
  return derive_seed(s, static_cast<std::uint64_t>(trial));
}

std::vector<SweepRow> run_sweep_rows(const SweepConfig& cfg) {
  cfg.validate();
  const auto ks = cfg.k_grid.points();
  std::vector<Architecture> archs;
  for (const auto& a : cfg.archs) archs.push_back(parse_architecture(a));
  for (const auto& a : archs)
    if (a.depth() > 3) throw ParameterError("CSV schema holds at most three layers");

  const std::size_t n_pq = cfg.pq.size(), n_k = ks.size(), n_a = archs.size();
  const auto n_t = static_cast<std::size_t>(cfg.trials);
  const std::size_t units = n_pq * n_k * n_t;
  std::vector<SweepRow> rows(units * n_a);
  // Row index for (pq, K, arch, trial).
  auto slot = [&](std::size_t ip, std::size_t ik, std::size_t ia, std::size_t it) {
    return ((ip * n_k + ik) * n_a + ia) * n_t + it;
  };

  std::exception_ptr failure;
  const int threads = cfg.jobs > 0 ? cfg.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::size_t u = 0; u < units; ++u) {
    try {
      const std::size_t it = u % n_t;
      const std::size_t ik = (u / n_t) % n_k;
      const std::size_t ip = u / (n_t * n_k);
      const auto [p, q] = cfg.pq[ip];
      const double k = ks[ik];
      const std::uint64_t seed = trial_seed(cfg.seed, ip, ik, static_cast<int>(it));
      const CsbmParams params = make_params(cfg.n, cfg.d, k * cfg.sigma, cfg.sigma, p, q);
      const auto [ds, g] = sample_xor_csbm(params, seed, Backend::serial);
      for (std::size_t ia = 0; ia < n_a; ++ia) {
        const auto& arch = archs[ia];
        const auto t0 = std::chrono::steady_clock::now();
        Network net = init_network(cfg.d, cfg.train.hidden_for_depth(arch.depth()), seed);
        const Graph* gp = arch.plan.total() > 0 ? &g : nullptr;
        const auto [trained, res] = train(std::move(net), ds, gp, arch.plan, cfg.train, seed);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        SweepRow& r = rows[slot(ip, ik, ia, it)];
        r.trial = seed;
        r.k = k;
        r.p = p;
        r.q = q;
        r.arch = arch.label;
        r.k1 = arch.plan.k[0];
        r.k2 = arch.depth() > 1 ? arch.plan.k[1] : 0;
        r.k3 = arch.depth() > 2 ? arch.plan.k[2] : 0;
        r.train_acc = res.train_accuracy;
        r.test_acc = res.test_accuracy;
        r.train_loss = res.train_loss;
        r.test_loss = res.test_loss;
        r.seconds = cfg.record_time ? secs : 0.0;
      }
    } catch (...) {
#pragma omp critical(xcsbm_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::filesystem::path threshold_path(const std::filesystem::path& csv) {
  auto out = csv;
  out.replace_filename(csv.stem().string() + "_thresholds.csv");
  return out;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const std::filesystem::path csv = cfg.out;
  const auto tpath = threshold_path(csv);
  // Open both files first so an unwritable path fails before any training.
  std::ofstream out(csv);
  if (!out) throw std::runtime_error("cannot write " + csv.string());
  std::ofstream tout(tpath);
  if (!tout) throw std::runtime_error("cannot write " + tpath.string());

  const auto rows = run_sweep_rows(cfg);
  out << "# xcsbm " << XCSBM_VERSION << '\n';
  write_csv(out, rows);
  write_thresholds(tout, cfg);
  if (!out || !tout) throw std::runtime_error("write failed for " + csv.string());
  return rows;
}

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.trial << ',' << fmt("%.10g", r.k) << ',' << fmt("%.10g", r.p) << ','
        << fmt("%.10g", r.q) << ',' << r.arch << ',' << r.k1 << ',' << r.k2 << ',' << r.k3
        << ',' << fmt("%.6f", r.train_acc) << ',' << fmt("%.6f", r.test_acc) << ','
        << fmt("%.8g", r.train_loss) << ',' << fmt("%.8g", r.test_loss) << ','
        << fmt("%.4f", r.seconds) << '\n';
  }
}

std::vector<SweepRow> read_csv(std::istream& in) {
  std::vector<SweepRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != kCsvHeader) throw ParseError("unexpected CSV header", line_no);
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 13) throw ParseError("expected 13 fields", line_no);
    try {
      SweepRow r;
      r.trial = std::stoull(f[0]);
      r.k = std::stod(f[1]);
      r.p = std::stod(f[2]);
      r.q = std::stod(f[3]);
      r.arch = f[4];
      r.k1 = std::stoi(f[5]);
      r.k2 = std::stoi(f[6]);
      r.k3 = std::stoi(f[7]);
      r.train_acc = std::stod(f[8]);
      r.test_acc = std::stod(f[9]);
      r.train_loss = std::stod(f[10]);
      r.test_loss = std::stod(f[11]);
      r.seconds = std::stod(f[12]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ParseError("malformed number", line_no);
    }
  }
  if (!header) throw ParseError("missing CSV header", 0);
  return rows;
}

void write_thresholds(std::ostream& out, const SweepConfig& cfg) {
  out << "regime,gamma,K,p,q\n";
  for (const auto& [p, q] : cfg.pq) {
    const auto t = theory::thresholds(static_cast<double>(cfg.n), p, q, cfg.sigma,
                                      cfg.threshold_epsilon);
    const std::pair<theory::Regime, double> entries[] = {
        {theory::Regime::mlp, t.gamma_mlp},
        {theory::Regime::one_conv, t.gamma_one_conv},
        {theory::Regime::two_conv, t.gamma_two_conv}};
    for (const auto& [regime, gamma] : entries)
      out << theory::regime_name(regime) << ',' << fmt("%.10g", gamma) << ','
          << fmt("%.10g", gamma / cfg.sigma) << ',' << fmt("%.10g", p) << ','
          << fmt("%.10g", q) << '\n';
  }
}

std::vector<CurvePoint> mean_curve(const std::vector<SweepRow>& rows, const std::string& arch,
                                   double p, double q) {
  std::map<double, std::pair<double, int>> acc;
  for (const auto& r : rows) {
    if (r.arch != arch || r.p != p || r.q != q) continue;
    auto& [sum, count] = acc[r.k];
    sum += r.test_acc;
    ++count;
  }
  std::vector<CurvePoint> out;
  for (const auto& [k, sc] : acc) out.push_back({k, sc.first / sc.second, sc.second});
  return out;
}

double first_crossing(const std::vector<CurvePoint>& curve, double level) {
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve[i].mean_test_acc < level) continue;
    if (i == 0) return curve[0].k;
    const auto& a = curve[i - 1];
    const auto& b = curve[i];
    const double t = (level - a.mean_test_acc) / (b.mean_test_acc - a.mean_test_acc);
    return std::exp(std::log(a.k) + t * (std::log(b.k) - std::log(a.k)));
  }
  return -1.0;
}

}  // namespace xcsbm
