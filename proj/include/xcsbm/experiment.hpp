#pragma once

// Sweep configuration, the sweep runner, CSV I/O and external graph ingestion.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "xcsbm/network.hpp"
#include "xcsbm/theory.hpp"
#include "xcsbm/train.hpp"

namespace xcsbm {

struct KGrid {
  double log10_min = -1.1;
  double log10_max = 1.1;
  int count = 40;
  std::vector<double> values;  // explicit list; overrides the log-spaced grid when nonempty

  std::vector<double> points() const;
};

struct SweepConfig {
  std::size_t n = 400;
  std::size_t d = 4;
  double sigma = 0.5;  // σ² = 1/d
  KGrid k_grid;
  std::vector<std::pair<double, double>> pq{{0.2, 0.02}};
  std::vector<std::string> archs{"MLP2", "2L-01", "2L-02", "3L-010", "3L-011"};
  int trials = 10;
  std::uint64_t seed = 1;
  TrainConfig train;
  double threshold_epsilon = 0.0;
  std::string out = "sweep.csv";
  int jobs = 0;  // 0 = OpenMP default
  bool record_time = true;

  /// Throws ParameterError on an invalid configuration.
  void validate() const;
};

nlohmann::json to_json(const SweepConfig& cfg);
/// Missing keys keep their defaults; unknown keys are rejected.
SweepConfig sweep_config_from_json(const nlohmann::json& j);
SweepConfig load_sweep_config(const std::filesystem::path& path);

nlohmann::json to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& j);

struct SweepRow {
  std::uint64_t trial = 0;  // trial seed
  double k = 0.0;
  double p = 0.0;
  double q = 0.0;
  std::string arch;
  int k1 = 0, k2 = 0, k3 = 0;
  double train_acc = 0.0;
  double test_acc = 0.0;
  double train_loss = 0.0;
  double test_loss = 0.0;
  double seconds = 0.0;
};

inline constexpr const char* kCsvHeader =
    "trial,K,p,q,arch,k1,k2,k3,train_acc,test_acc,train_loss,test_loss,seconds";

/// Seed of the instance shared by every architecture in cell (pq_index, k_index), trial t.
std::uint64_t trial_seed(std::uint64_t base, std::size_t pq_index, std::size_t k_index, int trial);

/// Runs every (pq, K, trial) instance, trains each architecture on it, and returns rows
/// ordered by pq, K, arch, trial.
std::vector<SweepRow> run_sweep_rows(const SweepConfig& cfg);

/// run_sweep_rows plus the CSV at cfg.out and the threshold file next to it.
/// Returns the rows written.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

/// "<stem>_thresholds.csv" in the directory of the sweep CSV.
std::filesystem::path threshold_path(const std::filesystem::path& csv);

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
/// Lines starting with '#' are skipped. Throws ParseError on a bad header or row.
std::vector<SweepRow> read_csv(std::istream& in);

/// Columns regime,gamma,K,p,q with K = gamma/σ; one line per regime and (p,q).
void write_thresholds(std::ostream& out, const SweepConfig& cfg);

struct CurvePoint {
  double k = 0.0;
  double mean_test_acc = 0.0;
  int count = 0;
};

/// Mean test accuracy against K for one (arch, p, q), sorted by K.
std::vector<CurvePoint> mean_curve(const std::vector<SweepRow>& rows, const std::string& arch,
                                   double p, double q);

/// First K at which the curve reaches `level`, interpolated linearly in log K
/// between the bracketing grid points. Returns a negative value if never reached.
double first_crossing(const std::vector<CurvePoint>& curve, double level);

/// Features and labels from files, graph from an edge list (symmetrized, self-loops added).
std::pair<Dataset, Graph> load_graph_dataset(const std::filesystem::path& edge_path,
                                             const std::filesystem::path& feature_path,
                                             const std::filesystem::path& label_path);

}  // namespace xcsbm
