#pragma once

// Reverse-mode gradients of the BCE loss, Adam/SGD, and single-trial
// transductive training.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xcsbm/network.hpp"

namespace xcsbm {

enum class Optimizer { adam, sgd };

struct TrainConfig {
  int epochs = 200;
  double learning_rate = 1e-3;
  double weight_decay = 1e-5;
  Optimizer optimizer = Optimizer::adam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  bool project = false;          // enforce ‖W¹‖ ≤ R, ‖Wˡ‖ ≤ 1 after every step
  double project_r = 1.0;
  double dropout = 0.0;          // on hidden activations, training only
  double train_fraction = 0.5;
  std::size_t hidden_width = 16;  // every hidden layer
  bool record_history = false;

  /// Throws ParameterError unless lr > 0, train fraction ∈ (0,1), dropout ∈ [0,1), epochs ≥ 0.
  void validate() const;
  /// depth − 1 copies of hidden_width.
  std::vector<std::size_t> hidden_for_depth(std::size_t depth) const;
};

struct Gradients {
  std::vector<Matrix> w;
  std::vector<Vector> b;

  double squared_norm() const;
};

/// Gradient of bce_loss restricted to `nodes` (all nodes when empty) with
/// respect to every W and b. ReLU'(0) = 0. Convolutions are constant linear
/// maps, so their adjoint is (Mᵀ)^k.
Gradients backward(const Network& net, const ConvOperator* op, const Matrix& x,
                   const PlacementPlan& plan, std::span<const std::uint8_t> labels,
                   std::span<const std::uint32_t> nodes = {},
                   const DropoutMasks* masks = nullptr);

/// Loss value matching `backward` (mean BCE over `nodes`, all when empty).
double subset_loss(const Network& net, const ConvOperator* op, const Matrix& x,
                   const PlacementPlan& plan, std::span<const std::uint8_t> labels,
                   std::span<const std::uint32_t> nodes = {});

struct Evaluation {
  double accuracy = 0.0;
  double loss = 0.0;
};

/// Accuracy counts logit > 0 as class 1 (logit 0 → class 0, like the Bayes tie-break).
/// Throws DegenerateInputError on an empty subset.
Evaluation evaluate(const Network& net, const Dataset& ds, const ConvOperator* op,
                    const PlacementPlan& plan, std::span<const std::uint32_t> nodes);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct TrialResult {
  std::uint64_t seed = 0;
  std::string arch;
  int epochs_run = 0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double train_loss = 0.0;
  double test_loss = 0.0;
  std::string init = "uniform(+-1/sqrt(fan_in))";
  std::vector<EpochRecord> history;

  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

/// Seeded train/test split of {0..n−1}; both parts sorted.
struct NodeSplit {
  std::vector<std::uint32_t> train;
  std::vector<std::uint32_t> test;
};
NodeSplit split_nodes(std::size_t n, double train_fraction, std::uint64_t seed);

/// Full-batch training of `net` for cfg.epochs. The loss sees only training
/// nodes, convolutions see every node. `g == nullptr` means no graph.
/// Deterministic given `seed`. Throws std::runtime_error if the loss turns NaN.
std::pair<Network, TrialResult> train(Network net, const Dataset& ds, const Graph* g,
                                      const PlacementPlan& plan, const TrainConfig& cfg,
                                      std::uint64_t seed);

}  // namespace xcsbm
