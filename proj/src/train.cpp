#include "xcsbm/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "xcsbm/errors.hpp"
#include "xcsbm/rng.hpp"

namespace xcsbm {

void TrainConfig::validate() const {
  if (epochs < 0) throw ParameterError("epochs must be >= 0");
  if (!(learning_rate > 0.0)) throw ParameterError("learning rate must be > 0");
  if (!(weight_decay >= 0.0)) throw ParameterError("weight decay must be >= 0");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ParameterError("train fraction must lie in (0, 1)");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ParameterError("dropout must lie in [0, 1)");
  if (project && !(project_r > 0.0)) throw ParameterError("projection radius must be > 0");
  if (hidden_width == 0) throw ParameterError("hidden width must be positive");
}

std::vector<std::size_t> TrainConfig::hidden_for_depth(std::size_t depth) const {
  if (depth == 0) throw ParameterError("depth must be >= 1");
  return std::vector<std::size_t>(depth - 1, hidden_width);
}

double Gradients::squared_norm() const {
  double s = 0.0;
  for (const auto& m : w) s += m.squaredNorm();
  for (const auto& v : b) s += v.squaredNorm();
  return s;
}

namespace {

std::vector<std::uint32_t> all_nodes(std::size_t n) {
  std::vector<std::uint32_t> v(n);
  std::iota(v.begin(), v.end(), 0U);
  return v;
}

}  // namespace

Gradients backward(const Network& net, const ConvOperator* op, const Matrix& x,
                   const PlacementPlan& plan, std::span<const std::uint8_t> labels,
                   std::span<const std::uint32_t> nodes, const DropoutMasks* masks) {
  if (static_cast<std::size_t>(x.rows()) != labels.size())
    throw ShapeError("labels length != number of nodes");
  ForwardTrace trace;
  const Vector logits = forward(net, op, x, plan, &trace, masks);

  std::vector<std::uint32_t> owned;
  if (nodes.empty()) {
    owned = all_nodes(labels.size());
    nodes = owned;
  }
  const std::size_t depth = net.depth();
  Matrix dz = Matrix::Zero(x.rows(), 1);
  const double scale = 1.0 / static_cast<double>(nodes.size());
  for (auto i : nodes) {
    if (i >= labels.size()) throw IndexError("node index out of range");
    dz(i, 0) = (sigmoid(logits[i]) - labels[i]) * scale;
  }

  Gradients grads;
  grads.w.resize(depth);
  grads.b.resize(depth);
  for (std::size_t l = depth; l-- > 0;) {
    const Layer& layer = net.layers[l];
    const int k = plan.k[l];
    const Matrix& h_prev = l == 0 ? x : trace.act[l - 1];
    grads.b[l] = dz.colwise().sum().transpose();
    Matrix dh;
    if (k > 0 && layer.w.cols() < layer.w.rows()) {
      const Matrix dy = convolve_transpose(*op, dz, k);
      grads.w[l] = h_prev.transpose() * dy;
      if (l > 0) dh = dy * layer.w.transpose();
    } else {
      grads.w[l] = trace.conv[l].transpose() * dz;
      if (l > 0) {
        const Matrix dc = dz * layer.w.transpose();
        dh = k > 0 ? convolve_transpose(*op, dc, k) : dc;
      }
    }
    if (l == 0) break;
    const Matrix& pre = trace.pre[l - 1];
    dz = dh.cwiseProduct((pre.array() > 0.0).cast<double>().matrix());
    if (masks) dz.array() *= (*masks)[l - 1].array();
  }
  return grads;
}

double subset_loss(const Network& net, const ConvOperator* op, const Matrix& x,
                   const PlacementPlan& plan, std::span<const std::uint8_t> labels,
                   std::span<const std::uint32_t> nodes) {
  const Vector logits = forward(net, op, x, plan);
  if (nodes.empty()) return bce_loss(logits, labels);
  double acc = 0.0;
  for (auto i : nodes) acc += softplus(labels[i] ? -logits[i] : logits[i]);
  return acc / static_cast<double>(nodes.size());
}

Evaluation evaluate(const Network& net, const Dataset& ds, const ConvOperator* op,
                    const PlacementPlan& plan, std::span<const std::uint32_t> nodes) {
  if (nodes.empty()) throw DegenerateInputError("evaluation subset is empty");
  const Vector logits = forward(net, op, ds.x, plan);
  std::size_t correct = 0;
  double loss = 0.0;
  for (auto i : nodes) {
    if (i >= ds.size()) throw IndexError("node index out of range");
    const int pred = logits[i] > 0.0 ? 1 : 0;
    correct += pred == ds.eps[i];
    loss += softplus(ds.eps[i] ? -logits[i] : logits[i]);
  }
  const double m = static_cast<double>(nodes.size());
  return {static_cast<double>(correct) / m, loss / m};
}

NodeSplit split_nodes(std::size_t n, double train_fraction, std::uint64_t seed) {
  std::vector<std::uint32_t> perm = all_nodes(n);
  Engine eng = make_engine(seed);
  // Fisher-Yates with an explicit draw so the permutation does not depend on
  // the standard library's shuffle implementation.
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = eng() % i;
    std::swap(perm[i - 1], perm[j]);
  }
  const auto n_train = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n))), 1,
      n > 1 ? n - 1 : 1);
  NodeSplit s;
  s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

namespace {

// One optimizer update; weight decay enters as an L2 term on the gradient.
void step(Matrix& theta, const Matrix& grad, const TrainConfig& cfg, Matrix& m, Matrix& v,
          int t) {
  Matrix g = grad;
  if (cfg.weight_decay > 0.0) g += cfg.weight_decay * theta;
  if (cfg.optimizer == Optimizer::sgd) {
    theta -= cfg.learning_rate * g;
    return;
  }
  m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
  v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  theta -= (cfg.learning_rate * (m.array() / c1) /
            ((v.array() / c2).sqrt() + cfg.adam_eps))
               .matrix();
}

}  // namespace

std::pair<Network, TrialResult> train(Network net, const Dataset& ds, const Graph* g,
                                      const PlacementPlan& plan, const TrainConfig& cfg,
                                      std::uint64_t seed) {
  cfg.validate();
  net.validate();
  if (plan.depth() != net.depth()) throw ParameterError("placement plan length != depth");
  if (net.input_dim() != ds.dim()) throw ShapeError("network input dim != feature dim");
  std::optional<ConvOperator> op;
  if (g) {
    if (g->size() != ds.size()) throw ShapeError("graph size != dataset size");
    op = normalize(*g, NormMode::row);
  }
  const ConvOperator* opp = op ? &*op : nullptr;
  const NodeSplit split = split_nodes(ds.size(), cfg.train_fraction, derive_seed(seed, stream::split));

  const std::size_t depth = net.depth();
  std::vector<Matrix> mw(depth), vw(depth), mb(depth), vb(depth);
  for (std::size_t l = 0; l < depth; ++l) {
    mw[l] = vw[l] = Matrix::Zero(net.layers[l].w.rows(), net.layers[l].w.cols());
    mb[l] = vb[l] = Matrix::Zero(net.layers[l].b.size(), 1);
  }

  Engine drop_eng = make_engine(derive_seed(seed, stream::dropout));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DropoutMasks masks;

  TrialResult result;
  result.seed = seed;
  result.arch = architecture_label(plan);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const DropoutMasks* mp = nullptr;
    if (cfg.dropout > 0.0) {
      masks.assign(depth - 1, Matrix());
      const double keep = 1.0 - cfg.dropout;
      for (std::size_t l = 0; l + 1 < depth; ++l) {
        masks[l].resize(ds.x.rows(), net.layers[l].w.cols());
        for (Eigen::Index i = 0; i < masks[l].size(); ++i)
          masks[l].data()[i] = unit(drop_eng) < keep ? 1.0 / keep : 0.0;
      }
      mp = &masks;
    }
    const Gradients grads = backward(net, opp, ds.x, plan, ds.eps, split.train, mp);
    if (!std::isfinite(grads.squared_norm()))
      throw std::runtime_error("training diverged at epoch " + std::to_string(epoch));
    for (std::size_t l = 0; l < depth; ++l) {
      step(net.layers[l].w, grads.w[l], cfg, mw[l], vw[l], epoch);
      Matrix b = net.layers[l].b;
      step(b, Matrix(grads.b[l]), cfg, mb[l], vb[l], epoch);
      net.layers[l].b = b.col(0);
    }
    if (cfg.project) net = project_constraints(net, cfg.project_r);
    if (cfg.record_history) {
      const Evaluation e = evaluate(net, ds, opp, plan, split.train);
      result.history.push_back({epoch, e.loss, e.accuracy});
    }
  }
  result.epochs_run = cfg.epochs;

  const Evaluation tr = evaluate(net, ds, opp, plan, split.train);
  const Evaluation te = evaluate(net, ds, opp, plan, split.test);
  if (!std::isfinite(tr.loss) || !std::isfinite(te.loss))
    throw std::runtime_error("training produced a non-finite loss");
  result.train_accuracy = tr.accuracy;
  result.train_loss = tr.loss;
  result.test_accuracy = te.accuracy;
  result.test_loss = te.loss;
  return {std::move(net), std::move(result)};
}

}  // namespace xcsbm
