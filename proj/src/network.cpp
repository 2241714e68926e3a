#include "xcsbm/network.hpp"

#include <cctype>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "xcsbm/errors.hpp"
#include "xcsbm/rng.hpp"

namespace xcsbm {

int PlacementPlan::total() const { return std::accumulate(k.begin(), k.end(), 0); }

int PlacementPlan::total_after_first() const { return k.empty() ? 0 : total() - k.front(); }

Architecture parse_architecture(const std::string& label) {
  auto fail = [&] { return ParameterError("malformed architecture label '" + label + "'"); };
  if (label.rfind("MLP", 0) == 0) {
    const std::string digits = label.substr(3);
    if (digits.empty() || digits.size() > 2) throw fail();
    for (char c : digits)
      if (!std::isdigit(static_cast<unsigned char>(c))) throw fail();
    const int depth = std::stoi(digits);
    if (depth < 1) throw fail();
    return {label, PlacementPlan{std::vector<int>(static_cast<std::size_t>(depth), 0)}};
  }
  const auto pos = label.find("L-");
  if (pos == std::string::npos || pos == 0) throw fail();
  for (std::size_t i = 0; i < pos; ++i)
    if (!std::isdigit(static_cast<unsigned char>(label[i]))) throw fail();
  const int depth = std::stoi(label.substr(0, pos));
  const std::string ks = label.substr(pos + 2);
  if (depth < 1 || ks.size() != static_cast<std::size_t>(depth)) throw fail();
  PlacementPlan plan;
  for (char c : ks) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw fail();
    plan.k.push_back(c - '0');
  }
  return {label, plan};
}

std::string architecture_label(const PlacementPlan& plan) {
  std::string s = std::to_string(plan.depth()) + "L-";
  for (int k : plan.k) s += std::to_string(k);
  return s;
}

std::size_t Network::input_dim() const {
  return layers.empty() ? 0 : static_cast<std::size_t>(layers.front().w.rows());
}

void Network::validate() const {
  if (layers.empty()) throw ShapeError("network has no layers");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (layers[l].b.size() != layers[l].w.cols())
      throw ShapeError("layer " + std::to_string(l + 1) + ": bias length != fan_out");
    if (l > 0 && layers[l].w.rows() != layers[l - 1].w.cols())
      throw ShapeError("layer " + std::to_string(l + 1) + ": fan_in != previous fan_out");
  }
  if (layers.back().w.cols() != 1) throw ShapeError("final layer must have one output");
}

int default_orientation(double p, double q, int total_convs) {
  const int s = p < q ? -1 : 1;
  return total_convs % 2 == 0 ? 1 : s;
}

Network build_ansatz(int depth, double r, const Vector& mu, const Vector& nu, int xi) {
  if (depth != 2 && depth != 3) throw ParameterError("ansatz depth must be 2 or 3");
  if (!(r > 0.0)) throw ParameterError("ansatz needs R > 0");
  if (xi != 1 && xi != -1) throw ParameterError("orientation must be +1 or -1");
  if (mu.size() != nu.size() || mu.norm() == 0.0 || nu.norm() == 0.0)
    throw ParameterError("ansatz needs nonzero means of equal dimension");
  const Vector mh = mu.normalized();
  const Vector nh = nu.normalized();
  const auto d = mu.size();

  Network net;
  net.r = r;
  Layer first;
  first.w.resize(d, 4);
  first.w.col(0) = r * mh;
  first.w.col(1) = -r * mh;
  first.w.col(2) = r * nh;
  first.w.col(3) = -r * nh;
  first.b = Vector::Zero(4);
  net.layers.push_back(std::move(first));

  if (depth == 2) {
    Layer out;
    out.w.resize(4, 1);
    out.w << -xi, -xi, xi, xi;
    out.b = Vector::Zero(1);
    net.layers.push_back(std::move(out));
  } else {
    Layer mid;
    mid.w.resize(4, 2);
    mid.w << -1, 1, -1, 1, 1, -1, 1, -1;
    mid.b = Vector::Zero(2);
    Layer out;
    out.w.resize(2, 1);
    out.w << xi, -xi;
    out.b = Vector::Zero(1);
    net.layers.push_back(std::move(mid));
    net.layers.push_back(std::move(out));
  }
  return net;
}

Network init_network(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                     std::uint64_t seed) {
  if (input_dim == 0) throw ParameterError("input dimension must be positive");
  Engine eng = make_engine(derive_seed(seed, stream::init));
  std::vector<std::size_t> dims{input_dim};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(1);
  Network net;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    if (dims[l + 1] == 0) throw ParameterError("hidden width must be positive");
    const double bound = 1.0 / std::sqrt(static_cast<double>(dims[l]));
    std::uniform_real_distribution<double> u(-bound, bound);
    Layer layer;
    layer.w.resize(static_cast<Eigen::Index>(dims[l]), static_cast<Eigen::Index>(dims[l + 1]));
    layer.b.resize(static_cast<Eigen::Index>(dims[l + 1]));
    for (Eigen::Index i = 0; i < layer.w.rows(); ++i)
      for (Eigen::Index j = 0; j < layer.w.cols(); ++j) layer.w(i, j) = u(eng);
    for (Eigen::Index j = 0; j < layer.b.size(); ++j) layer.b[j] = u(eng);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

Vector forward(const Network& net, const ConvOperator* op, const Matrix& x,
               const PlacementPlan& plan, ForwardTrace* trace, const DropoutMasks* masks) {
  net.validate();
  if (plan.depth() != net.depth())
    throw ParameterError("placement plan length " + std::to_string(plan.depth()) +
                         " != network depth " + std::to_string(net.depth()));
  for (int k : plan.k)
    if (k < 0) throw ParameterError("convolution counts must be >= 0");
  if (op == nullptr && plan.total() != 0)
    throw ParameterError("placement plan has convolutions but no graph operator was given");
  if (x.cols() != net.layers.front().w.rows())
    throw ShapeError("feature dim " + std::to_string(x.cols()) + " != network input dim " +
                     std::to_string(net.layers.front().w.rows()));
  if (op && static_cast<std::size_t>(x.rows()) != op->size())
    throw ShapeError("feature rows != graph size");
  const std::size_t depth = net.depth();
  if (masks && masks->size() + 1 < depth) throw ShapeError("missing dropout masks");

  if (trace) {
    trace->conv.assign(depth, Matrix());
    trace->pre.assign(depth, Matrix());
    trace->act.assign(depth, Matrix());
  }

  Matrix h = x;
  for (std::size_t l = 0; l < depth; ++l) {
    const Layer& layer = net.layers[l];
    const int k = plan.k[l];
    Matrix z;
    if (k > 0 && layer.w.cols() < layer.w.rows()) {
      // Narrowing layer: convolve after the weight product, M^k (H W).
      z = convolve(*op, h * layer.w, k);
    } else {
      Matrix c = k > 0 ? convolve(*op, h, k) : h;
      z = c * layer.w;
      if (trace) trace->conv[l] = std::move(c);
    }
    z.rowwise() += layer.b.transpose();
    if (l + 1 == depth) {
      if (trace) trace->pre[l] = z;
      return z.col(0);
    }
    Matrix a = z.cwiseMax(0.0);
    if (masks) a.array() *= (*masks)[l].array();
    if (trace) {
      trace->pre[l] = std::move(z);
      trace->act[l] = a;
    }
    h = std::move(a);
  }
  return {};  // unreachable: validate() guarantees at least one layer
}

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double bce_loss(const Vector& logits, std::span<const std::uint8_t> labels) {
  if (static_cast<std::size_t>(logits.size()) != labels.size())
    throw ShapeError("logits and labels differ in length");
  if (labels.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    acc += softplus(labels[i] ? -logits[static_cast<Eigen::Index>(i)]
                              : logits[static_cast<Eigen::Index>(i)]);
  return acc / static_cast<double>(labels.size());
}

double spectral_norm(const Matrix& w, int iterations, double tol) {
  if (w.size() == 0) return 0.0;
  const Eigen::MatrixXd gram = w.transpose() * w;
  Vector v(gram.cols());
  // Fixed, non-symmetric start so a top singular direction is never orthogonal by construction.
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = 1.0 + 0.1 * std::sin(1.0 + i);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vector next = gram * v;
    const double nrm = next.norm();
    if (nrm == 0.0) return 0.0;
    next /= nrm;
    const double updated = next.dot(gram * next);
    v = std::move(next);
    if (std::abs(updated - lambda) <= tol * std::max(1.0, updated)) {
      lambda = updated;
      break;
    }
    lambda = updated;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

Network project_constraints(const Network& net, double r) {
  Network out = net;
  out.r = r;
  for (std::size_t l = 0; l < out.layers.size(); ++l) {
    const double budget = l == 0 ? r : 1.0;
    const double norm = spectral_norm(out.layers[l].w);
    if (norm > budget) out.layers[l].w *= budget / norm;
  }
  return out;
}

Vector closed_form_logits(const Matrix& x, const Graph& g, int total_convs, double r, double p,
                          double q, const Vector& mu, const Vector& nu) {
  if (total_convs != 1 && total_convs != 2)
    throw ParameterError("closed form exists for one or two convolutions");
  const std::size_t n = g.size();
  if (static_cast<std::size_t>(x.rows()) != n) throw ShapeError("feature rows != graph size");
  const Vector mh = mu.normalized();
  const Vector nh = nu.normalized();
  Vector h(static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < h.size(); ++j)
    h[j] = std::abs(x.row(j).dot(nh)) - std::abs(x.row(j).dot(mh));

  Vector out = Vector::Zero(static_cast<Eigen::Index>(n));
  if (total_convs == 1) {
    const double sgn = p < q ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (auto j : g.neighbors(i)) s += h[j];
      out[static_cast<Eigen::Index>(i)] = r * sgn / g.degree(i) * s;
    }
    return out;
  }
  // τ_ij = Σ_k a_ik a_jk / deg(k): accumulate row i of τ over neighbors k of i.
  std::vector<double> tau(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(tau.begin(), tau.end(), 0.0);
    for (auto k : g.neighbors(i)) {
      const double w = 1.0 / g.degree(k);
      for (auto j : g.neighbors(k)) tau[j] += w;
    }
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += tau[j] * h[static_cast<Eigen::Index>(j)];
    out[static_cast<Eigen::Index>(i)] = r / g.degree(i) * s;
  }
  return out;
}

void save_network(const Network& net, std::ostream& out) {
  net.validate();
  const auto old_prec = out.precision(std::numeric_limits<double>::max_digits10);
  out << "xcsbm-network 1\n";
  out << "R " << net.r << "\n";
  out << "layers " << net.depth() << "\n";
  for (const auto& layer : net.layers) {
    out << "layer " << layer.w.rows() << " " << layer.w.cols() << "\n";
    for (Eigen::Index i = 0; i < layer.w.rows(); ++i) {
      for (Eigen::Index j = 0; j < layer.w.cols(); ++j) out << (j ? " " : "") << layer.w(i, j);
      out << "\n";
    }
    for (Eigen::Index j = 0; j < layer.b.size(); ++j) out << (j ? " " : "") << layer.b[j];
    out << "\n";
  }
  out.precision(old_prec);
}

Network load_network(std::istream& in) {
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "xcsbm-network" || version != 1)
    throw ParseError("not an xcsbm-network v1 checkpoint", 1);
  Network net;
  std::size_t depth = 0;
  if (!(in >> tag >> net.r) || tag != "R") throw ParseError("expected 'R <value>'", 2);
  if (!(in >> tag >> depth) || tag != "layers") throw ParseError("expected 'layers <L>'", 3);
  for (std::size_t l = 0; l < depth; ++l) {
    Eigen::Index rows = 0, cols = 0;
    if (!(in >> tag >> rows >> cols) || tag != "layer" || rows <= 0 || cols <= 0)
      throw ParseError("bad header for layer " + std::to_string(l + 1), 0);
    Layer layer;
    layer.w.resize(rows, cols);
    layer.b.resize(cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j)
        if (!(in >> layer.w(i, j)))
          throw ParseError("truncated weights in layer " + std::to_string(l + 1), 0);
    for (Eigen::Index j = 0; j < cols; ++j)
      if (!(in >> layer.b[j])) throw ParseError("truncated bias in layer " + std::to_string(l + 1), 0);
    net.layers.push_back(std::move(layer));
  }
  net.validate();
  return net;
}

}  // namespace xcsbm
