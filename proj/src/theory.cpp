#include "xcsbm/theory.hpp"

#include <numbers>

#include "xcsbm/errors.hpp"

namespace xcsbm::theory {

int bayes_classify(const Vector& x, const Vector& mu, const Vector& nu) {
  return std::abs(x.dot(mu)) < std::abs(x.dot(nu)) ? 1 : 0;
}

double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double misclassification_floor(double k) {
  if (!(k >= 0.0)) throw ParameterError("K must be >= 0");
  const double tail = normal_sf(0.5 * k);
  return 2.0 * tail * tail;
}

double zeta(double x, double y) {
  if (!(y > 0.0)) throw ParameterError("zeta needs y > 0");
  const double t = x / (std::numbers::sqrt2 * y);
  if (std::abs(t) < 1e-2) {
    // erf(t) − (1 − e^{−t²})/(t√π) = (t − t³/6 + t⁵/30 − t⁷/168 + …)/√π
    const double t2 = t * t;
    const double h = t * (1.0 - t2 / 6.0 + t2 * t2 / 30.0 - t2 * t2 * t2 / 168.0);
    return x * h * std::numbers::inv_sqrtpi;
  }
  return x * std::erf(t) -
         y * std::sqrt(2.0 / std::numbers::pi) * (1.0 - std::exp(-t * t));
}

double signal_ratio(double p, double q) {
  const double s = p + q;
  return s > 0.0 ? std::abs(p - q) / s : 0.0;
}

ThresholdSet thresholds(double n, double p, double q, double sigma, double epsilon,
                        const TheoryConstants& constants) {
  if (!(n >= 2.0)) throw ParameterError("thresholds need n >= 2");
  const double logn = std::log(n);
  ThresholdSet t;
  t.n = n;
  t.p = p;
  t.q = q;
  t.sigma = sigma;
  t.epsilon = epsilon;
  t.gamma_mlp = constants.threshold * sigma * std::pow(logn, 0.5 + epsilon);
  t.gamma_one_conv = constants.threshold * sigma * std::sqrt(logn) / std::pow(n * (p + q), 0.25);
  t.gamma_two_conv = constants.threshold * sigma * std::sqrt(logn) / std::pow(n, 0.25);
  return t;
}

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::mlp:
      return "mlp";
    case Regime::one_conv:
      return "one_conv";
    case Regime::two_conv:
      return "two_conv";
  }
  return "unknown";
}

LossPrediction predicted_loss(Regime regime, double r, double gamma, double sigma, double p,
                              double q, double /*n*/, const TheoryConstants& constants) {
  double exponent = 0.0;
  switch (regime) {
    case Regime::mlp:
      exponent = r * gamma / std::numbers::sqrt2;
      break;
    case Regime::one_conv:
    case Regime::two_conv: {
      if (!(sigma > 0.0)) throw ParameterError("convolution loss needs sigma > 0");
      const double g = signal_ratio(p, q);
      const double signal = regime == Regime::one_conv ? g : g * g;
      exponent = constants.loss * r * gamma * gamma / sigma * signal;
      break;
    }
  }
  LossPrediction out;
  out.regime = regime;
  out.value = std::exp(-exponent);
  out.upper = out.value;
  out.lower = 0.5 * out.value;
  return out;
}

}  // namespace xcsbm::theory
