#pragma once

// Closed-form quantities for XOR-GMM / XOR-CSBM classification: the Bayes
// rule, the misclassification floor, ζ, threshold curves and loss predictions.

#include <cmath>
#include <string_view>

#include "xcsbm/types.hpp"

namespace xcsbm::theory {

/// 1 iff |⟨x,mu⟩| < |⟨x,nu⟩|. Ties go to class 0.
int bayes_classify(const Vector& x, const Vector& mu, const Vector& nu);

/// Standard normal upper tail, 1 − Φ(x), via erfc.
double normal_sf(double x);

/// τ_K = 2·Φc(K/2)². Throws ParameterError for K < 0.
double misclassification_floor(double k);

/// ζ(x, y) = x·erf(x/(√2 y)) − y·√(2/π)·(1 − exp(−x²/(2y²))) = E|N(x,y²)| − E|N(0,y²)|.
/// Throws ParameterError for y ≤ 0. Uses a series for x/y < 1e-3 where the
/// direct form cancels catastrophically.
double zeta(double x, double y);

/// Γ(p,q) = |p − q|/(p + q); 0 when p + q = 0.
double signal_ratio(double p, double q);

/// Big-O constants behind the threshold and loss expressions.
struct TheoryConstants {
  double threshold = 1.0;                         // every Ω(·) in the thresholds
  double loss = 0.3989422804014327;               // C in the convolution losses, 1/√(2π)
};

struct ThresholdSet {
  double gamma_mlp = 0.0;       // σ (log n)^{1/2+ε}
  double gamma_one_conv = 0.0;  // σ √log n / (n(p+q))^{1/4}
  double gamma_two_conv = 0.0;  // σ √log n / n^{1/4}
  double n = 0.0, p = 0.0, q = 0.0, sigma = 0.0, epsilon = 0.0;
};

/// Throws ParameterError for n < 2.
ThresholdSet thresholds(double n, double p, double q, double sigma, double epsilon,
                        const TheoryConstants& constants = {});

enum class Regime { mlp, one_conv, two_conv };

std::string_view regime_name(Regime r);

struct LossPrediction {
  Regime regime = Regime::mlp;
  double value = 0.0;  // C' = 1
  double lower = 0.0;  // C' = 1/2
  double upper = 0.0;
};

/// mlp:      exp(−R γ/√2)
/// one_conv: exp(−(C R γ²/σ) Γ(p,q))
/// two_conv: exp(−(C R γ²/σ) Γ(p,q)²)
/// `n` is recorded by callers for the density assumptions, which are not enforced.
LossPrediction predicted_loss(Regime regime, double r, double gamma, double sigma, double p,
                              double q, double n, const TheoryConstants& constants = {});

}  // namespace xcsbm::theory
