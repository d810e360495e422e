#pragma once

#include <cmath>

namespace opml {

/// log(1 + exp(x)) without overflow or loss of precision in the tails.
inline double softplus(double x) {
  if (x > 30.0) return x + std::log1p(std::exp(-x));
  if (x < -30.0) return std::log1p(std::exp(x));
  return std::log1p(std::exp(x));
}

/// Logistic function 1 / (1 + exp(-x)), evaluated on the non-overflowing side.
inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// d/dx sigmoid(x) = sigmoid(x) * sigmoid(-x).
inline double sigmoid_derivative(double x) { return sigmoid(x) * sigmoid(-x); }

}  // namespace opml
