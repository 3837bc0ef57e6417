#pragma once

#include <cmath>

namespace scramblon {

// Real Gamma and Beta functions for the small positive shapes the kernels use.
inline double gamma_fn(double x) { return std::tgamma(x); }

inline double beta_fn(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

}  // namespace scramblon
