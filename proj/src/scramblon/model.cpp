#include "scramblon/model.hpp"

#include <cmath>
#include <string>

#include "scramblon/errors.hpp"
#include "scramblon/special.hpp"

namespace scramblon {

SystemSize SystemSize::finite(double n) {
  if (!std::isfinite(n) || n < 1.0 || std::floor(n) != n)
    throw ArgumentError("system size must be a positive integer, got " +
                        std::to_string(n));
  return SystemSize{n};
}

double SystemSize::value() const {
  if (!n_) throw InfiniteSizeError("N = inf has no finite value; use the probe-limit path");
  return *n_;
}

ModelParams ModelParams::large_q(int q, double v, double beta, SystemSize n) {
  if (q < 4 || q % 2 != 0)
    throw ArgumentError("q must be an even integer >= 4, got " + std::to_string(q));
  if (!(v > 0.0 && v < 1.0))
    throw ArgumentError("v must lie in (0, 1), got " + std::to_string(v));
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw ArgumentError("beta must be positive, got " + std::to_string(beta));

  ModelParams p;
  p.q_ = q;
  p.delta_ = 1.0 / q;
  p.v_ = v;
  p.beta_ = beta;
  p.cos_half_ = std::cos(0.5 * kPi * v);
  p.coupling_ = kPi * v / (p.cos_half_ * beta);
  p.kappa_ = 2.0 * kPi * v / beta;
  p.size_ = n;
  return p;
}

double ModelParams::prefactor_per_fermion() const noexcept {
  return 4.0 * delta_ * delta_ * cos_half_;
}

double ModelParams::prefactor() const {
  return prefactor_per_fermion() * size_.value();
}

ModelParams ModelParams::with_size(SystemSize n) const {
  ModelParams p = *this;
  p.size_ = n;
  return p;
}

cplx principal_pow(cplx base, double exponent) {
  if (base.imag() == 0.0 && !(base.real() > 0.0))
    throw DomainError("complex power base on the branch cut, got (" +
                      std::to_string(base.real()) + ", " +
                      std::to_string(base.imag()) + ")");
  return std::exp(exponent * std::log(base));
}

cplx theta_factor(const ModelParams& params, ComplexTime theta) {
  return std::cos(params.v() * kPi * (0.5 - theta.theta / params.beta()));
}

cplx two_point(const ModelParams& params, ComplexTime theta) {
  const cplx vt = theta_factor(params, theta);
  return 0.5 * std::pow(params.cos_half_pi_v(), 2.0 * params.delta()) *
         principal_pow(vt, -2.0 * params.delta());
}

GammaKernel string_kernel(const ModelParams& params, ComplexTime theta,
                          int encode_len) {
  if (encode_len < 1 || encode_len % 2 == 0)
    throw ArgumentError("encoding length must be a positive odd integer, got " +
                        std::to_string(encode_len));
  const double shape = 2.0 * params.delta() * encode_len;
  const cplx rate = theta_factor(params, theta);
  if (!(rate.real() > 0.0))
    throw DomainError("kernel rate vartheta must have positive real part");
  const double norm =
      std::pow(params.cos_half_pi_v(), shape) / (2.0 * gamma_fn(shape));
  return {shape, rate, cplx{norm, 0.0}};
}

GammaKernel base_kernel(const ModelParams& params, ComplexTime theta) {
  return string_kernel(params, theta, 1);
}

cplx laplace(const GammaKernel& k, cplx x) {
  return k.norm * gamma_fn(k.shape) * principal_pow(k.rate + x, -k.shape);
}

cplx moment(const GammaKernel& k, int m) {
  if (m < 0) throw ArgumentError("moment order must be non-negative");
  return k.norm * gamma_fn(k.shape + m) * principal_pow(k.rate, -(k.shape + m));
}

GammaKernel compose(const GammaKernel& a, const GammaKernel& b) {
  const double scale = std::max(std::abs(a.rate), std::abs(b.rate));
  if (std::abs(a.rate - b.rate) > 1e-12 * scale)
    throw RateMismatch("compose requires equal rates");
  return {a.shape + b.shape, a.rate, a.norm * b.norm * beta_fn(a.shape, b.shape)};
}

ScramblonWeights scramblon_weights(const ModelParams& params, double t_left,
                                   double t_right) {
  const double c = params.prefactor();
  const double kappa = params.kappa();
  return {std::exp(0.5 * kappa * (t_left + t_right)) / c,
          std::exp(kappa * t_left) / c,
          std::polar(1.0, -0.25 * kappa * params.beta())};
}

}  // namespace scramblon
