#include "scramblon/correlators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scramblon/errors.hpp"
#include "scramblon/special.hpp"

namespace scramblon {

void ProtocolPoint::validate() const {
  if (!(t_left >= 0.0) || !(t_right >= 0.0) || !std::isfinite(t_left) ||
      !std::isfinite(t_right))
    throw ArgumentError("protocol times must be finite and non-negative");
  if (!std::isfinite(mu)) throw ArgumentError("coupling mu must be finite");
  if (encode_len < 1 || encode_len % 2 == 0)
    throw ArgumentError("encoding length must be a positive odd integer, got " +
                        std::to_string(encode_len));
}

namespace {

constexpr cplx kI{0.0, 1.0};

// f(x) = amp (rate + x)^-shape with the Gamma factor folded in once.
struct ProbeFunction {
  cplx rate;
  cplx amp;
  double shape;

  explicit ProbeFunction(const GammaKernel& k)
      : rate(k.rate), amp(k.norm * gamma_fn(k.shape)), shape(k.shape) {}
  cplx operator()(cplx x) const { return amp * principal_pow(rate + x, -shape); }
};

// Everything the finite-N integrands share for one protocol point.
struct FiniteSetup {
  GammaKernel message;    // string kernel at beta/2 + i t_LR
  GammaKernel spectator;  // string kernel at theta = 0 (psi2 leg of I4)
  ProbeFunction coupling; // base probe function at beta/2
  double g_half;          // G(beta/2)
  double mu_n;
  ScramblonWeights w;
  double upsilon1;        // Upsilon^{R,1}(beta/2)

  FiniteSetup(const ModelParams& p, const ProtocolPoint& pt)
      : message(string_kernel(p, ComplexTime::half_beta(p.beta(), pt.t_lr()), pt.encode_len)),
        spectator(string_kernel(p, ComplexTime::zero(), pt.encode_len)),
        coupling(base_kernel(p, ComplexTime::half_beta(p.beta()))),
        g_half(two_point(p, ComplexTime::half_beta(p.beta())).real()),
        mu_n(pt.mu * p.size().value()),
        w(scramblon_weights(p, pt.t_left, pt.t_right)),
        upsilon1(moment(base_kernel(p, ComplexTime::half_beta(p.beta())), 1).real()) {}

  double amplification() const { return std::max(1.0, std::abs(mu_n) * upsilon1); }
  AxisHint hint(double lambda) const { return {1.0 / (lambda * amplification())}; }

  // exp(i mu N [f(phase lambda0 y) - G(beta/2)]): the e^{-i mu N G} prefactor
  // is folded in so the weight tends to 1 at large y.
  cplx coupling_weight(double y) const {
    return std::exp(kI * mu_n * (coupling(w.phase * (w.lambda0 * y)) - g_half));
  }
};

Estimate to_estimate(const QuadResult& r, cplx factor) {
  return {factor * r.value, std::abs(factor) * r.err_estimate};
}

Estimate i3_from(const FiniteSetup& s, const QuadratureSpec& spec) {
  const auto r = integrate_1d(
      s.message, [&](double y) { return s.coupling_weight(y); }, spec,
      s.hint(s.w.lambda0));
  return to_estimate(r, kI);
}

Estimate i1_from(const FiniteSetup& s, const QuadratureSpec& spec) {
  const auto r = integrate_1d(
      compose(s.message, s.message), [&](double y) { return s.coupling_weight(y); },
      spec, s.hint(s.w.lambda0));
  return to_estimate(r, 1.0);
}

Estimate i4_from(const FiniteSetup& s, const QuadratureSpec& spec) {
  const cplx a = s.w.phase * s.w.lambda0;
  const double b = s.w.lambda1;
  // f(b y2) only depends on the outer variable; remember the last one.
  double last_y2 = -1.0;
  cplx f_spect{};
  auto weight = [&](double y1, double y2) {
    if (y2 != last_y2) {
      last_y2 = y2;
      f_spect = s.coupling(cplx{b * y2, 0.0});
    }
    return std::exp(kI * s.mu_n * (s.coupling(a * y1 + b * y2) - f_spect));
  };
  const auto r = integrate_2d(s.message, s.spectator, weight, spec,
                              s.hint(s.w.lambda0), s.hint(s.w.lambda1));
  return to_estimate(r, -kI);
}

Estimate i2_from(const Estimate& i3) {
  const double m = std::abs(i3.value);
  return {cplx{m * m, 0.0}, 2.0 * m * i3.err};
}

}  // namespace

Estimate i3_finite(const ModelParams& params, const ProtocolPoint& pt,
                   const QuadratureSpec& spec) {
  pt.validate();
  return i3_from(FiniteSetup(params, pt), spec);
}

Estimate i1_finite(const ModelParams& params, const ProtocolPoint& pt,
                   const QuadratureSpec& spec) {
  pt.validate();
  return i1_from(FiniteSetup(params, pt), spec);
}

Estimate i2_finite(const ModelParams& params, const ProtocolPoint& pt,
                   const QuadratureSpec& spec) {
  return i2_from(i3_finite(params, pt, spec));
}

Estimate i4_finite(const ModelParams& params, const ProtocolPoint& pt,
                   const QuadratureSpec& spec) {
  pt.validate();
  return i4_from(FiniteSetup(params, pt), spec);
}

CorrelatorSet long_time_set(const ModelParams& params, const ProtocolPoint& pt) {
  pt.validate();
  const FiniteSetup s(params, pt);
  const cplx spin = std::exp(-kI * s.mu_n * s.g_half);
  const cplx g_msg = laplace(s.message, 0.0);
  CorrelatorSet out;
  out.mode = CorrelatorMode::LongTime;
  out.i3 = kI * spin * g_msg;
  out.i1 = spin * laplace(compose(s.message, s.message), 0.0);
  out.i2 = std::norm(out.i3);
  out.i4 = -kI * g_msg * laplace(s.spectator, 0.0);
  return out;
}

CorrelatorSet finite_set(const ModelParams& params, const ProtocolPoint& pt,
                         const QuadratureSpec& spec, CorrelatorOptions opts) {
  pt.validate();
  if (opts.long_time_fast_path &&
      0.5 * params.kappa() * (pt.t_left + pt.t_right) >= opts.long_time_threshold)
    return long_time_set(params, pt);

  const FiniteSetup s(params, pt);
  const auto e3 = i3_from(s, spec);
  const auto e1 = i1_from(s, spec);
  const auto e2 = i2_from(e3);
  const auto e4 = i4_from(s, spec);
  CorrelatorSet out;
  out.mode = CorrelatorMode::FiniteN;
  out.i1 = e1.value;
  out.err1 = e1.err;
  out.i2 = e2.value;
  out.err2 = e2.err;
  out.i3 = e3.value;
  out.err3 = e3.err;
  out.i4 = e4.value;
  out.err4 = e4.err;
  return out;
}

CorrelatorSet probe_set(const ModelParams& params, const ProtocolPoint& pt) {
  pt.validate();
  const auto half = ComplexTime::half_beta(params.beta());
  const auto message =
      string_kernel(params, ComplexTime::half_beta(params.beta(), pt.t_lr()), pt.encode_len);
  const double n_lambda0 = std::exp(0.5 * params.kappa() * (pt.t_left + pt.t_right)) /
                           params.prefactor_per_fermion();
  const cplx phase = std::polar(1.0, -0.25 * params.kappa() * params.beta());
  const cplx upsilon1 = moment(base_kernel(params, half), 1);
  const cplx x = kI * phase * pt.mu * n_lambda0 * upsilon1;

  CorrelatorSet out;
  out.mode = CorrelatorMode::ProbeLimit;
  out.i3 = kI * laplace(message, x);
  out.i1 = -out.i3 * out.i3;
  out.i2 = std::norm(out.i3);
  out.i4 = -0.5 * out.i3;
  return out;
}

CorrelatorSet evaluate(const ModelParams& params, const ProtocolPoint& pt,
                       const QuadratureSpec& spec, CorrelatorOptions opts) {
  if (params.size().is_infinite()) return probe_set(params, pt);
  return finite_set(params, pt, spec, opts);
}

cplx perturbative_i3_hot(const ModelParams& params, const ProtocolPoint& pt) {
  pt.validate();
  const auto zero = ComplexTime::zero();
  const auto message = string_kernel(params, zero, pt.encode_len);
  const auto base = base_kernel(params, zero);
  const double mu_n = pt.mu * params.size().value();
  const double lambda0 = scramblon_weights(params, pt.t_left, pt.t_right).lambda0;
  const cplx p = kI * mu_n * lambda0 * moment(base, 1);
  const cplx second = moment(base, 2) * lambda0 * lambda0;
  // int h(y) y^2 exp(-p y) dy for the message kernel.
  const cplx y2_moment = message.norm * gamma_fn(message.shape + 2.0) *
                         principal_pow(message.rate + p, -(message.shape + 2.0));
  return kI * (laplace(message, p) + 0.5 * kI * mu_n * second * y2_moment);
}

Estimate i3_finite_hot(const ModelParams& params, const ProtocolPoint& pt,
                       const QuadratureSpec& spec) {
  pt.validate();
  const auto zero = ComplexTime::zero();
  const auto message = string_kernel(params, zero, pt.encode_len);
  const auto base = base_kernel(params, zero);
  const ProbeFunction probe(base);
  const double g0 = two_point(params, zero).real();
  const double mu_n = pt.mu * params.size().value();
  const double lambda0 = scramblon_weights(params, pt.t_left, pt.t_right).lambda0;
  const double amp = std::max(1.0, std::abs(mu_n) * moment(base, 1).real());
  const auto r = integrate_1d(
      message,
      [&](double y) { return std::exp(kI * mu_n * (probe(cplx{lambda0 * y, 0.0}) - g0)); },
      spec, AxisHint{1.0 / (lambda0 * amp)});
  return to_estimate(r, kI);
}

QuadResult otoc(const ModelParams& params, ComplexTime theta12, ComplexTime theta34,
                cplx lambda, const QuadratureSpec& spec) {
  const ProbeFunction probe(base_kernel(params, theta12));
  const auto past = base_kernel(params, theta34);
  const double scale = std::abs(lambda);
  const AxisHint hint{scale > 0.0 ? 1.0 / scale : 0.0};
  return integrate_1d(past, [&](double y) { return probe(lambda * y); }, spec, hint);
}

}  // namespace scramblon
