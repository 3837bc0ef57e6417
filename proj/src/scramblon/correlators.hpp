#pragma once

// The four TFD correlators that fix the two-qubit state of (P, R1):
//
//   I1 = <psiL1 psiL2 U^dag psiR1 psiR2 U>    I2 = <psiL1 U^dag psiR1 psiR2 U psiL2>
//   I3 = <psiL1 U^dag psiR1 U>                I4 = <psiL1 psiL2 U^dag psiR1 U psiL2>
//
// with U = exp(-mu sum_i psiL^i psiR^i). At finite N every scramblon
// configuration is resummed, which leaves one-dimensional integrals for I1
// and I3, a product for I2 and a two-dimensional integral for I4. At N = inf
// only the linear-response correlator I3 survives (probe limit).

#include <complex>

#include "scramblon/model.hpp"
#include "scramblon/quadrature.hpp"

namespace scramblon {

struct ProtocolPoint {
  double t_left = 0.0;   // message insertion at -t_L
  double t_right = 0.0;  // readout at +t_R
  double mu = 0.0;
  int encode_len = 1;

  double t_lr() const noexcept { return t_left - t_right; }
  void validate() const;
};

enum class CorrelatorMode { FiniteN, ProbeLimit, LongTime };

struct CorrelatorSet {
  cplx i1, i2, i3, i4;
  double err1 = 0.0, err2 = 0.0, err3 = 0.0, err4 = 0.0;
  CorrelatorMode mode = CorrelatorMode::FiniteN;
};

struct Estimate {
  cplx value;
  double err = 0.0;
};

struct CorrelatorOptions {
  // Substitute the long-time closed forms once kappa (t_L + t_R) / 2 reaches
  // long_time_threshold. Off by default.
  bool long_time_fast_path = false;
  double long_time_threshold = 25.0;
};

Estimate i3_finite(const ModelParams& params, const ProtocolPoint& pt,
                   const QuadratureSpec& spec);
Estimate i1_finite(const ModelParams& params, const ProtocolPoint& pt,
                   const QuadratureSpec& spec);
Estimate i2_finite(const ModelParams& params, const ProtocolPoint& pt,
                   const QuadratureSpec& spec);
Estimate i4_finite(const ModelParams& params, const ProtocolPoint& pt,
                   const QuadratureSpec& spec);

CorrelatorSet finite_set(const ModelParams& params, const ProtocolPoint& pt,
                         const QuadratureSpec& spec, CorrelatorOptions opts = {});

// Closed-form probe limit. N never enters: mu N lambda0 only depends on C / N.
CorrelatorSet probe_set(const ModelParams& params, const ProtocolPoint& pt);

// t_L, t_R -> inf limits at fixed t_LR (interference regime). Finite N only.
CorrelatorSet long_time_set(const ModelParams& params, const ProtocolPoint& pt);

// Finite-N resummation or probe limit, chosen by params.size().
CorrelatorSet evaluate(const ModelParams& params, const ProtocolPoint& pt,
                       const QuadratureSpec& spec, CorrelatorOptions opts = {});

// Second-order small-lambda0 expansion of I3 in the infinite-temperature
// configuration: every vartheta evaluated at theta = 0, no exp(-i kappa beta/4)
// phase. Finite N only.
cplx perturbative_i3_hot(const ModelParams& params, const ProtocolPoint& pt);

// Fully resummed I3 in the same theta = 0 configuration; the reference the
// expansion above converges to.
Estimate i3_finite_hot(const ModelParams& params, const ProtocolPoint& pt,
                       const QuadratureSpec& spec);

// F = int dy f(lambda y, theta12) h(y, theta34): an OTOC measured by the
// psi1 pair (theta12) after the psi2 pair (theta34) has perturbed the system.
QuadResult otoc(const ModelParams& params, ComplexTime theta12, ComplexTime theta34,
                cplx lambda, const QuadratureSpec& spec);

}  // namespace scramblon
