#pragma once

// Large-q SYK model constants and the gamma-kernel family that carries every
// vertex function of the scramblon effective theory.
//
// A perturbation distribution h(y) = c * y^(a-1) * exp(-r y) is a GammaKernel
// {shape a, rate r, norm c}. Its Laplace transform is the probe function f(x),
// its y-moments are the scattering vertices, and convolving two kernels with a
// common rate multiplies their probe functions. Retarded and advanced vertices
// coincide for large-q SYK, so one kernel type serves both roles.

#include <complex>
#include <optional>

namespace scramblon {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Number of Majorana fermions. The probe limit uses a distinct sentinel rather
// than a large float: only the combination N * lambda0 is meaningful there.
class SystemSize {
 public:
  static SystemSize finite(double n);
  static SystemSize infinite() { return SystemSize{}; }

  bool is_infinite() const noexcept { return !n_.has_value(); }
  // Throws InfiniteSizeError for the sentinel.
  double value() const;

  friend bool operator==(const SystemSize&, const SystemSize&) = default;

 private:
  SystemSize() = default;
  explicit SystemSize(double n) : n_(n) {}
  std::optional<double> n_;
};

// Immutable parameter set. Times are measured in units of beta; the coupling
// J is derived from v through beta J = pi v / cos(pi v / 2).
class ModelParams {
 public:
  static ModelParams large_q(int q, double v, double beta = 1.0,
                             SystemSize n = SystemSize::infinite());

  int q() const noexcept { return q_; }
  double delta() const noexcept { return delta_; }
  double v() const noexcept { return v_; }
  double beta() const noexcept { return beta_; }
  double coupling() const noexcept { return coupling_; }
  double kappa() const noexcept { return kappa_; }
  const SystemSize& size() const noexcept { return size_; }
  // cos(pi v / 2), the recurring large-q constant.
  double cos_half_pi_v() const noexcept { return cos_half_; }
  // Scramblon prefactor C = 4 Delta^2 N cos(pi v / 2). Throws for N = inf.
  double prefactor() const;
  // C / N, finite for both finite N and the sentinel.
  double prefactor_per_fermion() const noexcept;

  ModelParams with_size(SystemSize n) const;

 private:
  ModelParams() = default;
  int q_ = 4;
  double delta_ = 0.25;
  double v_ = 0.5;
  double beta_ = 1.0;
  double coupling_ = 0.0;
  double kappa_ = 0.0;
  double cos_half_ = 0.0;
  SystemSize size_ = SystemSize::infinite();
};

// theta = tau + i t.
struct ComplexTime {
  cplx theta;

  static ComplexTime zero() { return {cplx{0.0, 0.0}}; }
  // beta/2 + i t_LR, the configuration of the message/readout pair.
  static ComplexTime half_beta(double beta, double t_lr = 0.0) {
    return {cplx{0.5 * beta, t_lr}};
  }
};

struct GammaKernel {
  double shape = 1.0;  // power of y is shape - 1
  cplx rate;
  cplx norm;
};

struct ScramblonWeights {
  double lambda0;  // exp(kappa (t_L + t_R) / 2) / C
  double lambda1;  // exp(kappa t_L) / C
  cplx phase;      // exp(-i kappa beta / 4)
};

// Principal-branch base^exponent. Throws DomainError on the cut (base real <= 0).
cplx principal_pow(cplx base, double exponent);

// vartheta(theta) = cos[v pi (1/2 - theta / beta)].
cplx theta_factor(const ModelParams& params, ComplexTime theta);

// G(theta) = (1/2) (cos(pi v/2) / vartheta)^(2 Delta).
cplx two_point(const ModelParams& params, ComplexTime theta);

GammaKernel base_kernel(const ModelParams& params, ComplexTime theta);

// Kernel of an odd Majorana string of length encode_len; its probe function
// is 2^(E-1) f^E. encode_len == 1 reproduces base_kernel exactly.
GammaKernel string_kernel(const ModelParams& params, ComplexTime theta,
                          int encode_len);

// f(x) = norm Gamma(shape) / (rate + x)^shape.
cplx laplace(const GammaKernel& kernel, cplx x);

// Upsilon^m = norm Gamma(shape + m) / rate^(shape + m).
cplx moment(const GammaKernel& kernel, int m);

// Convolution of two kernels sharing a rate (relative tolerance 1e-12).
GammaKernel compose(const GammaKernel& a, const GammaKernel& b);

ScramblonWeights scramblon_weights(const ModelParams& params, double t_left,
                                   double t_right);

}  // namespace scramblon
