#include "scramblon/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "scramblon/special.hpp"

namespace scramblon {

void QuadratureSpec::validate() const {
  if (node_count < 8) throw ArgumentError("quadrature node_count must be >= 8");
  if (refinement_limit < 1) throw ArgumentError("quadrature refinement_limit must be >= 1");
  if (!(rel_tol > 0.0 && rel_tol <= 1e-2))
    throw ArgumentError("quadrature rel_tol must lie in (0, 1e-2]");
  if (!(abs_floor > 0.0)) throw ArgumentError("quadrature abs_floor must be positive");
}

namespace detail {

void check_kernel(const GammaKernel& k) {
  if (!(k.shape > 0.0)) throw DomainError("kernel shape must be positive");
  if (!(k.rate.real() > 0.0)) throw DomainError("kernel rate must have Re > 0");
}

bool converged(cplx cur, cplx prev, const QuadratureSpec& spec) {
  return std::abs(cur - prev) <= spec.rel_tol * std::abs(cur) + spec.abs_floor;
}

void throw_no_convergence(const QuadResult& r) {
  throw NoConvergence("quadrature did not converge (last difference " +
                          std::to_string(r.err_estimate) + " after " +
                          std::to_string(r.nodes_used) + " nodes)",
                      r);
}

namespace {

// Golub-Welsch on the Jacobi matrix of u^a exp(-u).
LaguerreTable golub_welsch(double a, int n) {
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
  for (int k = 0; k < n; ++k) diag[k] = 2.0 * k + a + 1.0;
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(k * (k + a));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw Error("Golub-Welsch eigensolver failed for order " + std::to_string(n));

  const double mu0 = gamma_fn(a + 1.0);
  LaguerreTable t;
  t.nodes.resize(n);
  t.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    t.nodes[i] = es.eigenvalues()[i];
    t.weights[i] = mu0 * v0 * v0;
  }
  return t;
}

}  // namespace

std::shared_ptr<const LaguerreTable> laguerre_table(double a_minus_one, int n) {
  static std::mutex mu;
  static std::map<std::pair<double, int>, std::shared_ptr<const LaguerreTable>> cache;
  const auto key = std::make_pair(a_minus_one, n);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto table = std::make_shared<const LaguerreTable>(golub_welsch(a_minus_one, n));
  std::lock_guard lock(mu);
  return cache.emplace(key, std::move(table)).first->second;
}

std::vector<Node> laguerre_nodes(const GammaKernel& k, int n) {
  const auto table = laguerre_table(k.shape - 1.0, n);
  const double rho = k.rate.real();
  const double drift = k.rate.imag() / rho;
  const cplx pre = k.norm * std::pow(rho, -k.shape);
  std::vector<Node> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double u = table->nodes[i];
    out[i] = {u / rho, pre * table->weights[i] * std::polar(1.0, -drift * u)};
  }
  return out;
}

namespace {

constexpr double kTailEps = 1e-19;
constexpr double kCompressionMargin = 6.0;

double log_u(double z, double z_c) { return z - std::exp(-(z - z_c)); }

}  // namespace

LogLattice::LogLattice(const GammaKernel& k, AxisHint hint, double h0)
    : k_(k), rho_(k.rate.real()), h0_(h0) {
  const double a = k.shape;
  double feature = 0.0;
  if (hint.feature_scale > 0.0) feature = std::log(rho_ * hint.feature_scale);
  z_c_ = std::min(0.0, feature) - kCompressionMargin;

  // Left end: the dropped mass u^a / a is below kTailEps * Gamma(a).
  const double target = std::log(kTailEps * a * gamma_fn(a)) / a;
  double z = z_c_;
  while (log_u(z, z_c_) > target) z -= 0.25;
  z_lo_ = z;

  // Right end: u^a exp(-u) has dropped kTailEps below its maximum.
  const double peak = a * std::log(a) - a;
  double u = std::max(1.0, a);
  while (a * std::log(u) - u - peak > std::log(kTailEps)) u += 1.0;
  z_hi_ = std::log(u) + 0.05;

  prefactor_ = k.norm * std::pow(rho_, -a);
}

int LogLattice::j_min(int level) const { return int(std::ceil(z_lo_ / step(level))); }
int LogLattice::j_max(int level) const { return int(std::floor(z_hi_ / step(level))); }

Node LogLattice::node(int level, int j) const {
  const double z = j * step(level);
  const double squeeze = std::exp(-(z - z_c_));
  const double s = z - squeeze;
  const double u = std::exp(s);
  const cplx decay = std::exp(-(k_.rate / rho_) * u);
  const double jac = std::exp(k_.shape * s) * (1.0 + squeeze);
  return {u / rho_, prefactor_ * jac * decay};
}

}  // namespace detail
}  // namespace scramblon
