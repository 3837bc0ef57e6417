#pragma once

// Integrals of a gamma-kernel measure against a bounded complex weight,
//
//   I = int_0^inf c y^(a-1) exp(-r y) w(y) dy,
//
// and the tensor-product analogue over (y1, y2). Two rules share one
// refinement policy (stop when successive levels differ by less than
// rel_tol |I| + abs_floor):
//
//  * GaussLaguerre: generalized Gauss-Laguerre in u = Re(r) y with exponent
//    a - 1 (Golub-Welsch nodes, cached); refinement doubles the order.
//  * LogTrapezoid: trapezoid rule in z with u = exp(z - exp(-(z - z_c))), i.e.
//    uniform in log u above z_c and doubly-exponentially compressed below it;
//    refinement halves the step and reuses every previous node. This is the
//    rule the correlators use: their weights vary on the scale 1/lambda0,
//    which can sit many decades below the kernel scale 1/Re(r).

#include <cmath>
#include <complex>
#include <memory>
#include <vector>

#include "scramblon/errors.hpp"
#include "scramblon/model.hpp"

namespace scramblon {

enum class QuadratureRule { GaussLaguerre, LogTrapezoid };

struct QuadratureSpec {
  // Gauss-Laguerre order, or for LogTrapezoid the node density: the initial
  // step in log u is 32 / node_count.
  int node_count = 64;
  int refinement_limit = 4;
  double rel_tol = 1e-10;
  double abs_floor = 1e-14;
  QuadratureRule rule = QuadratureRule::LogTrapezoid;

  // Throws ArgumentError unless node_count >= 8, refinement_limit >= 1 and
  // rel_tol lies in (0, 1e-2].
  void validate() const;
};

struct QuadResult {
  cplx value;
  double err_estimate = 0.0;  // |last level - previous level|
  int nodes_used = 0;
};

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, QuadResult last)
      : Error(what), last_(last) {}
  const QuadResult& last() const noexcept { return last_; }

 private:
  QuadResult last_;
};

// Where the weight changes appreciably, in units of y. Used by LogTrapezoid
// to place the compression point below the weight's structure; ignored by
// GaussLaguerre. Zero means "same scale as the kernel".
struct AxisHint {
  double feature_scale = 0.0;
};

namespace detail {

struct Node {
  double y;
  cplx factor;  // kernel density times quadrature weight and Jacobian
};

// Generalized Gauss-Laguerre nodes/weights for exponent `a_minus_one`, order n.
// Computed once per (exponent, n); safe for concurrent use.
struct LaguerreTable {
  std::vector<double> nodes;
  std::vector<double> weights;
};
std::shared_ptr<const LaguerreTable> laguerre_table(double a_minus_one, int n);

// Kernel-weighted Gauss-Laguerre nodes (y_i, c rho^-a W_i exp(-i Im(r) u_i / rho)).
std::vector<Node> laguerre_nodes(const GammaKernel& k, int n);

// Node lattice for the log-trapezoid rule: node j sits at z = j * h0 / 2^level.
class LogLattice {
 public:
  LogLattice(const GammaKernel& k, AxisHint hint, double h0);
  int j_min(int level) const;
  int j_max(int level) const;
  double step(int level) const { return h0_ / double(1 << level); }
  Node node(int level, int j) const;

 private:
  GammaKernel k_;
  double rho_;
  double z_c_;
  double z_lo_;
  double z_hi_;
  double h0_;
  cplx prefactor_;
};

void check_kernel(const GammaKernel& k);
bool converged(cplx cur, cplx prev, const QuadratureSpec& spec);
[[noreturn]] void throw_no_convergence(const QuadResult& r);

}  // namespace detail

template <class Weight>
QuadResult integrate_1d(const GammaKernel& k, Weight&& weight,
                        const QuadratureSpec& spec, AxisHint hint = {}) {
  spec.validate();
  detail::check_kernel(k);
  QuadResult prev{}, cur{};

  if (spec.rule == QuadratureRule::GaussLaguerre) {
    int n = spec.node_count;
    for (int level = 0; level <= spec.refinement_limit; ++level, n *= 2) {
      cplx sum{0.0, 0.0};
      for (const auto& nd : detail::laguerre_nodes(k, n)) sum += nd.factor * weight(nd.y);
      prev = cur;
      cur = {sum, 0.0, n};
      if (level > 0) {
        cur.err_estimate = std::abs(cur.value - prev.value);
        if (detail::converged(cur.value, prev.value, spec)) return cur;
      }
    }
    detail::throw_no_convergence(cur);
  }

  const detail::LogLattice lat(k, hint, 32.0 / spec.node_count);
  cplx raw{0.0, 0.0};  // sum of node values, without the step factor
  int used = 0;
  for (int level = 0; level <= spec.refinement_limit; ++level) {
    const int stride = level == 0 ? 1 : 2;
    int j = lat.j_min(level);
    if (level > 0 && (j % 2 == 0)) ++j;
    for (; j <= lat.j_max(level); j += stride) {
      const auto nd = lat.node(level, j);
      raw += nd.factor * weight(nd.y);
      ++used;
    }
    prev = cur;
    cur = {raw * lat.step(level), 0.0, used};
    if (level > 0) {
      cur.err_estimate = std::abs(cur.value - prev.value);
      if (detail::converged(cur.value, prev.value, spec)) return cur;
    }
  }
  detail::throw_no_convergence(cur);
}

template <class Weight>
QuadResult integrate_2d(const GammaKernel& k1, const GammaKernel& k2, Weight&& weight,
                        const QuadratureSpec& spec, AxisHint hint1 = {},
                        AxisHint hint2 = {}) {
  spec.validate();
  detail::check_kernel(k1);
  detail::check_kernel(k2);
  QuadResult prev{}, cur{};

  if (spec.rule == QuadratureRule::GaussLaguerre) {
    int n = spec.node_count;
    for (int level = 0; level <= spec.refinement_limit; ++level, n *= 2) {
      const auto a = detail::laguerre_nodes(k1, n);
      const auto b = detail::laguerre_nodes(k2, n);
      cplx sum{0.0, 0.0};
      for (const auto& nb : b) {
        cplx row{0.0, 0.0};
        for (const auto& na : a) row += na.factor * weight(na.y, nb.y);
        sum += nb.factor * row;
      }
      prev = cur;
      cur = {sum, 0.0, n * n};
      if (level > 0) {
        cur.err_estimate = std::abs(cur.value - prev.value);
        if (detail::converged(cur.value, prev.value, spec)) return cur;
      }
    }
    detail::throw_no_convergence(cur);
  }

  const double h0 = 32.0 / spec.node_count;
  const detail::LogLattice lat1(k1, hint1, h0);
  const detail::LogLattice lat2(k2, hint2, h0);
  cplx raw{0.0, 0.0};
  int used = 0;
  std::vector<detail::Node> axis1;
  for (int level = 0; level <= spec.refinement_limit; ++level) {
    const int lo1 = lat1.j_min(level), hi1 = lat1.j_max(level);
    axis1.clear();
    for (int j = lo1; j <= hi1; ++j) axis1.push_back(lat1.node(level, j));
    for (int j2 = lat2.j_min(level); j2 <= lat2.j_max(level); ++j2) {
      const auto n2 = lat2.node(level, j2);
      // At refinement levels only nodes with an odd index on some axis are new.
      const bool old_row = level > 0 && (j2 % 2 == 0);
      int j1 = lo1;
      int stride = 1;
      if (old_row) {
        stride = 2;
        if (j1 % 2 == 0) ++j1;
      }
      cplx row{0.0, 0.0};
      for (; j1 <= hi1; j1 += stride) {
        const auto& n1 = axis1[std::size_t(j1 - lo1)];
        row += n1.factor * weight(n1.y, n2.y);
        ++used;
      }
      raw += n2.factor * row;
    }
    const double h = lat1.step(level);
    prev = cur;
    cur = {raw * h * h, 0.0, used};
    if (level > 0) {
      cur.err_estimate = std::abs(cur.value - prev.value);
      if (detail::converged(cur.value, prev.value, spec)) return cur;
    }
  }
  detail::throw_no_convergence(cur);
}

}  // namespace scramblon
