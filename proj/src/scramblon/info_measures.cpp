#include "scramblon/info_measures.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <string>

#include "scramblon/errors.hpp"

namespace scramblon {

using Eigen::Matrix2cd;
using Eigen::Matrix4cd;

std::pair<double, double> coefficients_from_correlators(const CorrelatorSet& cs) {
  return {2.0 * (cs.i3 - 2.0 * cs.i4).real(), 8.0 * (cs.i2 - cs.i1).real()};
}

namespace {

Matrix4cd kron(const Matrix2cd& a, const Matrix2cd& b) {
  Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

std::array<Matrix4cd, 4> build_operators() {
  const cplx i{0.0, 1.0};
  Matrix2cd id = Matrix2cd::Identity();
  Matrix2cd x, y, z;
  x << 0, 1, 1, 0;
  y << 0, -i, i, 0;
  z << 1, 0, 0, -1;
  const double s = 1.0 / std::sqrt(2.0);
  return {s * kron(x, id), s * kron(y, id), s * kron(z, x), s * kron(z, y)};
}

}  // namespace

const std::array<Matrix4cd, 4>& majorana_operators() {
  static const auto ops = build_operators();
  return ops;
}

void check_representation() {
  const auto& ops = majorana_operators();
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) {
      const Matrix4cd anti = ops[j] * ops[k] + ops[k] * ops[j];
      const Matrix4cd want = (j == k ? 1.0 : 0.0) * Matrix4cd::Identity();
      if ((anti - want).cwiseAbs().maxCoeff() > 1e-12)
        throw RepresentationError("Majorana anticommutator {psi" + std::to_string(j) +
                                  ", psi" + std::to_string(k) + "} is off");
    }
}

DensityMatrix assemble(double rho2, double rho4) {
  static std::once_flag checked;
  std::call_once(checked, check_representation);

  const auto& psi = majorana_operators();
  const cplx i{0.0, 1.0};
  DensityMatrix dm;
  dm.rho2 = rho2;
  dm.rho4 = rho4;
  dm.matrix = 0.25 * (Matrix4cd::Identity() +
                      i * rho2 * (psi[0] * psi[2] + psi[1] * psi[3]) +
                      rho4 * psi[0] * psi[1] * psi[2] * psi[3]);
  return dm;
}

std::array<double, 4> spectrum(DensityMatrix& dm, double clamp_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix4cd> es(dm.matrix, Eigen::EigenvaluesOnly);
  std::array<double, 4> ev;
  for (int k = 0; k < 4; ++k) ev[k] = es.eigenvalues()[k];
  std::sort(ev.begin(), ev.end(), std::greater<>());

  dm.clamp_report.clear();
  bool clamped = false;
  for (int k = 0; k < 4; ++k) {
    if (ev[k] >= 0.0) continue;
    if (ev[k] < -clamp_tol)
      throw NonPhysicalState("density matrix has eigenvalue " + std::to_string(ev[k]),
                             ev[k]);
    dm.clamp_report.push_back({k, ev[k]});
    ev[k] = 0.0;
    clamped = true;
  }
  if (clamped) {
    const double total = ev[0] + ev[1] + ev[2] + ev[3];
    for (auto& e : ev) e /= total;
  }
  return ev;
}

Matrix4cd partial_transpose_p(const Matrix4cd& m) {
  Matrix4cd out;
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) out.block<2, 2>(2 * p, 2 * q) = m.block<2, 2>(2 * q, 2 * p);
  return out;
}

Matrix2cd trace_out_r1(const Matrix4cd& m) {
  Matrix2cd out;
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) out(p, q) = m.block<2, 2>(2 * p, 2 * q).trace();
  return out;
}

Matrix2cd trace_out_p(const Matrix4cd& m) {
  return m.block<2, 2>(0, 0) + m.block<2, 2>(2, 2);
}

double von_neumann_entropy(const std::array<double, 4>& probs) {
  double s = 0.0;
  for (double p : probs)
    if (p > 0.0) s -= p * std::log(p);
  return s;
}

double mutual_information(DensityMatrix& dm, double clamp_tol) {
  return info_measures(dm, clamp_tol).mutual_info;
}

double negativity(const DensityMatrix& dm) {
  Eigen::SelfAdjointEigenSolver<Matrix4cd> es(partial_transpose_p(dm.matrix),
                                              Eigen::EigenvaluesOnly);
  double neg = 0.0;
  for (int k = 0; k < 4; ++k)
    if (es.eigenvalues()[k] < -kPptTol) neg -= es.eigenvalues()[k];
  return neg;
}

InfoMeasures info_measures(DensityMatrix& dm, double clamp_tol) {
  InfoMeasures out;
  // Both marginals are I/2 for this ansatz, whatever rho2 and rho4 are.
  out.entropy_p = std::log(2.0);
  out.entropy_r1 = std::log(2.0);
  out.entropy_joint = von_neumann_entropy(spectrum(dm, clamp_tol));
  out.mutual_info = std::max(0.0, out.entropy_p + out.entropy_r1 - out.entropy_joint);
  out.negativity = negativity(dm);
  return out;
}

}  // namespace scramblon
