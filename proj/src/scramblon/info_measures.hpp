#pragma once

// Reduced state of the reference qubit P and the readout qubit R1,
//
//   rho = 1/4 (I + i rho2 (psiP1 psiR1 + psiP2 psiR2) + rho4 psiP1 psiP2 psiR1 psiR2),
//
// built on a fixed two-qubit Majorana representation (P = first tensor factor):
//
//   psiP1 = X (x) I / sqrt2    psiP2 = Y (x) I / sqrt2
//   psiR1 = Z (x) X / sqrt2    psiR2 = Z (x) Y / sqrt2
//
// which gives rho = 1/4 (I + rho2/2 (Y(x)X - X(x)Y) - rho4/4 Z(x)Z).

#include <Eigen/Core>
#include <array>
#include <utility>
#include <vector>

#include "scramblon/correlators.hpp"

namespace scramblon {

inline constexpr double kDefaultClampTol = 1e-9;
// Partial-transpose eigenvalues above -kPptTol count as non-negative.
inline constexpr double kPptTol = 1e-12;

struct ClampEntry {
  int index;
  double eigenvalue;
};

struct DensityMatrix {
  double rho2 = 0.0;
  double rho4 = 0.0;
  Eigen::Matrix4cd matrix;
  std::vector<ClampEntry> clamp_report;
};

struct InfoMeasures {
  double mutual_info = 0.0;  // nats
  double negativity = 0.0;
  double entropy_joint = 0.0;
  double entropy_p = 0.0;
  double entropy_r1 = 0.0;
};

// rho2 = 2 Re[I3 - 2 I4], rho4 = 8 Re[I2 - I1].
std::pair<double, double> coefficients_from_correlators(const CorrelatorSet& cs);

// The four Majorana operators of the representation above, in the order
// psiP1, psiP2, psiR1, psiR2.
const std::array<Eigen::Matrix4cd, 4>& majorana_operators();

// Throws RepresentationError unless {psi_j, psi_k} = delta_jk to 1e-12.
void check_representation();

DensityMatrix assemble(double rho2, double rho4);

// Eigenvalues, descending. Values in [-clamp_tol, 0) are set to zero, logged in
// dm.clamp_report and the spectrum renormalized to unit sum; anything below
// -clamp_tol throws NonPhysicalState.
std::array<double, 4> spectrum(DensityMatrix& dm, double clamp_tol = kDefaultClampTol);

// Partial transpose on the P factor.
Eigen::Matrix4cd partial_transpose_p(const Eigen::Matrix4cd& m);

// Trace over R1 (resp. P), returning the 2x2 state of the other qubit.
Eigen::Matrix2cd trace_out_r1(const Eigen::Matrix4cd& m);
Eigen::Matrix2cd trace_out_p(const Eigen::Matrix4cd& m);

// -sum p ln p with 0 ln 0 = 0.
double von_neumann_entropy(const std::array<double, 4>& probs);

double mutual_information(DensityMatrix& dm, double clamp_tol = kDefaultClampTol);
double negativity(const DensityMatrix& dm);

InfoMeasures info_measures(DensityMatrix& dm, double clamp_tol = kDefaultClampTol);

}  // namespace scramblon
