#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "scramblon/errors.hpp"
#include "scramblon/info_measures.hpp"

using namespace scramblon;
using Eigen::Matrix2cd;
using Eigen::Matrix4cd;

namespace {

constexpr cplx kI{0.0, 1.0};

std::array<double, 4> closed_form(double r2, double r4) {
  std::array<double, 4> ev{0.25 * (1.0 - r4 / 4.0), 0.25 * (1.0 - r4 / 4.0),
                           0.25 * (1.0 + r4 / 4.0 + r2), 0.25 * (1.0 + r4 / 4.0 - r2)};
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

std::array<double, 4> closed_form_pt(double r2, double r4) {
  std::array<double, 4> ev{0.25 * (1.0 + r4 / 4.0), 0.25 * (1.0 + r4 / 4.0),
                           0.25 * (1.0 - r4 / 4.0 + r2), 0.25 * (1.0 - r4 / 4.0 - r2)};
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

// Random (rho2, rho4) inside the physical region.
std::pair<double, double> physical(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const double r2 = 2.0 * u(rng), r4 = 4.0 * u(rng);
    const auto ev = closed_form(r2, r4);
    if (ev[3] >= 0.0) return {r2, r4};
  }
}

Matrix2cd random_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix2cd a;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) a(i, j) = cplx{g(rng), g(rng)};
  Eigen::HouseholderQR<Matrix2cd> qr(a);
  return qr.householderQ();
}

Matrix4cd kron(const Matrix2cd& a, const Matrix2cd& b) {
  Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

}  // namespace

TEST_CASE("representation obeys the Clifford algebra") {
  CHECK_NOTHROW(check_representation());
  const auto& psi = majorana_operators();
  for (const auto& m : psi) CHECK((m - m.adjoint()).norm() < 1e-15);
}

TEST_CASE("maximally mixed state") {
  auto dm = assemble(0.0, 0.0);
  CHECK((dm.matrix - 0.25 * Matrix4cd::Identity()).norm() < 1e-15);
  const auto ev = spectrum(dm);
  for (double e : ev) CHECK(e == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(std::abs(mutual_information(dm)) < 1e-15);
  CHECK(negativity(dm) == 0.0);
}

TEST_CASE("Pauli form of the ansatz") {
  Matrix2cd x, y, z;
  x << 0, 1, 1, 0;
  y << 0, -kI, kI, 0;
  z << 1, 0, 0, -1;
  const double r2 = 0.37, r4 = -1.3;
  const auto dm = assemble(r2, r4);
  const Matrix4cd want = 0.25 * (Matrix4cd::Identity() + 0.5 * r2 * (kron(y, x) - kron(x, y)) -
                                 0.25 * r4 * kron(z, z));
  CHECK((dm.matrix - want).norm() < 1e-15);
}

TEST_CASE("structural invariants on random inputs") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double r2 = u(rng), r4 = u(rng);
    const auto dm = assemble(r2, r4);
    CHECK((dm.matrix - dm.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(dm.matrix.trace() - 1.0) < 1e-12);
    CHECK((trace_out_r1(dm.matrix) - 0.5 * Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((trace_out_p(dm.matrix) - 0.5 * Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-12);

    Eigen::SelfAdjointEigenSolver<Matrix4cd> es(dm.matrix);
    auto cf = closed_form(r2, r4);
    std::sort(cf.begin(), cf.end());
    for (int k = 0; k < 4; ++k) CHECK(std::abs(es.eigenvalues()[k] - cf[k]) < 1e-12);

    Eigen::SelfAdjointEigenSolver<Matrix4cd> pes(partial_transpose_p(dm.matrix));
    auto cpt = closed_form_pt(r2, r4);
    std::sort(cpt.begin(), cpt.end());
    for (int k = 0; k < 4; ++k) CHECK(std::abs(pes.eigenvalues()[k] - cpt[k]) < 1e-12);
  }
}

TEST_CASE("physical states: entropy bounds, spectrum sum, invariance") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const auto [r2, r4] = physical(rng);
    auto dm = assemble(r2, r4);
    const auto ev = spectrum(dm);
    CHECK(std::abs(ev[0] + ev[1] + ev[2] + ev[3] - 1.0) < 1e-12);
    const auto cf = closed_form(r2, r4);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(ev[k] - cf[k]) < 1e-12);

    const auto im = info_measures(dm);
    CHECK(im.entropy_joint >= -1e-15);
    CHECK(im.entropy_joint <= 2.0 * std::log(2.0) + 1e-12);
    CHECK(im.mutual_info >= 0.0);
    CHECK(im.mutual_info <= 2.0 * std::log(2.0) + 1e-12);

    const Matrix4cd u = kron(random_unitary(rng), random_unitary(rng));
    DensityMatrix rotated = dm;
    rotated.matrix = u * dm.matrix * u.adjoint();
    const auto im2 = info_measures(rotated);
    CHECK(std::abs(im2.mutual_info - im.mutual_info) < 1e-12);
    CHECK(std::abs(im2.negativity - im.negativity) < 1e-12);
  }
}

TEST_CASE("negativity against the trace norm") {
  // One partial-transpose eigenvalue goes negative once |rho2| > 1 - rho4/4.
  for (auto [r2, r4] : {std::pair{0.95, 1.0}, std::pair{-1.05, 0.5}, std::pair{0.3, 3.0}}) {
    auto dm = assemble(r2, r4);
    REQUIRE(closed_form(r2, r4)[3] >= 0.0);
    Eigen::SelfAdjointEigenSolver<Matrix4cd> pes(partial_transpose_p(dm.matrix));
    double abs_sum = 0.0, neg = 0.0;
    int negatives = 0;
    for (int k = 0; k < 4; ++k) {
      abs_sum += std::abs(pes.eigenvalues()[k]);
      if (pes.eigenvalues()[k] < -kPptTol) neg -= pes.eigenvalues()[k], ++negatives;
    }
    CHECK(negatives == 1);
    CHECK(std::abs(negativity(dm) - neg) < 1e-14);
    CHECK(std::abs(negativity(dm) - 0.5 * (abs_sum - 1.0)) < 1e-12);
    CHECK(std::abs(negativity(dm) + closed_form_pt(r2, r4)[3]) < 1e-12);
  }
  auto sep = assemble(0.5, 0.5);
  CHECK(negativity(sep) == 0.0);
}

TEST_CASE("clamp policy") {
  // Smallest eigenvalue (1 + rho4/4 - |rho2|) / 4.
  const double tiny = 4e-10;
  auto dm = assemble(1.0 + tiny, 0.0);
  const auto ev = spectrum(dm);
  CHECK(dm.clamp_report.size() == 1);
  CHECK(dm.clamp_report[0].eigenvalue == doctest::Approx(-1e-10).epsilon(1e-3));
  CHECK(ev[3] == 0.0);
  CHECK(std::abs(ev[0] + ev[1] + ev[2] + ev[3] - 1.0) < 1e-15);

  auto bad = assemble(1.001, 0.0);
  try {
    spectrum(bad);
    FAIL("expected NonPhysicalState");
  } catch (const NonPhysicalState& e) {
    CHECK(e.eigenvalue() == doctest::Approx(-0.00025).epsilon(1e-6));
  }
  CHECK_THROWS_AS(info_measures(bad), NonPhysicalState);
  CHECK_NOTHROW(spectrum(bad, 1e-3));
}

TEST_CASE("von Neumann entropy") {
  CHECK(von_neumann_entropy({1.0, 0.0, 0.0, 0.0}) == 0.0);
  CHECK(von_neumann_entropy({0.25, 0.25, 0.25, 0.25}) == doctest::Approx(std::log(4.0)));
  CHECK(von_neumann_entropy({0.5, 0.5, 0.0, 0.0}) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("coefficients from correlators") {
  const double g = 0.14;
  const CorrelatorSet zero{g * g, g * g, kI * g, -0.5 * kI * g};
  const auto [r2, r4] = coefficients_from_correlators(zero);
  CHECK(std::abs(r2) < 1e-16);
  CHECK(std::abs(r4) < 1e-16);

  const cplx i3{0.21, -0.4};
  CorrelatorSet probe{-i3 * i3, std::norm(i3), i3, -0.5 * i3};
  const auto [p2, p4] = coefficients_from_correlators(probe);
  CHECK(p2 == doctest::Approx(4.0 * i3.real()));
  CHECK(p4 == doctest::Approx(16.0 * i3.real() * i3.real()));
}
