#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "gpl/error.hpp"
#include "gpl/modal.hpp"
#include "gpl/simulate.hpp"

using namespace gpl;
using namespace gpl::testing;

TEST(Propagator, ZeroGeneratorGivesIdentity) {
  const Eigen::MatrixXd z = Eigen::MatrixXd::Zero(6, 6);
  EXPECT_LE((propagator(z, 0.3) - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Propagator, ScalarDecay) {
  const Eigen::MatrixXd m = Eigen::MatrixXd::Constant(1, 1, -1.0);
  EXPECT_NEAR(propagator(m, 1.0)(0, 0), std::exp(-1.0), 1e-15);
}

TEST(Propagator, QuarterRotation) {
  Eigen::MatrixXd m(2, 2);
  m << 0, -1, 1, 0;
  const auto r = propagator(m, std::numbers::pi / 2);
  EXPECT_NEAR(r(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(r(1, 1), 0.0, 1e-12);
  EXPECT_NEAR(r(0, 1), -1.0, 1e-12);
  EXPECT_NEAR(r(1, 0), 1.0, 1e-12);
}

TEST(Propagator, LargeNormRotationStaysAccurate) {
  // exp of a skew generator with norm 1e4 is an exact rotation.
  Eigen::MatrixXd m(2, 2);
  m << 0, -1, 1, 0;
  const double theta = 1e4;
  const auto r = propagator(m, theta);
  EXPECT_NEAR(r(0, 0), std::cos(theta), 1e-12 * 1e4);
  EXPECT_NEAR(r(1, 0), std::sin(theta), 1e-12 * 1e4);
}

TEST(Propagator, AgreesWithEigendecomposition) {
  const auto m = assemble_modal_matrix(set_a(), PronyKernel({{1.0, 1.0}, {0.5, 3.0}}), 3).entries;
  const double dt = 0.37;
  const auto pairs = eigenpairs(m);
  const Eigen::MatrixXcd v = pairs.vectors;
  const Eigen::VectorXcd e = (pairs.values * dt).array().exp();
  const Eigen::MatrixXd oracle = (v * e.asDiagonal() * v.inverse()).real();
  const Eigen::MatrixXd got = propagator(m, dt);
  EXPECT_LE((got - oracle).norm(), 1e-11 * oracle.norm());
}

TEST(Propagator, SemigroupProperty) {
  const auto m = assemble_modal_matrix(set_b(), unit_kernel(), 5).entries;
  const auto a = propagator(m, 0.2);
  const auto b = propagator(m, 0.4);
  EXPECT_LE((a * a - b).norm(), 1e-12 * b.norm());
}

TEST(Propagator, OverflowScale) {
  const Eigen::MatrixXd m = Eigen::MatrixXd::Constant(2, 2, 1e300);
  try {
    propagator(m, 1e10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::OverflowScale);
  }
}

TEST(Evolve, ZeroStepsReturnsInitialState) {
  const auto m = assemble_modal_matrix(set_a(), unit_kernel(), 1).entries;
  const Eigen::VectorXd x0 = Eigen::VectorXd::LinSpaced(6, 1, 6);
  const auto traj = evolve(m, x0, 0.1, 0);
  ASSERT_EQ(traj.size(), 1u);
  EXPECT_EQ(traj[0], x0);
}

TEST(Evolve, DecoupledMechanicalEnergyConstant) {
  auto p = set_a();
  p.beta = 0.0;
  const int n = 3;
  const auto m = assemble_modal_matrix(p, unit_kernel(), n).entries;
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(6);
  x0(kU) = 0.5;
  x0(kV) = 1.0;
  x0(kPhi) = -0.3;
  x0(kPsi) = 0.2;
  const auto quad = [&](const Eigen::VectorXd& x) {
    const double nu = n * x(kU);
    return p.rho * x(kV) * x(kV) + p.J * x(kPsi) * x(kPsi) + p.mu * nu * nu +
           p.xi * x(kPhi) * x(kPhi) + 2.0 * p.b * nu * x(kPhi) +
           p.alpha * n * n * x(kPhi) * x(kPhi);
  };
  const auto traj = evolve(m, x0, 0.01, 2000);
  const double e0 = quad(x0);
  for (const auto& x : traj) EXPECT_LE(std::abs(quad(x) - e0), 1e-10 * e0);
}

TEST(Evolve, BenchmarkDecayBoundedBySpectralAbscissa) {
  const auto m = assemble_modal_matrix(set_a(), unit_kernel(), 1).entries;
  const double a1 = spectral_abscissa(set_a(), unit_kernel(), 1);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(6);
  x0(kV) = 1.0;
  const auto pairs = eigenpairs(m);
  const Eigen::VectorXcd coeff = pairs.vectors.partialPivLu().solve(x0.cast<std::complex<double>>());
  // |x(t)| = |V e^{Lt} c| <= ||V|| |c| e^{a1 t}
  const double c = pairs.vectors.operatorNorm() * coeff.norm();
  const double dt = 0.01;
  const auto traj = evolve(m, x0, dt, 2000);
  for (int t : {10, 20}) {
    const double norm = traj[static_cast<std::size_t>(t / dt + 0.5)].norm();
    EXPECT_LE(norm, c * std::exp(a1 * t) * (1.0 + 1e-9)) << "t=" << t;
  }
}
