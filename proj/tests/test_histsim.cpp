#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "gpl/error.hpp"
#include "gpl/histsim.hpp"
#include "gpl/modal.hpp"
#include "gpl/simulate.hpp"

using namespace gpl;
using namespace gpl::testing;

namespace {

constexpr double kPi = std::numbers::pi;

SampledKernel exp_kernel() {
  return {[](double s) { return std::exp(-s); }, [](double s) { return -std::exp(-s); }, 1.0};
}

HistoryGrid profile(double s_max, double ds, const std::function<double(double)>& f) {
  auto g = make_uniform_grid(s_max, ds);
  for (std::size_t j = 1; j < g.s.size(); ++j) g.eta[j] = f(g.s[j]);
  return g;
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::InvalidConfig;
}

}  // namespace

TEST(StepHistory, UnitSourceGivesRamp) {
  for (double ratio : {1.0, 0.5}) {
    const double ds = 0.01, dt = ratio * ds, t = 1.0;
    auto g = make_uniform_grid(3.0, ds);
    const int steps = static_cast<int>(std::lround(t / dt));
    for (int i = 0; i < steps; ++i) g = step_history(g, 1.0, dt);
    double err = 0.0;
    for (std::size_t j = 0; j < g.s.size(); ++j) err = std::max(err, std::abs(g.eta[j] - std::min(g.s[j], t)));
    // An exact shift at unit Courant number; first-order smearing of the kink otherwise.
    EXPECT_LE(err, ratio == 1.0 ? 1e-12 : 0.1) << "ratio " << ratio;
  }
}

TEST(StepHistory, RampErrorShrinksUnderRefinement) {
  double prev = 0.0;
  for (double ds : {0.02, 0.01, 0.005}) {
    const double dt = 0.5 * ds;
    auto g = make_uniform_grid(3.0, ds);
    for (int i = 0; i < static_cast<int>(std::lround(1.0 / dt)); ++i) g = step_history(g, 1.0, dt);
    double err = 0.0;
    for (std::size_t j = 0; j < g.s.size(); ++j) err += ds * std::abs(g.eta[j] - std::min(g.s[j], 1.0));
    if (prev > 0.0) EXPECT_LT(err, prev);
    prev = err;
  }
}

TEST(StepHistory, SourceFreeTransportIsShift) {
  const double ds = 0.1;
  auto g = profile(5.0, ds, [](double s) { return std::sin(s); });
  const auto start = g.eta;
  for (int i = 0; i < 7; ++i) g = step_history(g, 0.0, ds);
  for (std::size_t j = 0; j < g.s.size(); ++j) {
    const double expected = j >= 7 ? start[j - 7] : 0.0;
    EXPECT_NEAR(g.eta[j], expected, 1e-15);
  }
}

TEST(StepHistory, CflViolation) {
  const auto g = make_uniform_grid(1.0, 0.01);
  EXPECT_EQ(code_of([&] { step_history(g, 1.0, 0.02); }), Errc::CflViolation);
}

TEST(MemoryForce, ZeroHistory) {
  EXPECT_EQ(memory_force(make_uniform_grid(20.0, 0.01), exp_kernel()), 0.0);
}

TEST(MemoryForce, LinearProfileAgainstClosedForm) {
  const auto g = profile(20.0, 0.01, [](double s) { return s; });
  ASSERT_EQ(g.s.size(), 2001u);
  EXPECT_NEAR(memory_force(g, exp_kernel()), 1.0, 1e-3);
}

TEST(MemoryForce, TrapezoidOrder) {
  // int_0^20 s e^{-s} ds
  const double exact = 1.0 - 21.0 * std::exp(-20.0);
  const double e1 = std::abs(memory_force(profile(20.0, 0.02, [](double s) { return s; }), exp_kernel()) - exact);
  const double e2 = std::abs(memory_force(profile(20.0, 0.01, [](double s) { return s; }), exp_kernel()) - exact);
  EXPECT_GE(e1 / e2, 3.5);
}

TEST(SampledKernel, RejectsGrowingKernel) {
  const SampledKernel bad{[](double s) { return std::exp(s); }, [](double s) { return std::exp(s); }, 1.0};
  const std::vector<double> s{0.0, 1.0};
  EXPECT_EQ(code_of([&] { validate_sampled_kernel(bad, s); }), Errc::InvalidKernel);
  EXPECT_NO_THROW(validate_sampled_kernel(sampled_from_prony(unit_kernel()), s));
}

TEST(GridEnergy, ZeroHistoryHasNoMemoryEnergy) {
  MechThermalState x;
  x << 0.1, 0.2, 0.3, 0.4, 0.5;
  const auto e = grid_energy(set_a(), exp_kernel(), x, make_uniform_grid(40.0, 0.01), 1);
  EXPECT_EQ(e.memory, 0.0);
  Eigen::VectorXd full = x;
  EXPECT_DOUBLE_EQ(e.mech, mech_thermal_energy(set_a(), 1, full).mech);
}

TEST(GridEnergy, ConstantProfile) {
  const auto g = profile(40.0, 1e-3, [](double) { return 1.0; });
  const auto e = grid_energy(set_a(), exp_kernel(), MechThermalState::Zero(), g, 1);
  EXPECT_NEAR(e.memory, kPi / 4.0, 1e-3);
}

TEST(CoupledStep, ZeroDataStaysZero) {
  auto g = make_uniform_grid(10.0, 0.01);
  MechThermalState x = MechThermalState::Zero();
  for (int i = 0; i < 100; ++i) std::tie(x, g) = coupled_step(set_a(), exp_kernel(), 2, x, g, 0.01);
  EXPECT_EQ(x.norm(), 0.0);
  for (double v : g.eta) EXPECT_EQ(v, 0.0);
}

TEST(HistorySimulator, InflowBoundaryStaysZero) {
  MechThermalState x;
  x << 0.0, 1.0, 0.0, 0.0, 0.5;
  HistorySimulator sim(set_a(), exp_kernel(), 1, make_uniform_grid(10.0, 0.01), x);
  for (int i = 0; i < 200; ++i) {
    sim.step(0.01);
    ASSERT_EQ(sim.grid().eta[0], 0.0);
  }
}

TEST(HistorySimulator, DecoupledMechanicsConserved) {
  auto p = set_a();
  p.beta = 0.0;
  MechThermalState x;
  x << 0.3, 1.0, -0.2, 0.4, 0.7;
  HistorySimulator sim(p, exp_kernel(), 1, make_uniform_grid(40.0, 1e-3), x);
  const double e0 = sim.energy().mech;
  double drift = 0.0;
  for (int i = 0; i < 10000; ++i) {
    sim.step(1e-3);
    drift = std::max(drift, std::abs(sim.energy().mech - e0));
  }
  EXPECT_LE(drift, 1e-6 * e0);
}

TEST(HistorySimulator, ThetaMatchesExactClosure) {
  const auto p = set_a();
  const auto k = unit_kernel();
  const double dt = 1e-3;
  const auto m = assemble_modal_matrix(p, k, 1).entries;
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(6);
  x0(kV) = 1.0;
  const auto exact = evolve(m, x0, dt, 10000);
  MechThermalState y = MechThermalState::Zero();
  y(kV) = 1.0;
  HistorySimulator sim(p, sampled_from_prony(k), 1, make_uniform_grid(40.0, dt), y);
  double err = 0.0, scale = 0.0;
  for (std::size_t j = 0; j < exact.size(); ++j) {
    if (j > 0) sim.step(dt);
    err = std::max(err, std::abs(sim.state()(kTheta) - exact[j](kTheta)));
    scale = std::max(scale, std::abs(exact[j](kTheta)));
  }
  EXPECT_LE(err, 1e-3 * scale);
}

TEST(RunHistsim, EnergyAgreesWithExactPathAndIsDissipative) {
  const auto p = set_b();
  const auto k = unit_kernel();
  HistSimConfig hc;
  hc.dt = hc.ds = 2e-3;
  hc.t_end = 5.0;
  hc.record_every = 10;
  hc.modes = {{1, 0.0, 1.0, 0.0, 0.0, 0.2}, {2, 0.1, 0.0, 0.3, 0.0, 0.0}};
  const auto hist = run_histsim(p, sampled_from_prony(k), hc, 2);

  SimConfig sc;
  sc.dt = hc.dt;
  sc.t_end = hc.t_end;
  sc.record_every = hc.record_every;
  sc.modes = hc.modes;
  const auto exact = run_simulation(p, k, sc, 2);
  ASSERT_EQ(hist.series.rows.size(), exact.series.rows.size());
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < exact.series.rows.size(); ++i) {
    err = std::max(err, std::abs(hist.series.rows[i].total - exact.series.rows[i].total));
    scale = std::max(scale, exact.series.rows[i].total);
    if (i > 0) EXPECT_LE(hist.series.rows[i].total, hist.series.rows[i - 1].total * (1.0 + 1e-6));
  }
  EXPECT_LE(err, 1e-3 * scale);
}

TEST(RunHistsim, AgreementImprovesUnderRefinement) {
  const auto p = set_a();
  const auto k = PronyKernel({{1.0, 1.0}, {0.5, 2.0}});
  double prev = 0.0;
  for (double h : {8e-3, 4e-3}) {
    HistSimConfig hc;
    hc.dt = hc.ds = h;
    hc.t_end = 4.0;
    hc.modes = {{1, 0.0, 1.0, 0.0, 0.0, 0.0}};
    hc.record_every = static_cast<int>(std::lround(0.08 / h));
    SimConfig sc;
    sc.dt = h;
    sc.t_end = hc.t_end;
    sc.modes = hc.modes;
    sc.record_every = hc.record_every;
    const auto a = run_histsim(p, sampled_from_prony(k), hc);
    const auto b = run_simulation(p, k, sc);
    double err = 0.0;
    for (std::size_t i = 0; i < a.series.rows.size(); ++i) {
      err = std::max(err, std::abs(a.series.rows[i].total - b.series.rows[i].total));
    }
    if (prev > 0.0) EXPECT_LT(err, prev);
    prev = err;
  }
}

TEST(RunHistsim, AcceptsInitialHistory) {
  HistSimConfig hc;
  hc.dt = hc.ds = 0.01;
  hc.t_end = 1.0;
  hc.s_max = 10.0;
  hc.modes = {{1}};
  auto g = profile(10.0, 0.01, [](double s) { return std::min(s, 1.0); });
  hc.eta0 = {g.eta};
  const auto res = run_histsim(set_a(), exp_kernel(), hc);
  EXPECT_GT(res.series.rows.front().memory, 0.0);
  EXPECT_LT(res.series.rows.back().total, res.series.rows.front().total);
  hc.eta0 = {std::vector<double>(5, 0.0)};
  EXPECT_THROW(run_histsim(set_a(), exp_kernel(), hc), Error);
}
