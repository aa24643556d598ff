#include "gpl/histsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "gpl/error.hpp"
#include "gpl/io.hpp"
#include "gpl/parallel.hpp"

namespace gpl {

namespace {

constexpr double kPi = std::numbers::pi;

double min_spacing(const std::vector<double>& s) {
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < s.size(); ++j) h = std::min(h, s[j] - s[j - 1]);
  return h;
}

void validate_grid(const HistoryGrid& g) {
  if (g.s.size() < 2 || g.s.size() != g.eta.size()) {
    throw Error(Errc::InvalidConfig, "history grid needs >= 2 nodes and matching eta");
  }
  if (g.s[0] != 0.0) throw Error(Errc::InvalidConfig, "history grid must start at s = 0");
  for (std::size_t j = 1; j < g.s.size(); ++j) {
    if (!(g.s[j] > g.s[j - 1])) throw Error(Errc::InvalidConfig, "history nodes must increase");
  }
  if (g.eta[0] != 0.0) throw Error(Errc::InvalidConfig, "history must vanish at s = 0");
}

void check_cfl(double dt, double spacing) {
  if (!(dt > 0.0)) throw Error(Errc::InvalidConfig, "dt must be positive");
  if (dt > spacing * (1.0 + 1e-9)) {
    throw Error(Errc::CflViolation, "dt = " + format_double(dt) + " exceeds node spacing " +
                                        format_double(spacing));
  }
}

// Upwind transport without source; result[0] = 0.
void transport(const std::vector<double>& s, const std::vector<double>& eta, double dt,
               std::vector<double>& out) {
  out.resize(eta.size());
  out[0] = 0.0;
  for (std::size_t j = 1; j < eta.size(); ++j) {
    const double nu = dt / (s[j] - s[j - 1]);
    // Unit Courant number is an exact shift; node positions carry rounding, so snap to it.
    out[j] = nu >= 1.0 - 1e-9 ? eta[j - 1] : eta[j] - nu * (eta[j] - eta[j - 1]);
  }
}

std::vector<double> trapezoid_weights(const std::vector<double>& s) {
  std::vector<double> w(s.size(), 0.0);
  for (std::size_t j = 1; j < s.size(); ++j) {
    const double h = 0.5 * (s[j] - s[j - 1]);
    w[j - 1] += h;
    w[j] += h;
  }
  return w;
}

}  // namespace

SampledKernel sampled_from_prony(const PronyKernel& k) {
  return {[k](double s) { return k.value(s); }, [k](double s) { return k.derivative(s); },
          k.decay_witness()};
}

void validate_sampled_kernel(const SampledKernel& k, std::span<const double> s_nodes) {
  if (!k.kappa || !k.kappa_prime || !(k.delta > 0.0)) {
    throw Error(Errc::InvalidKernel, "sampled kernel needs evaluators and delta > 0");
  }
  const double scale = k.kappa(0.0);
  for (double s : s_nodes) {
    const double v = k.kappa(s), d = k.kappa_prime(s);
    if (!(v > 0.0)) throw Error(Errc::InvalidKernel, "kappa must be positive at s = " + format_double(s));
    if (d > 0.0) throw Error(Errc::InvalidKernel, "kappa' must be <= 0 at s = " + format_double(s));
    if (d + k.delta * v > 1e-12 * scale) {
      throw Error(Errc::InvalidKernel, "kappa' <= -delta kappa fails at s = " + format_double(s));
    }
  }
}

HistoryGrid make_uniform_grid(double s_max, double ds) {
  if (!(ds > 0.0) || !(s_max > ds)) throw Error(Errc::InvalidConfig, "need 0 < ds < s_max");
  const auto cells = static_cast<std::size_t>(std::ceil(s_max / ds - 1e-9));
  HistoryGrid g;
  g.s.resize(cells + 1);
  for (std::size_t j = 0; j <= cells; ++j) g.s[j] = static_cast<double>(j) * ds;
  g.eta.assign(cells + 1, 0.0);
  return g;
}

HistoryGrid step_history(const HistoryGrid& grid, double theta_hat, double dt) {
  validate_grid(grid);
  check_cfl(dt, min_spacing(grid.s));
  HistoryGrid next{grid.s, {}};
  transport(grid.s, grid.eta, dt, next.eta);
  for (std::size_t j = 1; j < next.eta.size(); ++j) next.eta[j] += dt * theta_hat;
  return next;
}

double memory_force(const HistoryGrid& grid, const SampledKernel& k) {
  double sum = 0.0;
  for (std::size_t j = 1; j < grid.s.size(); ++j) {
    const double h = grid.s[j] - grid.s[j - 1];
    sum += 0.5 * h * (k.kappa(grid.s[j - 1]) * grid.eta[j - 1] + k.kappa(grid.s[j]) * grid.eta[j]);
  }
  return sum;
}

HistorySimulator::HistorySimulator(const MaterialParams& p, const SampledKernel& k, int n,
                                   HistoryGrid grid, const MechThermalState& state)
    : p_(p), n_(n), grid_(std::move(grid)), state_(state) {
  validate_params(p);
  if (n < 1) throw Error(Errc::InvalidMode, "mode index must be >= 1");
  validate_grid(grid_);
  validate_sampled_kernel(k, grid_.s);
  const auto w = trapezoid_weights(grid_.s);
  kappa_w_.resize(w.size());
  kappa_prime_w_.resize(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    kappa_w_[j] = w[j] * k.kappa(grid_.s[j]);
    kappa_prime_w_[j] = w[j] * k.kappa_prime(grid_.s[j]);
    if (j > 0) source_mass_ += kappa_w_[j];
  }
  min_spacing_ = min_spacing(grid_.s);
}

void HistorySimulator::step(double dt) {
  check_cfl(dt, min_spacing_);
  const double nn = n_;
  auto& x = state_;
  const auto kick = [&](double h) {
    x(kV) += h / p_.rho * (-p_.mu * nn * nn * x(kU) - p_.b * nn * x(kPhi));
    x(kPsi) += h / p_.J *
               (-(p_.alpha * nn * nn + p_.xi) * x(kPhi) - p_.b * nn * x(kU) - p_.beta * nn * x(kTheta));
  };

  kick(0.5 * dt);
  x(kU) += dt * x(kV);
  x(kPhi) += dt * x(kPsi);

  // Crank-Nicolson in theta; the history source uses the step-averaged theta, and the
  // memory force is linear in it, so the implicit equation is scalar.
  double force_old = 0.0;
  for (std::size_t j = 1; j < grid_.eta.size(); ++j) force_old += kappa_w_[j] * grid_.eta[j];
  transport(grid_.s, grid_.eta, dt, scratch_);
  double force_moved = 0.0;
  for (std::size_t j = 1; j < scratch_.size(); ++j) force_moved += kappa_w_[j] * scratch_[j];

  const double theta0 = x(kTheta);
  const double g = dt * dt * nn * nn * source_mass_ / (4.0 * p_.c);
  const double theta1 =
      (theta0 * (1.0 - g) +
       dt / p_.c * (p_.beta * nn * x(kPsi) - 0.5 * nn * nn * (force_old + force_moved))) /
      (1.0 + g);
  const double source = 0.5 * dt * (theta0 + theta1);
  for (std::size_t j = 1; j < scratch_.size(); ++j) scratch_[j] += source;
  grid_.eta.swap(scratch_);
  x(kTheta) = theta1;

  kick(0.5 * dt);
}

EnergyBreakdown HistorySimulator::energy() const {
  Eigen::VectorXd full = state_;
  EnergyBreakdown e = mech_thermal_energy(p_, n_, full);
  double mem = 0.0, rate = 0.0;
  for (std::size_t j = 1; j < grid_.eta.size(); ++j) {
    const double eta2 = grid_.eta[j] * grid_.eta[j];
    mem += kappa_w_[j] * eta2;
    rate += kappa_prime_w_[j] * eta2;
  }
  const double factor = 0.25 * kPi * n_ * n_;
  e.memory = factor * mem;
  e.dissipation_rhs = factor * rate;
  return e;
}

std::pair<MechThermalState, HistoryGrid> coupled_step(const MaterialParams& p,
                                                      const SampledKernel& k, int n,
                                                      const MechThermalState& state,
                                                      const HistoryGrid& grid, double dt) {
  HistorySimulator sim(p, k, n, grid, state);
  sim.step(dt);
  return {sim.state(), sim.grid()};
}

EnergyBreakdown grid_energy(const MaterialParams& p, const SampledKernel& k,
                            const MechThermalState& state, const HistoryGrid& grid, int n) {
  return HistorySimulator(p, k, n, grid, state).energy();
}

HistSimResult run_histsim(const MaterialParams& p, const SampledKernel& k,
                          const HistSimConfig& cfg, unsigned threads) {
  if (!(cfg.dt > 0.0) || !(cfg.t_end > cfg.dt) || cfg.record_every < 1 || cfg.modes.empty()) {
    throw Error(Errc::InvalidConfig, "histsim needs 0 < dt < t_end, record_every >= 1, modes");
  }
  if (!cfg.eta0.empty() && cfg.eta0.size() != cfg.modes.size()) {
    throw Error(Errc::InvalidConfig, "eta0 must list one history per mode");
  }
  std::set<int> seen;
  for (const auto& m : cfg.modes) {
    if (!seen.insert(m.n).second) throw Error(Errc::InvalidConfig, "duplicate mode index");
  }
  const double s_max = cfg.s_max.value_or(40.0 / k.delta);
  const auto steps = static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  const auto every = static_cast<std::size_t>(cfg.record_every);
  const std::size_t rows = steps / every + 1;

  std::vector<std::size_t> order(cfg.modes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](auto a, auto b) { return cfg.modes[a].n < cfg.modes[b].n; });

  std::vector<std::vector<EnergyBreakdown>> per_mode(order.size());
  HistSimResult result;
  result.final_modes.resize(order.size());
  parallel_for(order.size(), threads, [&](std::size_t slot) {
    const auto& init = cfg.modes[order[slot]];
    HistoryGrid grid = make_uniform_grid(s_max, cfg.ds);
    if (!cfg.eta0.empty()) {
      const auto& eta0 = cfg.eta0[order[slot]];
      if (eta0.size() != grid.s.size()) {
        throw Error(Errc::InvalidConfig, "eta0 length does not match the history grid");
      }
      grid.eta = eta0;
      HistoryGrid squared{grid.s, eta0};
      for (auto& v : squared.eta) v *= v;
      const double norm = memory_force(squared, k);
      if (!std::isfinite(norm)) throw Error(Errc::InvalidConfig, "initial history has infinite norm");
    }
    MechThermalState x;
    x << init.u, init.v, init.phi, init.psi, init.theta;
    HistorySimulator sim(p, k, init.n, std::move(grid), x);
    auto& out = per_mode[slot];
    out.reserve(rows);
    for (std::size_t j = 0;; ++j) {
      if (j % every == 0) out.push_back(sim.energy());
      if (j == steps) break;
      sim.step(cfg.dt);
    }
    result.final_modes[slot] = {init.n, Eigen::VectorXd(sim.state())};
  });

  result.series.rows.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    EnergyBreakdown sum;
    for (const auto& m : per_mode) {
      sum.mech += m[r].mech;
      sum.thermal += m[r].thermal;
      sum.memory += m[r].memory;
      sum.dissipation_rhs += m[r].dissipation_rhs;
    }
    result.series.rows[r] = {static_cast<double>(r * every) * cfg.dt, sum.total(), sum.mech,
                             sum.thermal, sum.memory, sum.dissipation_rhs, 0.0};
  }
  attach_residuals(result.series);
  return result;
}

}  // namespace gpl
