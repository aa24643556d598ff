/**
 * @file histsim.hpp
 * @brief Reference simulator that carries the integrated history eta(s) of each mode on an
 *        explicit s-grid (transport eta_t = theta - eta_s, eta(0) = 0). Works for any kernel
 *        sampled through evaluators and accepts nonzero initial history.
 */
#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gpl/params.hpp"
#include "gpl/simulate.hpp"

namespace gpl {

struct SampledKernel {
  std::function<double(double)> kappa;
  std::function<double(double)> kappa_prime;
  double delta = 1.0;  ///< decay witness: kappa' <= -delta kappa
};

SampledKernel sampled_from_prony(const PronyKernel& k);

/// Checks kappa > 0, kappa' <= 0 and kappa' <= -delta kappa at every node. Throws InvalidKernel.
void validate_sampled_kernel(const SampledKernel& k, std::span<const double> s_nodes);

struct HistoryGrid {
  std::vector<double> s;    ///< strictly increasing, s[0] = 0
  std::vector<double> eta;  ///< eta[0] = 0
};

/// Uniform nodes 0, ds, ..., covering [0, s_max]; zero history.
HistoryGrid make_uniform_grid(double s_max, double ds);

/// One first-order upwind step of eta_t = theta - eta_s with inflow eta(0) = 0.
/// theta_hat is the source value used over the step. Throws CflViolation if dt exceeds the
/// smallest node spacing.
HistoryGrid step_history(const HistoryGrid& grid, double theta_hat, double dt);

/// Trapezoidal int_0^{s_max} kappa(s) eta(s) ds.
double memory_force(const HistoryGrid& grid, const SampledKernel& k);

/// (u, v, phi, psi, theta) of one mode.
using MechThermalState = Eigen::Matrix<double, 5, 1>;

/// Advances one mode by dt. Mechanics uses velocity-Verlet half kicks around a drift; theta and
/// the history advance together by Crank-Nicolson in theta with the upwind transport above.
/// Second order in dt when dt equals the node spacing, first order otherwise.
std::pair<MechThermalState, HistoryGrid> coupled_step(const MaterialParams& p,
                                                      const SampledKernel& k, int n,
                                                      const MechThermalState& state,
                                                      const HistoryGrid& grid, double dt);

/// Mechanical and thermal parts as in the exact path, memory (pi/4) n^2 int kappa eta^2 and
/// rate (pi/4) n^2 int kappa' eta^2 by trapezoid on the grid.
EnergyBreakdown grid_energy(const MaterialParams& p, const SampledKernel& k,
                            const MechThermalState& state, const HistoryGrid& grid, int n);

/// Stateful single-mode stepper with the kernel pre-sampled on the grid.
class HistorySimulator {
 public:
  HistorySimulator(const MaterialParams& p, const SampledKernel& k, int n, HistoryGrid grid,
                   const MechThermalState& state);

  void step(double dt);
  EnergyBreakdown energy() const;

  const MechThermalState& state() const noexcept { return state_; }
  const HistoryGrid& grid() const noexcept { return grid_; }
  int mode() const noexcept { return n_; }

 private:
  MaterialParams p_;
  int n_;
  HistoryGrid grid_;
  MechThermalState state_;
  std::vector<double> kappa_w_;        ///< trapezoid weight * kappa at each node
  std::vector<double> kappa_prime_w_;  ///< trapezoid weight * kappa' at each node
  double source_mass_ = 0.0;           ///< sum of kappa_w_ over nodes j >= 1
  double min_spacing_ = 0.0;
  std::vector<double> scratch_;
};

struct HistSimConfig {
  double dt = 1e-3;
  double ds = 1e-3;
  double t_end = 1.0;
  std::vector<ModeInit> modes;
  int record_every = 1;
  std::optional<double> s_max;  ///< defaults to 40/delta
  /// Optional initial history per mode (node values on the uniform grid), same order as modes.
  std::vector<std::vector<double>> eta0;
};

struct HistSimResult {
  EnergySeries series;
  std::vector<ModeResult> final_modes;  ///< ordered by n, state of size 5
};

HistSimResult run_histsim(const MaterialParams& p, const SampledKernel& k,
                          const HistSimConfig& cfg, unsigned threads = 1);

}  // namespace gpl
