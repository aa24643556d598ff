/**
 * @file simulate.hpp
 * @brief Exact per-mode time evolution, energy bookkeeping and the dissipation identity.
 *
 * Past history is zero at t = 0, so the integrated history of mode n at time t is
 * eta_n(s) = Theta_n(t) - Theta_n(t - s) for s < t and Theta_n(t) for s >= t, with
 * Theta_n(t) = int_0^t theta_n. The memory energy is evaluated from that representation.
 */
#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gpl/modal.hpp"
#include "gpl/params.hpp"

namespace gpl {

/// exp(A) by Padé-13 scaling and squaring. Throws OverflowScale.
Eigen::MatrixXd expm(const Eigen::MatrixXd& a);

/// exp(M dt); dt > 0.
Eigen::MatrixXd propagator(const Eigen::MatrixXd& m, double dt);

/// states[0] = state0, states[j+1] = exp(M dt) states[j].
std::vector<Eigen::VectorXd> evolve(const Eigen::MatrixXd& m, const Eigen::VectorXd& state0,
                                    double dt, std::size_t steps);

/// Spatial means of the initial porosity data; omega = sqrt(xi/J).
struct MeanTrace {
  double phi0_mean = 0.0;  ///< int_0^pi phi_0
  double phi1_mean = 0.0;  ///< int_0^pi phi_1
  double omega = 1.0;
};

MeanTrace make_mean_trace(const MaterialParams& p, double phi0_mean, double phi1_mean);

/// int_0^pi phi(x, t) dx, i.e. the solution of J m'' + xi m = 0 with m(0), m'(0) from the trace.
double mean_correction(const MeanTrace& m, double t);
double mean_correction_rate(const MeanTrace& m, double t);

struct EnergyBreakdown {
  double mech = 0.0;
  double thermal = 0.0;
  double memory = 0.0;
  /// dE/dt predicted by the dissipation identity, (pi/4) sum_n n^2 int kappa' eta_n^2.
  double dissipation_rhs = 0.0;

  double total() const noexcept { return mech + thermal + memory; }
};

/// Mechanical (completed square) and thermal energy of one mode; memory fields left at zero.
EnergyBreakdown mech_thermal_energy(const MaterialParams& p, int n, const Eigen::VectorXd& state);

/// Running integral Theta(t) = int_0^t theta of one mode, sampled on the time grid together
/// with theta and theta'. Between samples Theta is the quintic Hermite interpolant.
class ThetaHistory {
 public:
  ThetaHistory(double dt, double rate_scale);

  void push(double integral, double value, double rate);

  double dt() const noexcept { return dt_; }
  /// Spectral radius of the generator; bounds how fast theta can vary.
  double rate_scale() const noexcept { return rate_scale_; }
  std::size_t size() const noexcept { return integral_.size(); }
  double end_time() const noexcept;

  /// Theta at tau in [0, end_time()]. Throws HistoryGap outside the recorded range.
  double integral_at(double tau) const;
  double integral_at_step(std::size_t j) const { return integral_.at(j); }

 private:
  double dt_;
  double rate_scale_;
  std::vector<double> integral_;
  std::vector<double> value_;
  std::vector<double> rate_;
};

/// Panel layout for the memory integrals: `nodes` Gauss points on geometrically stretched
/// panels over [0, 40/delta], each panel cut at s = t and split until no wider than
/// 2/rate_scale. Everything beyond s = t is integrated in closed form.
struct SGridSpec {
  int nodes = 400;
  double stretch = 1.02;
};

struct QuadNode {
  double s;
  double weight;
};

std::vector<QuadNode> memory_quadrature(const PronyKernel& k, double t, double rate_scale,
                                        const SGridSpec& spec);

struct ModeSnapshot {
  int n = 1;
  Eigen::VectorXd state;
  const ThetaHistory* history = nullptr;  ///< may be null only at t = 0
};

EnergyBreakdown mode_energy(const MaterialParams& p, const PronyKernel& k, const ModeSnapshot& mode,
                            double t, const SGridSpec& spec);

/// Sum over modes in the given order.
EnergyBreakdown energy(const MaterialParams& p, const PronyKernel& k,
                       std::span<const ModeSnapshot> modes, double t, const SGridSpec& spec);

/// Centered difference of E minus the predicted rate; one-sided second-order stencils at the
/// two ends. Throws NonUniformGrid, InvalidConfig (< 3 rows).
std::vector<double> dissipation_residual(std::span<const double> times,
                                         std::span<const double> totals,
                                         std::span<const double> rhs);

struct ModeInit {
  int n = 1;
  double u = 0.0;
  double v = 0.0;
  double phi = 0.0;
  double psi = 0.0;
  double theta = 0.0;
};

struct SimConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  std::vector<ModeInit> modes;
  int record_every = 1;
  SGridSpec sgrid;
};

void validate_sim_config(const SimConfig& cfg);

struct EnergyRow {
  double t = 0.0;
  double total = 0.0;
  double mech = 0.0;
  double thermal = 0.0;
  double memory = 0.0;
  double dissipation_rhs = 0.0;
  double residual = 0.0;
};

struct EnergySeries {
  std::vector<EnergyRow> rows;
};

/// Fills the residual column of an already populated series.
void attach_residuals(EnergySeries& series);

struct ModeResult {
  int n = 1;
  Eigen::VectorXd state;
};

struct SimulationResult {
  EnergySeries series;
  std::vector<ModeResult> final_modes;  ///< ordered by n
  double t_final = 0.0;
};

SimulationResult run_simulation(const MaterialParams& p, const PronyKernel& k,
                                const SimConfig& cfg, unsigned threads = 1);

struct FieldSample {
  std::vector<double> u;
  std::vector<double> phi;  ///< includes the spatial-mean part
  std::vector<double> theta;
};

/// u = sum u_n sin(nx), phi = mean(t)/pi + sum phi_n cos(nx), theta = sum theta_n sin(nx).
FieldSample reconstruct_field(std::span<const ModeResult> modes, const MeanTrace* mean, double t,
                              std::span<const double> x);

/// CSV with header t,E_total,E_mech,E_thermal,E_memory,dissipation_rhs,residual.
void write_energy_csv(const EnergySeries& series, std::ostream& out);
EnergySeries read_energy_csv(std::istream& in);

}  // namespace gpl
