#include "gpl/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "gpl/error.hpp"
#include "gpl/io.hpp"
#include "gpl/parallel.hpp"

namespace gpl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kGaussOrder = 8;
/// Kernel mass beyond 40/delta is below exp(-40) of the total.
constexpr double kKernelSpan = 40.0;

struct GaussRule {
  std::array<double, kGaussOrder> x{};
  std::array<double, kGaussOrder> w{};
};

GaussRule make_gauss_rule() {
  GaussRule rule;
  const int n = kGaussOrder;
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    rule.x[static_cast<std::size_t>(i)] = z;
    rule.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return rule;
}

const GaussRule& gauss_rule() {
  static const GaussRule rule = make_gauss_rule();
  return rule;
}

void add_panel(double lo, double hi, double cap, std::vector<QuadNode>& out) {
  if (!(hi > lo)) return;
  const double pieces = std::isfinite(cap) ? std::max(1.0, std::ceil((hi - lo) / cap)) : 1.0;
  const double width = (hi - lo) / pieces;
  const auto& rule = gauss_rule();
  for (int p = 0; p < static_cast<int>(pieces); ++p) {
    const double a = lo + p * width;
    const double b = (p + 1 == static_cast<int>(pieces)) ? hi : a + width;
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (int i = 0; i < kGaussOrder; ++i) {
      out.push_back({mid + half * rule.x[static_cast<std::size_t>(i)],
                     half * rule.w[static_cast<std::size_t>(i)]});
    }
  }
}

// Quintic Hermite basis on [0, 1]: value, first and second derivative at both ends.
inline double hermite5(double x, double h, double y0, double d0, double s0, double y1, double d1,
                       double s1) {
  const double x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x;
  const double h00 = 1.0 - 10.0 * x3 + 15.0 * x4 - 6.0 * x5;
  const double h01 = x - 6.0 * x3 + 8.0 * x4 - 3.0 * x5;
  const double h02 = 0.5 * (x2 - 3.0 * x3 + 3.0 * x4 - x5);
  const double h10 = 10.0 * x3 - 15.0 * x4 + 6.0 * x5;
  const double h11 = -4.0 * x3 + 7.0 * x4 - 3.0 * x5;
  const double h12 = 0.5 * (x3 - 2.0 * x4 + x5);
  return y0 * h00 + h * d0 * h01 + h * h * s0 * h02 + y1 * h10 + h * d1 * h11 + h * h * s1 * h12;
}

}  // namespace

MeanTrace make_mean_trace(const MaterialParams& p, double phi0_mean, double phi1_mean) {
  validate_params(p);
  return {phi0_mean, phi1_mean, std::sqrt(p.xi / p.J)};
}

double mean_correction(const MeanTrace& m, double t) {
  return m.phi0_mean * std::cos(m.omega * t) + m.phi1_mean / m.omega * std::sin(m.omega * t);
}

double mean_correction_rate(const MeanTrace& m, double t) {
  return -m.phi0_mean * m.omega * std::sin(m.omega * t) + m.phi1_mean * std::cos(m.omega * t);
}

EnergyBreakdown mech_thermal_energy(const MaterialParams& p, int n, const Eigen::VectorXd& state) {
  const double nn = n;
  const double u = state(kU), v = state(kV), phi = state(kPhi), psi = state(kPsi),
               theta = state(kTheta);
  const double sq = std::sqrt(p.mu) * nn * u + p.b / std::sqrt(p.mu) * phi;
  EnergyBreakdown e;
  e.mech = 0.25 * kPi *
           (p.rho * v * v + p.J * psi * psi + sq * sq + (p.xi - p.b * p.b / p.mu) * phi * phi +
            p.alpha * nn * nn * phi * phi);
  e.thermal = 0.25 * kPi * p.c * theta * theta;
  return e;
}

ThetaHistory::ThetaHistory(double dt, double rate_scale) : dt_(dt), rate_scale_(rate_scale) {
  if (!(dt > 0.0)) throw Error(Errc::InvalidConfig, "history step must be positive");
  if (dt * rate_scale > 1.0) {
    throw Error(Errc::HistoryGap, "time step " + format_double(dt) +
                                      " too coarse for a generator of spectral radius " +
                                      format_double(rate_scale) + " (need dt*radius <= 1)");
  }
}

void ThetaHistory::push(double integral, double value, double rate) {
  integral_.push_back(integral);
  value_.push_back(value);
  rate_.push_back(rate);
}

double ThetaHistory::end_time() const noexcept {
  return integral_.empty() ? 0.0 : dt_ * static_cast<double>(integral_.size() - 1);
}

double ThetaHistory::integral_at(double tau) const {
  const double slack = 1e-9 * dt_;
  if (integral_.empty() || tau < -slack || tau > end_time() + slack) {
    throw Error(Errc::HistoryGap, "theta history does not cover t = " + format_double(tau));
  }
  if (integral_.size() == 1) return integral_[0];
  const double pos = std::clamp(tau / dt_, 0.0, static_cast<double>(integral_.size() - 1));
  const auto j = std::min(static_cast<std::size_t>(pos), integral_.size() - 2);
  const double x = pos - static_cast<double>(j);
  return hermite5(x, dt_, integral_[j], value_[j], rate_[j], integral_[j + 1], value_[j + 1],
                  rate_[j + 1]);
}

std::vector<QuadNode> memory_quadrature(const PronyKernel& k, double t, double rate_scale,
                                        const SGridSpec& spec) {
  std::vector<QuadNode> nodes;
  if (!(t > 0.0)) return nodes;
  const double span = kKernelSpan / k.decay_witness();
  const int panels = std::max(1, spec.nodes / kGaussOrder);
  const double r = std::max(1.0, spec.stretch);
  const double cap = rate_scale > 0.0 ? 2.0 / rate_scale : std::numeric_limits<double>::infinity();
  const double h0 = r == 1.0 ? span / panels : span * (r - 1.0) / (std::pow(r, panels) - 1.0);
  double lo = 0.0;
  double h = h0;
  for (int i = 0; i < panels && lo < t; ++i) {
    const double hi = (i + 1 == panels) ? span : lo + h;
    add_panel(lo, std::min(hi, t), cap, nodes);
    lo = hi;
    h *= r;
  }
  if (t > span) add_panel(span, t, cap, nodes);
  return nodes;
}

EnergyBreakdown mode_energy(const MaterialParams& p, const PronyKernel& k, const ModeSnapshot& mode,
                            double t, const SGridSpec& spec) {
  EnergyBreakdown e = mech_thermal_energy(p, mode.n, mode.state);
  if (t <= 0.0) return e;
  if (mode.history == nullptr) {
    throw Error(Errc::HistoryGap, "no theta history recorded for mode " + std::to_string(mode.n));
  }
  const ThetaHistory& hist = *mode.history;
  const double big_theta = hist.integral_at(t);
  double mem = 0.0;
  double rate = 0.0;
  for (const auto& node : memory_quadrature(k, t, hist.rate_scale(), spec)) {
    const double eta = big_theta - hist.integral_at(t - node.s);
    const double eta2 = node.weight * eta * eta;
    mem += k.value(node.s) * eta2;
    rate += k.derivative(node.s) * eta2;
  }
  // eta is constant beyond s = t
  mem += k.tail_mass(t) * big_theta * big_theta;
  rate -= k.value(t) * big_theta * big_theta;
  const double factor = 0.25 * kPi * mode.n * mode.n;
  e.memory = factor * mem;
  e.dissipation_rhs = factor * rate;
  return e;
}

EnergyBreakdown energy(const MaterialParams& p, const PronyKernel& k,
                       std::span<const ModeSnapshot> modes, double t, const SGridSpec& spec) {
  EnergyBreakdown sum;
  for (const auto& m : modes) {
    const auto e = mode_energy(p, k, m, t, spec);
    sum.mech += e.mech;
    sum.thermal += e.thermal;
    sum.memory += e.memory;
    sum.dissipation_rhs += e.dissipation_rhs;
  }
  return sum;
}

std::vector<double> dissipation_residual(std::span<const double> times,
                                         std::span<const double> totals,
                                         std::span<const double> rhs) {
  const std::size_t rows = times.size();
  if (totals.size() != rows || rhs.size() != rows) {
    throw Error(Errc::InvalidConfig, "residual columns differ in length");
  }
  if (rows < 3) throw Error(Errc::InvalidConfig, "dissipation residual needs at least 3 rows");
  const double h = times[1] - times[0];
  if (!(h > 0.0)) throw Error(Errc::NonUniformGrid, "times must increase");
  for (std::size_t i = 1; i < rows; ++i) {
    if (std::abs(times[i] - times[i - 1] - h) > 1e-9 * h) {
      throw Error(Errc::NonUniformGrid, "row spacing differs at row " + std::to_string(i));
    }
  }
  std::vector<double> res(rows);
  res[0] = (-3.0 * totals[0] + 4.0 * totals[1] - totals[2]) / (2.0 * h) - rhs[0];
  for (std::size_t i = 1; i + 1 < rows; ++i) {
    res[i] = (totals[i + 1] - totals[i - 1]) / (2.0 * h) - rhs[i];
  }
  const std::size_t l = rows - 1;
  res[l] = (3.0 * totals[l] - 4.0 * totals[l - 1] + totals[l - 2]) / (2.0 * h) - rhs[l];
  return res;
}

void attach_residuals(EnergySeries& series) {
  std::vector<double> t, e, r;
  for (const auto& row : series.rows) {
    t.push_back(row.t);
    e.push_back(row.total);
    r.push_back(row.dissipation_rhs);
  }
  const auto res = dissipation_residual(t, e, r);
  for (std::size_t i = 0; i < res.size(); ++i) series.rows[i].residual = res[i];
}

void validate_sim_config(const SimConfig& cfg) {
  if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0)) {
    throw Error(Errc::InvalidConfig, "sim.dt and sim.t_end must be positive");
  }
  if (cfg.dt > cfg.t_end) throw Error(Errc::InvalidConfig, "sim.dt must not exceed sim.t_end");
  if (cfg.record_every < 1) throw Error(Errc::InvalidConfig, "sim.record_every must be >= 1");
  if (cfg.modes.empty()) throw Error(Errc::InvalidConfig, "sim.modes must not be empty");
  if (cfg.sgrid.nodes < 1 || !(cfg.sgrid.stretch >= 1.0)) {
    throw Error(Errc::InvalidConfig, "sim.sgrid needs nodes >= 1 and stretch >= 1");
  }
  std::set<int> seen;
  for (const auto& m : cfg.modes) {
    if (m.n < 1) throw Error(Errc::InvalidMode, "mode index must be >= 1");
    if (!seen.insert(m.n).second) {
      throw Error(Errc::InvalidConfig, "duplicate mode n = " + std::to_string(m.n));
    }
  }
  const double steps = std::ceil(cfg.t_end / cfg.dt - 1e-9);
  if (steps / cfg.record_every < 2.0) {
    throw Error(Errc::InvalidConfig, "simulation must record at least 3 rows");
  }
}

namespace {

struct ModeRun {
  int n = 1;
  std::vector<Eigen::VectorXd> recorded;
  ThetaHistory history{1.0, 0.0};
  Eigen::VectorXd final_state;
};

ModeRun run_mode(const MaterialParams& p, const PronyKernel& k, const ModeInit& init, double dt,
                 std::size_t steps, std::size_t record_every) {
  const ModalMatrix mm = assemble_modal_matrix(p, k, init.n);
  const Eigen::Index dim = mm.entries.rows();

  double radius = 0.0;
  for (const auto& z : eigenvalues(mm.entries)) radius = std::max(radius, std::abs(z));

  // Augment with Theta' = theta so one matrix exponential advances both.
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(dim + 1, dim + 1);
  aug.topLeftCorner(dim, dim) = mm.entries;
  aug(dim, kTheta) = 1.0;
  const Eigen::MatrixXd step = propagator(aug, dt);
  const Eigen::MatrixXd prop = step.topLeftCorner(dim, dim);
  const Eigen::RowVectorXd gain = step.block(dim, 0, 1, dim);
  const Eigen::RowVectorXd theta_row = mm.entries.row(kTheta);

  ModeRun run{init.n, {}, ThetaHistory(dt, radius), {}};
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
  x(kU) = init.u;
  x(kV) = init.v;
  x(kPhi) = init.phi;
  x(kPsi) = init.psi;
  x(kTheta) = init.theta;

  double big_theta = 0.0;
  run.recorded.reserve(steps / record_every + 1);
  for (std::size_t j = 0;; ++j) {
    run.history.push(big_theta, x(kTheta), theta_row.dot(x));
    if (j % record_every == 0) run.recorded.push_back(x);
    if (j == steps) break;
    big_theta += gain.dot(x);
    x = prop * x;
  }
  run.final_state = x;
  return run;
}

}  // namespace

SimulationResult run_simulation(const MaterialParams& p, const PronyKernel& k,
                                const SimConfig& cfg, unsigned threads) {
  validate_params(p);
  validate_sim_config(cfg);
  auto inits = cfg.modes;
  std::sort(inits.begin(), inits.end(), [](const auto& a, const auto& b) { return a.n < b.n; });

  const auto steps = static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  const auto every = static_cast<std::size_t>(cfg.record_every);

  std::vector<ModeRun> runs(inits.size());
  parallel_for(inits.size(), threads,
               [&](std::size_t i) { runs[i] = run_mode(p, k, inits[i], cfg.dt, steps, every); });

  const std::size_t rows = runs.front().recorded.size();
  SimulationResult result;
  result.series.rows.resize(rows);
  parallel_for(rows, threads, [&](std::size_t r) {
    const double t = static_cast<double>(r * every) * cfg.dt;
    std::vector<ModeSnapshot> snaps;
    snaps.reserve(runs.size());
    for (const auto& run : runs) snaps.push_back({run.n, run.recorded[r], &run.history});
    const auto e = energy(p, k, snaps, t, cfg.sgrid);
    result.series.rows[r] = {t, e.total(), e.mech, e.thermal, e.memory, e.dissipation_rhs, 0.0};
  });
  attach_residuals(result.series);

  for (const auto& run : runs) result.final_modes.push_back({run.n, run.final_state});
  result.t_final = static_cast<double>(steps) * cfg.dt;
  return result;
}

FieldSample reconstruct_field(std::span<const ModeResult> modes, const MeanTrace* mean, double t,
                              std::span<const double> x) {
  FieldSample f;
  f.u.assign(x.size(), 0.0);
  f.phi.assign(x.size(), mean ? mean_correction(*mean, t) / kPi : 0.0);
  f.theta.assign(x.size(), 0.0);
  for (const auto& m : modes) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double s = std::sin(m.n * x[i]);
      const double c = std::cos(m.n * x[i]);
      f.u[i] += m.state(kU) * s;
      f.phi[i] += m.state(kPhi) * c;
      f.theta[i] += m.state(kTheta) * s;
    }
  }
  return f;
}

namespace {
constexpr const char* kCsvHeader = "t,E_total,E_mech,E_thermal,E_memory,dissipation_rhs,residual";
}

void write_energy_csv(const EnergySeries& series, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : series.rows) {
    out << format_double(r.t) << ',' << format_double(r.total) << ',' << format_double(r.mech) << ','
        << format_double(r.thermal) << ',' << format_double(r.memory) << ','
        << format_double(r.dissipation_rhs) << ',' << format_double(r.residual) << '\n';
  }
}

EnergySeries read_energy_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw Error(Errc::InvalidConfig, "energy CSV header mismatch");
  }
  EnergySeries series;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 7> v{};
    std::istringstream row(line);
    std::string cell;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!std::getline(row, cell, ',')) throw Error(Errc::InvalidConfig, "short CSV row: " + line);
      char* end = nullptr;
      v[i] = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) throw Error(Errc::InvalidConfig, "bad number in CSV: " + cell);
    }
    series.rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6]});
  }
  return series;
}

}  // namespace gpl
