/**
 * @file cli.hpp
 * @brief Experiment configuration, energy decay fitting and the `gpl` command runner.
 */
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gpl/params.hpp"
#include "gpl/simulate.hpp"

namespace gpl {

struct FitWindow {
  double t_start = 0.0;
  double t_end = 0.0;
  std::optional<std::string> series;  ///< energy CSV to fit; simulated from `sim` when absent
};

struct ExperimentConfig {
  std::optional<MaterialParams> material;
  std::optional<PronyKernel> kernel;
  std::optional<SimConfig> sim;
  std::optional<MeanTrace> mean;  ///< from sim.phi_means, needs material
  std::optional<int> scan_n_max;
  std::optional<std::vector<int>> resolvent_n_list;
  std::optional<FitWindow> fit;
};

/// Throws InvalidConfig / module validation errors naming the offending key.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

struct DecayFit {
  double omega_hat = 0.0;  ///< E ~ sigma exp(-omega t)
  double sigma_hat = 0.0;
  double r2 = 0.0;
  bool r2_defined = false;           ///< false for a constant series
  std::vector<double> window_rates;  ///< fitted rate on 4 equal sub-windows (when each has >= 2 rows)
  std::size_t rows = 0;
};

/// Least-squares line through ln E_total on [t_start, t_end]. Rows with E_total <= 1e-300 E(0)
/// are skipped. Throws EmptyWindow (< 2 usable rows) and NonPositiveEnergy.
DecayFit fit_decay(const EnergySeries& series, double t_start, double t_end);

enum class DecayClass { Exponential, SubExponential, Inconclusive };

std::string_view to_string(DecayClass c) noexcept;

/// Exponential: r2 >= 0.995 and max/min window rate <= 1.25. SubExponential: window rates
/// strictly decreasing with last <= 0.8 first. Fits over fewer than 10 rows are Inconclusive.
DecayClass classify_decay(const DecayFit& fit);

enum class Command { Stability, Scan, Simulate, Resolvent, Fit };

std::optional<Command> parse_command(std::string_view name);

struct RunOptions {
  std::optional<double> tol;
  unsigned threads = 1;
};

/// Exit code: 0 success, 2 validation failure, 3 numerical failure. Diagnostics go to `err`.
int run(Command cmd, const std::filesystem::path& config, const std::filesystem::path& out_dir,
        const RunOptions& opts, std::ostream& err);

}  // namespace gpl
