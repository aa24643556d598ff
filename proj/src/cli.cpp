#include "gpl/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "gpl/error.hpp"
#include "gpl/io.hpp"
#include "gpl/modal.hpp"
#include "gpl/resolvent.hpp"

namespace gpl {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

template <class T>
const T& require(const std::optional<T>& v, const char* key) {
  if (!v) throw Error(Errc::InvalidConfig, std::string("missing `") + key + "` block");
  return *v;
}

json stability_json(const StabilityReport& r) {
  return json{{"gamma_g", r.gamma_g},
              {"chi_g", r.chi_g ? json(*r.chi_g) : json(nullptr)},
              {"chi_defined", r.chi_g.has_value()},
              {"classification", std::string(to_string(r.classification))},
              {"tolerance", r.tolerance}};
}

json fit_json(const DecayFit& f, const FitWindow& w) {
  return json{{"t_start", w.t_start},
              {"t_end", w.t_end},
              {"omega_hat", f.omega_hat},
              {"sigma_hat", f.sigma_hat},
              {"r2", f.r2},
              {"r2_defined", f.r2_defined},
              {"rows", f.rows},
              {"window_rates", f.window_rates},
              {"classification", std::string(to_string(classify_decay(f)))}};
}

json final_state_json(const SimulationResult& r, const std::optional<MeanTrace>& mean) {
  json modes = json::array();
  for (const auto& m : r.final_modes) {
    std::vector<double> w(m.state.data() + kMemory, m.state.data() + m.state.size());
    modes.push_back(json{{"n", m.n},
                         {"u", m.state(kU)},
                         {"v", m.state(kV)},
                         {"phi", m.state(kPhi)},
                         {"psi", m.state(kPsi)},
                         {"theta", m.state(kTheta)},
                         {"w", w}});
  }
  json j{{"t_final", r.t_final}, {"modes", modes}};
  if (mean) {
    j["phi_mean"] = json{{"value", mean_correction(*mean, r.t_final)},
                         {"rate", mean_correction_rate(*mean, r.t_final)},
                         {"omega", mean->omega}};
  }
  return j;
}

EnergySeries simulate_series(const ExperimentConfig& cfg, unsigned threads, SimulationResult* keep) {
  auto result = run_simulation(require(cfg.material, "material"), require(cfg.kernel, "kernel"),
                               require(cfg.sim, "sim"), threads);
  if (keep) *keep = result;
  return std::move(result.series);
}

void execute(Command cmd, const ExperimentConfig& cfg, const fs::path& out, const RunOptions& opts) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(Errc::InvalidConfig, "cannot create output directory " + out.string());

  switch (cmd) {
    case Command::Stability: {
      const auto r = stability_numbers(require(cfg.material, "material"), require(cfg.kernel, "kernel"),
                                       opts.tol);
      write_file_atomic(out / "stability.json", dump_json(stability_json(r)));
      return;
    }
    case Command::Scan: {
      const auto scan = abscissa_scan(require(cfg.material, "material"), require(cfg.kernel, "kernel"),
                                      require(cfg.scan_n_max, "scan"), opts.threads);
      std::ostringstream csv;
      csv << "n,abscissa\n";
      for (std::size_t i = 0; i < scan.abscissa.size(); ++i) {
        csv << (i + 1) << ',' << format_double(scan.abscissa[i]) << '\n';
      }
      write_file_atomic(out / "scan.csv", csv.str());
      return;
    }
    case Command::Simulate: {
      SimulationResult result;
      simulate_series(cfg, opts.threads, &result);
      std::ostringstream csv;
      write_energy_csv(result.series, csv);
      write_file_atomic(out / "energy.csv", csv.str());
      write_file_atomic(out / "final_state.json", dump_json(final_state_json(result, cfg.mean)));
      return;
    }
    case Command::Resolvent: {
      const auto rep = resolvent_report(require(cfg.material, "material"), require(cfg.kernel, "kernel"),
                                        require(cfg.resolvent_n_list, "resolvent"), opts.tol);
      write_file_atomic(out / "resolvent.json", dump_json(to_json(rep)));
      return;
    }
    case Command::Fit: {
      const auto& window = require(cfg.fit, "fit");
      EnergySeries series;
      if (window.series) {
        std::ifstream in(*window.series);
        if (!in) throw Error(Errc::InvalidConfig, "cannot read fit.series " + *window.series);
        series = read_energy_csv(in);
      } else {
        series = simulate_series(cfg, opts.threads, nullptr);
      }
      const auto fit = fit_decay(series, window.t_start, window.t_end);
      write_file_atomic(out / "fit.json", dump_json(fit_json(fit, window)));
      return;
    }
  }
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  if (name == "stability") return Command::Stability;
  if (name == "scan") return Command::Scan;
  if (name == "simulate") return Command::Simulate;
  if (name == "resolvent") return Command::Resolvent;
  if (name == "fit") return Command::Fit;
  return std::nullopt;
}

int run(Command cmd, const fs::path& config, const fs::path& out_dir, const RunOptions& opts,
        std::ostream& err) {
  try {
    execute(cmd, load_config(config), out_dir, opts);
    return 0;
  } catch (const Error& e) {
    err << "gpl: " << e.what() << '\n';
    return is_validation_error(e.code()) ? 2 : 3;
  } catch (const nlohmann::json::exception& e) {
    err << "gpl: InvalidConfig: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "gpl: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace gpl
