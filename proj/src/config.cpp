#include <fstream>
#include <set>
#include <string>

#include "gpl/cli.hpp"
#include "gpl/error.hpp"

namespace gpl {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw Error(Errc::InvalidConfig, "`" + key + "` " + why);
}

double number(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) bad(where + "." + key, "is required");
  if (!it->is_number()) bad(where + "." + key, "must be a number");
  return it->get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

int integer(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) bad(where + "." + key, "is required");
  if (!it->is_number_integer()) bad(where + "." + key, "must be an integer");
  return it->get<int>();
}

const json& block(const json& j, const char* key) {
  const auto& b = j.at(key);
  if (!b.is_object()) bad(key, "must be an object");
  return b;
}

MaterialParams parse_material(const json& m) {
  MaterialParams p;
  p.rho = number(m, "rho", "material");
  p.J = number(m, "J", "material");
  p.c = number(m, "c", "material");
  p.mu = number(m, "mu", "material");
  p.b = number(m, "b", "material");
  p.alpha = number(m, "alpha", "material");
  p.xi = number(m, "xi", "material");
  p.beta = number(m, "beta", "material");
  validate_params(p);
  return p;
}

PronyKernel parse_kernel(const json& k) {
  if (k.is_object() && k.contains("cattaneo")) {
    const auto& c = k.at("cattaneo");
    return cattaneo_kernel(number(c, "kappa0", "kernel.cattaneo"), number(c, "tau0", "kernel.cattaneo"));
  }
  const json& terms = k.is_object() && k.contains("terms") ? k.at("terms") : k;
  if (!terms.is_array()) bad("kernel", "must be a list of {k, delta} or {cattaneo: {kappa0, tau0}}");
  std::vector<PronyTerm> out;
  for (const auto& t : terms) out.push_back({number(t, "k", "kernel"), number(t, "delta", "kernel")});
  return PronyKernel(std::move(out));
}

SimConfig parse_sim(const json& s) {
  SimConfig cfg;
  cfg.dt = number(s, "dt", "sim");
  cfg.t_end = number(s, "t_end", "sim");
  if (s.contains("record_every")) cfg.record_every = integer(s, "record_every", "sim");
  if (s.contains("sgrid")) {
    const auto& g = s.at("sgrid");
    if (g.contains("nodes")) cfg.sgrid.nodes = integer(g, "nodes", "sim.sgrid");
    cfg.sgrid.stretch = number_or(g, "stretch", cfg.sgrid.stretch, "sim.sgrid");
  }
  if (!s.contains("modes") || !s.at("modes").is_array()) bad("sim.modes", "must be a list");
  for (const auto& m : s.at("modes")) {
    ModeInit init;
    init.n = integer(m, "n", "sim.modes[]");
    init.u = number_or(m, "u", 0.0, "sim.modes[]");
    init.v = number_or(m, "v", 0.0, "sim.modes[]");
    init.phi = number_or(m, "phi", 0.0, "sim.modes[]");
    init.psi = number_or(m, "psi", 0.0, "sim.modes[]");
    init.theta = number_or(m, "theta", 0.0, "sim.modes[]");
    cfg.modes.push_back(init);
  }
  validate_sim_config(cfg);
  return cfg;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) bad("config", "must be an object");
  static const std::set<std::string> known = {"material", "kernel", "sim", "scan", "resolvent", "fit"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) bad(it.key(), "is not a recognised section");
  }
  ExperimentConfig cfg;
  if (j.contains("material")) cfg.material = parse_material(block(j, "material"));
  if (j.contains("kernel")) cfg.kernel = parse_kernel(j.at("kernel"));
  if (j.contains("sim")) {
    const auto& s = block(j, "sim");
    cfg.sim = parse_sim(s);
    if (s.contains("phi_means")) {
      if (!cfg.material) bad("material", "is required when sim.phi_means is given");
      const auto& m = s.at("phi_means");
      cfg.mean = make_mean_trace(*cfg.material, number(m, "phi0", "sim.phi_means"),
                                 number(m, "phi1", "sim.phi_means"));
    }
  }
  if (j.contains("scan")) {
    cfg.scan_n_max = integer(block(j, "scan"), "n_max", "scan");
    if (*cfg.scan_n_max < 1) bad("scan.n_max", "must be >= 1");
  }
  if (j.contains("resolvent")) {
    const auto& r = block(j, "resolvent");
    if (!r.contains("n_list") || !r.at("n_list").is_array() || r.at("n_list").empty()) {
      bad("resolvent.n_list", "must be a non-empty list of integers");
    }
    std::vector<int> ns;
    for (const auto& v : r.at("n_list")) {
      if (!v.is_number_integer() || v.get<int>() < 1) bad("resolvent.n_list", "entries must be integers >= 1");
      ns.push_back(v.get<int>());
    }
    cfg.resolvent_n_list = std::move(ns);
  }
  if (j.contains("fit")) {
    const auto& f = block(j, "fit");
    FitWindow w{number(f, "t_start", "fit"), number(f, "t_end", "fit"), std::nullopt};
    if (!(w.t_end > w.t_start)) bad("fit", "needs t_end > t_start");
    if (f.contains("series")) {
      if (!f.at("series").is_string()) bad("fit.series", "must be a path string");
      w.series = f.at("series").get<std::string>();
    }
    cfg.fit = w;
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidConfig, "cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw Error(Errc::InvalidConfig, "config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(j);
}

}  // namespace gpl
