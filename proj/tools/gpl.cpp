// Command-line front end: gpl <stability|scan|simulate|resolvent|fit> --config <path> --out <dir>

#include <cstdlib>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "gpl/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Porous thermoelasticity with Gurtin-Pipkin heat conduction: stability laboratory"};
  app.require_subcommand(1, 1);

  std::string config;
  std::string out = ".";
  std::optional<double> tol;
  unsigned threads = 0;

  for (const char* name : {"stability", "scan", "simulate", "resolvent", "fit"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "experiment config (JSON)")->required();
    sub->add_option("--out", out, "output directory");
    sub->add_option("--tol", tol, "degeneracy tolerance for gamma_g and chi_g");
    sub->add_option("--threads", threads, "worker threads (env GPL_THREADS)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (threads == 0) {
    if (const char* env = std::getenv("GPL_THREADS")) threads = static_cast<unsigned>(std::atoi(env));
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  const auto cmd = gpl::parse_command(app.get_subcommands().front()->get_name());
  gpl::RunOptions opts{tol, threads};
  return gpl::run(*cmd, config, out, opts, std::cerr);
}
