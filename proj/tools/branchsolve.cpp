#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "branchsolve/app.hpp"
#include "branchsolve/error.hpp"

int main(int argc, char** argv) {
  CLI::App cli{"Branched multivalued Poisson and minimal surface solver"};
  std::string command, config_path, out;
  int threads = 0;
  long long seed = -1;
  cli.add_option("command", command, "solve-poisson | solve-nonlinear | diagnose | gen-example | cross-check")
      ->required()
      ->check(CLI::IsMember({"solve-poisson", "solve-nonlinear", "diagnose", "gen-example", "cross-check"}));
  cli.add_option("--config", config_path, "key = value run description")->required();
  cli.add_option("--out", out, "output directory (overrides the config)");
  cli.add_option("--threads", threads, "worker threads (default: BRANCHSOLVE_THREADS, then the config)")
      ->check(CLI::PositiveNumber);
  cli.add_option("--seed", seed, "seed for sampled quantities")->check(CLI::NonNegativeNumber);
  CLI11_PARSE(cli, argc, argv);

  branchsolve::RunConfig cfg;
  try {
    cfg = branchsolve::load_config(config_path);
  } catch (const branchsolve::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return branchsolve::kExitIo;
  } catch (const branchsolve::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return branchsolve::kExitInvariant;
  }
  cfg.command = command;
  if (!out.empty()) cfg.out = out;
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  if (threads > 0) {
    cfg.threads = threads;
  } else if (const char* env = std::getenv("BRANCHSOLVE_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) cfg.threads = t;
  }
  if (cfg.threads <= 0) cfg.threads = 1;
  return branchsolve::run(cfg, std::cerr);
}
