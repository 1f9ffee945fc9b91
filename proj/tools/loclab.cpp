#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "loclab/experiment.hpp"
#include "loclab/version.hpp"

namespace {

// Locate --config before the main parse so file values load first and
// command-line flags override them.
std::string find_config_arg(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  loclab::RunConfig cfg;

  const std::string config_path = find_config_arg(argc, argv);
  if (!config_path.empty()) {
    try {
      loclab::load_config_file(cfg, config_path);
    } catch (const loclab::Error& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 2;
    }
  }

  CLI::App app{"loclab: finite-volume Anderson localization laboratory"};
  app.set_version_flag("--version", loclab::kVersion);
  app.fallthrough();

  std::string config_dummy;
  app.add_option("--config", config_dummy, "flat key=value config file (flags override)");

  std::vector<double> interval;
  app.add_option("--interval", interval, "energy interval lo,hi")
      ->delimiter(',')
      ->expected(2);
  std::vector<double> times;
  app.add_option("--times", times, "transport time scales")->delimiter(',');

  app.add_option("--dim", cfg.dim, "lattice dimension (1 or 2)");
  app.add_option("--side", cfg.side, "box side L (positive even integer)");
  app.add_option("--lambda", cfg.lambda, "disorder coupling");
  app.add_option("--distribution", cfg.distribution, "uniform | uniform01 | bernoulli");
  app.add_option("--bernoulli-p", cfg.bernoulli_p, "P(v = +1) for bernoulli");
  app.add_option("--kappa", cfg.kappa, "weight exponent (0: default (d+1)/2)");
  app.add_option("--mass", cfg.mass, "regularity mass m");
  app.add_option("--zeta", cfg.zeta, "scale exponent zeta in (0,1)");
  app.add_option("--alpha", cfg.alpha, "scale growth alpha in (1, 1/zeta)");
  app.add_option("--scale-L0", cfg.scale_l0, "initial scale (multiple of 6)");
  app.add_option("--max-scales", cfg.max_scales, "number of scales to run");
  app.add_option("--realizations", cfg.realizations, "disorder realizations");
  app.add_option("--seed", cfg.seed, "master seed");
  app.add_option("--residual-tol", cfg.residual_tol, "eigensolver residual tolerance");
  app.add_option("--cluster-tol-rel", cfg.cluster_tol_rel, "cluster tolerance / ||H||");
  app.add_option("--pivot-rel-tol", cfg.pivot_rel_tol, "near-eigenvalue guard / ||H||");
  app.add_option("--eta", cfg.eta, "certification cell half-width (0: |I|/64)");
  app.add_option("--max-refine", cfg.max_refine, "certification refinement depth");
  app.add_option("--sep-min", cfg.sep_min, "smallest separation");
  app.add_option("--sep-max", cfg.sep_max, "largest separation (0: 2L/3 - 2)");
  app.add_option("--fit-rmin", cfg.fit_rmin, "fit window lower edge (0: sep range)");
  app.add_option("--fit-rmax", cfg.fit_rmax, "fit window upper edge (0: sep range)");
  app.add_option("--fit-model", cfg.fit_model, "exp | stretched | logpow");
  app.add_option("--r2-floor", cfg.r2_floor, "R^2 floor for reporting zeta");
  app.add_option("--moment-order", cfg.moment_order, "transport moment order n");
  app.add_option("--outdir", cfg.outdir, "output directory");
  app.add_option("--max-matrix", cfg.max_matrix, "matrix dimension cap (0: env/default)");
  app.add_option("--threads", cfg.threads, "worker threads (0: hardware)");

  app.require_subcommand(1);
  for (const char* name : {"spectrum", "msa", "sudec", "sule", "fermi", "transport"})
    app.add_subcommand(name)->fallthrough();

  CLI11_PARSE(app, argc, argv);

  cfg.experiment = app.get_subcommands().front()->get_name();
  if (interval.size() == 2) {
    cfg.interval_lo = interval[0];
    cfg.interval_hi = interval[1];
  }
  if (!times.empty()) cfg.times = times;

  try {
    const loclab::RunResult result = loclab::run_experiment(cfg);
    std::printf("%s -> %s\n", cfg.experiment.c_str(), result.run_dir.string().c_str());
    return result.exit_code;
  } catch (const loclab::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
