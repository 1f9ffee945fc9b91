#pragma once

#include <filesystem>
#include <string>

#include "loclab/config.hpp"

namespace loclab {

struct RunResult {
  int exit_code = 0;
  std::filesystem::path run_dir;       // <outdir>/<experiment>
  std::filesystem::path manifest_path; // run_dir / manifest.json, written last
};

// Runs one experiment: CSV outputs per module contract, summary.json with
// fits/histograms/consistency checks, manifest.json as the atomic completion
// marker. Resource and fit failures are recorded in the manifest and yield a
// nonzero exit code.
RunResult run_experiment(const RunConfig& cfg);

}  // namespace loclab
