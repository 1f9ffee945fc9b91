#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "loclab/disorder.hpp"
#include "loclab/types.hpp"

namespace loclab {

// One experiment run. Every field has a key with the same name in the flat
// key=value config file; command-line flags override file values.
struct RunConfig {
  std::string experiment;  // spectrum | msa | sudec | sule | fermi | transport

  // model
  int dim = 1;
  int side = 60;
  Real lambda = 1.0;
  std::string distribution = "uniform";  // uniform | uniform01 | bernoulli
  Real bernoulli_p = 0.5;
  Real interval_lo = -0.5;
  Real interval_hi = 0.5;
  Real kappa = 0;  // 0 -> (d+1)/2
  Real mass = 0.2;
  Real zeta = 0.5;
  Real alpha = 1.5;
  int scale_l0 = 6;
  int max_scales = 3;

  // ensemble
  int realizations = 100;
  std::uint64_t seed = 1;

  // numerics
  Real residual_tol = 1e-9;
  Real cluster_tol_rel = 1e-8;
  Real pivot_rel_tol = 1e-12;
  Real eta = 0;  // certification cell half-width; 0 -> |I|/64
  int max_refine = 6;
  int sep_min = 1;
  int sep_max = 0;  // 0 -> 2L/3 - 2 (keeps both sites L/6 off the boundary)
  Real fit_rmin = 0;
  Real fit_rmax = 0;  // 0 -> full separation range
  std::string fit_model;  // empty -> experiment default (fermi: exp, sudec: stretched)
  Real r2_floor = 0.5;

  // transport
  Real moment_order = 2;
  std::vector<Real> times = {10.0, 50.0};

  std::string outdir = "out";
  long max_matrix = 0;  // 0 -> LOCLAB_MAX_MATRIX or 12000
  int threads = 0;      // 0 -> hardware concurrency
};

void validate(const RunConfig& cfg);

Distribution distribution_from_string(const std::string& name);

// Set one field by key; throws InvalidParameter naming the key on unknown
// keys or unparsable values.
void apply_key_value(RunConfig& cfg, const std::string& key, const std::string& value);

// Flat key=value text ('#' comments, blank lines ignored).
void load_config_file(RunConfig& cfg, const std::filesystem::path& path);

// Lossless round trip through apply_key_value.
std::map<std::string, std::string> to_key_values(const RunConfig& cfg);

// Resolved values used by experiments.
Real effective_kappa(const RunConfig& cfg);
int effective_sep_max(const RunConfig& cfg);
Index effective_max_matrix(const RunConfig& cfg);
Interval interval_of(const RunConfig& cfg);
DisorderSpec disorder_of(const RunConfig& cfg);

}  // namespace loclab
