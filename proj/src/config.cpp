#include "loclab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "loclab/csv.hpp"
#include "loclab/hamiltonian.hpp"
#include "loclab/stats.hpp"
#include "loclab/weights.hpp"

namespace loclab {

namespace {

const std::vector<std::string> kExperiments = {"spectrum", "msa",   "sudec",
                                               "sule",     "fermi", "transport"};

Real parse_real(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const Real v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw InvalidParameter("config key '" + key + "': cannot parse real from '" + value + "'");
  }
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw InvalidParameter("config key '" + key + "': cannot parse integer from '" + value +
                           "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw InvalidParameter("config key '" + key + "': cannot parse seed from '" + value + "'");
  }
}

std::vector<Real> parse_real_list(const std::string& key, const std::string& value) {
  std::vector<Real> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(key, item));
  if (out.empty()) throw InvalidParameter("config key '" + key + "': empty list");
  return out;
}

std::string join_reals(const std::vector<Real>& values) {
  std::string out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_number(values[i]);
  }
  return out;
}

}  // namespace

Distribution distribution_from_string(const std::string& name) {
  if (name == "uniform") return Distribution::UniformSym;
  if (name == "uniform01") return Distribution::UniformPos;
  if (name == "bernoulli") return Distribution::Bernoulli;
  throw InvalidParameter("unknown distribution '" + name +
                         "' (expected uniform, uniform01 or bernoulli)");
}

void validate(const RunConfig& cfg) {
  if (std::find(kExperiments.begin(), kExperiments.end(), cfg.experiment) == kExperiments.end())
    throw InvalidParameter("unknown experiment '" + cfg.experiment + "'");
  if (cfg.dim != 1 && cfg.dim != 2) throw InvalidParameter("config key 'dim': must be 1 or 2");
  if (cfg.side < 2 || cfg.side % 2 != 0)
    throw InvalidParameter("config key 'side': must be a positive even integer");
  if (cfg.lambda < 0) throw InvalidParameter("config key 'lambda': must be >= 0");
  distribution_from_string(cfg.distribution);
  if (cfg.bernoulli_p < 0 || cfg.bernoulli_p > 1)
    throw InvalidParameter("config key 'bernoulli_p': must lie in [0, 1]");
  if (!(cfg.interval_lo < cfg.interval_hi))
    throw InvalidParameter("config key 'interval': requires lo < hi");
  if (cfg.kappa != 0 && !(cfg.kappa > 0.5 * cfg.dim))
    throw InvalidParameter("config key 'kappa': must exceed d/2 (or 0 for the default)");
  if (!(cfg.mass > 0)) throw InvalidParameter("config key 'mass': must be > 0");
  if (!(cfg.zeta > 0 && cfg.zeta < 1))
    throw InvalidParameter("config key 'zeta': must lie in (0, 1)");
  if (!(cfg.alpha > 1 && cfg.alpha < 1.0 / cfg.zeta))
    throw InvalidParameter("config key 'alpha': must lie in (1, 1/zeta)");
  if (cfg.scale_l0 < 6 || cfg.scale_l0 % 6 != 0)
    throw InvalidParameter("config key 'scale_l0': must be a positive multiple of 6");
  if (cfg.max_scales < 1) throw InvalidParameter("config key 'max_scales': must be >= 1");
  if (cfg.realizations < 1)
    throw InvalidParameter("config key 'realizations': must be >= 1");
  if (cfg.eta < 0) throw InvalidParameter("config key 'eta': must be >= 0");
  if (cfg.max_refine < 0) throw InvalidParameter("config key 'max_refine': must be >= 0");
  if (cfg.sep_min < 1) throw InvalidParameter("config key 'sep_min': must be >= 1");
  if (cfg.sep_max < 0) throw InvalidParameter("config key 'sep_max': must be >= 0");
  if (!cfg.fit_model.empty()) decay_model_from_string(cfg.fit_model);
  if (!(cfg.moment_order > 0))
    throw InvalidParameter("config key 'moment_order': must be > 0");
  for (const Real t : cfg.times)
    if (!(t > 0)) throw InvalidParameter("config key 'times': entries must be > 0");
  if (cfg.max_matrix < 0) throw InvalidParameter("config key 'max_matrix': must be >= 0");
  if (cfg.threads < 0) throw InvalidParameter("config key 'threads': must be >= 0");
}

void apply_key_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  static const std::map<std::string, std::function<void(RunConfig&, const std::string&)>>
      setters = {
          {"experiment", [](RunConfig& c, const std::string& v) { c.experiment = v; }},
          {"dim", [](RunConfig& c, const std::string& v) { c.dim = int(parse_long("dim", v)); }},
          {"side",
           [](RunConfig& c, const std::string& v) { c.side = int(parse_long("side", v)); }},
          {"lambda",
           [](RunConfig& c, const std::string& v) { c.lambda = parse_real("lambda", v); }},
          {"distribution", [](RunConfig& c, const std::string& v) { c.distribution = v; }},
          {"bernoulli_p",
           [](RunConfig& c, const std::string& v) { c.bernoulli_p = parse_real("bernoulli_p", v); }},
          {"interval_lo",
           [](RunConfig& c, const std::string& v) { c.interval_lo = parse_real("interval_lo", v); }},
          {"interval_hi",
           [](RunConfig& c, const std::string& v) { c.interval_hi = parse_real("interval_hi", v); }},
          {"kappa", [](RunConfig& c, const std::string& v) { c.kappa = parse_real("kappa", v); }},
          {"mass", [](RunConfig& c, const std::string& v) { c.mass = parse_real("mass", v); }},
          {"zeta", [](RunConfig& c, const std::string& v) { c.zeta = parse_real("zeta", v); }},
          {"alpha", [](RunConfig& c, const std::string& v) { c.alpha = parse_real("alpha", v); }},
          {"scale_l0",
           [](RunConfig& c, const std::string& v) { c.scale_l0 = int(parse_long("scale_l0", v)); }},
          {"max_scales",
           [](RunConfig& c, const std::string& v) { c.max_scales = int(parse_long("max_scales", v)); }},
          {"realizations",
           [](RunConfig& c, const std::string& v) {
             c.realizations = int(parse_long("realizations", v));
           }},
          {"seed", [](RunConfig& c, const std::string& v) { c.seed = parse_u64("seed", v); }},
          {"residual_tol",
           [](RunConfig& c, const std::string& v) { c.residual_tol = parse_real("residual_tol", v); }},
          {"cluster_tol_rel",
           [](RunConfig& c, const std::string& v) {
             c.cluster_tol_rel = parse_real("cluster_tol_rel", v);
           }},
          {"pivot_rel_tol",
           [](RunConfig& c, const std::string& v) {
             c.pivot_rel_tol = parse_real("pivot_rel_tol", v);
           }},
          {"eta", [](RunConfig& c, const std::string& v) { c.eta = parse_real("eta", v); }},
          {"max_refine",
           [](RunConfig& c, const std::string& v) { c.max_refine = int(parse_long("max_refine", v)); }},
          {"sep_min",
           [](RunConfig& c, const std::string& v) { c.sep_min = int(parse_long("sep_min", v)); }},
          {"sep_max",
           [](RunConfig& c, const std::string& v) { c.sep_max = int(parse_long("sep_max", v)); }},
          {"fit_rmin",
           [](RunConfig& c, const std::string& v) { c.fit_rmin = parse_real("fit_rmin", v); }},
          {"fit_rmax",
           [](RunConfig& c, const std::string& v) { c.fit_rmax = parse_real("fit_rmax", v); }},
          {"fit_model", [](RunConfig& c, const std::string& v) { c.fit_model = v; }},
          {"r2_floor",
           [](RunConfig& c, const std::string& v) { c.r2_floor = parse_real("r2_floor", v); }},
          {"moment_order",
           [](RunConfig& c, const std::string& v) { c.moment_order = parse_real("moment_order", v); }},
          {"times",
           [](RunConfig& c, const std::string& v) { c.times = parse_real_list("times", v); }},
          {"outdir", [](RunConfig& c, const std::string& v) { c.outdir = v; }},
          {"max_matrix",
           [](RunConfig& c, const std::string& v) { c.max_matrix = parse_long("max_matrix", v); }},
          {"threads",
           [](RunConfig& c, const std::string& v) { c.threads = int(parse_long("threads", v)); }},
      };
  const auto it = setters.find(key);
  if (it == setters.end()) throw InvalidParameter("unknown config key '" + key + "'");
  it->second(cfg, value);
}

void load_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidParameter(path.string() + ":" + std::to_string(lineno) +
                             ": expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    apply_key_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

std::map<std::string, std::string> to_key_values(const RunConfig& cfg) {
  return {
      {"experiment", cfg.experiment},
      {"dim", format_number(cfg.dim)},
      {"side", format_number(cfg.side)},
      {"lambda", format_number(cfg.lambda)},
      {"distribution", cfg.distribution},
      {"bernoulli_p", format_number(cfg.bernoulli_p)},
      {"interval_lo", format_number(cfg.interval_lo)},
      {"interval_hi", format_number(cfg.interval_hi)},
      {"kappa", format_number(cfg.kappa)},
      {"mass", format_number(cfg.mass)},
      {"zeta", format_number(cfg.zeta)},
      {"alpha", format_number(cfg.alpha)},
      {"scale_l0", format_number(cfg.scale_l0)},
      {"max_scales", format_number(cfg.max_scales)},
      {"realizations", format_number(cfg.realizations)},
      {"seed", std::to_string(cfg.seed)},
      {"residual_tol", format_number(cfg.residual_tol)},
      {"cluster_tol_rel", format_number(cfg.cluster_tol_rel)},
      {"pivot_rel_tol", format_number(cfg.pivot_rel_tol)},
      {"eta", format_number(cfg.eta)},
      {"max_refine", format_number(cfg.max_refine)},
      {"sep_min", format_number(cfg.sep_min)},
      {"sep_max", format_number(cfg.sep_max)},
      {"fit_rmin", format_number(cfg.fit_rmin)},
      {"fit_rmax", format_number(cfg.fit_rmax)},
      {"fit_model", cfg.fit_model},
      {"r2_floor", format_number(cfg.r2_floor)},
      {"moment_order", format_number(cfg.moment_order)},
      {"times", join_reals(cfg.times)},
      {"outdir", cfg.outdir},
      {"max_matrix", format_number(cfg.max_matrix)},
      {"threads", format_number(cfg.threads)},
  };
}

Real effective_kappa(const RunConfig& cfg) {
  return cfg.kappa > 0 ? cfg.kappa : default_kappa(cfg.dim);
}

int effective_sep_max(const RunConfig& cfg) {
  if (cfg.sep_max > 0) return cfg.sep_max;
  return std::max(cfg.sep_min, 2 * cfg.side / 3 - 2);
}

Index effective_max_matrix(const RunConfig& cfg) {
  return cfg.max_matrix > 0 ? Index(cfg.max_matrix) : default_max_matrix();
}

Interval interval_of(const RunConfig& cfg) {
  return make_interval(cfg.interval_lo, cfg.interval_hi);
}

DisorderSpec disorder_of(const RunConfig& cfg) {
  DisorderSpec spec;
  spec.distribution = distribution_from_string(cfg.distribution);
  spec.coupling = cfg.lambda;
  spec.bernoulli_p = cfg.bernoulli_p;
  spec.master_seed = cfg.seed;
  spec.realization = 0;
  return spec;
}

}  // namespace loclab
