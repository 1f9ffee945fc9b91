#include "loclab/experiment.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "loclab/csv.hpp"
#include "loclab/fermi.hpp"
#include "loclab/hamiltonian.hpp"
#include "loclab/localization.hpp"
#include "loclab/msa.hpp"
#include "loclab/spectral.hpp"
#include "loclab/stats.hpp"
#include "loclab/version.hpp"
#include "loclab/weights.hpp"

namespace loclab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Deterministic parallel map: slot i always receives the result for
// realization i, whatever the thread count.
template <typename F>
void parallel_for(int n, int threads, F&& fn) {
  int t = threads > 0 ? threads : int(std::thread::hardware_concurrency());
  t = std::max(1, std::min(t, n));
  if (t <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  for (int w = 0; w < t; ++w)
    pool.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
          next.store(n);
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Pair at sup-distance r along the first axis, symmetric about the center so
// both sites keep the same margin from the boundary.
std::pair<Site, Site> separation_pair(int r) {
  return {Site{-(r / 2), 0}, Site{r - r / 2, 0}};
}

struct RunContext {
  fs::path run_dir;
  std::vector<fs::path> outputs;

  fs::path file(const std::string& name) {
    outputs.push_back(run_dir / name);
    return outputs.back();
  }
};

json fit_to_json(const DecayFit& fit) {
  json j;
  j["model"] = to_string(fit.model);
  j["amplitude"] = fit.amplitude;
  j["rate"] = fit.rate;
  j["zeta"] = fit.zeta;
  j["epsilon"] = fit.epsilon;
  j["r2"] = fit.r2;
  j["zeta_reliable"] = fit.zeta_reliable;
  j["window"] = {fit.window.lo, fit.window.hi};
  j["n_points"] = fit.n_points;
  return j;
}

json estimate_to_json(const EnsembleEstimate& est) {
  json j;
  j["separation"] = est.separation;
  j["mean"] = est.mean;
  j["stderr"] = est.stderror;
  j["count"] = est.count;
  return j;
}

void write_ensemble_csv(RunContext& ctx, const std::string& name,
                        const EnsembleEstimate& est) {
  CsvWriter csv(ctx.file(name), {"r", "mean", "stderr", "count"});
  for (size_t i = 0; i < est.separation.size(); ++i)
    csv.write_row({format_number(est.separation[i]), format_number(est.mean[i]),
                   format_number(est.stderror[i]), format_number(est.count[i])});
}

// Ensemble of per-separation decay samples (sudec sup-products or fermi
// kernel sups), written as samples.csv + ensemble.csv + a decay fit.
void run_decay_ensemble(const RunConfig& cfg, RunContext& ctx, json& summary,
                        DecayModel default_model,
                        const std::function<Real(const EigenSolution&,
                                                 const std::vector<EigenCluster>&, Index,
                                                 Index, int)>& sample_fn) {
  const Box box(cfg.dim, {0, 0}, cfg.side);
  const Real kappa = effective_kappa(cfg);
  const int sep_lo = cfg.sep_min;
  const int sep_hi = effective_sep_max(cfg);
  if (sep_hi < sep_lo) throw InvalidParameter("separation range is empty");

  std::vector<Index> x_idx, y_idx;
  std::vector<int> seps;
  for (int r = sep_lo; r <= sep_hi; ++r) {
    const auto [x, y] = separation_pair(r);
    if (!box.contains(x) || !box.contains(y)) break;
    seps.push_back(r);
    x_idx.push_back(box.index_of(x));
    y_idx.push_back(box.index_of(y));
  }
  if (seps.empty()) throw InvalidParameter("no separations fit inside the box");

  const DisorderSpec base = disorder_of(cfg);
  const Index max_matrix = effective_max_matrix(cfg);
  std::vector<std::vector<Real>> values(size_t(cfg.realizations));
  parallel_for(cfg.realizations, cfg.threads, [&](int k) {
    const auto ham = build_hamiltonian(box, at_realization(base, std::uint64_t(k)), max_matrix);
    const EigenSolution sol = eigendecompose(ham.matrix, cfg.residual_tol);
    const auto clusters =
        cluster_eigenvalues(sol, cfg.cluster_tol_rel * std::max<Real>(1.0, ham.matrix.cwiseAbs().maxCoeff()));
    std::vector<Real> row(seps.size());
    for (size_t i = 0; i < seps.size(); ++i)
      row[i] = sample_fn(sol, clusters, x_idx[i], y_idx[i], seps[i]);
    values[size_t(k)] = std::move(row);
  });

  {
    CsvWriter csv(ctx.file("samples.csv"), {"realization", "r", "value"});
    for (int k = 0; k < cfg.realizations; ++k)
      for (size_t i = 0; i < seps.size(); ++i)
        csv.write_row({format_number(k), format_number(seps[i]),
                       format_number(values[size_t(k)][i])});
  }

  std::map<Real, std::vector<Real>> groups;
  for (int k = 0; k < cfg.realizations; ++k)
    for (size_t i = 0; i < seps.size(); ++i)
      groups[Real(seps[i])].push_back(values[size_t(k)][i]);
  const EnsembleEstimate est = ensemble_mean(groups);
  write_ensemble_csv(ctx, "ensemble.csv", est);

  const DecayModel model =
      cfg.fit_model.empty() ? default_model : decay_model_from_string(cfg.fit_model);
  const Interval window{cfg.fit_rmin > 0 ? cfg.fit_rmin : Real(sep_lo),
                        cfg.fit_rmax > 0 ? cfg.fit_rmax : Real(seps.back())};
  summary["ensemble"] = estimate_to_json(est);
  summary["kappa"] = kappa;
  summary["separations"] = seps;
  const DecayFit fit = fit_decay(est, model, window, cfg.r2_floor);
  summary["fit"] = fit_to_json(fit);
}

void run_spectrum(const RunConfig& cfg, RunContext& ctx, json& summary) {
  const Box box(cfg.dim, {0, 0}, cfg.side);
  const DisorderSpec base = disorder_of(cfg);
  const Index max_matrix = effective_max_matrix(cfg);

  std::vector<EigenSolution> sols(size_t(cfg.realizations));
  std::vector<Real> cluster_tols(size_t(cfg.realizations));
  parallel_for(cfg.realizations, cfg.threads, [&](int k) {
    const auto ham = build_hamiltonian(box, at_realization(base, std::uint64_t(k)), max_matrix);
    cluster_tols[size_t(k)] =
        cfg.cluster_tol_rel * std::max<Real>(1.0, ham.matrix.cwiseAbs().maxCoeff());
    sols[size_t(k)] = eigendecompose(ham.matrix, cfg.residual_tol);
  });

  Real lo = 0, hi = 0;
  std::map<int, long> histogram;
  {
    CsvWriter eig_csv(ctx.file("eigenvalues.csv"), {"realization", "index", "eigenvalue"});
    CsvWriter cl_csv(ctx.file("clusters.csv"),
                     {"realization", "cluster", "eigenvalue", "multiplicity"});
    for (int k = 0; k < cfg.realizations; ++k) {
      const auto& sol = sols[size_t(k)];
      for (Index i = 0; i < sol.eigenvalues.size(); ++i)
        eig_csv.write_row(
            {format_number(k), format_number(long(i)), format_number(sol.eigenvalues[i])});
      const auto clusters = cluster_eigenvalues(sol, cluster_tols[size_t(k)]);
      for (size_t c = 0; c < clusters.size(); ++c) {
        cl_csv.write_row({format_number(k), format_number(long(c)),
                          format_number(clusters[c].value),
                          format_number(clusters[c].multiplicity)});
        ++histogram[clusters[c].multiplicity];
      }
      lo = k == 0 ? sol.eigenvalues.minCoeff() : std::min(lo, sol.eigenvalues.minCoeff());
      hi = k == 0 ? sol.eigenvalues.maxCoeff() : std::max(hi, sol.eigenvalues.maxCoeff());
    }
  }
  summary["spectrum_min"] = lo;
  summary["spectrum_max"] = hi;
  json hist = json::object();
  for (const auto& [nu, count] : histogram) hist[std::to_string(nu)] = count;
  summary["multiplicity_histogram"] = hist;
}

void run_msa(const RunConfig& cfg, RunContext& ctx, json& summary) {
  ScaleSequence seq{cfg.scale_l0, cfg.alpha, cfg.zeta};
  MsaOptions opt;
  opt.eta = cfg.eta;
  opt.max_refine = cfg.max_refine;
  opt.pivot_rel_tol = cfg.pivot_rel_tol;
  const auto rows = run_scale_sequence(seq, cfg.dim, cfg.mass, interval_of(cfg),
                                       cfg.realizations, disorder_of(cfg), opt,
                                       effective_max_matrix(cfg), cfg.max_scales);

  CsvWriter csv(ctx.file("scales.csv"),
                {"k", "L", "n", "p_hat", "stderr", "bound", "consistent"});
  json scale_rows = json::array();
  bool all_consistent = true;
  for (const auto& row : rows) {
    csv.write_row({format_number(row.k), format_number(row.side), format_number(row.n),
                   format_number(row.p_hat), format_number(row.stderror),
                   format_number(row.bound), row.consistent ? "1" : "0"});
    json jr;
    jr["k"] = row.k;
    jr["L"] = row.side;
    jr["n"] = row.n;
    jr["p_hat"] = row.p_hat;
    jr["stderr"] = row.stderror;
    jr["bound"] = row.bound;
    jr["consistent"] = row.consistent;
    scale_rows.push_back(jr);
    all_consistent = all_consistent && row.consistent;
  }
  summary["scales"] = scale_rows;
  summary["all_consistent"] = all_consistent;
  summary["eta_effective"] =
      cfg.eta > 0 ? cfg.eta : interval_of(cfg).width() / 64.0;
  summary["max_refine"] = cfg.max_refine;
}

void run_sudec(const RunConfig& cfg, RunContext& ctx, json& summary) {
  const Box box(cfg.dim, {0, 0}, cfg.side);
  const Real kappa = effective_kappa(cfg);
  const Interval interval = interval_of(cfg);

  // weight vectors per separation endpoint, shared across realizations;
  // fully built up front so the parallel phase only reads
  std::map<int, Vector> weights;
  for (int r = cfg.sep_min; r <= effective_sep_max(cfg); ++r) {
    const auto [x, y] = separation_pair(r);
    if (!box.contains(x) || !box.contains(y)) break;
    weights.try_emplace(x.x, weight_vector(box, x, kappa));
    weights.try_emplace(y.x, weight_vector(box, y, kappa));
  }

  run_decay_ensemble(cfg, ctx, summary, DecayModel::Stretched,
                     [&](const EigenSolution&, const std::vector<EigenCluster>& clusters,
                         Index xi, Index yi, int r) {
                       const auto [x, y] = separation_pair(r);
                       return sudec_sup_product(clusters, interval, xi, weights.at(x.x), yi,
                                                weights.at(y.x));
                     });
  summary["bound_wz"] = correlation_bound(cfg.dim, kappa);
}

void run_fermi(const RunConfig& cfg, RunContext& ctx, json& summary) {
  const Interval interval = interval_of(cfg);
  run_decay_ensemble(cfg, ctx, summary, DecayModel::Exp,
                     [&](const EigenSolution& sol, const std::vector<EigenCluster>&, Index xi,
                         Index yi, int) { return fermi_kernel_sup(sol, interval, xi, yi); });
}

void run_sule(const RunConfig& cfg, RunContext& ctx, json& summary) {
  const Box box(cfg.dim, {0, 0}, cfg.side);
  const Real kappa = effective_kappa(cfg);
  const Interval interval = interval_of(cfg);
  const auto sites = box.sites();
  const Vector weights_origin = weight_vector(box, {0, 0}, kappa);
  const Real total_mass = weights_origin.array().square().inverse().sum();

  // W/Z output restricted to the first-axis row through the center
  std::vector<Site> row_sites;
  for (int r = -cfg.side / 2; r < cfg.side / 2; ++r) row_sites.push_back({r, 0});
  std::vector<Vector> row_weights;
  row_weights.reserve(row_sites.size());
  for (const Site a : row_sites) row_weights.push_back(weight_vector(box, a, kappa));

  const DisorderSpec base = disorder_of(cfg);
  const Index max_matrix = effective_max_matrix(cfg);

  struct PerRealization {
    std::vector<SuleRecord> records;
    std::vector<EigenCluster> clusters;
    MultiplicityHistogram histogram;
    Real max_alpha_gap = 0;   // max |sum_j alpha_nj - mu({E_n})|
    Real total_gap = 0;       // |sum_n mu({E_n}) - tr T^-2|
  };
  std::vector<PerRealization> results(size_t(cfg.realizations));

  parallel_for(cfg.realizations, cfg.threads, [&](int k) {
    const auto ham = build_hamiltonian(box, at_realization(base, std::uint64_t(k)), max_matrix);
    const EigenSolution sol = eigendecompose(ham.matrix, cfg.residual_tol);
    const Real tol =
        cfg.cluster_tol_rel * std::max<Real>(1.0, ham.matrix.cwiseAbs().maxCoeff());
    PerRealization out;
    out.clusters = cluster_eigenvalues(sol, tol);
    out.records = sule_centers(out.clusters, sites, weights_origin, interval);
    out.histogram = multiplicity_histogram(out.clusters, weights_origin);
    Real mass_sum = 0;
    for (const auto& rec : out.records)
      out.max_alpha_gap = std::max(out.max_alpha_gap, std::abs(rec.alpha_sum - rec.mu_atom));
    for (const auto& cluster : out.clusters)
      mass_sum += cluster_measure_mass(cluster, weights_origin);
    out.total_gap = std::abs(mass_sum - total_mass);
    results[size_t(k)] = std::move(out);
  });

  Real max_alpha_gap = 0, max_total_gap = 0;
  std::map<int, long> histogram;
  Real max_mass_nu = 0;
  {
    CsvWriter cl_csv(ctx.file("clusters.csv"),
                     {"realization", "n", "j", "eigenvalue", "multiplicity", "center_x",
                      "center_y", "alpha"});
    CsvWriter nl_csv(ctx.file("nl.csv"), {"realization", "L", "N_L", "L_pow_d"});
    CsvWriter wz_csv(ctx.file("wz.csv"),
                     {"realization", "n", "site_x", "site_y", "W", "Z"});
    for (int k = 0; k < cfg.realizations; ++k) {
      const auto& res = results[size_t(k)];
      for (const auto& rec : res.records)
        for (size_t j = 0; j < rec.alpha.size(); ++j)
          cl_csv.write_row({format_number(k), format_number(rec.cluster_index),
                            format_number(long(j)), format_number(rec.eigenvalue),
                            format_number(rec.multiplicity), format_number(rec.center.x),
                            format_number(rec.center.y), format_number(rec.alpha[j])});
      for (int radius = 1; radius <= cfg.side / 2; ++radius) {
        const long nl = count_NL(res.records, radius);
        long lpow = radius;
        if (cfg.dim == 2) lpow *= radius;
        nl_csv.write_row({format_number(k), format_number(radius), format_number(nl),
                          format_number(lpow)});
      }
      for (const auto& rec : res.records) {
        const auto& cluster = res.clusters[size_t(rec.cluster_index)];
        for (size_t s = 0; s < row_sites.size(); ++s) {
          const Index idx = box.index_of(row_sites[s]);
          wz_csv.write_row({format_number(k), format_number(rec.cluster_index),
                            format_number(row_sites[s].x), format_number(row_sites[s].y),
                            format_number(compute_W(cluster, idx, row_weights[s])),
                            format_number(compute_Z(cluster, idx, row_weights[s]))});
        }
      }
      max_alpha_gap = std::max(max_alpha_gap, res.max_alpha_gap);
      max_total_gap = std::max(max_total_gap, res.total_gap);
      for (const auto& [nu, count] : res.histogram.counts) histogram[nu] += count;
      max_mass_nu = std::max(max_mass_nu, res.histogram.max_mass_times_multiplicity);
    }
  }

  json hist = json::object();
  for (const auto& [nu, count] : histogram) hist[std::to_string(nu)] = count;
  summary["multiplicity_histogram"] = hist;
  summary["max_mass_times_multiplicity"] = max_mass_nu;
  summary["max_alpha_sum_gap"] = max_alpha_gap;
  summary["max_total_mass_gap"] = max_total_gap;
  summary["total_mass"] = total_mass;
  summary["kappa"] = kappa;
  summary["bound_wz"] = correlation_bound(cfg.dim, kappa);
}

void run_transport(const RunConfig& cfg, RunContext& ctx, json& summary) {
  const Box box(cfg.dim, {0, 0}, cfg.side);
  const Interval interval = interval_of(cfg);
  const SmoothBump bump(interval);
  const auto sites = box.sites();
  const Index source = box.index_of({0, 0});
  const DisorderSpec base = disorder_of(cfg);
  const Index max_matrix = effective_max_matrix(cfg);

  std::vector<std::vector<Real>> moments(size_t(cfg.realizations));
  parallel_for(cfg.realizations, cfg.threads, [&](int k) {
    const auto ham = build_hamiltonian(box, at_realization(base, std::uint64_t(k)), max_matrix);
    const EigenSolution sol = eigendecompose(ham.matrix, cfg.residual_tol);
    std::vector<Real> row;
    row.reserve(cfg.times.size());
    for (const Real t : cfg.times)
      row.push_back(transport_moment(sol, cfg.moment_order, bump, t, sites, source));
    moments[size_t(k)] = std::move(row);
  });

  {
    CsvWriter csv(ctx.file("moments.csv"), {"realization", "n", "T", "moment"});
    for (int k = 0; k < cfg.realizations; ++k)
      for (size_t i = 0; i < cfg.times.size(); ++i)
        csv.write_row({format_number(k), format_number(cfg.moment_order),
                       format_number(cfg.times[i]), format_number(moments[size_t(k)][i])});
  }

  std::vector<Real> means(cfg.times.size(), 0.0);
  for (int k = 0; k < cfg.realizations; ++k)
    for (size_t i = 0; i < cfg.times.size(); ++i) means[i] += moments[size_t(k)][i];
  for (Real& m : means) m /= cfg.realizations;
  summary["times"] = cfg.times;
  summary["mean_moment"] = means;
  if (cfg.times.size() >= 2 && means.front() > 0)
    summary["growth_ratio"] = means.back() / means.front();
}

}  // namespace

RunResult run_experiment(const RunConfig& cfg) {
  validate(cfg);

  RunResult result;
  result.run_dir = fs::path(cfg.outdir) / cfg.experiment;
  fs::create_directories(result.run_dir);

  RunContext ctx;
  ctx.run_dir = result.run_dir;

  json summary;
  summary["experiment"] = cfg.experiment;
  std::string error;
  try {
    if (cfg.experiment == "spectrum") run_spectrum(cfg, ctx, summary);
    else if (cfg.experiment == "msa") run_msa(cfg, ctx, summary);
    else if (cfg.experiment == "sudec") run_sudec(cfg, ctx, summary);
    else if (cfg.experiment == "sule") run_sule(cfg, ctx, summary);
    else if (cfg.experiment == "fermi") run_fermi(cfg, ctx, summary);
    else if (cfg.experiment == "transport") run_transport(cfg, ctx, summary);
  } catch (const ResourceLimit& e) {
    error = std::string("resource limit: ") + e.what();
  } catch (const FitInfeasible& e) {
    error = std::string("fit infeasible: ") + e.what();
  }

  {
    const fs::path path = ctx.file("summary.json");
    std::ofstream out(path);
    out << summary.dump(2) << '\n';
  }

  json manifest;
  manifest["version"] = kVersion;
  manifest["timestamp"] = timestamp_utc();
  manifest["status"] = error.empty() ? "ok" : "error";
  if (!error.empty()) manifest["error"] = error;
  json config_json = json::object();
  for (const auto& [key, value] : to_key_values(cfg)) config_json[key] = value;
  manifest["config"] = config_json;
  json outputs = json::object();
  for (const auto& path : ctx.outputs)
    outputs[path.filename().string()] = file_checksum(path);
  manifest["outputs"] = outputs;

  result.manifest_path = result.run_dir / "manifest.json";
  {
    std::ofstream out(result.manifest_path);
    out << manifest.dump(2) << '\n';
  }
  result.exit_code = error.empty() ? 0 : 1;
  return result;
}

}  // namespace loclab
