#include "loclab/stats.hpp"

#include <algorithm>
#include <cmath>

namespace loclab {

EnsembleEstimate ensemble_mean(const std::map<Real, std::vector<Real>>& groups) {
  EnsembleEstimate est;
  for (const auto& [separation, samples] : groups) {
    if (samples.empty()) throw InvalidParameter("empty sample group");
    const int n = int(samples.size());
    Real mean = 0;
    for (const Real v : samples) mean += v;
    mean /= n;
    Real var = 0;
    for (const Real v : samples) var += (v - mean) * (v - mean);
    const Real stderror = n > 1 ? std::sqrt(var / (n - 1)) / std::sqrt(Real(n)) : 0.0;
    est.separation.push_back(separation);
    est.mean.push_back(mean);
    est.stderror.push_back(stderror);
    est.count.push_back(n);
  }
  return est;
}

std::string to_string(DecayModel model) {
  switch (model) {
    case DecayModel::Exp: return "exp";
    case DecayModel::Stretched: return "stretched";
    case DecayModel::LogPow: return "logpow";
  }
  return "?";
}

DecayModel decay_model_from_string(const std::string& name) {
  if (name == "exp") return DecayModel::Exp;
  if (name == "stretched") return DecayModel::Stretched;
  if (name == "logpow") return DecayModel::LogPow;
  throw InvalidParameter("unknown decay model: " + name);
}

namespace {

struct OlsFit {
  Real intercept = 0;
  Real slope = 0;
  Real r2 = 0;
};

// OLS of y on x with R^2; R^2 = 1 for an exact fit of degenerate data.
OlsFit ols(const std::vector<Real>& x, const std::vector<Real>& y) {
  const int n = int(x.size());
  Real mx = 0, my = 0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  Real sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  OlsFit fit;
  fit.slope = sxx > 0 ? sxy / sxx : 0;
  fit.intercept = my - fit.slope * mx;
  Real ss_res = 0;
  for (int i = 0; i < n; ++i) {
    const Real r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

OlsFit stretched_ols(const std::vector<Real>& r, const std::vector<Real>& logy, Real zeta) {
  std::vector<Real> x(r.size());
  for (size_t i = 0; i < r.size(); ++i) x[i] = std::pow(r[i], zeta);
  return ols(x, logy);
}

}  // namespace

DecayFit fit_decay(const EnsembleEstimate& estimate, DecayModel model, Interval window,
                   Real r2_floor) {
  std::vector<Real> r, logy;
  for (size_t i = 0; i < estimate.separation.size(); ++i) {
    const Real sep = estimate.separation[i];
    if (sep < window.lo || sep > window.hi) continue;
    if (estimate.mean[i] <= 0) continue;  // window shrink: drop the point
    r.push_back(sep);
    logy.push_back(std::log(estimate.mean[i]));
  }
  if (int(r.size()) < 4)
    throw FitInfeasible("only " + std::to_string(r.size()) +
                        " usable separations in the fit window, need >= 4");

  DecayFit fit;
  fit.model = model;
  fit.window = window;
  fit.n_points = int(r.size());

  OlsFit best;
  Real best_zeta = 1.0;
  if (model == DecayModel::Stretched) {
    for (int step = 1; step <= 20; ++step) {
      const Real zeta = 0.05 * step;
      const OlsFit cand = stretched_ols(r, logy, zeta);
      if (step == 1 || cand.r2 > best.r2) {
        best = cand;
        best_zeta = zeta;
      }
    }
    const Real coarse_zeta = best_zeta;
    for (int step = -9; step <= 9; ++step) {
      const Real zeta = coarse_zeta + 0.005 * step;
      if (zeta <= 0 || zeta > 1.0 || step == 0) continue;
      const OlsFit cand = stretched_ols(r, logy, zeta);
      if (cand.r2 > best.r2) {
        best = cand;
        best_zeta = zeta;
      }
    }
    fit.zeta = best_zeta;
  } else {
    best = ols(r, logy);
    fit.zeta = 1.0;
  }

  fit.amplitude = std::exp(best.intercept);
  fit.rate = -best.slope;
  fit.r2 = best.r2;
  fit.zeta_reliable = best.r2 >= r2_floor;
  for (size_t i = 0; i < r.size(); ++i) {
    fit.residual_r.push_back(r[i]);
    fit.residual.push_back(logy[i] -
                           (best.intercept + best.slope * std::pow(r[i], fit.zeta)));
  }
  return fit;
}

}  // namespace loclab
