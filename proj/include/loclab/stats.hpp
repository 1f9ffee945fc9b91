#pragma once

#include <map>
#include <string>
#include <vector>

#include "loclab/types.hpp"

namespace loclab {

struct EnsembleEstimate {
  std::vector<Real> separation;  // ascending
  std::vector<Real> mean;
  std::vector<Real> stderror;  // sample std / sqrt(N); 0 when N == 1
  std::vector<int> count;
};

// Arithmetic mean and standard error per separation group.
EnsembleEstimate ensemble_mean(const std::map<Real, std::vector<Real>>& groups);

enum class DecayModel {
  Exp,        // C exp(-m r)
  Stretched,  // C exp(-s r^zeta)
  LogPow,     // C' exp(-m r): the log-power prefactor exp((log<r0>)^(1+eps))
              // is constant for a fixed source site and folds into C'
};

std::string to_string(DecayModel model);
DecayModel decay_model_from_string(const std::string& name);

struct DecayFit {
  DecayModel model = DecayModel::Exp;
  Real amplitude = 0;  // C
  Real rate = 0;       // m for Exp/LogPow, the r^zeta coefficient for Stretched
  Real zeta = 1;       // 1 for Exp/LogPow
  Real epsilon = 0;    // reserved for LogPow reporting
  Real r2 = 0;         // on the log scale
  bool zeta_reliable = false;  // r2 >= r2_floor
  Interval window{0, 0};
  int n_points = 0;
  std::vector<Real> residual_r;
  std::vector<Real> residual;  // log(mean) - log(fit)
};

// Least-squares decay fit on log(mean) over the window. Exp/LogPow: ordinary
// least squares on r. Stretched: grid over zeta in {0.05, ..., 1.00} step
// 0.05, OLS on r^zeta at each, pick the zeta maximizing R^2, then one local
// refinement pass at step 0.005. Non-positive means inside the window are
// dropped (window shrink); fewer than 4 usable points is infeasible.
DecayFit fit_decay(const EnsembleEstimate& estimate, DecayModel model, Interval window,
                   Real r2_floor = 0.5);

}  // namespace loclab
