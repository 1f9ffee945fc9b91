#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "loclab/stats.hpp"

using namespace loclab;

namespace {

EnsembleEstimate synthetic(const std::vector<Real>& r,
                           const std::function<Real(Real)>& law) {
  std::map<Real, std::vector<Real>> groups;
  for (const Real x : r) groups[x] = {law(x)};
  return ensemble_mean(groups);
}

std::vector<Real> range(int lo, int hi) {
  std::vector<Real> out;
  for (int i = lo; i <= hi; ++i) out.push_back(Real(i));
  return out;
}

}  // namespace

TEST_CASE("ensemble mean basics") {
  std::map<Real, std::vector<Real>> groups;
  groups[1.0] = {3.0, 3.0, 3.0};
  groups[2.0] = {1.0, 2.0};
  const auto est = ensemble_mean(groups);
  REQUIRE(est.separation.size() == 2);
  CHECK(est.mean[0] == 3.0);
  CHECK(est.stderror[0] == 0.0);
  CHECK(est.count[0] == 3);
  CHECK(est.mean[1] == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(est.stderror[1] == doctest::Approx(0.5).epsilon(1e-12));  // |a-b|/2

  groups[3.0] = {};
  CHECK_THROWS_AS(ensemble_mean(groups), InvalidParameter);
}

TEST_CASE("ensemble mean CLT sanity") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<Real> u(0.0, 1.0);
  std::map<Real, std::vector<Real>> groups;
  for (int i = 0; i < 10000; ++i) groups[1.0].push_back(u(rng));
  const auto est = ensemble_mean(groups);
  CHECK(std::abs(est.mean[0] - 0.5) <= 3.0 * est.stderror[0]);
}

TEST_CASE("exact exponential recovery") {
  const auto est = synthetic(range(1, 20), [](Real r) { return 2.5 * std::exp(-0.3 * r); });
  const auto fit = fit_decay(est, DecayModel::Exp, {1.0, 20.0});
  CHECK(std::abs(fit.rate - 0.3) <= 1e-10);
  CHECK(std::abs(fit.amplitude - 2.5) <= 1e-9);
  CHECK(fit.r2 >= 1.0 - 1e-12);
  CHECK(fit.zeta == 1.0);
  CHECK(fit.n_points == 20);
}

TEST_CASE("exact stretched-exponential recovery") {
  const auto est = synthetic(range(1, 25), [](Real r) { return std::exp(-std::pow(r, 0.7)); });
  const auto fit = fit_decay(est, DecayModel::Stretched, {1.0, 25.0});
  CHECK(fit.zeta >= 0.695);
  CHECK(fit.zeta <= 0.705);
  CHECK(std::abs(fit.rate - 1.0) <= 1e-3);
  CHECK(fit.r2 >= 1.0 - 1e-9);
  CHECK(fit.zeta_reliable);
}

TEST_CASE("fit is deterministic") {
  const auto est = synthetic(range(1, 25), [](Real r) { return std::exp(-std::pow(r, 0.6)) + 0.001 * std::sin(3 * r); });
  const auto f1 = fit_decay(est, DecayModel::Stretched, {1.0, 25.0});
  const auto f2 = fit_decay(est, DecayModel::Stretched, {1.0, 25.0});
  CHECK(f1.zeta == f2.zeta);
  CHECK(f1.rate == f2.rate);
  CHECK(f1.amplitude == f2.amplitude);
  CHECK(f1.r2 == f2.r2);
}

TEST_CASE("scale equivariance of the fit") {
  const auto law = [](Real r) { return 1.7 * std::exp(-0.45 * r); };
  const auto est = synthetic(range(2, 18), law);
  const auto scaled = synthetic(range(2, 18), [&](Real r) { return 10.0 * law(r); });
  const auto f1 = fit_decay(est, DecayModel::Exp, {2.0, 18.0});
  const auto f2 = fit_decay(scaled, DecayModel::Exp, {2.0, 18.0});
  CHECK(std::abs(f1.rate - f2.rate) <= 1e-12);
  CHECK(f2.amplitude == doctest::Approx(10.0 * f1.amplitude).epsilon(1e-10));

  const auto s1 = fit_decay(est, DecayModel::Stretched, {2.0, 18.0});
  const auto s2 = fit_decay(scaled, DecayModel::Stretched, {2.0, 18.0});
  CHECK(s1.zeta == s2.zeta);
}

TEST_CASE("logpow reduces to exponential with an absorbed prefactor") {
  const auto est = synthetic(range(1, 15), [](Real r) { return 4.0 * std::exp(-0.8 * r); });
  const auto exp_fit = fit_decay(est, DecayModel::Exp, {1.0, 15.0});
  const auto logpow_fit = fit_decay(est, DecayModel::LogPow, {1.0, 15.0});
  CHECK(logpow_fit.model == DecayModel::LogPow);
  CHECK(logpow_fit.rate == exp_fit.rate);
  CHECK(logpow_fit.amplitude == exp_fit.amplitude);
}

TEST_CASE("window shrink drops non-positive means") {
  std::map<Real, std::vector<Real>> groups;
  for (int r = 1; r <= 10; ++r) groups[Real(r)] = {std::exp(-0.5 * r)};
  groups[4.0] = {0.0};
  groups[7.0] = {-1e-18};
  const auto est = ensemble_mean(groups);
  const auto fit = fit_decay(est, DecayModel::Exp, {1.0, 10.0});
  CHECK(fit.n_points == 8);
  CHECK(std::abs(fit.rate - 0.5) <= 1e-10);
}

TEST_CASE("fit infeasible when too few usable points remain") {
  std::map<Real, std::vector<Real>> groups;
  groups[1.0] = {1.0};
  groups[2.0] = {0.5};
  groups[3.0] = {0.0};
  groups[4.0] = {0.0};
  groups[5.0] = {0.0};
  const auto est = ensemble_mean(groups);
  CHECK_THROWS_AS(fit_decay(est, DecayModel::Exp, {1.0, 5.0}), FitInfeasible);
  CHECK_THROWS_AS(fit_decay(est, DecayModel::Exp, {1.0, 2.0}), FitInfeasible);
}

TEST_CASE("model names round trip") {
  for (const auto model : {DecayModel::Exp, DecayModel::Stretched, DecayModel::LogPow})
    CHECK(decay_model_from_string(to_string(model)) == model);
  CHECK_THROWS_AS(decay_model_from_string("gaussian"), InvalidParameter);
}
