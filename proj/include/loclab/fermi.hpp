#pragma once

#include <span>

#include "loclab/spectral.hpp"
#include "loclab/types.hpp"

namespace loclab {

// sup_{E in I} ||chi_x P^(E) chi_y||_2^2, evaluated exactly: the Fermi
// projector is a step function of E jumping only at eigenvalues, so the sup
// runs over the ranks attained on I (left endpoint plus eigenvalues in I).
Real fermi_kernel_sup(const EigenSolution& sol, Interval interval, Index x_index,
                      Index y_index);

// Standard compactly supported bump on I, rescaled to peak 1 at the midpoint:
// exp(1 - 1/(1 - s^2)) with s the affine map of E onto (-1, 1).
class SmoothBump {
 public:
  explicit SmoothBump(Interval interval);
  Real operator()(Real energy) const;
  Interval support() const { return interval_; }

 private:
  Interval interval_;
};

// Time-averaged transport moment
//   M(n, X, T) = (2/T) int_0^inf exp(-2t/T) || <x>^(n/2) exp(-itH) X(H) chi_0 ||_2^2 dt.
// In the eigenbasis the time average has the closed form
//   (2/T) int_0^inf e^(-2t/T) e^(-it d) dt = 2 / (2 + i T d),
// so the moment is an exact double sum over eigenpairs with kernel
// Re[2/(2 + i T (lambda_m - lambda_m'))] = 4 / (4 + T^2 (lambda_m - lambda_m')^2).
// `sites` gives the absolute lattice coordinates (weights <u>^n are about the
// lattice origin) and source_index the site order index of the origin.
template <typename EnergyProfile>
Real transport_moment(const EigenSolution& sol, Real moment_order, const EnergyProfile& profile,
                      Real time_scale, std::span<const Site> sites, Index source_index) {
  if (!(moment_order > 0)) throw InvalidParameter("moment order n must be > 0");
  if (!(time_scale > 0)) throw InvalidParameter("time scale T must be > 0");
  const Index n = sol.eigenvalues.size();
  if (Index(sites.size()) != n) throw InvalidParameter("site list length does not match solution");
  if (source_index < 0 || source_index >= n)
    throw InvalidParameter("source site outside the box");

  Vector site_weight(n);
  for (Index u = 0; u < n; ++u)
    site_weight[u] = std::pow(japanese_bracket(sites[size_t(u)]), moment_order);

  // x_m = X(lambda_m) psi_m(0);  G = Psi^T diag(<u>^n) Psi
  Vector amplitude(n);
  for (Index m = 0; m < n; ++m)
    amplitude[m] = profile(sol.eigenvalues[m]) * sol.eigenvectors(source_index, m);
  const Matrix weighted_overlap = sol.eigenvectors.transpose() *
                                  site_weight.asDiagonal() * sol.eigenvectors;

  Real moment = 0;
  for (Index m = 0; m < n; ++m) {
    if (amplitude[m] == 0) continue;
    for (Index mp = 0; mp < n; ++mp) {
      if (amplitude[mp] == 0) continue;
      const Real delta = sol.eigenvalues[m] - sol.eigenvalues[mp];
      const Real kernel = 4.0 / (4.0 + time_scale * time_scale * delta * delta);
      moment += amplitude[m] * amplitude[mp] * weighted_overlap(m, mp) * kernel;
    }
  }
  return moment;
}

}  // namespace loclab
