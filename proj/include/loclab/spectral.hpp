#pragma once

#include <optional>
#include <vector>

#include "loclab/types.hpp"

namespace loclab {

struct EigenSolution {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // orthonormal columns, same order
  Real residual = 0;        // max_n ||H psi_n - lambda_n psi_n||
  Real orthonormality = 0;  // max_mn |<psi_m, psi_n> - delta_mn|
};

// Full dense symmetric eigendecomposition (tridiagonalization + implicit-shift
// QL). Residual and orthonormality are verified against tol * (1 + ||H||_inf);
// a violation is a solver failure, not a degraded result.
EigenSolution eigendecompose(const Matrix& h, Real tol = 1e-9);

// Maximal group of eigenvalues within cluster_tol of each other, treated as
// one spectral projection P_lambda of dimension `multiplicity`.
struct EigenCluster {
  Real value = 0;  // mean of the grouped eigenvalues
  int multiplicity = 0;
  Matrix basis;  // n x multiplicity, orthonormal
  Real cluster_tol = 0;
};

// Single-linkage grouping: adjacent eigenvalues join a cluster while their
// gap is <= cluster_tol.
std::vector<EigenCluster> cluster_eigenvalues(const EigenSolution& sol, Real cluster_tol);

inline Real default_cluster_tol(const Matrix& h) {
  return 1e-8 * std::max<Real>(1.0, h.cwiseAbs().maxCoeff());
}

struct ResolventOptions {
  Real pivot_rel_tol = 1e-12;          // near-eigenvalue guard, relative to ||H||_inf
  const Vector* spectrum = nullptr;    // exact dist(E, sigma) when available
};

struct ResolventResult {
  Matrix solution;        // X with (H - E) X = rhs
  Real dist_estimate = 0; // exact when a spectrum was supplied, else min |pivot|
  Real backward_error = 0;
};

// Solve (H - E) X = rhs. Throws NearEigenvalue when E is within the pivot
// tolerance of sigma(H); callers in the regularity test treat that as
// "not regular" (the definition requires E off the box spectrum).
ResolventResult resolvent_apply(const Matrix& h, Real energy, const Matrix& rhs,
                                const ResolventOptions& opt = {});

struct SpectralMeasureAtom {
  Real eigenvalue = 0;
  Real mass = 0;  // ||T^-1 P_lambda||_2^2
  int cluster_index = 0;
  int multiplicity = 0;
};

// Atoms of mu(B) = ||T^-1 P_B||_2^2 for clusters with value in B (all
// clusters when B is empty). `weights` is the diagonal of T in site order.
// The total mass over the full spectrum is sum_y w(y)^-2.
std::vector<SpectralMeasureAtom> spectral_measure(const std::vector<EigenCluster>& clusters,
                                                  const Vector& weights,
                                                  std::optional<Interval> b = std::nullopt);

Real cluster_measure_mass(const EigenCluster& cluster, const Vector& weights);

// Fermi projection P^(E): span of eigenvectors with eigenvalue <= E.
struct FermiProjection {
  int rank = 0;
  Matrix basis;  // n x rank, leading eigenvectors
};

FermiProjection fermi_projection(const EigenSolution& sol, Real fermi_energy);

inline Matrix dense(const FermiProjection& p) { return p.basis * p.basis.transpose(); }

}  // namespace loclab
