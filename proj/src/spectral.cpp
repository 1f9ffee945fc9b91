#include "loclab/spectral.hpp"

#include <Eigen/Dense>

#include <string>

namespace loclab {

EigenSolution eigendecompose(const Matrix& h, Real tol) {
  if (h.rows() != h.cols()) throw InvalidParameter("matrix must be square");
  if ((h - h.transpose()).cwiseAbs().maxCoeff() != 0.0)
    throw InvalidParameter("matrix must be symmetric");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw SolverError("symmetric eigensolver did not converge (n = " +
                      std::to_string(h.rows()) + ")");

  EigenSolution sol;
  sol.eigenvalues = solver.eigenvalues();
  sol.eigenvectors = solver.eigenvectors();

  const Matrix resid =
      h * sol.eigenvectors - sol.eigenvectors * sol.eigenvalues.asDiagonal();
  sol.residual = resid.colwise().norm().maxCoeff();
  const Index n = h.rows();
  sol.orthonormality =
      (sol.eigenvectors.transpose() * sol.eigenvectors - Matrix::Identity(n, n))
          .cwiseAbs()
          .maxCoeff();

  const Real scale = 1.0 + h.cwiseAbs().rowwise().sum().maxCoeff();
  if (sol.residual > tol * scale || sol.orthonormality > tol * scale)
    throw SolverError("eigendecomposition exceeded tolerance: residual " +
                      std::to_string(sol.residual) + ", orthonormality " +
                      std::to_string(sol.orthonormality));
  return sol;
}

std::vector<EigenCluster> cluster_eigenvalues(const EigenSolution& sol, Real cluster_tol) {
  if (cluster_tol < 0) throw InvalidParameter("cluster_tol must be >= 0");
  std::vector<EigenCluster> clusters;
  const Index n = sol.eigenvalues.size();
  Index start = 0;
  while (start < n) {
    Index end = start + 1;
    while (end < n && sol.eigenvalues[end] - sol.eigenvalues[end - 1] <= cluster_tol) ++end;
    EigenCluster c;
    c.multiplicity = int(end - start);
    c.value = sol.eigenvalues.segment(start, end - start).mean();
    c.basis = sol.eigenvectors.middleCols(start, end - start);
    c.cluster_tol = cluster_tol;
    clusters.push_back(std::move(c));
    start = end;
  }
  return clusters;
}

ResolventResult resolvent_apply(const Matrix& h, Real energy, const Matrix& rhs,
                                const ResolventOptions& opt) {
  if (h.rows() != h.cols() || rhs.rows() != h.rows())
    throw InvalidParameter("resolvent dimensions mismatch");

  const Real scale = std::max<Real>(1.0, h.cwiseAbs().rowwise().sum().maxCoeff());
  const Real threshold = opt.pivot_rel_tol * scale;

  ResolventResult out;
  if (opt.spectrum) {
    out.dist_estimate = (opt.spectrum->array() - energy).abs().minCoeff();
    if (out.dist_estimate < threshold)
      throw NearEigenvalue("E within " + std::to_string(out.dist_estimate) +
                           " of the box spectrum");
  }

  Matrix shifted = h;
  shifted.diagonal().array() -= energy;
  Eigen::PartialPivLU<Matrix> lu(shifted);
  const Real min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (min_pivot < threshold)
    throw NearEigenvalue("pivot " + std::to_string(min_pivot) + " below threshold " +
                         std::to_string(threshold));
  if (!opt.spectrum) out.dist_estimate = min_pivot;

  out.solution = lu.solve(rhs);
  out.backward_error = (shifted * out.solution - rhs).cwiseAbs().maxCoeff();
  return out;
}

Real cluster_measure_mass(const EigenCluster& cluster, const Vector& weights) {
  if (weights.size() != cluster.basis.rows())
    throw InvalidParameter("weight vector length does not match basis");
  const auto inv2 = weights.array().square().inverse();
  Real mass = 0;
  for (Index j = 0; j < cluster.basis.cols(); ++j)
    mass += (cluster.basis.col(j).array().square() * inv2).sum();
  return mass;
}

std::vector<SpectralMeasureAtom> spectral_measure(const std::vector<EigenCluster>& clusters,
                                                  const Vector& weights,
                                                  std::optional<Interval> b) {
  std::vector<SpectralMeasureAtom> atoms;
  for (size_t i = 0; i < clusters.size(); ++i) {
    if (b && !b->contains(clusters[i].value)) continue;
    atoms.push_back({clusters[i].value, cluster_measure_mass(clusters[i], weights), int(i),
                     clusters[i].multiplicity});
  }
  return atoms;
}

FermiProjection fermi_projection(const EigenSolution& sol, Real fermi_energy) {
  Index rank = 0;
  while (rank < sol.eigenvalues.size() && sol.eigenvalues[rank] <= fermi_energy) ++rank;
  return {int(rank), sol.eigenvectors.leftCols(rank)};
}

}  // namespace loclab
