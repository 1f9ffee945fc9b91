#include "loclab/localization.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace loclab {

namespace {

void check_cluster_weights(const EigenCluster& cluster, const Vector& weights) {
  if (cluster.multiplicity < 1) throw InvalidParameter("empty cluster");
  if (weights.size() != cluster.basis.rows())
    throw InvalidParameter("weight vector length does not match basis");
}

}  // namespace

Real compute_Z(const EigenCluster& cluster, Index a_index, const Vector& weights_a) {
  check_cluster_weights(cluster, weights_a);
  Real num2 = 0;
  if (a_index >= 0) num2 = cluster.basis.row(a_index).squaredNorm();
  const Real den2 = cluster_measure_mass(cluster, weights_a);
  return std::sqrt(num2 / den2);
}

Real compute_W(const EigenCluster& cluster, Index a_index, const Vector& weights_a) {
  check_cluster_weights(cluster, weights_a);
  if (a_index < 0) return 0;

  const Index nu = cluster.basis.cols();
  const Vector row = cluster.basis.row(a_index).transpose();
  const Matrix a = row * row.transpose();
  const Matrix b = cluster.basis.transpose() *
                   weights_a.array().square().inverse().matrix().asDiagonal() * cluster.basis;

  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(a, b);
  if (solver.info() != Eigen::Success)
    throw SolverError("generalized eigenproblem for W failed");
  const Real w2 = solver.eigenvalues()(nu - 1);
  return std::sqrt(std::max<Real>(w2, 0));
}

Real sudec_sup_product(const std::vector<EigenCluster>& clusters, Interval interval,
                       Index x_index, const Vector& weights_x, Index y_index,
                       const Vector& weights_y) {
  Real sup = 0;
  for (const auto& cluster : clusters) {
    if (!interval.contains(cluster.value)) continue;
    const Real product =
        compute_W(cluster, x_index, weights_x) * compute_W(cluster, y_index, weights_y);
    sup = std::max(sup, product);
  }
  return sup;
}

PairCorrelation eigenfunction_pair_correlation(const EigenCluster& cluster, int i, int j,
                                               Index x_index, Index y_index,
                                               const Vector& weights_origin) {
  check_cluster_weights(cluster, weights_origin);
  if (i < 0 || i >= cluster.multiplicity || j < 0 || j >= cluster.multiplicity)
    throw InvalidParameter("basis index out of range");
  const auto inv2 = weights_origin.array().square().inverse();
  PairCorrelation out;
  out.chi_x_phi_i = x_index >= 0 ? std::abs(cluster.basis(x_index, i)) : 0;
  out.chi_y_phi_j = y_index >= 0 ? std::abs(cluster.basis(y_index, j)) : 0;
  out.alpha_i = (cluster.basis.col(i).array().square() * inv2).sum();
  out.alpha_j = (cluster.basis.col(j).array().square() * inv2).sum();
  return out;
}

std::vector<SuleRecord> sule_centers(const std::vector<EigenCluster>& clusters,
                                     std::span<const Site> sites, const Vector& weights_origin,
                                     Interval interval) {
  std::vector<SuleRecord> records;
  for (size_t n = 0; n < clusters.size(); ++n) {
    const auto& cluster = clusters[n];
    if (!interval.contains(cluster.value)) continue;
    check_cluster_weights(cluster, weights_origin);
    if (Index(sites.size()) != cluster.basis.rows())
      throw InvalidParameter("site list length does not match basis");

    SuleRecord rec;
    rec.cluster_index = int(n);
    rec.eigenvalue = cluster.value;
    rec.multiplicity = cluster.multiplicity;

    // center from the first basis vector; lexicographic smallest site on ties
    const Vector psi = cluster.basis.col(0);
    Real best = -1;
    for (Index idx = 0; idx < psi.size(); ++idx) {
      const Real amp = std::abs(psi[idx]);
      const Site s = sites[size_t(idx)];
      if (amp > best || (amp == best && s < rec.center)) {
        best = amp;
        rec.center = s;
      }
    }

    const auto inv2 = weights_origin.array().square().inverse();
    for (Index j = 0; j < cluster.basis.cols(); ++j)
      rec.alpha.push_back((cluster.basis.col(j).array().square() * inv2).sum());
    rec.alpha_sum = std::accumulate(rec.alpha.begin(), rec.alpha.end(), Real(0));
    rec.mu_atom = cluster_measure_mass(cluster, weights_origin);
    records.push_back(std::move(rec));
  }
  return records;
}

long count_NL(std::span<const SuleRecord> records, Real radius) {
  if (radius < 1) throw InvalidParameter("N_L counting needs L >= 1");
  long total = 0;
  for (const auto& rec : records)
    if (sup_norm(rec.center) <= radius) total += rec.multiplicity;
  return total;
}

MultiplicityHistogram multiplicity_histogram(const std::vector<EigenCluster>& clusters,
                                             const Vector& weights_origin) {
  MultiplicityHistogram hist;
  for (const auto& cluster : clusters) {
    ++hist.counts[cluster.multiplicity];
    const Real quantity = cluster_measure_mass(cluster, weights_origin) * cluster.multiplicity;
    hist.max_mass_times_multiplicity = std::max(hist.max_mass_times_multiplicity, quantity);
  }
  return hist;
}

}  // namespace loclab
