#pragma once

#include <map>
#include <span>
#include <vector>

#include "loclab/spectral.hpp"
#include "loclab/types.hpp"

namespace loclab {

// Z_lambda(a) = ||chi_a P_lambda||_2 / ||T_a^-1 P_lambda||_2 from the cluster
// basis. a_index is the box site order index of a, or -1 when a lies outside
// (then chi_a P = 0). weights_a is the diagonal of T_a over the box.
Real compute_Z(const EigenCluster& cluster, Index a_index, const Vector& weights_a);

// W_lambda(a) = sup over phi in the eigenspace of
// ||chi_a P phi|| / ||T_a^-1 P phi||. The sup over phi reduces exactly to the
// largest eigenvalue of the nu x nu pencil A v = w B v with
// A = basis^T chi_a basis and B = basis^T T_a^-2 basis.
Real compute_W(const EigenCluster& cluster, Index a_index, const Vector& weights_a);

// max over clusters with value in I of W(x) W(y); 0 when I misses the
// spectrum. This is the L^inf(I, dmu) norm of W(x) W(y): mu is atomic on a
// finite volume, supported exactly on the eigenvalues.
Real sudec_sup_product(const std::vector<EigenCluster>& clusters, Interval interval,
                       Index x_index, const Vector& weights_x, Index y_index,
                       const Vector& weights_y);

// ||chi_x phi_i||, ||chi_y phi_j|| and the normalizers alpha = ||T^-1 phi||^2
// entering the per-pair correlation bounds.
struct PairCorrelation {
  Real chi_x_phi_i = 0;
  Real chi_y_phi_j = 0;
  Real alpha_i = 0;
  Real alpha_j = 0;
};

PairCorrelation eigenfunction_pair_correlation(const EigenCluster& cluster, int i, int j,
                                               Index x_index, Index y_index,
                                               const Vector& weights_origin);

// One entry per eigenvalue cluster: localization center (argmax of |psi| for
// the first basis vector, lexicographic smallest on ties), multiplicity and
// the alpha_{n,j} = ||T^-1 phi_{n,j}||^2 row, whose sum is mu({E_n}).
struct SuleRecord {
  int cluster_index = 0;
  Real eigenvalue = 0;
  int multiplicity = 0;
  Site center;
  std::vector<Real> alpha;
  Real alpha_sum = 0;
  Real mu_atom = 0;
};

std::vector<SuleRecord> sule_centers(const std::vector<EigenCluster>& clusters,
                                     std::span<const Site> sites, const Vector& weights_origin,
                                     Interval interval);

// N_L = sum of multiplicities over records with |center|_inf <= L.
long count_NL(std::span<const SuleRecord> records, Real radius);

struct MultiplicityHistogram {
  std::map<int, long> counts;
  Real max_mass_times_multiplicity = 0;  // max over clusters of mu({E_n}) nu_n
};

MultiplicityHistogram multiplicity_histogram(const std::vector<EigenCluster>& clusters,
                                             const Vector& weights_origin);

}  // namespace loclab
