#pragma once

#include <span>

#include "loclab/lattice.hpp"
#include "loclab/types.hpp"

namespace loclab {

// kappa = (d+1)/2, the smallest convenient exponent with kappa > d/2.
inline Real default_kappa(int dim) { return 0.5 * (dim + 1); }

// Diagonal of the weight operator T_a: w(y) = <y - a>^kappa in the given
// site order. Requires kappa > d/2 (trace condition on T^-2).
Vector weight_vector(std::span<const Site> sites, Site a, Real kappa, int dim);
Vector weight_vector(const Box& box, Site a, Real kappa);

// Upper bound of ||T_b T_a^-1||: 2^(kappa/2) <b-a>^kappa.
inline Real weight_ratio_bound(Site a, Site b, Real kappa) {
  return std::pow(2.0, 0.5 * kappa) * std::pow(japanese_bracket(b - a), kappa);
}

// sup of W over the unit cell: (1 + d/4)^(kappa/2).
inline Real correlation_bound(int dim, Real kappa) {
  return std::pow(1.0 + 0.25 * dim, 0.5 * kappa);
}

}  // namespace loclab
