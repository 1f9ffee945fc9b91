#pragma once

#include "loclab/disorder.hpp"
#include "loclab/lattice.hpp"
#include "loclab/types.hpp"

namespace loclab {

// H = -Delta_box + lambda V on l2(Lambda_L(x)). The discrete Laplacian has
// hopping -1 between nearest-neighbor sites (|y - y'| = 1) inside the box and
// constant diagonal 2d (simple truncation at the boundary, no correction),
// so H is a true submatrix of the infinite-volume operator.
struct FiniteVolumeHamiltonian {
  Box box;
  Vector potential;  // lambda * v(y) in site order
  Matrix matrix;
};

// Matrix dimension cap; LOCLAB_MAX_MATRIX overrides the default of 12000.
Index default_max_matrix();

// Assemble from an explicit disorder field v (site order).
FiniteVolumeHamiltonian assemble_hamiltonian(const Box& box, const Vector& v, Real coupling,
                                             Index max_matrix = default_max_matrix());

FiniteVolumeHamiltonian build_hamiltonian(const Box& box, const DisorderSpec& spec,
                                          Index max_matrix = default_max_matrix());

}  // namespace loclab
