#include "loclab/hamiltonian.hpp"

#include <cstdlib>
#include <string>

namespace loclab {

Index default_max_matrix() {
  if (const char* env = std::getenv("LOCLAB_MAX_MATRIX")) {
    const long v = std::atol(env);
    if (v > 0) return Index(v);
  }
  return 12000;
}

FiniteVolumeHamiltonian assemble_hamiltonian(const Box& box, const Vector& v, Real coupling,
                                             Index max_matrix) {
  const Index n = box.num_sites();
  if (n > max_matrix)
    throw ResourceLimit("box has " + std::to_string(n) + " sites, cap is " +
                        std::to_string(max_matrix));
  if (v.size() != n) throw InvalidParameter("potential length does not match box");

  const int d = box.dim();
  Matrix h = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    h(i, i) = 2.0 * d + coupling * v[i];
    const Site s = box.site_at(i);
    // upper neighbors only; mirrored below
    for (const Site nb : {Site{s.x + 1, s.y}, Site{s.x, s.y + 1}}) {
      if (nb.y != 0 && d == 1) continue;
      const Index j = box.index_of_or_none(nb);
      if (j >= 0) {
        h(i, j) = -1.0;
        h(j, i) = -1.0;
      }
    }
  }
  return {box, coupling * v, std::move(h)};
}

FiniteVolumeHamiltonian build_hamiltonian(const Box& box, const DisorderSpec& spec,
                                          Index max_matrix) {
  return assemble_hamiltonian(box, sample_potential(box, spec), spec.coupling, max_matrix);
}

}  // namespace loclab
