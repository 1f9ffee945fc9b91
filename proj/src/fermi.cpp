#include "loclab/fermi.hpp"

#include <cmath>

namespace loclab {

Real fermi_kernel_sup(const EigenSolution& sol, Interval interval, Index x_index,
                      Index y_index) {
  if (x_index < 0 || y_index < 0) return 0;
  const Index n = sol.eigenvalues.size();

  Index rank_lo = 0;
  while (rank_lo < n && sol.eigenvalues[rank_lo] <= interval.lo) ++rank_lo;
  Index rank_hi = rank_lo;
  while (rank_hi < n && sol.eigenvalues[rank_hi] <= interval.hi) ++rank_hi;

  // kernel entry P^(E)(x, y) accumulated rank by rank; chi_x P chi_y is the
  // single entry (x, y), so the HS norm squared is its square
  Real entry = 0;
  for (Index k = 0; k < rank_lo; ++k)
    entry += sol.eigenvectors(x_index, k) * sol.eigenvectors(y_index, k);
  Real sup = entry * entry;
  for (Index k = rank_lo; k < rank_hi; ++k) {
    entry += sol.eigenvectors(x_index, k) * sol.eigenvectors(y_index, k);
    sup = std::max(sup, entry * entry);
  }
  return sup;
}

SmoothBump::SmoothBump(Interval interval) : interval_(interval) {
  if (!(interval.lo < interval.hi)) throw InvalidParameter("bump needs a nondegenerate interval");
}

Real SmoothBump::operator()(Real energy) const {
  const Real s = (2.0 * energy - (interval_.lo + interval_.hi)) / interval_.width();
  if (std::abs(s) >= 1.0) return 0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

}  // namespace loclab
