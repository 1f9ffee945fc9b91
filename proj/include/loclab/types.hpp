#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <compare>

#include "loclab/errors.hpp"

namespace loclab {

using Real = double;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Lattice point in Z^d, d <= 2. The second coordinate is 0 when d == 1.
struct Site {
  int x = 0;
  int y = 0;

  friend auto operator<=>(const Site&, const Site&) = default;
};

inline Site operator+(Site a, Site b) { return {a.x + b.x, a.y + b.y}; }
inline Site operator-(Site a, Site b) { return {a.x - b.x, a.y - b.y}; }

// Sup-norm |s|_inf; the convention for box geometry and decay separations.
inline int sup_norm(Site s) { return std::max(std::abs(s.x), std::abs(s.y)); }

// Euclidean <s> = sqrt(1 + |s|^2); the convention inside weights.
inline Real japanese_bracket(Site s) {
  return std::sqrt(1.0 + Real(s.x) * s.x + Real(s.y) * s.y);
}

// Closed interval [lo, hi].
struct Interval {
  Real lo = 0;
  Real hi = 0;

  Real width() const { return hi - lo; }
  Real midpoint() const { return 0.5 * (lo + hi); }
  bool contains(Real e) const { return lo <= e && e <= hi; }
};

inline Interval make_interval(Real lo, Real hi) {
  if (!(lo < hi)) throw InvalidParameter("interval requires lo < hi");
  return {lo, hi};
}

}  // namespace loclab
