#pragma once

#include <vector>

#include "loclab/types.hpp"

namespace loclab {

struct Lattice {
  int dim = 1;  // d in {1, 2}

  explicit Lattice(int d) : dim(d) {
    if (d != 1 && d != 2) throw InvalidParameter("lattice dimension must be 1 or 2");
  }
};

// Box Lambda_L(x): the L^d sites y with -L/2 <= y_i - x_i < L/2
// (sup-norm cube, closed on the lower side). Site order is the fixed
// lexicographic enumeration (x major, then y).
class Box {
 public:
  Box(int dim, Site center, int side);

  int dim() const { return dim_; }
  int side() const { return side_; }
  Site center() const { return center_; }
  Index num_sites() const;

  bool contains(Site s) const;
  // Lexicographic index in [0, num_sites); requires contains(s).
  Index index_of(Site s) const;
  // -1 when s is outside the box.
  Index index_of_or_none(Site s) const;
  Site site_at(Index idx) const;
  std::vector<Site> sites() const;

 private:
  int dim_;
  Site center_;
  int side_;
  int lo_x_, lo_y_;
};

}  // namespace loclab
