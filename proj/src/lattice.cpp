#include "loclab/lattice.hpp"

namespace loclab {

Box::Box(int dim, Site center, int side) : dim_(dim), center_(center), side_(side) {
  if (dim != 1 && dim != 2) throw InvalidParameter("box dimension must be 1 or 2");
  if (side < 2 || side % 2 != 0) throw InvalidParameter("box side must be a positive even integer");
  if (dim == 1 && center.y != 0) throw InvalidParameter("1d box center must have y = 0");
  lo_x_ = center.x - side / 2;
  lo_y_ = center.y - side / 2;
}

Index Box::num_sites() const {
  Index n = side_;
  return dim_ == 2 ? n * n : n;
}

bool Box::contains(Site s) const {
  if (s.x < lo_x_ || s.x >= lo_x_ + side_) return false;
  if (dim_ == 2) return s.y >= lo_y_ && s.y < lo_y_ + side_;
  return s.y == 0;
}

Index Box::index_of(Site s) const {
  if (!contains(s)) throw InvalidParameter("site outside box");
  Index ox = s.x - lo_x_;
  if (dim_ == 1) return ox;
  return ox * side_ + (s.y - lo_y_);
}

Index Box::index_of_or_none(Site s) const { return contains(s) ? index_of(s) : -1; }

Site Box::site_at(Index idx) const {
  if (idx < 0 || idx >= num_sites()) throw InvalidParameter("site index out of range");
  if (dim_ == 1) return {lo_x_ + int(idx), 0};
  return {lo_x_ + int(idx / side_), lo_y_ + int(idx % side_)};
}

std::vector<Site> Box::sites() const {
  std::vector<Site> out;
  out.reserve(size_t(num_sites()));
  for (Index i = 0; i < num_sites(); ++i) out.push_back(site_at(i));
  return out;
}

}  // namespace loclab
