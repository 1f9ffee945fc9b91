#include "loclab/weights.hpp"

namespace loclab {

Vector weight_vector(std::span<const Site> sites, Site a, Real kappa, int dim) {
  if (!(kappa > 0.5 * dim))
    throw InvalidParameter("weight exponent kappa must exceed d/2");
  Vector w(Index(sites.size()));
  for (size_t i = 0; i < sites.size(); ++i)
    w[Index(i)] = std::pow(japanese_bracket(sites[i] - a), kappa);
  return w;
}

Vector weight_vector(const Box& box, Site a, Real kappa) {
  const auto sites = box.sites();
  return weight_vector(sites, a, kappa, box.dim());
}

}  // namespace loclab
