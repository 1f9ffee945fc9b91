#include "loclab/disorder.hpp"

namespace loclab {

namespace {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stateless site-keyed stream: chained splitmix64 over the key tuple.
inline std::uint64_t site_hash(std::uint64_t seed, std::uint64_t k, Site y) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ k);
  h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(y.x)));
  h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(y.y)));
  return h;
}

inline Real unit_double(std::uint64_t h) {
  // 53 high bits -> [0, 1)
  return Real(h >> 11) * 0x1.0p-53;
}

}  // namespace

void validate(const DisorderSpec& spec) {
  if (spec.coupling < 0) throw InvalidParameter("disorder coupling must be >= 0");
  if (spec.distribution == Distribution::Bernoulli &&
      (spec.bernoulli_p < 0 || spec.bernoulli_p > 1))
    throw InvalidParameter("bernoulli p must lie in [0, 1]");
}

Real site_value(const DisorderSpec& spec, Site y) {
  const Real u = unit_double(site_hash(spec.master_seed, spec.realization, y));
  switch (spec.distribution) {
    case Distribution::UniformSym:
      return 2.0 * u - 1.0;
    case Distribution::UniformPos:
      return u;
    case Distribution::Bernoulli:
      return u < spec.bernoulli_p ? 1.0 : -1.0;
  }
  throw InvalidParameter("unknown distribution");
}

Vector sample_potential(const Box& box, const DisorderSpec& spec) {
  validate(spec);
  Vector v(box.num_sites());
  for (Index i = 0; i < v.size(); ++i) v[i] = site_value(spec, box.site_at(i));
  return v;
}

}  // namespace loclab
