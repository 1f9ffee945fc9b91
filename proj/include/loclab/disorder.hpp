#pragma once

#include <cstdint>

#include "loclab/lattice.hpp"
#include "loclab/types.hpp"

namespace loclab {

enum class Distribution {
  UniformSym,  // uniform on [-1, 1]
  UniformPos,  // uniform on [0, 1]
  Bernoulli,   // +1 with probability p, else -1
};

// I.i.d. on-site disorder. The value at a site is a pure function of
// (master_seed, realization, site), so overlapping boxes agree on shared
// sites and disjoint boxes draw from non-overlapping substreams.
struct DisorderSpec {
  Distribution distribution = Distribution::UniformSym;
  Real coupling = 1.0;  // lambda >= 0
  Real bernoulli_p = 0.5;
  std::uint64_t master_seed = 0;
  std::uint64_t realization = 0;
};

void validate(const DisorderSpec& spec);

// v(y) before the coupling constant is applied; |v| <= 1 for all three laws.
Real site_value(const DisorderSpec& spec, Site y);

// v in box site order.
Vector sample_potential(const Box& box, const DisorderSpec& spec);

// DisorderSpec with the realization index replaced.
inline DisorderSpec at_realization(DisorderSpec spec, std::uint64_t k) {
  spec.realization = k;
  return spec;
}

}  // namespace loclab
