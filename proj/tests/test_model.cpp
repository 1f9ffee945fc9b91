#include <doctest.h>

#include <Eigen/Dense>

#include <cstring>
#include <random>
#include <set>

#include "loclab/disorder.hpp"
#include "loclab/hamiltonian.hpp"
#include "loclab/lattice.hpp"
#include "loclab/weights.hpp"
#include "oracles.hpp"

using namespace loclab;

TEST_CASE("lattice dimension is 1 or 2") {
  CHECK_NOTHROW(Lattice(1));
  CHECK_NOTHROW(Lattice(2));
  CHECK_THROWS_AS(Lattice(0), InvalidParameter);
  CHECK_THROWS_AS(Lattice(3), InvalidParameter);
}

TEST_CASE("box site order is a lexicographic bijection") {
  const Box box(2, {1, -2}, 4);
  CHECK(box.num_sites() == 16);
  std::set<std::pair<int, int>> seen;
  for (Index i = 0; i < box.num_sites(); ++i) {
    const Site s = box.site_at(i);
    CHECK(box.contains(s));
    CHECK(box.index_of(s) == i);
    seen.insert({s.x, s.y});
    // membership convention: -L/2 <= s - c < L/2
    CHECK(s.x - 1 >= -2);
    CHECK(s.x - 1 < 2);
    CHECK(s.y + 2 >= -2);
    CHECK(s.y + 2 < 2);
  }
  CHECK(seen.size() == 16);
  CHECK_FALSE(box.contains({3, 0}));
  CHECK(box.index_of_or_none({3, 0}) == -1);
}

TEST_CASE("box side must be even and >= 2") {
  CHECK_THROWS_AS(Box(1, {0, 0}, 5), InvalidParameter);
  CHECK_THROWS_AS(Box(1, {0, 0}, 0), InvalidParameter);
  CHECK_THROWS_AS(Box(1, {0, 0}, -4), InvalidParameter);
  CHECK_NOTHROW(Box(1, {0, 0}, 2));
}

TEST_CASE("free 1d chain is tridiagonal with diagonal 2") {
  const Box box(1, {0, 0}, 4);
  DisorderSpec spec;
  spec.coupling = 0;
  const auto ham = build_hamiltonian(box, spec);
  CHECK(ham.matrix.rows() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(ham.matrix(i, i) == 2.0);
    for (int j = 0; j < 4; ++j)
      if (std::abs(i - j) == 1)
        CHECK(ham.matrix(i, j) == -1.0);
      else if (i != j)
        CHECK(ham.matrix(i, j) == 0.0);
  }
}

TEST_CASE("two-site example matrix forced by the definition") {
  const Box box(1, {0, 0}, 2);
  Vector v(2);
  v << 0.5, -0.25;
  const auto ham = assemble_hamiltonian(box, v, 1.0);
  CHECK(ham.matrix(0, 0) == 2.5);
  CHECK(ham.matrix(1, 1) == 1.75);
  CHECK(ham.matrix(0, 1) == -1.0);
  CHECK(ham.matrix(1, 0) == -1.0);
}

TEST_CASE("2d spectrum lies in the Gershgorin hull") {
  const Box box(2, {0, 0}, 6);
  DisorderSpec spec;
  spec.coupling = 5.0;
  spec.master_seed = 77;
  const auto ham = build_hamiltonian(box, spec);

  // brute-force bound oracle: Gershgorin discs row by row
  Real lo = 1e300, hi = -1e300;
  for (Index i = 0; i < ham.matrix.rows(); ++i) {
    Real radius = 0;
    for (Index j = 0; j < ham.matrix.cols(); ++j)
      if (i != j) radius += std::abs(ham.matrix(i, j));
    lo = std::min(lo, ham.matrix(i, i) - radius);
    hi = std::max(hi, ham.matrix(i, i) + radius);
  }
  CHECK(lo >= -5.0);   // diag >= -lambda sup|v|, radius <= 2d = 4 balanced by diag 4
  CHECK(hi <= 8.0 + 5.0);

  Eigen::SelfAdjointEigenSolver<Matrix> solver(ham.matrix, Eigen::EigenvaluesOnly);
  CHECK(solver.eigenvalues().minCoeff() >= lo);
  CHECK(solver.eigenvalues().maxCoeff() <= hi);
  CHECK(solver.eigenvalues().minCoeff() >= -5.0);
  CHECK(solver.eigenvalues().maxCoeff() <= 13.0);
}

TEST_CASE("hamiltonian is exactly symmetric and deterministic") {
  const Box box(2, {3, -1}, 6);
  DisorderSpec spec;
  spec.coupling = 2.0;
  spec.master_seed = 5;
  spec.realization = 9;
  const auto h1 = build_hamiltonian(box, spec);
  const auto h2 = build_hamiltonian(box, spec);
  CHECK((h1.matrix - h1.matrix.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::memcmp(h1.matrix.data(), h2.matrix.data(),
                    sizeof(Real) * size_t(h1.matrix.size())) == 0);
}

TEST_CASE("covariance: shifted box with shifted field gives the same matrix") {
  DisorderSpec spec;
  spec.coupling = 3.0;
  spec.master_seed = 11;
  const Box box(2, {0, 0}, 6);
  const Vector v = sample_potential(box, spec);
  const auto base = assemble_hamiltonian(box, v, spec.coupling);
  for (const Site shift : {Site{4, -7}, Site{-3, 2}}) {
    const Box moved(2, Site{0, 0} + shift, 6);
    // same field vector in site order = field shifted by `shift`
    const auto shifted = assemble_hamiltonian(moved, v, spec.coupling);
    CHECK((base.matrix - shifted.matrix).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("resource cap rejects oversized boxes") {
  const Box box(2, {0, 0}, 40);
  DisorderSpec spec;
  CHECK_THROWS_AS(build_hamiltonian(box, spec, 1000), ResourceLimit);
}

TEST_CASE("bernoulli p=1 gives all +1") {
  const Box box(1, {0, 0}, 12);
  DisorderSpec spec;
  spec.distribution = Distribution::Bernoulli;
  spec.bernoulli_p = 1.0;
  const Vector v = sample_potential(box, spec);
  CHECK(v.minCoeff() == 1.0);
  CHECK(v.maxCoeff() == 1.0);
}

TEST_CASE("shared sites agree across overlapping boxes") {
  DisorderSpec spec;
  spec.master_seed = 123;
  spec.realization = 4;
  const Box a(2, {0, 0}, 6);
  const Box b(2, {2, 2}, 6);
  const Vector va = sample_potential(a, spec);
  const Vector vb = sample_potential(b, spec);
  int shared = 0;
  for (Index i = 0; i < a.num_sites(); ++i) {
    const Site s = a.site_at(i);
    const Index j = b.index_of_or_none(s);
    if (j >= 0) {
      CHECK(va[i] == vb[j]);
      ++shared;
    }
  }
  CHECK(shared > 0);
}

TEST_CASE("uniform sample mean passes the CLT check") {
  const Box box(1, {0, 0}, 100000);
  DisorderSpec spec;
  spec.master_seed = 2024;
  const Vector v = sample_potential(box, spec);
  const Real mean = v.mean();
  const Real sigma = 1.0 / std::sqrt(3.0);  // std of uniform[-1,1]
  CHECK(std::abs(mean) <= 3.0 * sigma / std::sqrt(Real(v.size())));
  CHECK(v.minCoeff() >= -1.0);
  CHECK(v.maxCoeff() <= 1.0);
}

TEST_CASE("distinct realizations decorrelate") {
  const Box box(1, {0, 0}, 4096);
  DisorderSpec spec;
  spec.master_seed = 7;
  const Vector v0 = sample_potential(box, at_realization(spec, 0));
  const Vector v1 = sample_potential(box, at_realization(spec, 1));
  const Real corr = (v0.array() * v1.array()).mean() * 3.0;  // E[v^2] = 1/3
  CHECK(std::abs(corr) < 0.1);
}

TEST_CASE("weight vector basics") {
  const Box box(1, {0, 0}, 8);
  const Vector w = weight_vector(box, {0, 0}, 1.0);
  CHECK(w[box.index_of({0, 0})] == 1.0);
  CHECK(w[box.index_of({2, 0})] == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
  CHECK(w.minCoeff() >= 1.0);
  CHECK_THROWS_AS(weight_vector(box, {0, 0}, 0.5), InvalidParameter);
}

TEST_CASE("weight ratio bound holds entrywise") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> coord(-40, 40);
  for (int d : {1, 2}) {
    const Real kappa = default_kappa(d);
    for (int trial = 0; trial < 300; ++trial) {
      const Site a{coord(rng), d == 2 ? coord(rng) : 0};
      const Site b{coord(rng), d == 2 ? coord(rng) : 0};
      const Site y{coord(rng), d == 2 ? coord(rng) : 0};
      const Real wa = std::pow(japanese_bracket(y - a), kappa);
      const Real wb = std::pow(japanese_bracket(y - b), kappa);
      CHECK(wb / wa <= weight_ratio_bound(a, b, kappa) * (1 + 1e-12));
    }
  }
}
