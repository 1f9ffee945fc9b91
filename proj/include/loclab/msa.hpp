#pragma once

#include <optional>
#include <string>
#include <vector>

#include "loclab/hamiltonian.hpp"
#include "loclab/spectral.hpp"

namespace loclab {

// Belt Gamma_{x,L}: sites of the box with (L-3)/2 <= |y-x|_inf <= (L-1)/2,
// i.e. the shell at sup-distance L/2 - 1. Core: Lambda_{L/3}(x), which is a
// valid box because L is a multiple of 6. Indices refer to box site order.
struct BeltGeometry {
  std::vector<Index> belt;
  std::vector<Index> core;
};

BeltGeometry belt_geometry(const Box& box);

// [K]_{6N} = max { L in 6N : L <= K }; requires K >= 6.
int floor_to_six(Real k);

// L_{k+1} = [L_k^alpha]_{6N}, starting from L0 in 6N.
struct ScaleSequence {
  int L0 = 6;
  Real alpha = 1.5;
  Real zeta = 0.5;
};

void validate(const ScaleSequence& seq);
int next_scale(int side, Real alpha);
// Sides while side^dim stays within max_matrix, at most max_count entries.
std::vector<int> scale_sides(const ScaleSequence& seq, int dim, Index max_matrix,
                             int max_count);

// One finite-volume box prepared for regularity testing.
struct MsaBox {
  FiniteVolumeHamiltonian ham;
  Vector eigenvalues;
  BeltGeometry geometry;
};

MsaBox make_msa_box(const Box& box, const DisorderSpec& spec,
                    Index max_matrix = default_max_matrix());

enum class Verdict { Regular, NotRegular };

struct RegularityVerdict {
  Verdict verdict = Verdict::NotRegular;
  Real energy = 0;         // evaluation point (cell center)
  Real attained_norm = 0;  // || Gamma R(E) chi_core ||, NaN when E hit the spectrum
  Real threshold = 0;      // exp(-m L / 2)
  Interval certified_over{0, 0};
  std::string note;
};

struct MsaOptions {
  Real eta = 0;            // certification cell half-width; 0 -> |I|/64
  int max_refine = 6;
  Real pivot_rel_tol = 1e-12;
};

// (omega, m, E)-regularity at a single energy: E off the box spectrum and
// the belt x core block of the resolvent with norm <= exp(-m L / 2).
RegularityVerdict regularity_check(const MsaBox& box, Real energy, Real m,
                                   Real pivot_rel_tol = 1e-12);

// Interval certification. Covers I by cells of half-width eta; a cell
// centered at E certifies as regular when
//   attained(E) + h * ||R(E)|| * ||R(E)|| / (1 - h ||R(E)||) <= exp(-m L / 2)
// with h the half-width and ||R(E)|| = 1/dist(E, sigma) (valid while
// h ||R(E)|| < 1, by the resolvent identity). Failing cells are bisected up
// to max_refine levels; unresolved cells are conservatively not regular.
std::vector<RegularityVerdict> certify_over_interval(const MsaBox& box, Interval interval,
                                                     Real m, const MsaOptions& opt = {});

struct EventROutcome {
  bool holds = false;
  std::optional<Real> witness;  // energy where both boxes failed
  Site x, y;
  int side = 0;
  Real m = 0;
  Interval interval{0, 0};
};

// Event R(m, L, I, x, y): every energy in I is covered by a certified-regular
// cell of at least one of the two boxes. Requires |x-y|_inf > L (rho = 0:
// i.i.d. disorder on disjoint boxes is independent).
EventROutcome event_R(int dim, Site x, Site y, int side, Real m, Interval interval,
                      const DisorderSpec& spec, const MsaOptions& opt = {},
                      Index max_matrix = default_max_matrix());

struct ProbabilityEstimate {
  Real p_hat = 0;
  Real stderror = 0;
  int n = 0;
};

// Monte Carlo frequency of event_R over realizations 0..n-1 of the disorder
// (the realization index of `spec` is ignored). Binomial standard error.
ProbabilityEstimate estimate_probability(int dim, Site x, Site y, int side, Real m,
                                         Interval interval, int n_realizations,
                                         const DisorderSpec& spec, const MsaOptions& opt = {},
                                         Index max_matrix = default_max_matrix());

struct ScaleRow {
  int k = 0;
  int side = 0;
  int n = 0;
  Real p_hat = 0;
  Real stderror = 0;
  Real bound = 0;  // 1 - exp(-L^zeta)
  bool consistent = false;
};

// Runs estimate_probability along the scale sequence with x at the origin
// and y = (L+2) e_1. Consistency: p_hat >= bound - 2 stderr.
std::vector<ScaleRow> run_scale_sequence(const ScaleSequence& seq, int dim, Real m,
                                         Interval interval, int n_realizations,
                                         const DisorderSpec& spec, const MsaOptions& opt = {},
                                         Index max_matrix = default_max_matrix(),
                                         int max_scales = 8);

}  // namespace loclab
