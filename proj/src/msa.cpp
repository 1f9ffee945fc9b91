#include "loclab/msa.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace loclab {

BeltGeometry belt_geometry(const Box& box) {
  const int side = box.side();
  if (side < 6 || side % 6 != 0)
    throw InvalidParameter("belt geometry requires the side to be a multiple of 6");
  BeltGeometry geom;
  const Box core_box(box.dim(), box.center(), side / 3);
  for (Index i = 0; i < box.num_sites(); ++i) {
    const Site s = box.site_at(i);
    const int r2 = 2 * sup_norm(s - box.center());
    if (side - 3 <= r2 && r2 <= side - 1) geom.belt.push_back(i);
    if (core_box.contains(s)) geom.core.push_back(i);
  }
  return geom;
}

int floor_to_six(Real k) {
  if (!(k >= 6)) throw InvalidParameter("[K]_{6N} needs K >= 6");
  return 6 * int(std::floor(k / 6.0));
}

void validate(const ScaleSequence& seq) {
  if (seq.L0 < 6 || seq.L0 % 6 != 0) throw InvalidParameter("L0 must be a positive multiple of 6");
  if (!(seq.zeta > 0 && seq.zeta < 1)) throw InvalidParameter("zeta must lie in (0, 1)");
  if (!(seq.alpha > 1 && seq.alpha < 1.0 / seq.zeta))
    throw InvalidParameter("alpha must lie in (1, 1/zeta)");
}

int next_scale(int side, Real alpha) { return floor_to_six(std::pow(Real(side), alpha)); }

std::vector<int> scale_sides(const ScaleSequence& seq, int dim, Index max_matrix,
                             int max_count) {
  validate(seq);
  std::vector<int> sides;
  Index sites = seq.L0;
  if (dim == 2) sites *= seq.L0;
  int side = seq.L0;
  while (int(sides.size()) < max_count && sites <= max_matrix) {
    sides.push_back(side);
    const int next = next_scale(side, seq.alpha);
    if (next <= side)
      throw InvalidParameter("scale sequence is not increasing at L = " + std::to_string(side));
    side = next;
    sites = side;
    if (dim == 2) sites *= Index(side);
  }
  return sides;
}

MsaBox make_msa_box(const Box& box, const DisorderSpec& spec, Index max_matrix) {
  MsaBox out{build_hamiltonian(box, spec, max_matrix), {}, belt_geometry(box)};
  Eigen::SelfAdjointEigenSolver<Matrix> solver(out.ham.matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw SolverError("eigenvalue computation failed");
  out.eigenvalues = solver.eigenvalues();
  return out;
}

namespace {

Real regularity_threshold(const MsaBox& box, Real m) {
  return std::exp(-0.5 * m * box.ham.box.side());
}

// || Gamma_{x,L} R(E) chi_{x,L/3} ||: solve for the core columns of the
// resolvent and take the spectral norm of their belt rows.
Real belt_core_norm(const MsaBox& box, Real energy, Real pivot_rel_tol) {
  const Index n = box.ham.matrix.rows();
  Matrix rhs = Matrix::Zero(n, Index(box.geometry.core.size()));
  for (size_t j = 0; j < box.geometry.core.size(); ++j)
    rhs(box.geometry.core[j], Index(j)) = 1.0;

  ResolventOptions opt;
  opt.pivot_rel_tol = pivot_rel_tol;
  opt.spectrum = &box.eigenvalues;
  const ResolventResult res = resolvent_apply(box.ham.matrix, energy, rhs, opt);

  Matrix block(Index(box.geometry.belt.size()), rhs.cols());
  for (size_t i = 0; i < box.geometry.belt.size(); ++i)
    block.row(Index(i)) = res.solution.row(box.geometry.belt[i]);
  return block.jacobiSvd().singularValues()(0);
}

struct CellCheck {
  bool regular = false;
  Real attained = std::numeric_limits<Real>::quiet_NaN();
  std::string note;
};

// One-sided certificate over [E-h, E+h] via the resolvent identity.
CellCheck certify_cell(const MsaBox& box, Real center, Real half_width, Real threshold,
                       Real pivot_rel_tol) {
  CellCheck out;
  const Real dist = (box.eigenvalues.array() - center).abs().minCoeff();
  if (half_width >= dist) {
    out.note = "cell reaches the box spectrum";
    return out;
  }
  try {
    out.attained = belt_core_norm(box, center, pivot_rel_tol);
  } catch (const NearEigenvalue&) {
    out.note = "center within pivot tolerance of the spectrum";
    return out;
  }
  const Real rnorm = 1.0 / dist;
  const Real bound_on_cell = out.attained + half_width * rnorm * (rnorm / (1.0 - half_width * rnorm));
  if (bound_on_cell <= threshold)
    out.regular = true;
  else
    out.note = "certified bound " + std::to_string(bound_on_cell) + " above threshold";
  return out;
}

void certify_recursive(const MsaBox& box, Interval cell, Real threshold, int depth_left,
                       const MsaOptions& opt, std::vector<RegularityVerdict>& out) {
  const Real center = cell.midpoint();
  const Real half = 0.5 * cell.width();
  const CellCheck check = certify_cell(box, center, half, threshold, opt.pivot_rel_tol);
  if (check.regular) {
    out.push_back({Verdict::Regular, center, check.attained, threshold, cell, {}});
    return;
  }
  if (depth_left > 0) {
    certify_recursive(box, {cell.lo, center}, threshold, depth_left - 1, opt, out);
    certify_recursive(box, {center, cell.hi}, threshold, depth_left - 1, opt, out);
    return;
  }
  out.push_back({Verdict::NotRegular, center, check.attained, threshold, cell,
                 check.note.empty() ? "refinement exhausted" : check.note});
}

}  // namespace

RegularityVerdict regularity_check(const MsaBox& box, Real energy, Real m,
                                   Real pivot_rel_tol) {
  RegularityVerdict v;
  v.energy = energy;
  v.threshold = regularity_threshold(box, m);
  v.certified_over = {energy, energy};
  try {
    v.attained_norm = belt_core_norm(box, energy, pivot_rel_tol);
  } catch (const NearEigenvalue& err) {
    v.attained_norm = std::numeric_limits<Real>::quiet_NaN();
    v.note = err.what();
    return v;
  }
  v.verdict = v.attained_norm <= v.threshold ? Verdict::Regular : Verdict::NotRegular;
  return v;
}

std::vector<RegularityVerdict> certify_over_interval(const MsaBox& box, Interval interval,
                                                     Real m, const MsaOptions& opt) {
  if (!(interval.lo < interval.hi)) throw InvalidParameter("empty certification interval");
  const Real eta = opt.eta > 0 ? opt.eta : interval.width() / 64.0;
  const Real threshold = regularity_threshold(box, m);

  const int n_cells = std::max<int>(1, int(std::ceil(interval.width() / (2.0 * eta))));
  std::vector<RegularityVerdict> out;
  for (int i = 0; i < n_cells; ++i) {
    const Real lo = interval.lo + interval.width() * Real(i) / n_cells;
    const Real hi = interval.lo + interval.width() * Real(i + 1) / n_cells;
    certify_recursive(box, {lo, hi}, threshold, opt.max_refine, opt, out);
  }
  return out;
}

EventROutcome event_R(int dim, Site x, Site y, int side, Real m, Interval interval,
                      const DisorderSpec& spec, const MsaOptions& opt, Index max_matrix) {
  if (sup_norm(x - y) <= side)
    throw InvalidParameter("event R requires |x-y|_inf > L so the boxes are disjoint");

  EventROutcome out;
  out.x = x;
  out.y = y;
  out.side = side;
  out.m = m;
  out.interval = interval;

  const MsaBox box_x = make_msa_box(Box(dim, x, side), spec, max_matrix);
  const MsaBox box_y = make_msa_box(Box(dim, y, side), spec, max_matrix);

  const auto leaves_x = certify_over_interval(box_x, interval, m, opt);
  const auto leaves_y = certify_over_interval(box_y, interval, m, opt);

  // Both leaf lists partition I in order; walk the common refinement.
  size_t ix = 0, iy = 0;
  Real lo = interval.lo;
  while (ix < leaves_x.size() && iy < leaves_y.size()) {
    const Real hi = std::min(leaves_x[ix].certified_over.hi, leaves_y[iy].certified_over.hi);
    if (leaves_x[ix].verdict != Verdict::Regular && leaves_y[iy].verdict != Verdict::Regular) {
      out.holds = false;
      out.witness = 0.5 * (lo + hi);
      return out;
    }
    if (leaves_x[ix].certified_over.hi <= hi) ++ix;
    if (leaves_y[iy].certified_over.hi <= hi) ++iy;
    lo = hi;
  }
  out.holds = true;
  return out;
}

ProbabilityEstimate estimate_probability(int dim, Site x, Site y, int side, Real m,
                                         Interval interval, int n_realizations,
                                         const DisorderSpec& spec, const MsaOptions& opt,
                                         Index max_matrix) {
  if (n_realizations < 2) throw InvalidParameter("probability estimate needs n >= 2");
  int hits = 0;
  for (int k = 0; k < n_realizations; ++k)
    if (event_R(dim, x, y, side, m, interval, at_realization(spec, std::uint64_t(k)), opt,
                max_matrix)
            .holds)
      ++hits;
  ProbabilityEstimate est;
  est.n = n_realizations;
  est.p_hat = Real(hits) / n_realizations;
  est.stderror = std::sqrt(est.p_hat * (1.0 - est.p_hat) / n_realizations);
  return est;
}

std::vector<ScaleRow> run_scale_sequence(const ScaleSequence& seq, int dim, Real m,
                                         Interval interval, int n_realizations,
                                         const DisorderSpec& spec, const MsaOptions& opt,
                                         Index max_matrix, int max_scales) {
  const auto sides = scale_sides(seq, dim, max_matrix, max_scales);
  std::vector<ScaleRow> rows;
  for (size_t k = 0; k < sides.size(); ++k) {
    const int side = sides[k];
    const Site x{0, 0};
    const Site y{side + 2, 0};
    const auto est =
        estimate_probability(dim, x, y, side, m, interval, n_realizations, spec, opt, max_matrix);
    ScaleRow row;
    row.k = int(k);
    row.side = side;
    row.n = est.n;
    row.p_hat = est.p_hat;
    row.stderror = est.stderror;
    row.bound = 1.0 - std::exp(-std::pow(Real(side), seq.zeta));
    row.consistent = est.p_hat >= row.bound - 2.0 * est.stderror;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace loclab
