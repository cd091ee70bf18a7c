#include "poscone/commutant.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>

#include "poscone/errors.hpp"
#include "poscone/ideals.hpp"
#include "poscone/norms.hpp"
#include "poscone/spectral.hpp"

namespace poscone {

CommutantBasis commutant_basis(const TruncatedPositiveOperator& T) {
  const std::size_t n = T.dim();
  if (n > kMaxCommutantDim)
    throw UnsupportedError("commutant_basis: the commutation map has dim^4 coefficients; dim > 64 refused");
  const Matrix t = T.to_matrix();

  // commutation map on row-major vec(A): K vec(A) = vec(AT - TA)
  const std::size_t nn = n * n;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nn, nn);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      const std::size_t row = k * n + l;
      for (std::size_t m = 0; m < n; ++m) {
        K(row, k * n + m) += t(m, l);
        K(row, m * n + l) -= t(k, m);
      }
    }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(K, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double cut = std::max(T.space().tol_rel * smax, 1e-13);

  CommutantBasis out;
  out.dim = n;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) continue;
    Matrix b(n, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) b(k, l) = svd.matrixV()(k * n + l, i);
    out.basis.push_back(std::move(b));
  }
  out.rank = out.basis.size();
  if (out.rank == 0)
    throw SolverError("commutant_basis: empty nullspace (identity must commute; numerical failure)");
  return out;
}

namespace {

Matrix combine(const CommutantBasis& basis, const std::vector<double>& plus_minus) {
  const std::size_t r = basis.rank;
  Matrix a(basis.dim, basis.dim);
  for (std::size_t m = 0; m < r; ++m) {
    const double c = plus_minus[m] - plus_minus[r + m];
    if (c == 0.0) continue;
    for (std::size_t i = 0; i < a.data().size(); ++i)
      a.data()[i] += c * basis.basis[m].data()[i];
  }
  return a;
}

double weighted_sum(const Matrix& w, const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.data().size(); ++i) s += w.data()[i] * a.data()[i];
  return s;
}

// coefficient-space row of one linear functional of A = sum c_m B_m
std::vector<double> functional_row(const CommutantBasis& basis,
                                   const std::function<double(const Matrix&)>& entry_of) {
  std::vector<double> row(basis.rank);
  for (std::size_t m = 0; m < basis.rank; ++m) row[m] = entry_of(basis.basis[m]);
  return row;
}

// Decides { A in span : A >= 0, a_pp = 0 } == {0} via the Farkas
// alternative: the slice { G c >= 0, h.c = 0, mass.c = 1 } is empty iff
// some lambda >= 0 and free mu solve G^T lambda + mu h = -mass. The dual
// system has a nonzero right-hand side, which keeps the simplex away from
// the degenerate vertex fan the primal cone programs are made of. A "zero"
// answer is accepted only when the returned multipliers actually satisfy
// the certificate equation; anything doubtful falls back to the primal.
bool cone_is_zero(const std::vector<std::vector<double>>& live_rows,
                  const std::vector<double>* diag_row, const std::vector<double>& mass_row,
                  int* iterations) {
  const std::size_t r = mass_row.size();
  const std::size_t vars = live_rows.size() + (diag_row ? 2 : 0);
  lp::Problem p;
  p.num_vars = vars;
  p.objective.assign(vars, 0.0);
  for (std::size_t d = 0; d < r; ++d) {
    std::vector<double> row(vars, 0.0);
    for (std::size_t i = 0; i < live_rows.size(); ++i) row[i] = live_rows[i][d];
    if (diag_row) {
      row[live_rows.size()] = (*diag_row)[d];
      row[live_rows.size() + 1] = -(*diag_row)[d];
    }
    p.add_row(std::move(row), lp::Sense::kEq, -mass_row[d]);
  }
  const lp::Result res = lp::solve(p);
  if (iterations) *iterations += res.iterations;
  if (res.status == lp::Status::kIterationLimit)
    throw SolverError("cone_is_zero: simplex hit the iteration cap");
  if (res.status != lp::Status::kOptimal) return false;

  // validate the certificate residual independently of the solver
  double worst = 0.0;
  for (std::size_t d = 0; d < r; ++d) {
    double lhs = 0.0;
    for (std::size_t i = 0; i < live_rows.size(); ++i) lhs += res.x[i] * live_rows[i][d];
    if (diag_row)
      lhs += (res.x[live_rows.size()] - res.x[live_rows.size() + 1]) * (*diag_row)[d];
    worst = std::max(worst, std::abs(lhs + mass_row[d]));
  }
  double lam_min = 0.0;
  for (std::size_t i = 0; i < live_rows.size(); ++i) lam_min = std::min(lam_min, res.x[i]);
  return worst <= 1e-6 && lam_min >= -1e-9;
}

}  // namespace

double cone_optimize(const CommutantBasis& basis, std::optional<std::size_t> zero_diag,
                     const Matrix& weights, bool maximize, MassBound bound, Matrix* argmax,
                     SolverCertificate* certificate) {
  const std::size_t n = basis.dim;
  const std::size_t r = basis.rank;
  if (weights.rows() != n || weights.cols() != n)
    throw DimensionError("cone_optimize: weight shape mismatch");
  if (zero_diag && *zero_diag >= n)
    throw DimensionError("cone_optimize: diagonal index out of range");

  // entrywise nonnegativity rows in coefficient space; rows identically zero
  // on the subspace are vacuous
  std::vector<std::vector<double>> live_rows;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      std::vector<double> row = functional_row(basis, [&](const Matrix& b) { return b(k, l); });
      double mag = 0.0;
      for (double v : row) mag = std::max(mag, std::abs(v));
      if (mag > 1e-14) live_rows.push_back(std::move(row));
    }
  std::vector<double> diag_row, mass_row;
  if (zero_diag)
    diag_row = functional_row(basis, [&](const Matrix& b) { return b(*zero_diag, *zero_diag); });
  mass_row = functional_row(basis, [&](const Matrix& b) {
    double s = 0.0;
    for (double v : b.data()) s += v;
    return s;
  });

  // fast path: a Farkas certificate that the cone collapses to {0}
  int gordan_iterations = 0;
  if (cone_is_zero(live_rows, zero_diag ? &diag_row : nullptr, mass_row, &gordan_iterations)) {
    if (certificate) {
      certificate->status =
          bound == MassBound::kExactly ? lp::Status::kInfeasible : lp::Status::kOptimal;
      certificate->iterations = gordan_iterations;
      certificate->objective = 0.0;
      certificate->constraint_residual = 0.0;
      certificate->dual_gap = 0.0;
    }
    if (argmax) *argmax = Matrix(n, n);
    return 0.0;
  }

  // free coefficients split into positive and negative parts
  lp::Problem p;
  p.num_vars = 2 * r;
  auto widen = [&](const std::vector<double>& half) {
    std::vector<double> row(2 * r);
    for (std::size_t m = 0; m < r; ++m) {
      row[m] = half[m];
      row[r + m] = -half[m];
    }
    return row;
  };
  for (const auto& row : live_rows) p.add_row(widen(row), lp::Sense::kGe, 0.0);
  if (zero_diag) p.add_row(widen(diag_row), lp::Sense::kEq, 0.0);
  p.add_row(widen(mass_row), bound == MassBound::kAtMost ? lp::Sense::kLe : lp::Sense::kEq,
            static_cast<double>(n));
  p.objective =
      widen(functional_row(basis, [&](const Matrix& b) { return weighted_sum(weights, b); }));
  if (!maximize)
    for (double& v : p.objective) v = -v;

  const lp::Result res = lp::solve(p);
  if (certificate) {
    certificate->status = res.status;
    certificate->iterations = gordan_iterations + res.iterations;
    certificate->objective = maximize ? res.objective : -res.objective;
    certificate->constraint_residual = res.constraint_residual;
    certificate->dual_gap = res.dual_gap;
  }
  if (res.status == lp::Status::kInfeasible) return 0.0;
  if (res.status == lp::Status::kIterationLimit)
    throw SolverError("cone_optimize: simplex hit the iteration cap");

  const Matrix a = combine(basis, res.x);
  if (argmax) *argmax = a;
  return weighted_sum(weights, a);
}

FeasibilityResult f_set_membership(const TruncatedPositiveOperator& T,
                                   const CommutantConstraint& c) {
  if (c.i >= T.dim() || c.j >= T.dim() || c.p >= T.dim())
    throw DimensionError("f_set_membership: constraint index out of range");
  if (!(c.eta > 0.0)) throw DegenerateInputError("f_set_membership: eta must be > 0");
  if (!is_contraction(T))
    throw DegenerateInputError("f_set_membership: T must be a contraction");

  // feasibility tolerance on all linear constraints
  constexpr double kFeasTol = 1e-7;

  const CommutantBasis basis = commutant_basis(T);
  Matrix weights(T.dim(), T.dim());
  weights(c.j, c.i) = 1.0;

  FeasibilityResult out;
  Matrix a;
  cone_optimize(basis, c.p, weights, /*maximize=*/true, MassBound::kAtMost, &a, &out.certificate);
  if (out.certificate.status != lp::Status::kOptimal) {
    out.feasible = false;
    return out;
  }

  // clamp solver round-off, then rescale to unit operator norm; rescaling
  // preserves every constraint except the eta threshold, which is re-checked
  for (double& v : a.data()) v = std::max(v, 0.0);
  double mass = 0.0;
  for (double v : a.data()) mass += v;
  if (mass <= kFeasTol) {
    out.feasible = false;  // the cone slice is {0}
    return out;
  }
  TruncatedPositiveOperator candidate(a, T.space());
  const double nrm = operator_norm(candidate).value;
  if (nrm <= 0.0) {
    out.feasible = false;
    return out;
  }
  TruncatedPositiveOperator rescaled = scale(1.0 / nrm, candidate);
  const double achieved = rescaled.entry(c.j, c.i);
  out.certificate.objective = achieved;
  if (achieved + kFeasTol < c.eta) {
    out.feasible = false;
    return out;
  }
  out.feasible = true;
  out.witness = std::move(rescaled);
  return out;
}

namespace {

std::vector<std::size_t> reachable_support(const TruncatedPositiveOperator& A,
                                           const PositiveVector& y) {
  const SupportDigraph g = support_digraph(A);
  std::vector<bool> seen(A.dim(), false);
  std::vector<std::size_t> queue;
  for (std::size_t j = 0; j < y.dim(); ++j)
    if (y[j] > A.space().tol_abs) {
      seen[j] = true;
      queue.push_back(j);
    }
  while (!queue.empty()) {
    const std::size_t v = queue.back();
    queue.pop_back();
    for (std::size_t k : g.successors[v])
      if (!seen[k]) {
        seen[k] = true;
        queue.push_back(k);
      }
  }
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < seen.size(); ++k)
    if (seen[k]) out.push_back(k);
  return out;
}

std::optional<TruncatedPositiveOperator> screen_candidate(const Matrix& a,
                                                          const TruncatedPositiveOperator& T,
                                                          const PositiveVector& y, int K) {
  Matrix clamped = a;
  for (double& v : clamped.data()) v = std::max(v, 0.0);
  if (clamped.max_abs() <= 1e-9) return std::nullopt;
  TruncatedPositiveOperator candidate(std::move(clamped), T.space());
  const LocalRadiusEstimate est = local_radius(candidate, y, K);
  if (est.verdict == LocalRadiusVerdict::kNotQuasinilpotent) return std::nullopt;
  return candidate;
}

}  // namespace

std::optional<TruncatedPositiveOperator> aab_witness_search(const TruncatedPositiveOperator& T,
                                                            const PositiveVector& y, int K) {
  if (y.dim() != T.dim()) throw DimensionError("aab_witness_search: dimension mismatch");
  if (y.is_zero()) throw DegenerateInputError("aab_witness_search: zero vector");

  const CommutantBasis basis = commutant_basis(T);
  const double tol = T.space().tol_abs;

  // zero diagonal mass over supp(y) is necessary for quasinilpotence at y
  Matrix diag_weights(T.dim(), T.dim());
  for (std::size_t j = 0; j < y.dim(); ++j)
    if (y[j] > tol) diag_weights(j, j) = 1.0;

  SolverCertificate cert;
  Matrix a;
  const double diag_min = cone_optimize(basis, std::nullopt, diag_weights, /*maximize=*/false,
                                        MassBound::kExactly, &a, &cert);
  if (cert.status != lp::Status::kOptimal) return std::nullopt;
  if (diag_min > 1e-7) return std::nullopt;  // every commuting positive A has diagonal mass on supp(y)

  if (auto hit = screen_candidate(a, T, y, K)) return hit;

  // one refinement round: also suppress the diagonal over the support the
  // candidate actually reaches from y
  {
    Matrix clamped = a;
    for (double& v : clamped.data()) v = std::max(v, 0.0);
    if (clamped.max_abs() <= 1e-9) return std::nullopt;
    TruncatedPositiveOperator candidate(std::move(clamped), T.space());
    Matrix refined_weights(T.dim(), T.dim());
    for (std::size_t j : reachable_support(candidate, y)) refined_weights(j, j) = 1.0;
    Matrix a2;
    const double m2 = cone_optimize(basis, std::nullopt, refined_weights, /*maximize=*/false,
                                    MassBound::kExactly, &a2, &cert);
    if (cert.status == lp::Status::kOptimal && m2 <= 1e-7)
      if (auto hit = screen_candidate(a2, T, y, K)) return hit;
  }
  return std::nullopt;
}

}  // namespace poscone
