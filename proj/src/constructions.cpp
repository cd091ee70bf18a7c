#include "poscone/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "poscone/errors.hpp"
#include "poscone/norms.hpp"
#include "poscone/spectral.hpp"

namespace poscone {

namespace {

// l_q norm of a sum of `coordinates` distinct basis vectors. The one spot
// where non-unit basis norms would enter the construction bounds, should a
// general basis ever be carried by SpaceConfig.
double unit_block_norm(double q, std::size_t coordinates) {
  if (std::isinf(q)) return 1.0;
  return std::pow(static_cast<double>(coordinates), 1.0 / q);
}

// schedule terms that actually land inside an L x L truncation
std::size_t represented_schedule_terms(std::size_t N, std::size_t p, std::size_t L) {
  const std::size_t floor_L = 2 * N + p + 3;
  return L > floor_L ? L - floor_L : 0;
}

[[noreturn]] void recipe_fail(const std::string& inequality) {
  throw RecipeError("construction recipe violates: " + inequality);
}

}  // namespace

void ConstructionRecipe::validate() const {
  if (M.dim() != N + 1) recipe_fail("M acts on E_N (dim must be N+1)");
  if (p > N) recipe_fail("p <= N");
  if (L < 2 * N + p + 3) recipe_fail("L >= 2N + p + 3");
  if (!(epsilon > 0.0)) recipe_fail("epsilon > 0");
  if (!(delta > 0.0)) recipe_fail("delta > 0");

  for (std::size_t k = 0; k < M.dim(); ++k)
    for (std::size_t l = 0; l < M.dim(); ++l)
      if (!(M.entry(k, l) > 0.0)) recipe_fail("every entry of M > 0");

  const double norm_M = operator_norm(M).value;
  if (!(norm_M < 1.0)) recipe_fail("||M||_q < 1");

  const std::size_t terms = represented_schedule_terms(N, p, L);
  if (delta_schedule.size() < terms)
    recipe_fail("delta schedule covers every band column below L");
  double sched_sum = 0.0;
  for (std::size_t m = 0; m < terms; ++m) {
    if (!(delta_schedule[m] > 0.0)) recipe_fail("every delta_k > 0");
    sched_sum += delta_schedule[m];
  }
  if (!(sched_sum < 1.0 - norm_M)) recipe_fail("sum of delta_k < 1 - ||M||");

  const double q = M.space().q;
  const double u_norm = unit_block_norm(q, N + p + 2);
  const double contraction_bound =
      (1.0 - norm_M - sched_sum) / (u_norm + static_cast<double>(N + p + 2));
  if (!(delta < contraction_bound))
    recipe_fail("delta < (1 - ||M|| - sum delta_k) / (||u||_q + N + p + 2)");
  if (!(delta < epsilon)) recipe_fail("delta < epsilon");
  if (!(delta < M.entry(p, p))) recipe_fail("delta < <e_p*, M e_p>");
}

double max_admissible_delta(const TruncatedPositiveOperator& M, std::size_t N, std::size_t p,
                            const std::vector<double>& delta_schedule, double epsilon) {
  if (M.dim() != N + 1) recipe_fail("M acts on E_N (dim must be N+1)");
  if (p > N) recipe_fail("p <= N");
  if (!(epsilon > 0.0)) recipe_fail("epsilon > 0");
  const double norm_M = operator_norm(M).value;
  if (!(norm_M < 1.0)) recipe_fail("||M||_q < 1");
  double sched_sum = 0.0;
  for (double d : delta_schedule) {
    if (!(d > 0.0)) recipe_fail("every delta_k > 0");
    sched_sum += d;
  }
  if (!(sched_sum < 1.0 - norm_M)) recipe_fail("sum of delta_k < 1 - ||M||");
  const double u_norm = unit_block_norm(M.space().q, N + p + 2);
  const double contraction_bound =
      (1.0 - norm_M - sched_sum) / (u_norm + static_cast<double>(N + p + 2));
  return std::min({contraction_bound, epsilon, M.entry(p, p)});
}

ConstructionRecipe make_recipe(TruncatedPositiveOperator M, std::size_t p, double epsilon,
                               std::optional<std::size_t> L, std::optional<double> delta) {
  const std::size_t N = M.dim() - 1;
  const std::size_t length = L.value_or(2 * N + p + 3 + 3 * (N + 1));
  const std::size_t terms = represented_schedule_terms(N, p, length);

  // geometric schedule spending half the contraction budget; only the sum
  // of the tail weights is constrained
  const double budget = 0.5 * (1.0 - operator_norm(M).value);
  std::vector<double> schedule(terms);
  for (std::size_t m = 0; m < terms; ++m)
    schedule[m] = budget * std::pow(2.0, -static_cast<double>(m + 1));

  const double bound = max_admissible_delta(M, N, p, schedule, epsilon);
  ConstructionRecipe r{std::move(M), N, p, delta.value_or(bound / 2.0), std::move(schedule),
                       length, epsilon};
  r.validate();
  return r;
}

TruncatedPositiveOperator build_theorem_operator(const ConstructionRecipe& r) {
  r.validate();
  const std::size_t N = r.N, p = r.p, L = r.L;
  const double q = r.M.space().q;
  const double qs = r.M.space().dual_exponent();

  Matrix t(L, L);
  for (std::size_t k = 0; k <= N; ++k)
    for (std::size_t l = 0; l <= N; ++l) t(k, l) = r.M.entry(k, l);
  // column N+p+1 carries delta * u with u = e_0 + ... + e_{N+p+1}
  for (std::size_t k = 0; k <= N + p + 1; ++k) t(k, N + p + 1) += r.delta;
  // shift band at offset N+1
  for (std::size_t k = 0; k + N + 1 < L; ++k) {
    if (k <= N + p + 1)
      t(k + N + 1, k) += r.delta;
    else
      t(k + N + 1, k) += r.delta_schedule[k - N - p - 2];
  }

  TruncatedPositiveOperator T(std::move(t), r.M.space());

  // assembly cross-checks; failures here are bugs, not recipe errors
  if (operator_norm(T).value > 1.0 + T.space().tol_rel)
    throw Error("build_theorem_operator: assembled operator is not a contraction");
  for (std::size_t k = 0; k <= N; ++k) {
    std::vector<double> col_diff(L, 0.0), row_diff(L, 0.0);
    for (std::size_t i = 0; i < L; ++i) {
      col_diff[i] = T.entry(i, k) - (i <= N ? r.M.entry(i, k) : 0.0);
      row_diff[i] = T.entry(k, i) - (i <= N ? r.M.entry(k, i) : 0.0);
    }
    if (!(vector_norm(std::span<const double>(col_diff), q) < r.epsilon) ||
        !(vector_norm(std::span<const double>(row_diff), qs) < r.epsilon))
      throw Error("build_theorem_operator: block approximation bound failed");
  }
  return T;
}

TruncatedPositiveOperator rank_one_perturbation(const TruncatedPositiveOperator& T,
                                                std::size_t source,
                                                const std::vector<std::size_t>& targets,
                                                double delta) {
  if (!(delta > 0.0)) throw DegenerateInputError("rank_one_perturbation: delta must be > 0");
  if (source >= T.dim()) throw DimensionError("rank_one_perturbation: source out of range");
  Matrix m = T.to_matrix();
  for (std::size_t j : targets) {
    if (j >= T.dim()) throw DimensionError("rank_one_perturbation: target out of range");
    m(j, source) += delta;
  }
  return TruncatedPositiveOperator(std::move(m), T.space());
}

bool perron_cancellation_check(const Matrix& B, const Matrix& C, const Matrix& D, double delta) {
  constexpr double kCheckTol = 1e-8;
  const std::size_t n = C.rows();
  if (C.cols() != n || B.rows() != n || B.cols() != n || D.rows() != n || D.cols() != n)
    throw DimensionError("perron_cancellation_check: shape mismatch");
  if (!(delta > 0.0)) throw DegenerateInputError("perron_cancellation_check: delta must be > 0");

  for (double v : C.data())
    if (!(v > 0.0)) throw RelationError("perron_cancellation_check: C must be entrywise positive");

  Matrix d = D;
  for (double& v : d.data()) {
    if (v < 0.0) {
      if (v < -kPositivityTol)
        throw PositivityError("perron_cancellation_check: D has a negative entry");
      v = 0.0;
    }
  }

  // the relation B C = C B + delta D must hold before anything is concluded
  const Matrix residual = subtract(subtract(multiply(B, C), multiply(C, B)), scale(delta, d));
  const double scale_f = std::max(1.0, B.frobenius_norm() * C.frobenius_norm());
  if (residual.frobenius_norm() > kCheckTol * scale_f)
    throw RelationError("perron_cancellation_check: B C - C B - delta D is not zero");

  const PerronPair pc = perron_pair(TruncatedPositiveOperator(C, SpaceConfig(2.0)));
  double ydx = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ydx += pc.left[i] * d(i, j) * pc.right[j];
  const bool pairing_zero = std::abs(ydx) <= kCheckTol * std::max(1.0, d.frobenius_norm());
  const bool d_zero = d.max_abs() <= kCheckTol;
  return pairing_zero && d_zero;
}

TheoremCollapseReport verify_theorem_commutant_collapse(const ConstructionRecipe& r) {
  const TruncatedPositiveOperator T = build_theorem_operator(r);
  const std::size_t N = r.N, p = r.p, L = r.L;
  constexpr double kEta = 1e-3;
  constexpr double kZeroTol = 1e-8;

  TheoremCollapseReport report;
  report.L = L;
  report.N = N;
  report.p = p;
  report.delta = r.delta;

  const CommutantBasis basis = commutant_basis(T);
  report.commutant_rank = basis.rank;

  // master probe: the total mass of the feasible cone bounds every
  // coordinate of every feasible A from above
  Matrix ones(L, L, std::vector<double>(L * L, 1.0));
  report.cone_total_mass =
      cone_optimize(basis, p, ones, /*maximize=*/true, MassBound::kAtMost, nullptr, nullptr);
  const bool collapsed = report.cone_total_mass <= kZeroTol;

  auto cone_max_of = [&](const Matrix& weights) {
    if (collapsed) return 0.0;
    return cone_optimize(basis, p, weights, /*maximize=*/true, MassBound::kAtMost, nullptr,
                         nullptr);
  };

  // proof-step maxima at this truncation: the row at p+N+1 against columns
  // 0..N and itself, then the projected columns P A e_k
  {
    Matrix w(L, L);
    for (std::size_t k = 0; k <= N; ++k) w(p + N + 1, k) = 1.0;
    w(p + N + 1, p + N + 1) = 1.0;
    report.row_pN1_max = cone_max_of(w);
  }
  {
    Matrix w(L, L);
    for (std::size_t k = N + 1; k <= 2 * N + 1; ++k)
      for (std::size_t row = 0; row <= N; ++row) w(row, k) = 1.0;
    report.pa_shift_cols_max = cone_max_of(w);
  }
  {
    Matrix w(L, L);
    for (std::size_t k = 0; k <= 2 * N + 1; ++k)
      for (std::size_t row = 0; row <= N; ++row) w(row, k) = 1.0;
    report.pa_all_cols_max = cone_max_of(w);
  }

  report.all_infeasible = true;
  for (std::size_t i = 0; i <= N; ++i)
    for (std::size_t j = 0; j <= N; ++j) {
      if (i == j) continue;
      ConstraintVerdict verdict;
      verdict.constraint = {i, j, kEta, p};
      if (collapsed) {
        verdict.feasible = false;
        verdict.max_value = 0.0;
      } else {
        Matrix w(L, L);
        w(j, i) = 1.0;
        Matrix a;
        const double raw = cone_optimize(basis, p, w, /*maximize=*/true, MassBound::kAtMost, &a,
                                         nullptr);
        double achieved = 0.0;
        if (raw > kZeroTol) {
          for (double& v : a.data()) v = std::max(v, 0.0);
          TruncatedPositiveOperator cand(a, T.space());
          const double nrm = operator_norm(cand).value;
          if (nrm > 0.0) achieved = cand.entry(j, i) / nrm;
        }
        verdict.max_value = achieved;
        verdict.feasible = achieved + 1e-7 >= kEta;
      }
      if (verdict.feasible) report.all_infeasible = false;
      report.constraints.push_back(verdict);
    }
  return report;
}

}  // namespace poscone
