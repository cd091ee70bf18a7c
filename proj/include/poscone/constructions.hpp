#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "poscone/commutant.hpp"
#include "poscone/operator.hpp"

namespace poscone {

/// Parameters of the banded contraction built around a strictly positive
/// block M on E_N: the block, a column of weight delta at index N+p+1, a
/// delta band at offset N+1 under the first N+p+2 columns, and a summable
/// tail schedule (delta_k)_{k>=1} on the remaining band. L is the size of
/// the built truncation.
///
/// validate() enforces the construction inequalities and names the violated
/// one in the RecipeError. With unit basis norms they read:
///   - M entrywise > 0 and ||M||_q < 1
///   - sum of the represented schedule terms < 1 - ||M||
///   - delta < (1 - ||M|| - sum) / (||u||_q + N + p + 2),  u = e_0+..+e_{N+p+1}
///   - delta < epsilon and delta < <e_p*, M e_p>
///   - L >= 2N + p + 3
struct ConstructionRecipe {
  TruncatedPositiveOperator M;
  std::size_t N;
  std::size_t p;
  double delta;
  std::vector<double> delta_schedule;  // delta_k, k = 1, 2, ...
  std::size_t L;
  double epsilon;

  void validate() const;
};

/// Least upper bound on delta for the given block: the minimum of the
/// contraction bound, epsilon, and the diagonal entry <e_p*, M e_p>.
/// The returned value is exclusive; any delta strictly below it is valid.
double max_admissible_delta(const TruncatedPositiveOperator& M, std::size_t N, std::size_t p,
                            const std::vector<double>& delta_schedule, double epsilon);

/// Recipe with the default geometric schedule (half the contraction budget),
/// delta at half its admissible bound, and L = 2N + p + 3 + 3(N+1) unless
/// overridden.
ConstructionRecipe make_recipe(TruncatedPositiveOperator M, std::size_t p, double epsilon,
                               std::optional<std::size_t> L = std::nullopt,
                               std::optional<double> delta = std::nullopt);

/// The L x L truncation of T = M P + delta <e_{N+p+1}*, .> u + S. Checked
/// after assembly: entrywise nonnegative, ||T||_q <= 1, and the block
/// approximation bounds ||(T-M) e_k|| < eps, ||(T-M)* e_k*|| < eps, k <= N.
TruncatedPositiveOperator build_theorem_operator(const ConstructionRecipe& r);

/// T + delta * (sum_{j in targets} e_j) <e_source*, .> : one operation
/// covering the three rank-one families (single target, the {e_0,e_1} pair
/// with source 0, and the diagonal bump with target = source).
TruncatedPositiveOperator rank_one_perturbation(const TruncatedPositiveOperator& T,
                                                std::size_t source,
                                                const std::vector<std::size_t>& targets,
                                                double delta);

/// Re-derives D = 0 from B C = C B + delta D numerically: verifies the
/// relation, pairs D against the Perron vectors of C (y^T D x must vanish),
/// and concludes ||D||_max <= tol from the strict positivity of x and y.
bool perron_cancellation_check(const Matrix& B, const Matrix& C, const Matrix& D, double delta);

struct ConstraintVerdict {
  CommutantConstraint constraint;
  bool feasible = false;
  double max_value = 0.0;  // maximized <e_j*, A e_i> over the cone, rescaled
};

/// Finite-scale verdicts for the commutant collapse at one truncation.
/// cone_total_mass is the maximum of sum(A) over the feasible cone; zero
/// means the cone is {0} and every constraint is infeasible at once.
/// The proof-step maxima mirror the intermediate equations: the row at
/// index p+N+1 against columns 0..N and itself, then P A e_k for the two
/// column ranges. all_infeasible false is a finding to report (exit code 3
/// in the CLI), not a runtime error.
struct TheoremCollapseReport {
  std::size_t L = 0;
  std::size_t N = 0;
  std::size_t p = 0;
  double delta = 0.0;
  std::size_t commutant_rank = 0;
  double cone_total_mass = 0.0;
  std::vector<ConstraintVerdict> constraints;
  double row_pN1_max = 0.0;       // max a_{p+N+1,k}, k <= N, and a_{p+N+1,p+N+1}
  double pa_shift_cols_max = 0.0; // max sum_{r<=N} a_{r,k}, N+1 <= k <= 2N+1
  double pa_all_cols_max = 0.0;   // max sum_{r<=N} a_{r,k}, 0 <= k <= 2N+1
  bool all_infeasible = false;
};

/// Builds the operator of the recipe and probes the constraint family
/// (i, j, eta=1e-3, p) for all i != j <= N. Smaller eta is the harder case
/// by monotonicity, so the single representative suffices.
TheoremCollapseReport verify_theorem_commutant_collapse(const ConstructionRecipe& r);

}  // namespace poscone
