#pragma once

#include <optional>
#include <string>
#include <vector>

#include "poscone/operator.hpp"
#include "poscone/simplex.hpp"

namespace poscone {

/// Orthonormal basis of { A : AT = TA } at a truncation, from a
/// rank-revealing factorization of the commutation map vec(A) -> vec(AT-TA).
struct CommutantBasis {
  std::size_t dim = 0;
  std::vector<Matrix> basis;
  std::size_t rank = 0;  // == basis.size(); >= 1 always (identity commutes)
};

/// Parameters (i, j, eta, p) of one obstruction set: positive contractions T
/// admitting a positive commuting A with <e_j*, A e_i> >= eta and
/// <e_p*, A e_p> = 0.
struct CommutantConstraint {
  std::size_t i = 0;
  std::size_t j = 0;
  double eta = 1e-3;
  std::size_t p = 0;
};

struct SolverCertificate {
  lp::Status status = lp::Status::kOptimal;
  int iterations = 0;
  double objective = 0.0;
  double constraint_residual = 0.0;
  double dual_gap = 0.0;
};

struct FeasibilityResult {
  bool feasible = false;
  std::optional<TruncatedPositiveOperator> witness;
  SolverCertificate certificate;
};

/// Commutant dimensions above this make the dim^2 x dim^2 factorization
/// unreasonable on a desk machine.
inline constexpr std::size_t kMaxCommutantDim = 64;

CommutantBasis commutant_basis(const TruncatedPositiveOperator& T);

/// How the total-mass surrogate bound enters a cone program.
enum class MassBound { kAtMost, kExactly };

/// Linear optimization over the positive commutant slice
///   { A in span(basis) : A >= 0 entrywise, a_pp = 0 (when p given),
///     sum of entries (<=|=) dim }.
/// Maximizes sum_kl weights(k,l) * A(k,l). The optimizer (if any) lands in
/// *argmax when requested. Shared by the feasibility and collapse probes.
double cone_optimize(const CommutantBasis& basis, std::optional<std::size_t> zero_diag,
                     const Matrix& weights, bool maximize, MassBound bound,
                     Matrix* argmax = nullptr, SolverCertificate* certificate = nullptr);

/// Decides membership of T in the obstruction set F_{i,j,eta,p} at this
/// truncation. The l_q ball constraint on A is replaced by the polyhedral
/// surrogate sum(A) <= dim inside the solver; the maximizer is rescaled to
/// unit operator norm afterwards and the rescaled <e_j*, A e_i> is compared
/// against eta. Infeasibility is a normal outcome, not an error.
FeasibilityResult f_set_membership(const TruncatedPositiveOperator& T,
                                   const CommutantConstraint& c);

/// Heuristic search for a nonzero positive commuting A quasinilpotent at y:
/// minimizes the diagonal mass over the support of y (and one refinement
/// round over the support reachable under the candidate), then screens the
/// candidate with local_radius. Returning nothing proves nothing.
std::optional<TruncatedPositiveOperator> aab_witness_search(const TruncatedPositiveOperator& T,
                                                            const PositiveVector& y, int K);

}  // namespace poscone
