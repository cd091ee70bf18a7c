#pragma once

#include <cstdint>
#include <span>

#include "poscone/operator.hpp"

namespace poscone {

/// Seed for the power-method restart batch when the caller does not care.
inline constexpr std::uint64_t kNormRestartSeed = 0x9e3779b97f4a7c15ULL;

enum class NormMethod { kExactL1, kExactL2, kExactLinf, kPowerMethod };

const char* to_string(NormMethod m);

/// Computed operator norm together with a witness certifying the lower
/// bound: || T witness ||_q >= value - tol.
struct NormCertificate {
  double value;
  PositiveVector witness;
  NormMethod method;
  int iterations;
  double residual;
};

/// l_q norm of a coordinate vector; q = infinity gives the sup norm.
double vector_norm(std::span<const double> x, double q);
double vector_norm(const GeneralVector& x, double q);
double vector_norm(const PositiveVector& x, double q);

/// l_q -> l_q operator norm of a nonnegative matrix. Exact column sums at
/// q = 1, largest singular value at q = 2, and a cone-restricted nonlinear
/// power iteration (with restarts) for every other exponent. The supremum
/// over the unit sphere of a nonnegative matrix is attained on the positive
/// cone, so cone-restricted iteration suffices.
///
/// Non-convergence does not throw: the best certificate is returned with
/// residual > tol_rel and the caller decides.
NormCertificate operator_norm(const TruncatedPositiveOperator& T,
                              std::uint64_t seed = kNormRestartSeed);

/// The power-iteration path regardless of exponent (used for cross-checks).
NormCertificate power_method_norm(const TruncatedPositiveOperator& T,
                                  std::uint64_t seed = kNormRestartSeed);

/// Predicate: value <= 1 + tol_rel.
bool is_contraction(const TruncatedPositiveOperator& T);

/// A + delta * R0 with R0 = <x0*, .> A x0, where x0 is a positive norming
/// vector of A and x0* its positive norming functional (the explicit l_q
/// dual vector x0_k^{q-1}). Throws DeltaTooLargeError with the largest
/// admissible delta (by bisection) when the perturbed norm reaches 1.
TruncatedPositiveOperator exposing_perturbation(const TruncatedPositiveOperator& A, double delta);

/// Approximate test that the norming vectors of A cluster around a single
/// positive direction. Samples the positive unit sphere at roughly
/// grid_resolution points; refuses dimensions above 6. Heuristic by nature:
/// a false verdict at a given resolution is not a certificate.
bool is_absolutely_exposing(const TruncatedPositiveOperator& A,
                            std::size_t grid_resolution = 10000);

}  // namespace poscone
