#pragma once

#include <complex>
#include <vector>

#include "poscone/operator.hpp"

namespace poscone {

/// Spectral radius of a nonnegative matrix with nonnegative left and right
/// eigenvectors (l_2-normalized). residual bounds both eigen-equations.
struct PerronPair {
  double value;
  PositiveVector right;
  PositiveVector left;
  double residual;
};

/// Power iteration from the all-ones vector, for T and its transpose.
/// Strictly positive matrices have a unique pair; otherwise the result is a
/// valid but possibly non-unique nonnegative eigenpair. Periodic matrices
/// may fail to converge: IterationLimitError is thrown and the caller may
/// pre-shift T + eps*I to break periodicity.
PerronPair perron_pair(const TruncatedPositiveOperator& T);

enum class LocalRadiusVerdict { kNotQuasinilpotent, kInconclusive };

const char* to_string(LocalRadiusVerdict v);

/// Finite-horizon probe of the local spectral radius at a vector. values[k-1]
/// holds ||A^k y||^{1/k}. lower_bound is the largest diagonal entry a_{j,j}
/// over the support of y, which bounds liminf ||A^k y||^{1/k} from below.
/// The verdict is never "quasinilpotent": finite data cannot certify a zero
/// liminf, so the alternatives are kNotQuasinilpotent and kInconclusive.
struct LocalRadiusEstimate {
  int horizon;
  std::vector<double> values;
  double lower_bound;
  LocalRadiusVerdict verdict;
};

LocalRadiusEstimate local_radius(const TruncatedPositiveOperator& A, const PositiveVector& y,
                                 int K);

/// (||T^n x||_q)_{n=1..K}; empirical decay probe only.
std::vector<double> orbit_norm_decay(const TruncatedPositiveOperator& T, const GeneralVector& x,
                                     int K);

/// Eigenvalues of the truncation via a dense backward-stable eigensolver.
std::vector<std::complex<double>> finite_spectrum(const TruncatedPositiveOperator& T);

}  // namespace poscone
