#pragma once

#include <cstddef>
#include <vector>

#include "poscone/matrix.hpp"
#include "poscone/space.hpp"
#include "poscone/vector.hpp"

namespace poscone {

/// Largest dimension held densely. Bigger operators must use COO storage.
inline constexpr std::size_t kMaxDenseDim = 512;

struct CooTriplet {
  std::size_t row;
  std::size_t col;
  double value;
};

enum class StorageKind { kDense, kCoo };

/// Finite section P_n T P_n of a positive operator on l_q, stored as an
/// entrywise-nonnegative matrix with entry (k,l) = <e_k*, T e_l>. The space
/// exponent travels with the operator so norm and adjoint semantics cannot
/// silently diverge.
///
/// Storage is dense up to kMaxDenseDim; a coordinate list backs the large
/// sparse ensembles. All values are immutable after construction.
class TruncatedPositiveOperator {
 public:
  TruncatedPositiveOperator(Matrix entries, SpaceConfig space);
  TruncatedPositiveOperator(std::size_t dim, std::vector<CooTriplet> triplets, SpaceConfig space);

  static TruncatedPositiveOperator identity(std::size_t dim, SpaceConfig space);
  static TruncatedPositiveOperator zero(std::size_t dim, SpaceConfig space);

  std::size_t dim() const { return dim_; }
  const SpaceConfig& space() const { return space_; }
  StorageKind storage() const { return storage_; }
  bool is_dense() const { return storage_ == StorageKind::kDense; }

  double entry(std::size_t k, std::size_t l) const;
  /// Dense matrix of entries; materializes from COO when needed (dim <= kMaxDenseDim).
  Matrix to_matrix() const;
  const Matrix& dense() const;  // requires dense storage
  const std::vector<CooTriplet>& triplets() const { return sparse_; }
  std::size_t nonzero_count() const;

  GeneralVector apply(const GeneralVector& x) const;
  PositiveVector apply(const PositiveVector& x) const;
  GeneralVector apply_adjoint(const GeneralVector& y) const;  // transpose action, same exponent

  /// Finite-section adjoint: transpose with the dual exponent q*.
  TruncatedPositiveOperator adjoint() const;

  /// Leading m-by-m principal submatrix (P_m T P_m), same space.
  TruncatedPositiveOperator compress(std::size_t m) const;

  double diagonal_entry(std::size_t k) const { return entry(k, k); }

 private:
  std::size_t dim_ = 0;
  SpaceConfig space_;
  StorageKind storage_ = StorageKind::kDense;
  Matrix dense_;                    // active when storage_ == kDense
  std::vector<CooTriplet> sparse_;  // sorted (row, col), unique; active otherwise
};

/// Block extension diag(T, lambda*I) of the given size; realizes
/// P_N T P_N + lambda Q_N at a truncation. lambda < 0 is a PositivityError.
TruncatedPositiveOperator extend_with_scalar_tail(const TruncatedPositiveOperator& T,
                                                  std::size_t target_dim, double lambda);

/// Positivity-preserving algebra on finite sections.
TruncatedPositiveOperator compose(const TruncatedPositiveOperator& S,
                                  const TruncatedPositiveOperator& T);
TruncatedPositiveOperator add(const TruncatedPositiveOperator& S,
                              const TruncatedPositiveOperator& T);
TruncatedPositiveOperator scale(double lambda, const TruncatedPositiveOperator& T);

bool approx_equal(const TruncatedPositiveOperator& S, const TruncatedPositiveOperator& T,
                  double tol);

}  // namespace poscone
