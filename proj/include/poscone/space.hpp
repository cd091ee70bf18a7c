#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace poscone {

/// Entries of a nominally positive object lying in (-kPositivityTol, 0)
/// are clamped to zero; anything below that threshold is an error.
inline constexpr double kPositivityTol = 1e-10;

/// Fixes the sequence-space exponent and the numeric tolerances used by
/// every operation downstream. q = infinity is allowed so that the dual
/// of an l_1 operator (sup-norm side) is representable.
struct SpaceConfig {
  double q = 2.0;
  double tol_abs = 1e-10;
  double tol_rel = 1e-8;
  int max_iter = 10000;

  SpaceConfig() = default;
  explicit SpaceConfig(double exponent, double abs_tol = 1e-10, double rel_tol = 1e-8,
                       int iter_cap = 10000)
      : q(exponent), tol_abs(abs_tol), tol_rel(rel_tol), max_iter(iter_cap) {
    validate();
  }

  void validate() const {
    if (!(q >= 1.0)) throw std::invalid_argument("SpaceConfig: exponent q must be >= 1");
    if (!(tol_abs > 0.0) || !(tol_rel > 0.0))
      throw std::invalid_argument("SpaceConfig: tolerances must be positive");
    if (max_iter < 1) throw std::invalid_argument("SpaceConfig: max_iter must be >= 1");
  }

  bool is_sup_norm() const { return std::isinf(q); }

  /// Dual exponent q* with 1/q + 1/q* = 1; infinity when q = 1.
  double dual_exponent() const {
    if (q == 1.0) return std::numeric_limits<double>::infinity();
    if (std::isinf(q)) return 1.0;
    return q / (q - 1.0);
  }

  /// Same tolerances, dual exponent.
  SpaceConfig dual() const {
    SpaceConfig d = *this;
    d.q = dual_exponent();
    return d;
  }
};

inline bool same_exponent(const SpaceConfig& a, const SpaceConfig& b) {
  return a.q == b.q || (std::isinf(a.q) && std::isinf(b.q));
}

}  // namespace poscone
