#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "poscone/space.hpp"

namespace poscone {

/// Finite coordinate vector without sign constraints. Used for duals and
/// signed test vectors.
class GeneralVector {
 public:
  GeneralVector() = default;
  explicit GeneralVector(std::vector<double> coords);

  static GeneralVector zeros(std::size_t dim);
  static GeneralVector basis(std::size_t dim, std::size_t k);

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t k) const { return coords_[k]; }
  double& operator[](std::size_t k) { return coords_[k]; }
  std::span<const double> coords() const { return coords_; }
  const std::vector<double>& data() const { return coords_; }

 private:
  std::vector<double> coords_;
};

/// Element of the coordinate cone: every entry >= 0. Construction clamps
/// round-off negatives in (-tol, 0) and rejects anything worse.
class PositiveVector {
 public:
  explicit PositiveVector(std::vector<double> coords, double tol = kPositivityTol);
  explicit PositiveVector(const GeneralVector& v, double tol = kPositivityTol);

  static PositiveVector zeros(std::size_t dim);
  static PositiveVector ones(std::size_t dim);
  static PositiveVector basis(std::size_t dim, std::size_t k);

  std::size_t dim() const { return v_.dim(); }
  double operator[](std::size_t k) const { return v_[k]; }
  const GeneralVector& general() const { return v_; }
  std::span<const double> coords() const { return v_.coords(); }

  bool is_zero(double tol = 0.0) const;

 private:
  GeneralVector v_;
};

GeneralVector add(const GeneralVector& x, const GeneralVector& y);
GeneralVector scale(double a, const GeneralVector& x);
double dot(const GeneralVector& x, const GeneralVector& y);

}  // namespace poscone
