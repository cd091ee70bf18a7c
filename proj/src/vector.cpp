#include "poscone/vector.hpp"

#include <cmath>

#include "poscone/errors.hpp"

namespace poscone {

GeneralVector::GeneralVector(std::vector<double> coords) : coords_(std::move(coords)) {
  for (double v : coords_)
    if (!std::isfinite(v)) throw DegenerateInputError("GeneralVector: non-finite coordinate");
}

GeneralVector GeneralVector::zeros(std::size_t dim) {
  return GeneralVector(std::vector<double>(dim, 0.0));
}

GeneralVector GeneralVector::basis(std::size_t dim, std::size_t k) {
  if (k >= dim) throw DimensionError("basis: index out of range");
  std::vector<double> c(dim, 0.0);
  c[k] = 1.0;
  return GeneralVector(std::move(c));
}

namespace {

std::vector<double> clamp_nonnegative(std::vector<double> coords, double tol) {
  for (double& v : coords) {
    if (!std::isfinite(v)) throw PositivityError("PositiveVector: non-finite coordinate");
    if (v < 0.0) {
      if (v < -tol) throw PositivityError("PositiveVector: negative coordinate below -tol");
      v = 0.0;
    }
  }
  return coords;
}

}  // namespace

PositiveVector::PositiveVector(std::vector<double> coords, double tol)
    : v_(clamp_nonnegative(std::move(coords), tol)) {}

PositiveVector::PositiveVector(const GeneralVector& v, double tol)
    : PositiveVector(std::vector<double>(v.coords().begin(), v.coords().end()), tol) {}

PositiveVector PositiveVector::zeros(std::size_t dim) {
  return PositiveVector(std::vector<double>(dim, 0.0));
}

PositiveVector PositiveVector::ones(std::size_t dim) {
  return PositiveVector(std::vector<double>(dim, 1.0));
}

PositiveVector PositiveVector::basis(std::size_t dim, std::size_t k) {
  if (k >= dim) throw DimensionError("basis: index out of range");
  std::vector<double> c(dim, 0.0);
  c[k] = 1.0;
  return PositiveVector(std::move(c));
}

bool PositiveVector::is_zero(double tol) const {
  for (double v : coords())
    if (v > tol) return false;
  return true;
}

GeneralVector add(const GeneralVector& x, const GeneralVector& y) {
  if (x.dim() != y.dim()) throw DimensionError("add: dimension mismatch");
  std::vector<double> c(x.dim());
  for (std::size_t k = 0; k < x.dim(); ++k) c[k] = x[k] + y[k];
  return GeneralVector(std::move(c));
}

GeneralVector scale(double a, const GeneralVector& x) {
  std::vector<double> c(x.dim());
  for (std::size_t k = 0; k < x.dim(); ++k) c[k] = a * x[k];
  return GeneralVector(std::move(c));
}

double dot(const GeneralVector& x, const GeneralVector& y) {
  if (x.dim() != y.dim()) throw DimensionError("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < x.dim(); ++k) s += x[k] * y[k];
  return s;
}

}  // namespace poscone
