#include "poscone/operator.hpp"

#include <algorithm>
#include <cmath>

#include "poscone/errors.hpp"

namespace poscone {

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("multiply: shape mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double v = a(i, k);
      if (v == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += v * b(k, j);
    }
  return c;
}

Matrix add(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("add: shape mismatch");
  Matrix c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] += b.data()[i];
  return c;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("subtract: shape mismatch");
  Matrix c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] -= b.data()[i];
  return c;
}

Matrix scale(double s, const Matrix& a) {
  Matrix c = a;
  for (double& v : c.data()) v *= s;
  return c;
}

namespace {

void validate_entries(Matrix& m, double tol) {
  for (double& v : m.data()) {
    if (!std::isfinite(v)) throw PositivityError("operator entry is not finite");
    if (v < 0.0) {
      if (v < -tol) throw PositivityError("operator entry below -tol: not a positive operator");
      v = 0.0;
    }
  }
}

}  // namespace

TruncatedPositiveOperator::TruncatedPositiveOperator(Matrix entries, SpaceConfig space)
    : dim_(entries.rows()), space_(space), storage_(StorageKind::kDense),
      dense_(std::move(entries)) {
  space_.validate();
  if (dim_ == 0 || dense_.cols() != dim_)
    throw DimensionError("TruncatedPositiveOperator: entries must be square and nonempty");
  if (dim_ > kMaxDenseDim)
    throw UnsupportedError("TruncatedPositiveOperator: dense storage capped at dim 512");
  validate_entries(dense_, space_.tol_abs);
}

TruncatedPositiveOperator::TruncatedPositiveOperator(std::size_t dim,
                                                     std::vector<CooTriplet> triplets,
                                                     SpaceConfig space)
    : dim_(dim), space_(space), storage_(StorageKind::kCoo) {
  space_.validate();
  if (dim_ == 0) throw DimensionError("TruncatedPositiveOperator: dim must be >= 1");
  for (auto& t : triplets) {
    if (t.row >= dim_ || t.col >= dim_) throw DimensionError("coo triplet index out of range");
    if (!std::isfinite(t.value)) throw PositivityError("coo value is not finite");
    if (t.value < 0.0) {
      if (t.value < -space_.tol_abs) throw PositivityError("coo value below -tol");
      t.value = 0.0;
    }
  }
  std::sort(triplets.begin(), triplets.end(), [](const CooTriplet& a, const CooTriplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  // merge duplicates by summation
  for (const auto& t : triplets) {
    if (!sparse_.empty() && sparse_.back().row == t.row && sparse_.back().col == t.col)
      sparse_.back().value += t.value;
    else
      sparse_.push_back(t);
  }
}

TruncatedPositiveOperator TruncatedPositiveOperator::identity(std::size_t dim, SpaceConfig space) {
  return TruncatedPositiveOperator(Matrix::identity(dim), space);
}

TruncatedPositiveOperator TruncatedPositiveOperator::zero(std::size_t dim, SpaceConfig space) {
  return TruncatedPositiveOperator(Matrix(dim, dim), space);
}

double TruncatedPositiveOperator::entry(std::size_t k, std::size_t l) const {
  if (k >= dim_ || l >= dim_) throw DimensionError("entry: index out of range");
  if (storage_ == StorageKind::kDense) return dense_(k, l);
  auto it = std::lower_bound(sparse_.begin(), sparse_.end(), std::make_pair(k, l),
                             [](const CooTriplet& t, const std::pair<std::size_t, std::size_t>& q) {
                               return t.row != q.first ? t.row < q.first : t.col < q.second;
                             });
  if (it != sparse_.end() && it->row == k && it->col == l) return it->value;
  return 0.0;
}

Matrix TruncatedPositiveOperator::to_matrix() const {
  if (storage_ == StorageKind::kDense) return dense_;
  if (dim_ > kMaxDenseDim)
    throw UnsupportedError("to_matrix: operator too large for dense materialization");
  Matrix m(dim_, dim_);
  for (const auto& t : sparse_) m(t.row, t.col) = t.value;
  return m;
}

const Matrix& TruncatedPositiveOperator::dense() const {
  if (storage_ != StorageKind::kDense)
    throw UnsupportedError("dense(): operator uses coordinate storage");
  return dense_;
}

std::size_t TruncatedPositiveOperator::nonzero_count() const {
  if (storage_ == StorageKind::kCoo) return sparse_.size();
  std::size_t n = 0;
  for (double v : dense_.data())
    if (v != 0.0) ++n;
  return n;
}

GeneralVector TruncatedPositiveOperator::apply(const GeneralVector& x) const {
  if (x.dim() != dim_) throw DimensionError("apply: dimension mismatch");
  std::vector<double> out(dim_, 0.0);
  if (storage_ == StorageKind::kDense) {
    for (std::size_t k = 0; k < dim_; ++k) {
      double s = 0.0;
      for (std::size_t l = 0; l < dim_; ++l) s += dense_(k, l) * x[l];
      out[k] = s;
    }
  } else {
    for (const auto& t : sparse_) out[t.row] += t.value * x[t.col];
  }
  return GeneralVector(std::move(out));
}

PositiveVector TruncatedPositiveOperator::apply(const PositiveVector& x) const {
  return PositiveVector(apply(x.general()));
}

GeneralVector TruncatedPositiveOperator::apply_adjoint(const GeneralVector& y) const {
  if (y.dim() != dim_) throw DimensionError("apply_adjoint: dimension mismatch");
  std::vector<double> out(dim_, 0.0);
  if (storage_ == StorageKind::kDense) {
    for (std::size_t k = 0; k < dim_; ++k) {
      const double yk = y[k];
      if (yk == 0.0) continue;
      for (std::size_t l = 0; l < dim_; ++l) out[l] += dense_(k, l) * yk;
    }
  } else {
    for (const auto& t : sparse_) out[t.col] += t.value * y[t.row];
  }
  return GeneralVector(std::move(out));
}

TruncatedPositiveOperator TruncatedPositiveOperator::adjoint() const {
  SpaceConfig dual_space = space_.dual();
  if (storage_ == StorageKind::kDense)
    return TruncatedPositiveOperator(dense_.transposed(), dual_space);
  std::vector<CooTriplet> t = sparse_;
  for (auto& e : t) std::swap(e.row, e.col);
  return TruncatedPositiveOperator(dim_, std::move(t), dual_space);
}

TruncatedPositiveOperator TruncatedPositiveOperator::compress(std::size_t m) const {
  if (m < 1 || m > dim_) throw DimensionError("compress: target dimension out of range");
  if (storage_ == StorageKind::kDense) {
    Matrix sub(m, m);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = 0; l < m; ++l) sub(k, l) = dense_(k, l);
    return TruncatedPositiveOperator(std::move(sub), space_);
  }
  std::vector<CooTriplet> t;
  for (const auto& e : sparse_)
    if (e.row < m && e.col < m) t.push_back(e);
  return TruncatedPositiveOperator(m, std::move(t), space_);
}

TruncatedPositiveOperator extend_with_scalar_tail(const TruncatedPositiveOperator& T,
                                                  std::size_t target_dim, double lambda) {
  if (target_dim < T.dim())
    throw DimensionError("extend_with_scalar_tail: target below current dimension");
  if (lambda < 0.0)
    throw PositivityError("extend_with_scalar_tail: negative tail weight");
  if (T.is_dense() && target_dim <= kMaxDenseDim) {
    Matrix m(target_dim, target_dim);
    const Matrix& src = T.dense();
    for (std::size_t k = 0; k < T.dim(); ++k)
      for (std::size_t l = 0; l < T.dim(); ++l) m(k, l) = src(k, l);
    for (std::size_t k = T.dim(); k < target_dim; ++k) m(k, k) = lambda;
    return TruncatedPositiveOperator(std::move(m), T.space());
  }
  std::vector<CooTriplet> t(T.triplets());
  if (T.is_dense()) {
    t.clear();
    const Matrix& src = T.dense();
    for (std::size_t k = 0; k < T.dim(); ++k)
      for (std::size_t l = 0; l < T.dim(); ++l)
        if (src(k, l) != 0.0) t.push_back({k, l, src(k, l)});
  }
  if (lambda != 0.0)
    for (std::size_t k = T.dim(); k < target_dim; ++k) t.push_back({k, k, lambda});
  return TruncatedPositiveOperator(target_dim, std::move(t), T.space());
}

TruncatedPositiveOperator compose(const TruncatedPositiveOperator& S,
                                  const TruncatedPositiveOperator& T) {
  if (S.dim() != T.dim()) throw DimensionError("compose: dimension mismatch");
  return TruncatedPositiveOperator(multiply(S.to_matrix(), T.to_matrix()), S.space());
}

TruncatedPositiveOperator add(const TruncatedPositiveOperator& S,
                              const TruncatedPositiveOperator& T) {
  if (S.dim() != T.dim()) throw DimensionError("add: dimension mismatch");
  return TruncatedPositiveOperator(add(S.to_matrix(), T.to_matrix()), S.space());
}

TruncatedPositiveOperator scale(double lambda, const TruncatedPositiveOperator& T) {
  if (lambda < 0.0) throw PositivityError("scale: negative scalar leaves the cone");
  if (!T.is_dense()) {
    std::vector<CooTriplet> t = T.triplets();
    for (auto& e : t) e.value *= lambda;
    return TruncatedPositiveOperator(T.dim(), std::move(t), T.space());
  }
  return TruncatedPositiveOperator(scale(lambda, T.to_matrix()), T.space());
}

bool approx_equal(const TruncatedPositiveOperator& S, const TruncatedPositiveOperator& T,
                  double tol) {
  if (S.dim() != T.dim()) return false;
  for (std::size_t k = 0; k < S.dim(); ++k)
    for (std::size_t l = 0; l < S.dim(); ++l)
      if (std::abs(S.entry(k, l) - T.entry(k, l)) > tol) return false;
  return true;
}

}  // namespace poscone
