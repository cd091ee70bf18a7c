#include "poscone/norms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "poscone/errors.hpp"
#include "poscone/rng.hpp"

namespace poscone {

const char* to_string(NormMethod m) {
  switch (m) {
    case NormMethod::kExactL1: return "exact_l1";
    case NormMethod::kExactL2: return "exact_l2";
    case NormMethod::kExactLinf: return "exact_linf";
    case NormMethod::kPowerMethod: return "power_method";
  }
  return "unknown";
}

double vector_norm(std::span<const double> x, double q) {
  if (!(q >= 1.0)) throw UnsupportedError("vector_norm: exponent must be >= 1");
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
  }
  if (q == 1.0) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
  }
  if (q == 2.0) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
  }
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v) / m, q);
  return m * std::pow(s, 1.0 / q);
}

double vector_norm(const GeneralVector& x, double q) { return vector_norm(x.coords(), q); }
double vector_norm(const PositiveVector& x, double q) { return vector_norm(x.coords(), q); }

namespace {

// ---------------------------------------------------------------------------
// Exact routes

NormCertificate column_sum_norm(const TruncatedPositiveOperator& T) {
  const std::size_t n = T.dim();
  std::vector<double> sums(n, 0.0);
  if (T.is_dense()) {
    const Matrix& m = T.dense();
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) sums[l] += m(k, l);
  } else {
    for (const auto& t : T.triplets()) sums[t.col] += t.value;
  }
  std::size_t best = 0;
  for (std::size_t l = 1; l < n; ++l)
    if (sums[l] > sums[best]) best = l;
  return {sums[best], PositiveVector::basis(n, best), NormMethod::kExactL1, 0, 0.0};
}

NormCertificate row_sum_norm(const TruncatedPositiveOperator& T) {
  const std::size_t n = T.dim();
  std::vector<double> sums(n, 0.0);
  if (T.is_dense()) {
    const Matrix& m = T.dense();
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) sums[k] += m(k, l);
  } else {
    for (const auto& t : T.triplets()) sums[t.row] += t.value;
  }
  const double value = *std::max_element(sums.begin(), sums.end());
  // the all-ones vector is sup-norm one and attains the max row sum
  return {value, PositiveVector::ones(n), NormMethod::kExactLinf, 0, 0.0};
}

// Cyclic Jacobi eigensolver for the symmetric Gram matrix T^T T. Small and
// self-contained so the q = 2 route does not share code with the SVD oracle
// used to test it.
int jacobi_symmetric(Matrix& g, std::vector<double>& eigvec_top, std::size_t* top_index) {
  const std::size_t n = g.rows();
  Matrix v = Matrix::identity(n);
  int sweeps = 0;
  for (; sweeps < 60; ++sweeps) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += g(i, j) * g(i, j);
    double diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) diag += g(i, i) * g(i, i);
    if (off <= 1e-30 * std::max(1.0, diag)) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = g(p, q);
        if (apq == 0.0) continue;
        const double theta = (g(q, q) - g(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double gkp = g(k, p), gkq = g(k, q);
          g(k, p) = c * gkp - s * gkq;
          g(k, q) = s * gkp + c * gkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double gpk = g(p, k), gqk = g(q, k);
          g(p, k) = c * gpk - s * gqk;
          g(q, k) = s * gpk + c * gqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
  std::size_t top = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (g(i, i) > g(top, top)) top = i;
  eigvec_top.resize(n);
  for (std::size_t k = 0; k < n; ++k) eigvec_top[k] = v(k, top);
  *top_index = top;
  return sweeps;
}

NormCertificate spectral_norm(const TruncatedPositiveOperator& T) {
  const Matrix m = T.to_matrix();
  const std::size_t n = T.dim();
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += m(k, i) * m(k, j);
      g(i, j) = s;
      g(j, i) = s;
    }
  std::vector<double> vec;
  std::size_t top = 0;
  const int sweeps = jacobi_symmetric(g, vec, &top);
  const double value = std::sqrt(std::max(0.0, g(top, top)));
  // For nonnegative T the top singular direction can be chosen in the cone.
  double nrm = 0.0;
  for (double& v : vec) {
    v = std::abs(v);
    nrm += v * v;
  }
  nrm = std::sqrt(nrm);
  if (nrm > 0.0)
    for (double& v : vec) v /= nrm;
  return {value, PositiveVector(std::move(vec)), NormMethod::kExactL2, sweeps, 0.0};
}

// ---------------------------------------------------------------------------
// Nonlinear power iteration for general exponents

// Positive dual vector of w for exponent r: the r*-unit vector v maximizing
// <v, w>. Requires w >= 0 (cone-restricted).
std::vector<double> dual_vector(const std::vector<double>& w, double r) {
  const std::size_t n = w.size();
  std::vector<double> v(n, 0.0);
  if (std::isinf(r)) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < n; ++k)
      if (w[k] > w[best]) best = k;
    v[best] = 1.0;
    return v;
  }
  if (r == 1.0) {
    std::fill(v.begin(), v.end(), 1.0);
    return v;
  }
  const double nw = vector_norm(std::span<const double>(w), r);
  if (nw == 0.0) return v;
  for (std::size_t k = 0; k < n; ++k) v[k] = std::pow(w[k] / nw, r - 1.0);
  return v;
}

std::vector<double> apply_raw(const TruncatedPositiveOperator& T, const std::vector<double>& x,
                              bool adjoint) {
  std::vector<double> out(T.dim(), 0.0);
  if (T.is_dense()) {
    const Matrix& m = T.dense();
    const std::size_t n = T.dim();
    if (!adjoint) {
      for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) s += m(k, l) * x[l];
        out[k] = s;
      }
    } else {
      for (std::size_t k = 0; k < n; ++k) {
        const double xk = x[k];
        if (xk == 0.0) continue;
        for (std::size_t l = 0; l < n; ++l) out[l] += m(k, l) * xk;
      }
    }
  } else {
    for (const auto& t : T.triplets()) {
      if (!adjoint)
        out[t.row] += t.value * x[t.col];
      else
        out[t.col] += t.value * x[t.row];
    }
  }
  return out;
}

struct PowerRun {
  double value = 0.0;
  std::vector<double> witness;
  int iterations = 0;
  double residual = std::numeric_limits<double>::infinity();
};

PowerRun power_run(const TruncatedPositiveOperator& T, std::vector<double> x) {
  const double q = T.space().q;
  const double qs = T.space().dual_exponent();
  const double tol = T.space().tol_rel;
  const int cap = T.space().max_iter;
  PowerRun run;

  const double nx = vector_norm(std::span<const double>(x), q);
  if (nx == 0.0) return run;
  for (double& v : x) v /= nx;

  double prev = -1.0;
  for (int it = 0; it < cap; ++it) {
    run.iterations = it + 1;
    std::vector<double> y = apply_raw(T, x, false);
    const double gamma = vector_norm(std::span<const double>(y), q);
    if (gamma > run.value) {
      run.value = gamma;
      run.witness = x;
    }
    if (gamma == 0.0) {
      run.residual = 0.0;
      break;
    }
    run.residual = std::abs(gamma - prev) / std::max(1.0, gamma);
    if (prev >= 0.0 && run.residual < tol) break;
    prev = gamma;
    std::vector<double> z = apply_raw(T, dual_vector(y, q), true);
    std::vector<double> xn = dual_vector(z, qs);
    const double nn = vector_norm(std::span<const double>(xn), q);
    if (nn == 0.0) break;  // iteration stalled outside the reachable cone
    for (double& v : xn) v /= nn;
    x = std::move(xn);
  }
  return run;
}

constexpr int kPowerRestarts = 8;

NormCertificate power_norm(const TruncatedPositiveOperator& T, std::uint64_t seed) {
  const std::size_t n = T.dim();
  PowerRun best;
  int total_iterations = 0;

  // deterministic all-ones start plus random positive restarts
  for (int r = 0; r <= kPowerRestarts; ++r) {
    std::vector<double> x(n, 1.0);
    if (r > 0) {
      SplitMix64 g = child_rng(seed, static_cast<std::uint64_t>(r));
      for (double& v : x) v = 0.01 + g.next_double();
    }
    PowerRun run = power_run(T, std::move(x));
    total_iterations += run.iterations;
    if (best.witness.empty() || run.value > best.value) best = std::move(run);
  }
  if (best.witness.empty()) best.witness.assign(n, 0.0);
  return {best.value, PositiveVector(std::move(best.witness)), NormMethod::kPowerMethod,
          total_iterations, std::isfinite(best.residual) ? best.residual : 0.0};
}

}  // namespace

NormCertificate power_method_norm(const TruncatedPositiveOperator& T, std::uint64_t seed) {
  return power_norm(T, seed);
}

NormCertificate operator_norm(const TruncatedPositiveOperator& T, std::uint64_t seed) {
  const double q = T.space().q;
  if (q == 1.0) return column_sum_norm(T);
  if (std::isinf(q)) return row_sum_norm(T);
  if (q == 2.0 && T.dim() <= kMaxDenseDim) return spectral_norm(T);
  return power_norm(T, seed);
}

bool is_contraction(const TruncatedPositiveOperator& T) {
  const NormCertificate c = operator_norm(T);
  return c.value <= 1.0 + T.space().tol_rel;
}

TruncatedPositiveOperator exposing_perturbation(const TruncatedPositiveOperator& A, double delta) {
  if (!(delta > 0.0)) throw DegenerateInputError("exposing_perturbation: delta must be > 0");
  const Matrix base = A.to_matrix();
  if (base.max_abs() == 0.0)
    throw DegenerateInputError("exposing_perturbation: zero operator has no norming vector");
  const NormCertificate cert = operator_norm(A);
  if (cert.value >= 1.0)
    throw DeltaTooLargeError("exposing_perturbation: operator norm must be < 1", 0.0);

  const double q = A.space().q;
  const std::size_t n = A.dim();
  const auto x0 = cert.witness;

  // Positive norming functional: the explicit l_q dual of x0.
  std::vector<double> x0_star(n, 0.0);
  if (std::isinf(q)) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < n; ++k)
      if (x0[k] > x0[best]) best = k;
    x0_star[best] = 1.0;
  } else if (q == 1.0) {
    std::fill(x0_star.begin(), x0_star.end(), 1.0);
  } else {
    for (std::size_t k = 0; k < n; ++k) x0_star[k] = std::pow(x0[k], q - 1.0);
  }

  const PositiveVector ax0 = A.apply(x0);
  auto perturbed = [&](double d) {
    Matrix m = base;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) m(k, l) += d * ax0[k] * x0_star[l];
    return TruncatedPositiveOperator(std::move(m), A.space());
  };

  TruncatedPositiveOperator result = perturbed(delta);
  if (operator_norm(result).value < 1.0) return result;

  // find the largest admissible delta by bisection and report it
  double lo = 0.0, hi = delta;
  for (int it = 0; it < 60 && hi - lo > 1e-12 * std::max(1.0, delta); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (operator_norm(perturbed(mid)).value < 1.0)
      lo = mid;
    else
      hi = mid;
  }
  throw DeltaTooLargeError("exposing_perturbation: perturbed norm reaches 1", lo);
}

namespace {

// Deterministic sample of the positive unit sphere: all nonnegative integer
// compositions of G into dim parts, normalized. G is chosen so the count
// approximates the requested resolution.
void enumerate_compositions(std::size_t dim, std::size_t total,
                            const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> parts(dim, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t idx, std::size_t left) {
    if (idx + 1 == dim) {
      parts[idx] = left;
      visit(parts);
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      parts[idx] = v;
      rec(idx + 1, left - v);
    }
  };
  rec(0, total);
}

std::size_t composition_count(std::size_t dim, std::size_t total) {
  // C(total + dim - 1, dim - 1), saturating
  long double c = 1.0L;
  for (std::size_t i = 1; i < dim; ++i) c = c * (total + i) / i;
  return c > 1e18L ? static_cast<std::size_t>(1e18) : static_cast<std::size_t>(c);
}

}  // namespace

bool is_absolutely_exposing(const TruncatedPositiveOperator& A, std::size_t grid_resolution) {
  const std::size_t n = A.dim();
  if (n > 6)
    throw UnsupportedError("is_absolutely_exposing: grid test refuses dimension above 6");
  if (A.to_matrix().max_abs() == 0.0)
    throw DegenerateInputError("is_absolutely_exposing: zero operator");
  if (n == 1) return true;
  if (grid_resolution < 2) grid_resolution = 2;

  std::size_t grid = 1;
  while (composition_count(n, grid) < grid_resolution) ++grid;

  const double q = A.space().q;
  // Near-norming slack and cluster radius are resolution-scale knobs of the
  // heuristic, not statements about the operator.
  const double near_slack = std::max(A.space().tol_rel, 1e-6);
  const double cluster_radius = 0.05;

  std::vector<std::vector<double>> points;
  std::vector<double> gains;
  double best_gain = 0.0;
  std::size_t best_idx = 0;

  enumerate_compositions(n, grid, [&](const std::vector<std::size_t>& parts) {
    std::vector<double> x(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) x[k] = static_cast<double>(parts[k]);
    const double nx = vector_norm(std::span<const double>(x), q);
    if (nx == 0.0) return;
    for (double& v : x) v /= nx;
    const std::vector<double> ax = apply_raw(A, x, false);
    const double gain = vector_norm(std::span<const double>(ax), q);
    if (gain > best_gain) {
      best_gain = gain;
      best_idx = points.size();
    }
    points.push_back(std::move(x));
    gains.push_back(gain);
  });

  if (best_gain == 0.0) return false;
  const double threshold = best_gain * (1.0 - near_slack);
  const std::vector<double>& center = points[best_idx];
  double spread = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (gains[i] < threshold) continue;
    double d2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double dv = points[i][k] - center[k];
      d2 += dv * dv;
    }
    spread = std::max(spread, std::sqrt(d2));
  }
  return spread <= cluster_radius;
}

}  // namespace poscone
