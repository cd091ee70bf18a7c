#include "poscone/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "poscone/errors.hpp"
#include "poscone/norms.hpp"

namespace poscone {

const char* to_string(LocalRadiusVerdict v) {
  return v == LocalRadiusVerdict::kNotQuasinilpotent ? "not_quasinilpotent" : "inconclusive";
}

namespace {

double l2_norm(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

struct OneSidedPair {
  double value = 0.0;
  std::vector<double> vec;
  double residual = 0.0;
  bool converged = false;
};

OneSidedPair power_iterate(const TruncatedPositiveOperator& T, bool adjoint) {
  const std::size_t n = T.dim();
  const double tol = T.space().tol_rel;
  const int cap = T.space().max_iter;
  OneSidedPair out;
  // deterministic start inside the cone
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  GeneralVector gv{std::vector<double>(v)};
  double lambda = 0.0;
  for (int it = 0; it < cap; ++it) {
    const GeneralVector w = adjoint ? T.apply_adjoint(gv) : T.apply(gv);
    std::vector<double> wv(w.coords().begin(), w.coords().end());
    lambda = l2_norm(wv);
    if (lambda == 0.0) {
      // the start vector is annihilated; 0 is an eigenvalue with this vector
      out.value = 0.0;
      out.vec = std::vector<double>(gv.coords().begin(), gv.coords().end());
      out.residual = 0.0;
      out.converged = true;
      return out;
    }
    for (double& x : wv) x /= lambda;
    // residual of the eigen-equation at the normalized iterate
    double res = 0.0;
    {
      GeneralVector cand{std::vector<double>(wv)};
      const GeneralVector img = adjoint ? T.apply_adjoint(cand) : T.apply(cand);
      for (std::size_t k = 0; k < n; ++k) {
        const double d = img[k] - lambda * wv[k];
        res += d * d;
      }
      res = std::sqrt(res);
    }
    out.value = lambda;
    out.vec = wv;
    out.residual = res;
    gv = GeneralVector{std::move(wv)};
    if (res <= tol * std::max(1.0, lambda)) {
      out.converged = true;
      return out;
    }
  }
  return out;
}

}  // namespace

PerronPair perron_pair(const TruncatedPositiveOperator& T) {
  OneSidedPair right = power_iterate(T, false);
  OneSidedPair left = power_iterate(T, true);
  const double residual = std::max(right.residual, left.residual);
  if (!right.converged || !left.converged) {
    throw IterationLimitError(
        "perron_pair: power iteration did not converge (periodic matrix? pre-shift with T + eps*I)",
        std::max(right.value, left.value), residual, std::move(right.vec), std::move(left.vec));
  }
  return {std::max(right.value, left.value), PositiveVector(std::move(right.vec)),
          PositiveVector(std::move(left.vec)), residual};
}

LocalRadiusEstimate local_radius(const TruncatedPositiveOperator& A, const PositiveVector& y,
                                 int K) {
  if (K < 1) throw DegenerateInputError("local_radius: horizon must be >= 1");
  if (y.dim() != A.dim()) throw DimensionError("local_radius: dimension mismatch");
  if (y.is_zero()) throw DegenerateInputError("local_radius: zero vector");

  const double q = A.space().q;
  const double tol = A.space().tol_abs;

  LocalRadiusEstimate est;
  est.horizon = K;
  est.values.reserve(K);

  // log-accumulated scaling so superexponentially decaying orbits survive
  std::vector<double> w(y.coords().begin(), y.coords().end());
  double log_acc = 0.0;
  {
    const double ny = vector_norm(std::span<const double>(w), q);
    log_acc = std::log(ny);
    for (double& v : w) v /= ny;
  }
  bool dead = false;
  for (int k = 1; k <= K; ++k) {
    if (!dead) {
      std::vector<double> next(A.dim(), 0.0);
      {
        GeneralVector g{std::move(w)};
        const GeneralVector img = A.apply(g);
        next.assign(img.coords().begin(), img.coords().end());
      }
      const double nn = vector_norm(std::span<const double>(next), q);
      if (nn == 0.0) {
        dead = true;  // exact nilpotency reached: every later power is zero
      } else {
        log_acc += std::log(nn);
        for (double& v : next) v /= nn;
        w = std::move(next);
      }
    }
    est.values.push_back(dead ? 0.0 : std::exp(log_acc / k));
  }

  est.lower_bound = 0.0;
  for (std::size_t j = 0; j < y.dim(); ++j)
    if (y[j] > tol) est.lower_bound = std::max(est.lower_bound, A.entry(j, j));

  double tail_min = est.values.back();
  for (std::size_t k = est.values.size() - static_cast<std::size_t>(K) / 2;
       k < est.values.size(); ++k)
    tail_min = std::min(tail_min, est.values[k]);

  est.verdict = (est.lower_bound > tol || tail_min > tol)
                    ? LocalRadiusVerdict::kNotQuasinilpotent
                    : LocalRadiusVerdict::kInconclusive;
  return est;
}

std::vector<double> orbit_norm_decay(const TruncatedPositiveOperator& T, const GeneralVector& x,
                                     int K) {
  if (K < 1) throw DegenerateInputError("orbit_norm_decay: horizon must be >= 1");
  std::vector<double> out;
  out.reserve(K);
  GeneralVector v = x;
  for (int n = 1; n <= K; ++n) {
    v = T.apply(v);
    out.push_back(vector_norm(v, T.space().q));
  }
  return out;
}

std::vector<std::complex<double>> finite_spectrum(const TruncatedPositiveOperator& T) {
  if (T.dim() > kMaxDenseDim)
    throw UnsupportedError("finite_spectrum: dense eigensolve capped at dim 512");
  const Matrix m = T.to_matrix();
  const std::size_t n = T.dim();
  Eigen::MatrixXd em(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) em(r, c) = m(r, c);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(em, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = solver.eigenvalues()[k];
  return out;
}

}  // namespace poscone
