#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "poscone/errors.hpp"
#include "poscone/norms.hpp"
#include "poscone/rng.hpp"
#include "poscone/spectral.hpp"

using namespace poscone;

namespace {

TruncatedPositiveOperator dense_op(std::vector<std::vector<double>> rows, double q = 2.0) {
  const std::size_t n = rows.size();
  Matrix m(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) m(k, l) = rows[k][l];
  return TruncatedPositiveOperator(std::move(m), SpaceConfig(q));
}

}  // namespace

TEST_CASE("perron_pair: shifted symmetric circulant") {
  const double eps = 1e-3;
  const auto T = dense_op({{eps, 2}, {2, eps}});
  const auto pair = perron_pair(T);
  CHECK(pair.value == doctest::Approx(2.0 + eps).epsilon(1e-8));
  CHECK(pair.right[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
  CHECK(pair.right[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("perron_pair: dominant diagonal") {
  const auto pair = perron_pair(dense_op({{0.5, 0}, {0, 0.3}}));
  CHECK(pair.value == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(pair.right[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(pair.right[1] == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("perron_pair matches the dense eigensolver on strictly positive matrices") {
  SplitMix64 g(909);
  for (int rep = 0; rep < 10; ++rep) {
    Matrix m(5, 5);
    for (double& v : m.data()) v = 0.05 + g.next_double();
    const TruncatedPositiveOperator T(std::move(m), SpaceConfig(2.0));
    const auto pair = perron_pair(T);
    double rho = 0.0;
    for (const auto& z : finite_spectrum(T)) rho = std::max(rho, std::abs(z));
    CHECK(pair.value == doctest::Approx(rho).epsilon(1e-8));
    CHECK(pair.residual <= T.space().tol_rel * std::max(1.0, pair.value));
  }
}

TEST_CASE("perron_pair reports non-convergence on periodic matrices") {
  // [[0,1],[2,0]] alternates between two rays under power iteration
  CHECK_THROWS_AS(perron_pair(dense_op({{0, 1}, {2, 0}})), IterationLimitError);
}

TEST_CASE("local_radius: diagonal action is exactly the diagonal entry") {
  const auto A = dense_op({{0.5, 0}, {0, 0.3}});
  const auto est = local_radius(A, PositiveVector::basis(2, 0), 40);
  REQUIRE(est.values.size() == 40);
  for (double v : est.values) CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(est.lower_bound == doctest::Approx(0.5));
  CHECK(est.verdict == LocalRadiusVerdict::kNotQuasinilpotent);
}

TEST_CASE("local_radius: nilpotent shift dies at the nilpotency index") {
  Matrix m(4, 4);
  for (std::size_t l = 1; l < 4; ++l) m(l - 1, l) = 1.0;  // strict upper shift
  const TruncatedPositiveOperator A(std::move(m), SpaceConfig(2.0));
  const auto est = local_radius(A, PositiveVector::basis(4, 3), 12);
  CHECK(est.values[0] > 0.0);
  CHECK(est.values[2] > 0.0);
  for (std::size_t k = 3; k < est.values.size(); ++k) CHECK(est.values[k] == 0.0);
  CHECK(est.lower_bound == 0.0);
  CHECK(est.verdict == LocalRadiusVerdict::kInconclusive);
}

TEST_CASE("local_radius: a positive diagonal entry on the support bounds the liminf") {
  SplitMix64 g(1010);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 3 + g.next_below(4);
    Matrix m(n, n);
    for (double& v : m.data()) v = g.next_double() < 0.3 ? g.next_double() : 0.0;
    const std::size_t j = g.next_below(n);
    m(j, j) = 0.7;
    const TruncatedPositiveOperator A(std::move(m), SpaceConfig(2.0));
    std::vector<double> yc(n, 0.0);
    yc[j] = 1.0 + g.next_double();
    const PositiveVector y(std::move(yc));
    const auto est = local_radius(A, y, 60);
    CHECK(est.lower_bound >= 0.7);
    CHECK(est.verdict == LocalRadiusVerdict::kNotQuasinilpotent);
    double running_min = est.values[0];
    for (double v : est.values) running_min = std::min(running_min, v);
    CHECK(running_min >= 0.7 - 1e-6);
  }
}

TEST_CASE("local_radius pointwise chain: ||A^k y|| >= alpha_j a_jj^k") {
  SplitMix64 g(1111);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 2 + g.next_below(5);
    Matrix m(n, n);
    for (double& v : m.data()) v = g.next_double() < 0.5 ? g.next_double() : 0.0;
    const TruncatedPositiveOperator A(std::move(m), SpaceConfig(2.0));
    std::vector<double> yc(n);
    for (double& v : yc) v = g.next_double();
    const PositiveVector y(std::move(yc));
    GeneralVector power = y.general();
    for (int k = 1; k <= 25; ++k) {
      power = A.apply(power);
      const double norm = vector_norm(power, 2.0);
      for (std::size_t j = 0; j < n; ++j) {
        if (y[j] <= A.space().tol_abs) continue;
        CHECK(norm >= y[j] * std::pow(A.entry(j, j), k) - 1e-9);
      }
    }
  }
}

TEST_CASE("local_radius at the Perron vector is flat at the Perron value") {
  SplitMix64 g(1212);
  Matrix m(4, 4);
  for (double& v : m.data()) v = 0.1 + g.next_double();
  const TruncatedPositiveOperator A(std::move(m), SpaceConfig(2.0));
  const auto pair = perron_pair(A);
  const auto est = local_radius(A, pair.right, 50);
  CHECK(est.values.back() == doctest::Approx(pair.value).epsilon(1e-6));
}

TEST_CASE("local_radius rejects degenerate input") {
  const auto A = dense_op({{0.5, 0}, {0, 0.3}});
  CHECK_THROWS_AS(local_radius(A, PositiveVector::zeros(2), 10), DegenerateInputError);
  CHECK_THROWS_AS(local_radius(A, PositiveVector::basis(2, 0), 0), DegenerateInputError);
}

TEST_CASE("orbit_norm_decay: geometric for a scaled identity, flat for a permutation") {
  const auto half = dense_op({{0.5, 0}, {0, 0.5}});
  const GeneralVector x(std::vector<double>{1.0, 1.0});
  const auto orbit = orbit_norm_decay(half, x, 10);
  for (int n = 1; n <= 10; ++n)
    CHECK(orbit[n - 1] == doctest::Approx(std::pow(0.5, n) * vector_norm(x, 2.0)).epsilon(1e-12));

  Matrix m(3, 3);
  for (std::size_t l = 0; l < 3; ++l) m((l + 1) % 3, l) = 1.0;
  const auto orbit2 = orbit_norm_decay(TruncatedPositiveOperator(std::move(m), SpaceConfig(2.0)),
                                       GeneralVector(std::vector<double>{1.0, 2.0, 2.0}), 9);
  for (double v : orbit2) CHECK(v == doctest::Approx(3.0));
}

TEST_CASE("orbit norms are submultiplicative in the operator norm") {
  SplitMix64 g(1313);
  for (int rep = 0; rep < 10; ++rep) {
    Matrix m(4, 4);
    for (double& v : m.data()) v = g.next_double() * 0.4;
    const TruncatedPositiveOperator T(std::move(m), SpaceConfig(2.0));
    std::vector<double> xc(4);
    for (double& v : xc) v = g.next_double();
    const auto orbit = orbit_norm_decay(T, GeneralVector(std::move(xc)), 12);
    // value(n+m) <= value(n) * ||T^m|| for several step sizes
    TruncatedPositiveOperator power = T;
    for (std::size_t step = 1; step <= 3; ++step) {
      const double norm_power = operator_norm(power).value;
      for (std::size_t n = step; n < orbit.size(); ++n)
        CHECK(orbit[n] <= orbit[n - step] * norm_power + 1e-10);
      power = compose(power, T);
    }
  }
}

TEST_CASE("finite_spectrum closed forms") {
  auto close_to = [](std::complex<double> z, double re, double im) {
    return std::abs(z - std::complex<double>(re, im)) < 1e-9;
  };

  const auto diag = finite_spectrum(dense_op({{0.5, 0}, {0, 0.3}}));
  CHECK(std::any_of(diag.begin(), diag.end(), [&](auto z) { return close_to(z, 0.5, 0.0); }));
  CHECK(std::any_of(diag.begin(), diag.end(), [&](auto z) { return close_to(z, 0.3, 0.0); }));

  Matrix m(4, 4);
  for (std::size_t l = 0; l < 4; ++l) m((l + 1) % 4, l) = 1.0;
  const auto roots = finite_spectrum(TruncatedPositiveOperator(std::move(m), SpaceConfig(2.0)));
  for (double expected_re : {1.0, -1.0})
    CHECK(std::any_of(roots.begin(), roots.end(),
                      [&](auto z) { return close_to(z, expected_re, 0.0); }));
  for (double expected_im : {1.0, -1.0})
    CHECK(std::any_of(roots.begin(), roots.end(),
                      [&](auto z) { return close_to(z, 0.0, expected_im); }));

  Matrix shift(3, 3);
  shift(0, 1) = 1.0;
  shift(1, 2) = 1.0;
  for (const auto& z :
       finite_spectrum(TruncatedPositiveOperator(std::move(shift), SpaceConfig(2.0))))
    CHECK(std::abs(z) < 1e-9);
}
