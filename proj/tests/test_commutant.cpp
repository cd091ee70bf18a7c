#include <doctest.h>

#include <cmath>

#include "poscone/commutant.hpp"
#include "poscone/constructions.hpp"
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

double commutation_residual(const Matrix& b, const Matrix& t) {
  return subtract(multiply(b, t), multiply(t, b)).frobenius_norm();
}

// test-side oracle: nullspace dimension of the commutation map by Gaussian
// elimination with partial pivoting on the n^2 x n^2 system
std::size_t brute_force_commutant_rank(const TruncatedPositiveOperator& T) {
  const std::size_t n = T.dim();
  const std::size_t nn = n * n;
  std::vector<std::vector<double>> K(nn, std::vector<double>(nn, 0.0));
  const Matrix t = T.to_matrix();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      const std::size_t row = k * n + l;
      for (std::size_t m = 0; m < n; ++m) {
        K[row][k * n + m] += t(m, l);
        K[row][m * n + l] -= t(k, m);
      }
    }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < nn && rank < nn; ++col) {
    std::size_t pivot = rank;
    for (std::size_t r = rank + 1; r < nn; ++r)
      if (std::abs(K[r][col]) > std::abs(K[pivot][col])) pivot = r;
    if (std::abs(K[pivot][col]) < 1e-9) continue;
    std::swap(K[rank], K[pivot]);
    for (std::size_t r = 0; r < nn; ++r) {
      if (r == rank) continue;
      const double f = K[r][col] / K[rank][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < nn; ++c) K[r][c] -= f * K[rank][c];
    }
    ++rank;
  }
  return nn - rank;
}

}  // namespace

TEST_CASE("commutant of the identity is everything") {
  const auto basis = commutant_basis(TruncatedPositiveOperator::identity(3, SpaceConfig(2.0)));
  CHECK(basis.rank == 9);
}

TEST_CASE("commutant of a distinct diagonal is the diagonal algebra") {
  const auto basis = commutant_basis(dense_op({{0.1, 0, 0}, {0, 0.2, 0}, {0, 0, 0.3}}));
  CHECK(basis.rank == 3);
  for (const auto& b : basis.basis)
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t l = 0; l < 3; ++l)
        if (k != l) CHECK(std::abs(b(k, l)) < 1e-9);
}

TEST_CASE("commutant of the 4-cycle matches the brute-force nullspace oracle") {
  Matrix m(4, 4);
  for (std::size_t l = 0; l < 4; ++l) m((l + 1) % 4, l) = 1.0;
  const TruncatedPositiveOperator T(std::move(m), SpaceConfig(2.0));
  const auto basis = commutant_basis(T);
  CHECK(basis.rank == 4);  // circulant algebra
  CHECK(basis.rank == brute_force_commutant_rank(T));
}

TEST_CASE("commutant rank matches the oracle on random matrices") {
  SplitMix64 g(1414);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t n = 2 + g.next_below(4);
    Matrix m(n, n);
    for (double& v : m.data()) v = g.next_double() < 0.5 ? g.next_double() : 0.0;
    const TruncatedPositiveOperator T(std::move(m), SpaceConfig(2.0));
    CHECK(commutant_basis(T).rank == brute_force_commutant_rank(T));
  }
}

TEST_CASE("every basis element commutes to machine precision") {
  SplitMix64 g(1515);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 2 + g.next_below(7);
    Matrix m(n, n);
    for (double& v : m.data()) v = g.next_double();
    const TruncatedPositiveOperator T(std::move(m), SpaceConfig(2.0));
    const Matrix t = T.to_matrix();
    const auto basis = commutant_basis(T);
    for (const auto& b : basis.basis)
      CHECK(commutation_residual(b, t) <=
            1e-8 * std::max(1.0, t.frobenius_norm() * b.frobenius_norm()));
  }
}

TEST_CASE("commutant rank is invariant under permutation conjugation") {
  SplitMix64 g(1616);
  Matrix m(4, 4);
  for (double& v : m.data()) v = g.next_double() < 0.5 ? g.next_double() : 0.0;
  const TruncatedPositiveOperator T(std::move(m), SpaceConfig(2.0));

  // conjugate by the cyclic permutation (a positive surjective isometry)
  Matrix perm(4, 4);
  for (std::size_t l = 0; l < 4; ++l) perm((l + 1) % 4, l) = 1.0;
  const Matrix conj = multiply(multiply(perm, T.to_matrix()), perm.transposed());
  const TruncatedPositiveOperator S(conj, SpaceConfig(2.0));
  CHECK(commutant_basis(T).rank == commutant_basis(S).rank);
}

TEST_CASE("commutant refuses oversized systems") {
  CHECK_THROWS_AS(commutant_basis(TruncatedPositiveOperator::identity(65, SpaceConfig(2.0))),
                  UnsupportedError);
}

TEST_CASE("f_set_membership: everything commutes with the identity") {
  const auto T = TruncatedPositiveOperator::identity(3, SpaceConfig(2.0));
  const auto result = f_set_membership(T, {/*i=*/1, /*j=*/0, /*eta=*/0.1, /*p=*/0});
  REQUIRE(result.feasible);
  REQUIRE(result.witness.has_value());
  const auto& A = *result.witness;
  CHECK(A.entry(0, 1) >= 0.1 - 1e-7);
  CHECK(std::abs(A.entry(0, 0)) <= 1e-7);
  CHECK(operator_norm(A).value <= 1.0 + 1e-7);
  // the witness really commutes
  CHECK(commutation_residual(A.to_matrix(), T.to_matrix()) <= 1e-8);
}

TEST_CASE("f_set_membership is monotone in eta") {
  const auto T = dense_op({{0.3, 0.1, 0.0}, {0.0, 0.3, 0.1}, {0.1, 0.0, 0.3}});
  REQUIRE(is_contraction(T));
  const CommutantConstraint hard{1, 0, 0.2, 0};
  const CommutantConstraint easy{1, 0, 0.01, 0};
  const auto at_hard = f_set_membership(T, hard);
  const auto at_easy = f_set_membership(T, easy);
  if (at_hard.feasible) CHECK(at_easy.feasible);
}

TEST_CASE("f_set_membership respects the maximized threshold") {
  SplitMix64 g(1717);
  // strictly positive rank-one plus a small diagonal: tight commutant
  std::vector<double> x(3), y(3);
  for (double& v : x) v = 0.2 + g.next_double();
  for (double& v : y) v = 0.2 + g.next_double();
  Matrix m(3, 3);
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t l = 0; l < 3; ++l) m(k, l) = x[k] * y[l] * 0.2 + (k == l ? 0.01 : 0.0);
  auto T = TruncatedPositiveOperator(std::move(m), SpaceConfig(2.0));
  T = scale(0.8 / operator_norm(T).value, T);

  const auto probe = f_set_membership(T, {0, 1, 1e-3, 2});
  const double maximized = probe.certificate.objective;
  // above the maximized value the verdict must flip to infeasible
  const auto beyond = f_set_membership(T, {0, 1, maximized + 0.1, 2});
  CHECK_FALSE(beyond.feasible);
}

TEST_CASE("f_set against the identity matches the elementary-matrix enumeration") {
  // everything commutes with the identity, so F membership reduces to the
  // existence of a nonnegative matrix with a_pp = 0 and a_ji >= eta: the
  // elementary matrix E_{j,i} works exactly when (j,i) != (p,p)
  const auto T = TruncatedPositiveOperator::identity(3, SpaceConfig(2.0));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t p = 0; p < 3; ++p) {
        const bool expected = !(j == p && i == p);
        CHECK(f_set_membership(T, {i, j, 0.1, p}).feasible == expected);
      }
}

TEST_CASE("f_set_membership rejects bad input") {
  const auto T = TruncatedPositiveOperator::identity(2, SpaceConfig(2.0));
  CHECK_THROWS_AS(f_set_membership(T, {5, 0, 0.1, 0}), DimensionError);
  CHECK_THROWS_AS(f_set_membership(scale(2.0, T), {0, 1, 0.1, 0}), DegenerateInputError);
}

TEST_CASE("aab_witness_search finds a nilpotent commuting direction for the identity") {
  const auto T = TruncatedPositiveOperator::identity(3, SpaceConfig(2.0));
  const auto witness = aab_witness_search(T, PositiveVector::basis(3, 0), 40);
  REQUIRE(witness.has_value());
  CHECK(witness->to_matrix().max_abs() > 1e-9);
  CHECK(commutation_residual(witness->to_matrix(), T.to_matrix()) <= 1e-7);
  const auto est = local_radius(*witness, PositiveVector::basis(3, 0), 40);
  CHECK(est.verdict == LocalRadiusVerdict::kInconclusive);
}

TEST_CASE("the zero-cone certificate agrees with a direct primal solve") {
  // assemble the primal cone program by hand (no certificate shortcut) and
  // compare its maximum-mass verdict with cone_optimize on small instances
  SplitMix64 g(1919);
  for (int rep = 0; rep < 12; ++rep) {
    const std::size_t n = 3 + g.next_below(2);
    Matrix m(n, n);
    for (double& v : m.data()) v = g.next_double() < 0.5 ? g.next_double() : 0.0;
    const TruncatedPositiveOperator T(std::move(m), SpaceConfig(2.0));
    const std::size_t p_idx = g.next_below(n);
    const auto basis = commutant_basis(T);

    Matrix ones(n, n, std::vector<double>(n * n, 1.0));
    const double fast = cone_optimize(basis, p_idx, ones, true, MassBound::kAtMost);

    lp::Problem prim;
    prim.num_vars = 2 * basis.rank;
    auto widen = [&](auto&& f) {
      std::vector<double> row(2 * basis.rank);
      for (std::size_t mm = 0; mm < basis.rank; ++mm) {
        row[mm] = f(basis.basis[mm]);
        row[basis.rank + mm] = -row[mm];
      }
      return row;
    };
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l)
        prim.add_row(widen([&](const Matrix& b) { return b(k, l); }), lp::Sense::kGe, 0.0);
    prim.add_row(widen([&](const Matrix& b) { return b(p_idx, p_idx); }), lp::Sense::kEq, 0.0);
    prim.add_row(widen([&](const Matrix& b) {
                   double s = 0.0;
                   for (double v : b.data()) s += v;
                   return s;
                 }),
                 lp::Sense::kLe, static_cast<double>(n));
    prim.objective = widen([&](const Matrix& b) {
      double s = 0.0;
      for (double v : b.data()) s += v;
      return s;
    });
    const lp::Result direct = lp::solve(prim, 500000);
    REQUIRE(direct.status == lp::Status::kOptimal);
    CHECK(fast == doctest::Approx(direct.objective).epsilon(1e-6));
  }
}

TEST_CASE("aab_witness_search returns nothing for the banded collapse operator") {
  // the only positive commuting operator with a vanishing diagonal entry is
  // zero, so the minimized diagonal mass stays away from zero
  const auto M = dense_op({{0.3, 0.1}, {0.1, 0.2}});
  const auto r = make_recipe(M, 0, 0.05);
  const auto T = build_theorem_operator(r);
  CHECK_FALSE(aab_witness_search(T, PositiveVector::basis(T.dim(), 0), 40).has_value());
  CHECK_FALSE(aab_witness_search(T, PositiveVector::ones(T.dim()), 40).has_value());
}

TEST_CASE("aab_witness_search returns nothing for strictly positive irreducible operators") {
  SplitMix64 g(1818);
  for (int rep = 0; rep < 5; ++rep) {
    Matrix m(4, 4);
    for (double& v : m.data()) v = 0.1 + g.next_double();
    auto T = TruncatedPositiveOperator(std::move(m), SpaceConfig(2.0));
    T = scale(0.9 / operator_norm(T).value, T);
    CHECK_FALSE(aab_witness_search(T, PositiveVector::ones(4), 40).has_value());
  }
}
