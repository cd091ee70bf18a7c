#include "poscone/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "poscone/errors.hpp"

namespace poscone::lp {

const char* to_string(Status s) {
  switch (s) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
    case Status::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

void Problem::add_row(std::vector<double> coeffs, Sense sense, double rhs) {
  if (coeffs.size() != num_vars) throw SolverError("lp: row width mismatch");
  rows.push_back({std::move(coeffs), sense, rhs});
}

namespace {

constexpr double kPivotTol = 1e-11;

// Full-tableau primal simplex, Dantzig entering with lexicographic
// leaving. The cone-feasibility programs this serves are small and
// massively degenerate (almost every right-hand side is zero), so
// anti-cycling matters more than speed.
class Tableau {
 public:
  Tableau(const Problem& p, double tol) : tol_(tol), n_(p.num_vars), m_(p.rows.size()) {
    // slack layout: one slack/surplus per inequality row, then artificials
    n_slack_ = 0;
    for (const auto& r : p.rows)
      if (r.sense != Sense::kEq) ++n_slack_;

    // rows are normalized to rhs >= 0 first; the sense flips accordingly
    std::vector<Sense> sense(m_);
    std::vector<double> rhs(m_);
    std::vector<std::vector<double>> coeffs(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& r = p.rows[i];
      coeffs[i] = r.coeffs;
      rhs[i] = r.rhs;
      sense[i] = r.sense;
      if (rhs[i] < 0.0) {
        for (double& v : coeffs[i]) v = -v;
        rhs[i] = -rhs[i];
        if (sense[i] == Sense::kLe)
          sense[i] = Sense::kGe;
        else if (sense[i] == Sense::kGe)
          sense[i] = Sense::kLe;
      }
    }

    n_art_ = 0;
    for (std::size_t i = 0; i < m_; ++i)
      if (sense[i] != Sense::kLe) ++n_art_;

    cols_ = n_ + n_slack_ + n_art_;
    a_.assign(m_ * cols_, 0.0);
    b_ = rhs;
    basis_.assign(m_, 0);

    std::size_t slack_at = n_;
    std::size_t art_at = n_ + n_slack_;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = coeffs[i][j];
      switch (sense[i]) {
        case Sense::kLe:
          at(i, slack_at) = 1.0;
          basis_[i] = slack_at++;
          break;
        case Sense::kGe:
          at(i, slack_at) = -1.0;
          ++slack_at;
          at(i, art_at) = 1.0;
          basis_[i] = art_at++;
          break;
        case Sense::kEq:
          at(i, art_at) = 1.0;
          basis_[i] = art_at++;
          break;
      }
    }
    first_art_ = n_ + n_slack_;
  }

  bool has_artificials() const { return n_art_ > 0; }

  // maximize c over the current tableau; returns false on iteration cap
  bool run(const std::vector<double>& c, bool allow_artificials, int max_iter, int* used,
           bool* unbounded) {
    refresh_objective(c);
    *unbounded = false;
    for (int it = 0; it < max_iter; ++it) {
      // the z-row drifts under long degenerate runs; rebuild it from the
      // tableau now and then so phantom reduced costs cannot sustain a cycle
      if (it > 0 && it % 128 == 0) refresh_objective(c);

      // Dantzig entering; finiteness comes from the lexicographic leaving rule
      std::size_t enter = cols_;
      double best_cost = tol_;
      const std::size_t limit = allow_artificials ? cols_ : first_art_;
      for (std::size_t j = 0; j < limit; ++j) {
        if (z_[j] > best_cost) {
          best_cost = z_[j];
          enter = j;
        }
      }
      if (enter == cols_) {
        refresh_objective(c);
        bool clean = true;
        for (std::size_t j = 0; j < limit; ++j)
          if (z_[j] > tol_) clean = false;
        if (clean) {
          *used = it;
          return true;  // optimal
        }
        continue;
      }
      std::size_t leave = m_;
      for (std::size_t i = 0; i < m_; ++i) {
        const double aij = at(i, enter);
        if (aij <= kPivotTol) continue;
        if (leave == m_ || lex_less(i, leave, aij, at(leave, enter))) leave = i;
      }
      if (leave == m_) {
        *used = it;
        *unbounded = true;
        return true;
      }
      pivot(leave, enter);
    }
    *used = max_iter;
    return false;
  }

  double objective_value() const { return z_[cols_]; }

  std::vector<double> extract(std::size_t count) const {
    std::vector<double> x(count, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < count) x[basis_[i]] = b_[i];
    return x;
  }

  // drive zero-level artificials out of the basis where a structural pivot
  // exists; leftover rows are dependent and harmless at level zero
  void expel_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < first_art_) continue;
      for (std::size_t j = 0; j < first_art_; ++j) {
        if (std::abs(at(i, j)) > 1e-8) {
          pivot(i, j);
          break;
        }
      }
    }
  }

 private:
  double& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  void refresh_objective(const std::vector<double>& c) {
    z_.assign(cols_ + 1, 0.0);
    for (std::size_t j = 0; j < cols_; ++j) z_[j] = c[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) z_[j] -= cb * at(i, j);
      z_[cols_] += cb * b_[i];
    }
  }

  // Lexicographic ratio comparison of rows i and r scaled by their entries
  // in the entering column. Scans the right-hand side, then the slack block
  // (initially the identity, which makes every starting row lex-positive),
  // then the structural columns. The comparisons are exact: the rule's
  // finiteness argument needs a strict order, and any tolerance here
  // reopens the door to cycling.
  bool lex_less(std::size_t i, std::size_t r, double ai, double ar) const {
    const double bi = b_[i] / ai, br = b_[r] / ar;
    if (bi != br) return bi < br;
    for (std::size_t j = n_; j < cols_; ++j) {
      const double ui = at(i, j) / ai, ur = at(r, j) / ar;
      if (ui != ur) return ui < ur;
    }
    for (std::size_t j = 0; j < n_; ++j) {
      const double ui = at(i, j) / ai, ur = at(r, j) / ar;
      if (ui != ur) return ui < ur;
    }
    return i < r;
  }

  void pivot(std::size_t row, std::size_t col) {
    const double pv = at(row, col);
    for (std::size_t j = 0; j < cols_; ++j) at(row, j) /= pv;
    b_[row] /= pv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double f = at(i, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) at(i, j) -= f * at(row, j);
      b_[i] -= f * b_[row];
      if (b_[i] < 0.0 && b_[i] > -1e-12) b_[i] = 0.0;
    }
    const double fz = z_[col];
    if (fz != 0.0) {
      for (std::size_t j = 0; j < cols_; ++j) z_[j] -= fz * at(row, j);
      z_[cols_] += fz * b_[row];
    }
    basis_[row] = col;
  }

  double tol_;
  std::size_t n_, m_, n_slack_ = 0, n_art_ = 0, cols_ = 0, first_art_ = 0;
  std::vector<double> a_, b_, z_;
  std::vector<std::size_t> basis_;
};

std::pair<std::size_t, std::size_t> slack_and_artificial_counts(const Problem& p) {
  std::size_t n_slack = 0, n_art = 0;
  for (const auto& r : p.rows) {
    if (r.sense != Sense::kEq) ++n_slack;
    Sense s = r.sense;
    if (r.rhs < 0.0)
      s = (s == Sense::kLe ? Sense::kGe : (s == Sense::kGe ? Sense::kLe : Sense::kEq));
    if (s != Sense::kLe) ++n_art;
  }
  return {n_slack, n_art};
}

}  // namespace

Result solve(const Problem& p, int max_iter, double tol) {
  for (const auto& r : p.rows)
    if (r.coeffs.size() != p.num_vars) throw SolverError("lp: malformed row");
  if (p.objective.size() != p.num_vars) throw SolverError("lp: malformed objective");

  Result result;
  Tableau t(p, tol);
  const auto [n_slack, n_art] = slack_and_artificial_counts(p);
  const std::size_t cols = p.num_vars + n_slack + n_art;
  int used = 0;
  bool unbounded = false;

  if (t.has_artificials()) {
    // phase 1: maximize minus the artificial mass
    std::vector<double> c1(cols, 0.0);
    for (std::size_t j = p.num_vars + n_slack; j < cols; ++j) c1[j] = -1.0;
    if (!t.run(c1, /*allow_artificials=*/true, max_iter, &used, &unbounded)) {
      result.status = Status::kIterationLimit;
      result.iterations = used;
      return result;
    }
    result.iterations += used;
    result.dual_gap = std::max(0.0, -t.objective_value());
    if (result.dual_gap > tol) {
      result.status = Status::kInfeasible;
      return result;
    }
    t.expel_artificials();
  }

  std::vector<double> c2(cols, 0.0);
  for (std::size_t j = 0; j < p.num_vars; ++j) c2[j] = p.objective[j];

  if (!t.run(c2, /*allow_artificials=*/false, max_iter, &used, &unbounded)) {
    result.status = Status::kIterationLimit;
    result.iterations += used;
    result.x = t.extract(p.num_vars);
    result.objective = t.objective_value();
    return result;
  }
  result.iterations += used;
  result.x = t.extract(p.num_vars);
  result.objective = t.objective_value();
  result.status = unbounded ? Status::kUnbounded : Status::kOptimal;

  // faithfulness check on the original rows
  double viol = 0.0;
  for (const auto& r : p.rows) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < p.num_vars; ++j) lhs += r.coeffs[j] * result.x[j];
    switch (r.sense) {
      case Sense::kLe: viol = std::max(viol, lhs - r.rhs); break;
      case Sense::kGe: viol = std::max(viol, r.rhs - lhs); break;
      case Sense::kEq: viol = std::max(viol, std::abs(lhs - r.rhs)); break;
    }
  }
  result.constraint_residual = viol;
  return result;
}

}  // namespace poscone::lp
