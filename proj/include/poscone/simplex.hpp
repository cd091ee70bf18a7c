#pragma once

#include <cstddef>
#include <vector>

namespace poscone::lp {

enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* to_string(Status s);

enum class Sense { kLe, kGe, kEq };

/// maximize c^T x  subject to  row_i . x  (<=|>=|=)  rhs_i,  x >= 0.
struct Problem {
  std::size_t num_vars = 0;
  std::vector<double> objective;

  struct Row {
    std::vector<double> coeffs;
    Sense sense;
    double rhs;
  };
  std::vector<Row> rows;

  void add_row(std::vector<double> coeffs, Sense sense, double rhs);
};

struct Result {
  Status status = Status::kIterationLimit;
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
  double constraint_residual = 0.0;  // max violation of the original rows at x
  double dual_gap = 0.0;             // phase-1 artificial mass at exit (0 when clean)
};

/// Dense two-phase primal simplex with Bland's rule. Built for the tiny,
/// highly degenerate cone-feasibility programs of the commutant module;
/// not a general-purpose LP code.
Result solve(const Problem& p, int max_iter = 50000, double tol = 1e-9);

}  // namespace poscone::lp
