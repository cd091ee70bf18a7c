#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace poscone {

/// Base class for all domain errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class PositivityError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Raised when a perturbation size pushes an operator past the unit ball.
/// Carries the largest admissible value found by bisection.
class DeltaTooLargeError : public Error {
 public:
  DeltaTooLargeError(const std::string& what, double max_admissible)
      : Error(what), max_admissible_(max_admissible) {}
  double max_admissible() const { return max_admissible_; }

 private:
  double max_admissible_;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Raised by iterative solvers that fail to converge. Carries the best
/// value/residual (and, for eigen iterations, the best vectors) so the
/// caller can decide what to do with them.
class IterationLimitError : public Error {
 public:
  IterationLimitError(const std::string& what, double best_value, double residual,
                      std::vector<double> best_right = {}, std::vector<double> best_left = {})
      : Error(what), best_value_(best_value), residual_(residual),
        best_right_(std::move(best_right)), best_left_(std::move(best_left)) {}
  double best_value() const { return best_value_; }
  double residual() const { return residual_; }
  const std::vector<double>& best_right() const { return best_right_; }
  const std::vector<double>& best_left() const { return best_left_; }

 private:
  double best_value_;
  double residual_;
  std::vector<double> best_right_;
  std::vector<double> best_left_;
};

class RecipeError : public Error {
 public:
  using Error::Error;
};

class RelationError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

/// I/O and schema errors from the JSON interchange readers.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace poscone
