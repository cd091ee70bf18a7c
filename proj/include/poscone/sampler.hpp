#pragma once

#include <cstdint>
#include <string>

#include "poscone/operator.hpp"

namespace poscone {

enum class EnsembleKind { kIidUniformRescaled, kColumnStochasticDamped, kSparseBand };

const char* to_string(EnsembleKind k);
EnsembleKind ensemble_kind_from_string(const std::string& s);

/// Random ensemble of positive contractions. There is no canonical measure
/// on the positive contractions, and the typicality results these probe are
/// Baire-categorical, not probabilistic: frequencies measured here carry no
/// theorem-level meaning. The reports exist for exploration only.
struct EnsembleSpec {
  std::size_t dim = 4;
  double q = 2.0;
  EnsembleKind kind = EnsembleKind::kIidUniformRescaled;
  double damping = 0.9;       // column_stochastic_damped
  double density = 0.2;       // sparse_band
  std::size_t bandwidth = 1;  // sparse_band
  std::size_t count = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Operator for trial index `trial`, deterministic in (spec.seed, trial).
TruncatedPositiveOperator sample_one(const EnsembleSpec& spec, std::size_t trial);

std::vector<TruncatedPositiveOperator> sample(const EnsembleSpec& spec);

struct PropertyStat {
  std::size_t count = 0;
  double frequency = 0.0;
  double wilson_radius = 0.0;  // 95% Wilson score half-width
};

struct TypicalityReport {
  EnsembleSpec spec;
  std::size_t trials = 0;
  PropertyStat norm_eq_one;               // | ||T|| - 1 | < 1e-3
  PropertyStat irreducible;               // invariant-ideal criterion holds
  PropertyStat diagonal_all_positive;     // every a_{j,j} > tol_abs
  PropertyStat disjoint_column_supports;  // isometry necessary condition
  PropertyStat orbit_decay_observed;      // orbits below 1e-6 by step 200
};

/// Runs every property check per trial, in parallel over trials when
/// threads != 1 (0 = hardware default). Aggregation is a commutative sum of
/// counters, so the report is bit-identical across thread counts.
TypicalityReport typicality_report(const EnsembleSpec& spec, unsigned threads = 0);

}  // namespace poscone
