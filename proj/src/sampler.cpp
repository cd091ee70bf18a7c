#include "poscone/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "poscone/errors.hpp"
#include "poscone/ideals.hpp"
#include "poscone/norms.hpp"
#include "poscone/rng.hpp"
#include "poscone/spectral.hpp"

namespace poscone {

const char* to_string(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::kIidUniformRescaled: return "iid_uniform_rescaled";
    case EnsembleKind::kColumnStochasticDamped: return "column_stochastic_damped";
    case EnsembleKind::kSparseBand: return "sparse_band";
  }
  return "unknown";
}

EnsembleKind ensemble_kind_from_string(const std::string& s) {
  if (s == "iid_uniform_rescaled") return EnsembleKind::kIidUniformRescaled;
  if (s == "column_stochastic_damped") return EnsembleKind::kColumnStochasticDamped;
  if (s == "sparse_band") return EnsembleKind::kSparseBand;
  throw ParseError("unknown ensemble kind: " + s);
}

void EnsembleSpec::validate() const {
  if (dim < 1) throw DegenerateInputError("EnsembleSpec: dim must be >= 1");
  if (count < 1) throw DegenerateInputError("EnsembleSpec: count must be >= 1");
  if (!(q >= 1.0)) throw DegenerateInputError("EnsembleSpec: q must be >= 1");
  if (!(density > 0.0 && density <= 1.0))
    throw DegenerateInputError("EnsembleSpec: density must lie in (0, 1]");
  if (!(damping > 0.0 && damping <= 1.0))
    throw DegenerateInputError("EnsembleSpec: damping must lie in (0, 1]");
}

namespace {

TruncatedPositiveOperator rescale_to_ball(TruncatedPositiveOperator T) {
  const double value = operator_norm(T).value;
  if (value > 1.0) return scale(1.0 / value, T);
  return T;
}

}  // namespace

TruncatedPositiveOperator sample_one(const EnsembleSpec& spec, std::size_t trial) {
  spec.validate();
  SplitMix64 g = child_rng(spec.seed, trial);
  const SpaceConfig space(spec.q);
  const std::size_t n = spec.dim;

  switch (spec.kind) {
    case EnsembleKind::kIidUniformRescaled: {
      Matrix m(n, n);
      for (double& v : m.data()) v = g.next_double();
      return rescale_to_ball(TruncatedPositiveOperator(std::move(m), space));
    }
    case EnsembleKind::kColumnStochasticDamped: {
      Matrix m(n, n);
      for (std::size_t l = 0; l < n; ++l) {
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          m(k, l) = g.next_double();
          sum += m(k, l);
        }
        if (sum == 0.0) {
          m(l, l) = spec.damping;
          continue;
        }
        for (std::size_t k = 0; k < n; ++k) m(k, l) *= spec.damping / sum;
      }
      return rescale_to_ball(TruncatedPositiveOperator(std::move(m), space));
    }
    case EnsembleKind::kSparseBand: {
      std::vector<CooTriplet> triplets;
      const std::size_t bw = spec.bandwidth;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i > bw ? i - bw : 0;
        const std::size_t hi = std::min(n - 1, i + bw);
        for (std::size_t j = lo; j <= hi; ++j)
          if (g.next_double() < spec.density) triplets.push_back({i, j, g.next_double()});
      }
      return rescale_to_ball(TruncatedPositiveOperator(n, std::move(triplets), space));
    }
  }
  throw UnsupportedError("sample_one: unreachable ensemble kind");
}

std::vector<TruncatedPositiveOperator> sample(const EnsembleSpec& spec) {
  spec.validate();
  std::vector<TruncatedPositiveOperator> out;
  out.reserve(spec.count);
  for (std::size_t t = 0; t < spec.count; ++t) out.push_back(sample_one(spec, t));
  return out;
}

namespace {

struct Counters {
  std::size_t norm_eq_one = 0;
  std::size_t irreducible = 0;
  std::size_t diagonal_all_positive = 0;
  std::size_t disjoint_column_supports = 0;
  std::size_t orbit_decay_observed = 0;

  void operator+=(const Counters& o) {
    norm_eq_one += o.norm_eq_one;
    irreducible += o.irreducible;
    diagonal_all_positive += o.diagonal_all_positive;
    disjoint_column_supports += o.disjoint_column_supports;
    orbit_decay_observed += o.orbit_decay_observed;
  }
};

constexpr int kOrbitHorizon = 200;
constexpr double kOrbitFloor = 1e-6;
constexpr int kOrbitStarts = 5;

Counters run_trial(const EnsembleSpec& spec, std::size_t trial) {
  Counters c;
  const TruncatedPositiveOperator T = sample_one(spec, trial);

  if (std::abs(operator_norm(T).value - 1.0) < 1e-3) c.norm_eq_one = 1;

  const SupportDigraph g = support_digraph(T);
  if (is_irreducible(g)) c.irreducible = 1;

  bool diag_pos = true;
  for (std::size_t k = 0; k < T.dim() && diag_pos; ++k)
    if (!(T.entry(k, k) > T.space().tol_abs)) diag_pos = false;
  if (diag_pos) c.diagonal_all_positive = 1;

  if (has_disjoint_column_supports(T)) c.disjoint_column_supports = 1;

  SplitMix64 starts = child_rng(spec.seed ^ 0x6f4a7c15d1b54a32ULL, trial);
  bool decays = true;
  for (int s = 0; s < kOrbitStarts && decays; ++s) {
    std::vector<double> x(T.dim());
    for (double& v : x) v = starts.next_double();
    const std::vector<double> orbit = orbit_norm_decay(T, GeneralVector(std::move(x)), kOrbitHorizon);
    double lowest = orbit.front();
    for (double v : orbit) lowest = std::min(lowest, v);
    if (!(lowest < kOrbitFloor)) decays = false;
  }
  if (decays) c.orbit_decay_observed = 1;
  return c;
}

PropertyStat make_stat(std::size_t count, std::size_t trials) {
  PropertyStat s;
  s.count = count;
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(count) / n;
  s.frequency = phat;
  const double z = 1.959963984540054;  // 95% two-sided normal quantile
  const double z2 = z * z;
  s.wilson_radius =
      (z / (1.0 + z2 / n)) * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  return s;
}

}  // namespace

TypicalityReport typicality_report(const EnsembleSpec& spec, unsigned threads) {
  spec.validate();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(spec.count));

  std::vector<Counters> partial(threads);
  if (threads <= 1) {
    for (std::size_t t = 0; t < spec.count; ++t) partial[0] += run_trial(spec, t);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < spec.count; t += threads) partial[w] += run_trial(spec, t);
      });
    }
    for (auto& th : pool) th.join();
  }
  Counters total;
  for (const Counters& c : partial) total += c;

  TypicalityReport report;
  report.spec = spec;
  report.trials = spec.count;
  report.norm_eq_one = make_stat(total.norm_eq_one, spec.count);
  report.irreducible = make_stat(total.irreducible, spec.count);
  report.diagonal_all_positive = make_stat(total.diagonal_all_positive, spec.count);
  report.disjoint_column_supports = make_stat(total.disjoint_column_supports, spec.count);
  report.orbit_decay_observed = make_stat(total.orbit_decay_observed, spec.count);
  return report;
}

}  // namespace poscone
