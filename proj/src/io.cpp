#include "poscone/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace poscone {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field \"") + key + "\"");
  return *it;
}

double finite_number(const json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(std::string(what) + " must be finite");
  return v;
}

double nonnegative_number(const json& j, const char* what) {
  const double v = finite_number(j, what);
  if (v < 0.0) throw ParseError(std::string(what) + " must be nonnegative");
  return v;
}

std::size_t index_number(const json& j, const char* what) {
  if (!j.is_number_unsigned()) throw ParseError(std::string(what) + " must be a nonnegative integer");
  return j.get<std::size_t>();
}

}  // namespace

json operator_to_json(const TruncatedPositiveOperator& T) {
  json j;
  j["dim"] = T.dim();
  j["q"] = T.space().q;
  if (T.is_dense()) {
    j["format"] = "dense";
    json rows = json::array();
    const Matrix& m = T.dense();
    for (std::size_t k = 0; k < T.dim(); ++k) {
      json row = json::array();
      for (std::size_t l = 0; l < T.dim(); ++l) row.push_back(m(k, l));
      rows.push_back(std::move(row));
    }
    j["entries"] = std::move(rows);
  } else {
    j["format"] = "coo";
    json trip = json::array();
    for (const auto& t : T.triplets()) trip.push_back(json::array({t.row, t.col, t.value}));
    j["triplets"] = std::move(trip);
  }
  return j;
}

TruncatedPositiveOperator operator_from_json(const json& j) {
  const std::size_t dim = index_number(require(j, "dim"), "dim");
  double q = 2.0;
  if (j.contains("q")) q = finite_number(j["q"], "q");
  if (!(q >= 1.0)) throw ParseError("q must be >= 1");
  SpaceConfig space(q);

  const std::string format = require(j, "format").get<std::string>();
  if (format == "dense") {
    const json& rows = require(j, "entries");
    if (!rows.is_array() || rows.size() != dim)
      throw ParseError("entries must be a dim x dim array");
    Matrix m(dim, dim);
    for (std::size_t k = 0; k < dim; ++k) {
      const json& row = rows[k];
      if (!row.is_array() || row.size() != dim)
        throw ParseError("entries must be a dim x dim array");
      for (std::size_t l = 0; l < dim; ++l) m(k, l) = nonnegative_number(row[l], "matrix entry");
    }
    return TruncatedPositiveOperator(std::move(m), space);
  }
  if (format == "coo") {
    const json& trip = require(j, "triplets");
    if (!trip.is_array()) throw ParseError("triplets must be an array");
    std::vector<CooTriplet> triplets;
    triplets.reserve(trip.size());
    for (const json& t : trip) {
      if (!t.is_array() || t.size() != 3) throw ParseError("each triplet must be [i, j, v]");
      const std::size_t i = index_number(t[0], "triplet row");
      const std::size_t l = index_number(t[1], "triplet col");
      const double v = nonnegative_number(t[2], "triplet value");
      if (i >= dim || l >= dim) throw ParseError("triplet index out of range");
      triplets.push_back({i, l, v});
    }
    return TruncatedPositiveOperator(dim, std::move(triplets), space);
  }
  throw ParseError("format must be \"dense\" or \"coo\"");
}

json vector_to_json(const GeneralVector& x) {
  json arr = json::array();
  for (double v : x.coords()) arr.push_back(v);
  return arr;
}

GeneralVector vector_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("vector must be an array of numbers");
  std::vector<double> coords;
  coords.reserve(j.size());
  for (const json& v : j) coords.push_back(finite_number(v, "vector coordinate"));
  return GeneralVector(std::move(coords));
}

json certificate_to_json(const NormCertificate& c) {
  return json{{"value", c.value},
              {"witness", vector_to_json(c.witness.general())},
              {"method", to_string(c.method)},
              {"iterations", c.iterations},
              {"residual", c.residual}};
}

json ideal_report_to_json(const IdealReport& r) {
  json j;
  j["truncation_dim"] = r.truncation_dim;
  j["irreducible"] = r.irreducible;
  if (r.failing_pair)
    j["failing_pair"] = json::array({r.failing_pair->first, r.failing_pair->second});
  else
    j["failing_pair"] = nullptr;
  json witnesses = json::array();
  for (const auto& [pair, n] : r.witness_powers)
    witnesses.push_back(json::array({pair.first, pair.second, n}));
  j["witness_powers"] = std::move(witnesses);
  if (r.invariant_ideal_support)
    j["invariant_ideal_support"] = *r.invariant_ideal_support;
  else
    j["invariant_ideal_support"] = nullptr;
  return j;
}

json perron_to_json(const PerronPair& p) {
  return json{{"value", p.value},
              {"right", vector_to_json(p.right.general())},
              {"left", vector_to_json(p.left.general())},
              {"residual", p.residual}};
}

json local_radius_to_json(const LocalRadiusEstimate& e) {
  return json{{"horizon", e.horizon},
              {"values", e.values},
              {"lower_bound", e.lower_bound},
              {"verdict", to_string(e.verdict)}};
}

namespace {

json solver_certificate_to_json(const SolverCertificate& c) {
  return json{{"status", lp::to_string(c.status)},
              {"iterations", c.iterations},
              {"objective", c.objective},
              {"constraint_residual", c.constraint_residual},
              {"dual_gap", c.dual_gap}};
}

}  // namespace

json feasibility_to_json(const FeasibilityResult& r) {
  json j;
  j["feasible"] = r.feasible;
  j["witness"] = r.witness ? operator_to_json(*r.witness) : json(nullptr);
  j["certificate"] = solver_certificate_to_json(r.certificate);
  return j;
}

json constraint_to_json(const CommutantConstraint& c) {
  return json{{"i", c.i}, {"j", c.j}, {"eta", c.eta}, {"p", c.p}};
}

CommutantConstraint constraint_from_json(const json& j) {
  CommutantConstraint c;
  c.i = index_number(require(j, "i"), "i");
  c.j = index_number(require(j, "j"), "j");
  c.p = index_number(require(j, "p"), "p");
  c.eta = finite_number(require(j, "eta"), "eta");
  if (!(c.eta > 0.0)) throw ParseError("eta must be > 0");
  return c;
}

json recipe_to_json(const ConstructionRecipe& r) {
  return json{{"M", operator_to_json(r.M)},
              {"N", r.N},
              {"p", r.p},
              {"delta", r.delta},
              {"delta_schedule", r.delta_schedule},
              {"L", r.L},
              {"epsilon", r.epsilon}};
}

ConstructionRecipe recipe_from_json(const json& j) {
  TruncatedPositiveOperator M = operator_from_json(require(j, "M"));
  const std::size_t N = index_number(require(j, "N"), "N");
  const std::size_t p = index_number(require(j, "p"), "p");
  const double delta = finite_number(require(j, "delta"), "delta");
  const std::size_t L = index_number(require(j, "L"), "L");
  const double epsilon = finite_number(require(j, "epsilon"), "epsilon");
  std::vector<double> schedule;
  for (const json& v : require(j, "delta_schedule"))
    schedule.push_back(finite_number(v, "delta_schedule entry"));
  ConstructionRecipe r{std::move(M), N, p, delta, std::move(schedule), L, epsilon};
  r.validate();
  return r;
}

json collapse_report_to_json(const TheoremCollapseReport& r) {
  json constraints = json::array();
  for (const auto& v : r.constraints) {
    json c = constraint_to_json(v.constraint);
    c["feasible"] = v.feasible;
    c["max_value"] = v.max_value;
    constraints.push_back(std::move(c));
  }
  return json{{"L", r.L},
              {"N", r.N},
              {"p", r.p},
              {"delta", r.delta},
              {"commutant_rank", r.commutant_rank},
              {"cone_total_mass", r.cone_total_mass},
              {"constraints", std::move(constraints)},
              {"row_pN1_max", r.row_pN1_max},
              {"pa_shift_cols_max", r.pa_shift_cols_max},
              {"pa_all_cols_max", r.pa_all_cols_max},
              {"all_infeasible", r.all_infeasible}};
}

json ensemble_spec_to_json(const EnsembleSpec& s) {
  return json{{"dim", s.dim},         {"q", s.q},
              {"kind", to_string(s.kind)}, {"damping", s.damping},
              {"density", s.density}, {"bandwidth", s.bandwidth},
              {"count", s.count},     {"seed", s.seed}};
}

EnsembleSpec ensemble_spec_from_json(const json& j) {
  EnsembleSpec s;
  s.dim = index_number(require(j, "dim"), "dim");
  s.q = finite_number(require(j, "q"), "q");
  s.kind = ensemble_kind_from_string(require(j, "kind").get<std::string>());
  if (j.contains("damping")) s.damping = finite_number(j["damping"], "damping");
  if (j.contains("density")) s.density = finite_number(j["density"], "density");
  if (j.contains("bandwidth")) s.bandwidth = index_number(j["bandwidth"], "bandwidth");
  s.count = index_number(require(j, "count"), "count");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ParseError("seed must be a nonnegative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  s.validate();
  return s;
}

namespace {

json stat_to_json(const PropertyStat& s) {
  return json{{"count", s.count}, {"frequency", s.frequency}, {"wilson_radius", s.wilson_radius}};
}

}  // namespace

json typicality_to_json(const TypicalityReport& r) {
  return json{{"spec", ensemble_spec_to_json(r.spec)},
              {"trials", r.trials},
              {"properties",
               json{{"norm_eq_one", stat_to_json(r.norm_eq_one)},
                    {"irreducible", stat_to_json(r.irreducible)},
                    {"diagonal_all_positive", stat_to_json(r.diagonal_all_positive)},
                    {"disjoint_column_supports", stat_to_json(r.disjoint_column_supports)},
                    {"orbit_decay_observed", stat_to_json(r.orbit_decay_observed)}}}};
}

std::string typicality_to_csv(const TypicalityReport& r) {
  std::ostringstream out;
  out << "property,count,trials,frequency,wilson_radius\n";
  auto row = [&](const char* name, const PropertyStat& s) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%.17g,%.17g\n", name, s.count, r.trials,
                  s.frequency, s.wilson_radius);
    out << buf;
  };
  row("norm_eq_one", r.norm_eq_one);
  row("irreducible", r.irreducible);
  row("diagonal_all_positive", r.diagonal_all_positive);
  row("disjoint_column_supports", r.disjoint_column_supports);
  row("orbit_decay_observed", r.orbit_decay_observed);
  return out.str();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON in ") + path + ": " + e.what());
  }
}

TruncatedPositiveOperator read_operator_file(const std::string& path) {
  return operator_from_json(read_json_file(path));
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  out << text;
}

}  // namespace poscone
