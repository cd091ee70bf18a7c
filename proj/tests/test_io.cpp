#include <doctest.h>

#include <nlohmann/json.hpp>

#include "poscone/constructions.hpp"
#include "poscone/errors.hpp"
#include "poscone/io.hpp"
#include "poscone/norms.hpp"
#include "poscone/rng.hpp"
#include "poscone/spectral.hpp"

using namespace poscone;
using nlohmann::json;

namespace {

TruncatedPositiveOperator dense_op(std::vector<std::vector<double>> rows, double q = 2.0) {
  const std::size_t n = rows.size();
  Matrix m(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) m(k, l) = rows[k][l];
  return TruncatedPositiveOperator(std::move(m), SpaceConfig(q));
}

}  // namespace

TEST_CASE("dense operators round trip through the interchange format") {
  SplitMix64 g(31);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t n = 1 + g.next_below(6);
    Matrix m(n, n);
    for (double& v : m.data()) v = g.next_double();
    const TruncatedPositiveOperator T(std::move(m), SpaceConfig(1.0 + 2.0 * g.next_double()));
    const auto back = operator_from_json(operator_to_json(T));
    CHECK(back.dim() == T.dim());
    CHECK(back.space().q == T.space().q);
    CHECK(approx_equal(back, T, 0.0));
  }
}

TEST_CASE("coo operators round trip with storage preserved") {
  const TruncatedPositiveOperator C(4, {{0, 1, 0.5}, {3, 2, 1.5}}, SpaceConfig(3.0));
  const json j = operator_to_json(C);
  CHECK(j["format"] == "coo");
  const auto back = operator_from_json(j);
  CHECK(back.storage() == StorageKind::kCoo);
  CHECK(approx_equal(back, C, 0.0));
}

TEST_CASE("readers reject malformed payloads") {
  CHECK_THROWS_AS(operator_from_json(json{{"dim", 2}, {"format", "dense"}}), ParseError);
  CHECK_THROWS_AS(operator_from_json(json::parse(R"({"dim":2,"format":"dense",
      "entries":[[1.0,0.0],[0.0]]})")),
                  ParseError);
  CHECK_THROWS_AS(operator_from_json(json::parse(R"({"dim":2,"format":"weird","entries":[]})")),
                  ParseError);
  // negative value
  CHECK_THROWS_AS(
      operator_from_json(json::parse(R"({"dim":2,"format":"coo","triplets":[[0,1,-0.5]]})")),
      ParseError);
  // non-finite value injected programmatically (JSON text cannot carry NaN)
  json j{{"dim", 1}, {"format", "dense"}};
  j["entries"] = json::array({json::array({std::numeric_limits<double>::quiet_NaN()})});
  CHECK_THROWS_AS(operator_from_json(j), ParseError);
  // triplet out of range
  CHECK_THROWS_AS(
      operator_from_json(json::parse(R"({"dim":2,"format":"coo","triplets":[[0,7,0.5]]})")),
      ParseError);
  // q below 1
  CHECK_THROWS_AS(
      operator_from_json(json::parse(R"({"dim":1,"format":"dense","q":0.5,"entries":[[1]]})")),
      ParseError);
}

TEST_CASE("norm certificates serialize with their witness") {
  const auto cert = operator_norm(dense_op({{1, 1}, {0, 0}}));
  const json j = certificate_to_json(cert);
  CHECK(j["value"].get<double>() == doctest::Approx(std::sqrt(2.0)));
  CHECK(j["method"] == "exact_l2");
  CHECK(j["witness"].size() == 2);
}

TEST_CASE("ideal reports serialize both verdict shapes") {
  Matrix shift(3, 3);
  shift(0, 1) = 1.0;
  shift(1, 2) = 1.0;
  const auto reducible =
      ideal_report_to_json(rt_criterion(TruncatedPositiveOperator(std::move(shift), SpaceConfig(2.0))));
  CHECK(reducible["irreducible"] == false);
  CHECK(reducible["failing_pair"][0] == 0);
  CHECK(reducible["invariant_ideal_support"].is_array());

  const auto irreducible = ideal_report_to_json(rt_criterion(dense_op({{0.5, 0.5}, {0.5, 0.5}})));
  CHECK(irreducible["irreducible"] == true);
  CHECK(irreducible["failing_pair"].is_null());
  CHECK(irreducible["witness_powers"].size() == 2);
}

TEST_CASE("recipes round trip and revalidate") {
  const auto M = dense_op({{0.3, 0.1}, {0.1, 0.2}});
  const auto r = make_recipe(M, 0, 0.05);
  const auto back = recipe_from_json(recipe_to_json(r));
  CHECK(back.N == r.N);
  CHECK(back.p == r.p);
  CHECK(back.L == r.L);
  CHECK(back.delta == doctest::Approx(r.delta));
  CHECK(back.delta_schedule.size() == r.delta_schedule.size());

  json j = recipe_to_json(r);
  j["delta"] = 0.9;  // violates every delta bound
  CHECK_THROWS_AS(recipe_from_json(j), RecipeError);
}

TEST_CASE("local radius estimates and spectra serialize") {
  const auto A = dense_op({{0.5, 0}, {0, 0.3}});
  const auto est = local_radius(A, PositiveVector::basis(2, 0), 10);
  const json j = local_radius_to_json(est);
  CHECK(j["verdict"] == "not_quasinilpotent");
  CHECK(j["values"].size() == 10);
  CHECK(j["lower_bound"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("vectors round trip") {
  const GeneralVector x(std::vector<double>{0.5, -1.5, 2.0});
  const auto back = vector_from_json(vector_to_json(x));
  REQUIRE(back.dim() == 3);
  for (std::size_t k = 0; k < 3; ++k) CHECK(back[k] == x[k]);
  CHECK_THROWS_AS(vector_from_json(json{{"not", "array"}}), ParseError);
}

TEST_CASE("ensemble specs round trip") {
  EnsembleSpec spec;
  spec.dim = 7;
  spec.q = 1.5;
  spec.kind = EnsembleKind::kSparseBand;
  spec.density = 0.3;
  spec.bandwidth = 2;
  spec.count = 9;
  spec.seed = 123456789012345ULL;
  const auto back = ensemble_spec_from_json(ensemble_spec_to_json(spec));
  CHECK(back.dim == spec.dim);
  CHECK(back.q == spec.q);
  CHECK(back.kind == spec.kind);
  CHECK(back.density == spec.density);
  CHECK(back.bandwidth == spec.bandwidth);
  CHECK(back.count == spec.count);
  CHECK(back.seed == spec.seed);
}

TEST_CASE("typicality csv has one row per property") {
  EnsembleSpec spec;
  spec.dim = 3;
  spec.count = 5;
  spec.seed = 2;
  const auto csv = typicality_to_csv(typicality_report(spec, 1));
  std::size_t lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 6);  // header + 5 properties
  CHECK(csv.find("norm_eq_one") != std::string::npos);
  CHECK(csv.find("orbit_decay_observed") != std::string::npos);
}
