// Python bindings for the poscone core: operators, norms, ideals, spectral
// probes, the commutant machinery, the explicit constructions, and the
// ensemble sampler. Matrices cross the boundary as nested lists of floats;
// JSON interchange strings are accepted and produced for file interop.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "poscone/commutant.hpp"
#include "poscone/constructions.hpp"
#include "poscone/errors.hpp"
#include "poscone/ideals.hpp"
#include "poscone/io.hpp"
#include "poscone/norms.hpp"
#include "poscone/operator.hpp"
#include "poscone/sampler.hpp"
#include "poscone/spectral.hpp"

namespace py = pybind11;
using namespace poscone;

namespace {

using Rows = std::vector<std::vector<double>>;

Matrix matrix_from_rows(const Rows& rows) {
  const std::size_t n = rows.size();
  Matrix m(n, rows.empty() ? 0 : rows.front().size());
  for (std::size_t k = 0; k < n; ++k) {
    if (rows[k].size() != m.cols()) throw DimensionError("rows must form a rectangular matrix");
    for (std::size_t l = 0; l < m.cols(); ++l) m(k, l) = rows[k][l];
  }
  return m;
}

Rows rows_from_matrix(const Matrix& m) {
  Rows rows(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t k = 0; k < m.rows(); ++k)
    for (std::size_t l = 0; l < m.cols(); ++l) rows[k][l] = m(k, l);
  return rows;
}

TruncatedPositiveOperator operator_from_rows(const Rows& rows, double q) {
  Matrix m = matrix_from_rows(rows);
  if (m.rows() != m.cols()) throw DimensionError("operator matrix must be square");
  return TruncatedPositiveOperator(std::move(m), SpaceConfig(q));
}

std::vector<double> list_from_vector(const GeneralVector& v) {
  return {v.coords().begin(), v.coords().end()};
}

}  // namespace

PYBIND11_MODULE(_poscone, m) {
  m.doc() = "positive operators on finite sections of l_q";

  py::register_exception<DimensionError>(m, "DimensionError");
  py::register_exception<PositivityError>(m, "PositivityError");
  py::register_exception<RecipeError>(m, "RecipeError");
  py::register_exception<ParseError>(m, "ParseError");

  py::class_<SpaceConfig>(m, "SpaceConfig")
      .def(py::init<double, double, double, int>(), py::arg("q"), py::arg("tol_abs") = 1e-10,
           py::arg("tol_rel") = 1e-8, py::arg("max_iter") = 10000)
      .def_readonly("q", &SpaceConfig::q)
      .def_readonly("tol_abs", &SpaceConfig::tol_abs)
      .def_readonly("tol_rel", &SpaceConfig::tol_rel)
      .def_readonly("max_iter", &SpaceConfig::max_iter)
      .def("dual_exponent", &SpaceConfig::dual_exponent);

  py::class_<TruncatedPositiveOperator>(m, "Operator")
      .def(py::init(&operator_from_rows), py::arg("entries"), py::arg("q") = 2.0)
      .def_static(
          "identity",
          [](std::size_t dim, double q) {
            return TruncatedPositiveOperator::identity(dim, SpaceConfig(q));
          },
          py::arg("dim"), py::arg("q") = 2.0)
      .def_property_readonly("dim", &TruncatedPositiveOperator::dim)
      .def_property_readonly("q", [](const TruncatedPositiveOperator& T) { return T.space().q; })
      .def("entry", &TruncatedPositiveOperator::entry)
      .def("entries",
           [](const TruncatedPositiveOperator& T) { return rows_from_matrix(T.to_matrix()); })
      .def("apply",
           [](const TruncatedPositiveOperator& T, const std::vector<double>& x) {
             return list_from_vector(T.apply(GeneralVector(x)));
           })
      .def("adjoint", &TruncatedPositiveOperator::adjoint)
      .def("compress", &TruncatedPositiveOperator::compress)
      .def("to_json",
           [](const TruncatedPositiveOperator& T) { return operator_to_json(T).dump(); })
      .def_static("from_json", [](const std::string& text) {
        return operator_from_json(nlohmann::json::parse(text));
      });

  m.def("extend_with_scalar_tail", &extend_with_scalar_tail, py::arg("T"), py::arg("target_dim"),
        py::arg("lam"));

  // ---- norms ---------------------------------------------------------------
  py::class_<NormCertificate>(m, "NormCertificate")
      .def_readonly("value", &NormCertificate::value)
      .def_property_readonly(
          "witness",
          [](const NormCertificate& c) { return list_from_vector(c.witness.general()); })
      .def_property_readonly("method",
                             [](const NormCertificate& c) { return to_string(c.method); })
      .def_readonly("iterations", &NormCertificate::iterations)
      .def_readonly("residual", &NormCertificate::residual);

  m.def(
      "vector_norm",
      [](const std::vector<double>& x, double q) { return vector_norm(GeneralVector(x), q); },
      py::arg("x"), py::arg("q"));
  m.def("operator_norm", [](const TruncatedPositiveOperator& T) { return operator_norm(T); });
  m.def("power_method_norm",
        [](const TruncatedPositiveOperator& T) { return power_method_norm(T); });
  m.def("is_contraction", &is_contraction);
  m.def("exposing_perturbation", &exposing_perturbation, py::arg("A"), py::arg("delta"));
  m.def("is_absolutely_exposing", &is_absolutely_exposing, py::arg("A"),
        py::arg("grid_resolution") = 10000);

  // ---- ideals --------------------------------------------------------------
  py::class_<IdealReport>(m, "IdealReport")
      .def_readonly("truncation_dim", &IdealReport::truncation_dim)
      .def_readonly("irreducible", &IdealReport::irreducible)
      .def_readonly("failing_pair", &IdealReport::failing_pair)
      .def_property_readonly("witness_powers",
                             [](const IdealReport& r) {
                               py::dict d;
                               for (const auto& [pair, n] : r.witness_powers)
                                 d[py::make_tuple(pair.first, pair.second)] = n;
                               return d;
                             })
      .def_readonly("invariant_ideal_support", &IdealReport::invariant_ideal_support);

  m.def("rt_criterion", &rt_criterion);
  m.def("has_disjoint_column_supports", &has_disjoint_column_supports);
  m.def("support_arcs",
        [](const TruncatedPositiveOperator& T) { return support_digraph(T).arcs(); });

  // ---- spectral ------------------------------------------------------------
  py::class_<PerronPair>(m, "PerronPair")
      .def_readonly("value", &PerronPair::value)
      .def_property_readonly(
          "right", [](const PerronPair& p) { return list_from_vector(p.right.general()); })
      .def_property_readonly(
          "left", [](const PerronPair& p) { return list_from_vector(p.left.general()); })
      .def_readonly("residual", &PerronPair::residual);

  py::class_<LocalRadiusEstimate>(m, "LocalRadiusEstimate")
      .def_readonly("horizon", &LocalRadiusEstimate::horizon)
      .def_readonly("values", &LocalRadiusEstimate::values)
      .def_readonly("lower_bound", &LocalRadiusEstimate::lower_bound)
      .def_property_readonly("verdict",
                             [](const LocalRadiusEstimate& e) { return to_string(e.verdict); });

  m.def("perron_pair", &perron_pair);
  m.def(
      "local_radius",
      [](const TruncatedPositiveOperator& A, const std::vector<double>& y, int K) {
        return local_radius(A, PositiveVector(y), K);
      },
      py::arg("A"), py::arg("y"), py::arg("K") = 60);
  m.def(
      "orbit_norm_decay",
      [](const TruncatedPositiveOperator& T, const std::vector<double>& x, int K) {
        return orbit_norm_decay(T, GeneralVector(x), K);
      },
      py::arg("T"), py::arg("x"), py::arg("K") = 200);
  m.def("finite_spectrum", &finite_spectrum);

  // ---- commutant -----------------------------------------------------------
  py::class_<CommutantBasis>(m, "CommutantBasis")
      .def_readonly("dim", &CommutantBasis::dim)
      .def_readonly("rank", &CommutantBasis::rank)
      .def_property_readonly("basis", [](const CommutantBasis& b) {
        std::vector<Rows> out;
        out.reserve(b.basis.size());
        for (const auto& mat : b.basis) out.push_back(rows_from_matrix(mat));
        return out;
      });

  py::class_<CommutantConstraint>(m, "CommutantConstraint")
      .def(py::init([](std::size_t i, std::size_t j, double eta, std::size_t p) {
             return CommutantConstraint{i, j, eta, p};
           }),
           py::arg("i"), py::arg("j"), py::arg("eta"), py::arg("p"))
      .def_readonly("i", &CommutantConstraint::i)
      .def_readonly("j", &CommutantConstraint::j)
      .def_readonly("eta", &CommutantConstraint::eta)
      .def_readonly("p", &CommutantConstraint::p);

  py::class_<FeasibilityResult>(m, "FeasibilityResult")
      .def_readonly("feasible", &FeasibilityResult::feasible)
      .def_readonly("witness", &FeasibilityResult::witness)
      .def_property_readonly(
          "status", [](const FeasibilityResult& r) { return lp::to_string(r.certificate.status); })
      .def_property_readonly("objective",
                             [](const FeasibilityResult& r) { return r.certificate.objective; });

  m.def("commutant_basis", &commutant_basis);
  m.def("f_set_membership", &f_set_membership, py::arg("T"), py::arg("constraint"));
  m.def(
      "aab_witness_search",
      [](const TruncatedPositiveOperator& T, const std::vector<double>& y, int K) {
        return aab_witness_search(T, PositiveVector(y), K);
      },
      py::arg("T"), py::arg("y"), py::arg("K") = 60);

  // ---- constructions -------------------------------------------------------
  py::class_<ConstructionRecipe>(m, "ConstructionRecipe")
      .def_readonly("N", &ConstructionRecipe::N)
      .def_readonly("p", &ConstructionRecipe::p)
      .def_readonly("delta", &ConstructionRecipe::delta)
      .def_readonly("delta_schedule", &ConstructionRecipe::delta_schedule)
      .def_readonly("L", &ConstructionRecipe::L)
      .def_readonly("epsilon", &ConstructionRecipe::epsilon)
      .def_property_readonly("M", [](const ConstructionRecipe& r) { return r.M; })
      .def("to_json", [](const ConstructionRecipe& r) { return recipe_to_json(r).dump(); })
      .def_static("from_json", [](const std::string& text) {
        return recipe_from_json(nlohmann::json::parse(text));
      });

  py::class_<ConstraintVerdict>(m, "ConstraintVerdict")
      .def_readonly("constraint", &ConstraintVerdict::constraint)
      .def_readonly("feasible", &ConstraintVerdict::feasible)
      .def_readonly("max_value", &ConstraintVerdict::max_value);

  py::class_<TheoremCollapseReport>(m, "TheoremCollapseReport")
      .def_readonly("L", &TheoremCollapseReport::L)
      .def_readonly("N", &TheoremCollapseReport::N)
      .def_readonly("p", &TheoremCollapseReport::p)
      .def_readonly("delta", &TheoremCollapseReport::delta)
      .def_readonly("commutant_rank", &TheoremCollapseReport::commutant_rank)
      .def_readonly("cone_total_mass", &TheoremCollapseReport::cone_total_mass)
      .def_readonly("constraints", &TheoremCollapseReport::constraints)
      .def_readonly("row_pN1_max", &TheoremCollapseReport::row_pN1_max)
      .def_readonly("pa_shift_cols_max", &TheoremCollapseReport::pa_shift_cols_max)
      .def_readonly("pa_all_cols_max", &TheoremCollapseReport::pa_all_cols_max)
      .def_readonly("all_infeasible", &TheoremCollapseReport::all_infeasible)
      .def("to_json",
           [](const TheoremCollapseReport& r) { return collapse_report_to_json(r).dump(); });

  m.def(
      "make_recipe",
      [](const TruncatedPositiveOperator& M, std::size_t p, double epsilon,
         std::optional<std::size_t> L, std::optional<double> delta) {
        return make_recipe(M, p, epsilon, L, delta);
      },
      py::arg("M"), py::arg("p"), py::arg("epsilon") = 0.05, py::arg("L") = std::nullopt,
      py::arg("delta") = std::nullopt);
  m.def("max_admissible_delta", &max_admissible_delta, py::arg("M"), py::arg("N"), py::arg("p"),
        py::arg("delta_schedule"), py::arg("epsilon"));
  m.def("build_theorem_operator", &build_theorem_operator);
  m.def("rank_one_perturbation", &rank_one_perturbation, py::arg("T"), py::arg("source"),
        py::arg("targets"), py::arg("delta"));
  m.def(
      "perron_cancellation_check",
      [](const Rows& B, const Rows& C, const Rows& D, double delta) {
        return perron_cancellation_check(matrix_from_rows(B), matrix_from_rows(C),
                                         matrix_from_rows(D), delta);
      },
      py::arg("B"), py::arg("C"), py::arg("D"), py::arg("delta"));
  m.def("verify_theorem_commutant_collapse", &verify_theorem_commutant_collapse);

  // ---- sampler ---------------------------------------------------------------
  py::class_<EnsembleSpec>(m, "EnsembleSpec")
      .def(py::init([](std::size_t dim, double q, const std::string& kind, std::size_t count,
                       std::uint64_t seed, double damping, double density, std::size_t bandwidth) {
             EnsembleSpec spec;
             spec.dim = dim;
             spec.q = q;
             spec.kind = ensemble_kind_from_string(kind);
             spec.count = count;
             spec.seed = seed;
             spec.damping = damping;
             spec.density = density;
             spec.bandwidth = bandwidth;
             spec.validate();
             return spec;
           }),
           py::arg("dim"), py::arg("q") = 2.0, py::arg("kind") = "iid_uniform_rescaled",
           py::arg("count") = 100, py::arg("seed") = 0, py::arg("damping") = 0.9,
           py::arg("density") = 0.2, py::arg("bandwidth") = 1)
      .def_readonly("dim", &EnsembleSpec::dim)
      .def_readonly("q", &EnsembleSpec::q)
      .def_readonly("count", &EnsembleSpec::count)
      .def_readonly("seed", &EnsembleSpec::seed);

  py::class_<PropertyStat>(m, "PropertyStat")
      .def_readonly("count", &PropertyStat::count)
      .def_readonly("frequency", &PropertyStat::frequency)
      .def_readonly("wilson_radius", &PropertyStat::wilson_radius);

  py::class_<TypicalityReport>(m, "TypicalityReport")
      .def_readonly("trials", &TypicalityReport::trials)
      .def_readonly("norm_eq_one", &TypicalityReport::norm_eq_one)
      .def_readonly("irreducible", &TypicalityReport::irreducible)
      .def_readonly("diagonal_all_positive", &TypicalityReport::diagonal_all_positive)
      .def_readonly("disjoint_column_supports", &TypicalityReport::disjoint_column_supports)
      .def_readonly("orbit_decay_observed", &TypicalityReport::orbit_decay_observed)
      .def("to_json", [](const TypicalityReport& r) { return typicality_to_json(r).dump(); })
      .def("to_csv", [](const TypicalityReport& r) { return typicality_to_csv(r); });

  m.def("sample_one", &sample_one, py::arg("spec"), py::arg("trial"));
  m.def("sample", &sample, py::arg("spec"));
  m.def("typicality_report", &typicality_report, py::arg("spec"), py::arg("threads") = 0);
}
