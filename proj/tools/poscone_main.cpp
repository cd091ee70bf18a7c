// poscone: desk-scale laboratory for positive operators on finite sections
// of l_q. Reads matrices in the JSON interchange format, runs the norm /
// ideal / spectral / commutant machinery, and emits JSON reports.
//
// Exit codes: 0 success, 1 domain error, 2 I/O or parse error,
// 3 a verify-theorem run found a feasible constraint.

#include <complex>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
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

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitParse = 2;
constexpr int kExitTheoremViolation = 3;

void emit(const json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    poscone::write_text_file(out_path, text);
}

std::vector<std::size_t> parse_index_list(const std::string& csv) {
  std::vector<std::size_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t consumed = 0;
      out.push_back(static_cast<std::size_t>(std::stoull(item, &consumed)));
      if (consumed != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw poscone::ParseError("--targets expects comma-separated indices, got: " + item);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"positive operators on finite sections of l_q"};
  app.require_subcommand(1);

  std::function<int()> action;

  // ---- norm ---------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("norm", "l_q -> l_q operator norm with witness");
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--in", *in, "operator JSON file")->required();
    cmd->add_option("--out", *out, "output path (default: stdout)");
    cmd->callback([in, out, &action] {
      action = [in, out] {
        const auto T = poscone::read_operator_file(*in);
        const auto cert = poscone::operator_norm(T);
        emit(poscone::certificate_to_json(cert), *out);
        std::cerr << "norm " << cert.value << " (" << poscone::to_string(cert.method) << ")\n";
        return kExitOk;
      };
    });
  }

  // ---- ideal-check ----------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("ideal-check", "closed-invariant-ideal criterion");
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto dot = std::make_shared<std::string>();
    cmd->add_option("--in", *in, "operator JSON file")->required();
    cmd->add_option("--out", *out, "output path (default: stdout)");
    cmd->add_option("--dot", *dot, "write the support digraph in DOT format");
    cmd->callback([in, out, dot, &action] {
      action = [in, out, dot] {
        const auto T = poscone::read_operator_file(*in);
        const auto report = poscone::rt_criterion(T);
        if (!dot->empty()) {
          const auto g = poscone::support_digraph(T);
          const std::vector<std::size_t>* highlight =
              report.invariant_ideal_support ? &*report.invariant_ideal_support : nullptr;
          poscone::write_text_file(*dot, poscone::to_dot(g, highlight));
        }
        emit(poscone::ideal_report_to_json(report), *out);
        std::cerr << (report.irreducible ? "irreducible" : "reducible") << " at truncation dim "
                  << report.truncation_dim << "\n";
        return kExitOk;
      };
    });
  }

  // ---- spectral -------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("spectral", "Perron pair, eigenvalues, local radius");
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto yfile = std::make_shared<std::string>();
    auto csv = std::make_shared<std::string>();
    auto horizon = std::make_shared<int>(60);
    auto no_perron = std::make_shared<bool>(false);
    cmd->add_option("--in", *in, "operator JSON file")->required();
    cmd->add_option("--out", *out, "output path (default: stdout)");
    cmd->add_option("--y", *yfile, "positive vector JSON for the local-radius probe");
    cmd->add_option("--horizon", *horizon, "local-radius horizon K (default 60)");
    cmd->add_option("--csv", *csv, "write eigenvalues (and local-radius values) as CSV");
    cmd->add_flag("--no-perron", *no_perron, "skip the Perron power iteration");
    cmd->callback([in, out, yfile, csv, horizon, no_perron, &action] {
      action = [in, out, yfile, csv, horizon, no_perron] {
        const auto T = poscone::read_operator_file(*in);
        json j;
        const auto spectrum = poscone::finite_spectrum(T);
        json eigs = json::array();
        for (const auto& z : spectrum) eigs.push_back(json::array({z.real(), z.imag()}));
        j["eigenvalues"] = std::move(eigs);
        if (!*no_perron) {
          const auto pair = poscone::perron_pair(T);
          j["perron"] = poscone::perron_to_json(pair);
        }
        std::optional<poscone::LocalRadiusEstimate> est;
        if (!yfile->empty()) {
          const auto y = poscone::PositiveVector(poscone::vector_from_json(
              poscone::read_json_file(*yfile)));
          est = poscone::local_radius(T, y, *horizon);
          j["local_radius"] = poscone::local_radius_to_json(*est);
        }
        if (!csv->empty()) {
          std::ostringstream table;
          table << "re,im\n";
          for (const auto& z : spectrum) table << z.real() << "," << z.imag() << "\n";
          if (est) {
            table << "k,value\n";
            for (std::size_t k = 0; k < est->values.size(); ++k)
              table << (k + 1) << "," << est->values[k] << "\n";
          }
          poscone::write_text_file(*csv, table.str());
        }
        emit(j, *out);
        std::cerr << "spectrum of the truncation computed (" << spectrum.size() << " values)\n";
        return kExitOk;
      };
    });
  }

  // ---- commutant ------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("commutant", "basis of { A : AT = TA }");
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto full = std::make_shared<bool>(false);
    cmd->add_option("--in", *in, "operator JSON file")->required();
    cmd->add_option("--out", *out, "output path (default: stdout)");
    cmd->add_flag("--basis", *full, "include the basis matrices in the output");
    cmd->callback([in, out, full, &action] {
      action = [in, out, full] {
        const auto T = poscone::read_operator_file(*in);
        const auto basis = poscone::commutant_basis(T);
        json j{{"dim", basis.dim}, {"rank", basis.rank}};
        if (*full) {
          json mats = json::array();
          for (const auto& b : basis.basis) {
            json rows = json::array();
            for (std::size_t k = 0; k < basis.dim; ++k) {
              json row = json::array();
              for (std::size_t l = 0; l < basis.dim; ++l) row.push_back(b(k, l));
              rows.push_back(std::move(row));
            }
            mats.push_back(std::move(rows));
          }
          j["basis"] = std::move(mats);
        }
        emit(j, *out);
        std::cerr << "commutant rank " << basis.rank << " at dim " << basis.dim << "\n";
        return kExitOk;
      };
    });
  }

  // ---- f-set ----------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("f-set", "membership in the obstruction set F_{i,j,eta,p}");
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto i = std::make_shared<std::size_t>(0);
    auto jj = std::make_shared<std::size_t>(0);
    auto p = std::make_shared<std::size_t>(0);
    auto eta = std::make_shared<double>(1e-3);
    cmd->add_option("--in", *in, "operator JSON file")->required();
    cmd->add_option("--out", *out, "output path (default: stdout)");
    cmd->add_option("--i", *i, "source index")->required();
    cmd->add_option("--j", *jj, "target index")->required();
    cmd->add_option("--p", *p, "zero-diagonal index")->required();
    cmd->add_option("--eta", *eta, "threshold eta > 0 (default 1e-3)");
    cmd->callback([in, out, i, jj, p, eta, &action] {
      action = [in, out, i, jj, p, eta] {
        const auto T = poscone::read_operator_file(*in);
        const auto result = poscone::f_set_membership(T, {*i, *jj, *eta, *p});
        emit(poscone::feasibility_to_json(result), *out);
        std::cerr << (result.feasible ? "feasible" : "infeasible") << "\n";
        return kExitOk;
      };
    });
  }

  // ---- construct ------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("construct", "build the explicit operators");
    cmd->require_subcommand(1);

    auto* theorem = cmd->add_subcommand("theorem", "banded operator of the collapse theorem");
    {
      auto recipe_path = std::make_shared<std::string>();
      auto out = std::make_shared<std::string>();
      theorem->add_option("--recipe", *recipe_path, "recipe JSON file")->required();
      theorem->add_option("--out", *out, "output path (default: stdout)");
      theorem->callback([recipe_path, out, &action] {
        action = [recipe_path, out] {
          const auto recipe = poscone::recipe_from_json(poscone::read_json_file(*recipe_path));
          const auto T = poscone::build_theorem_operator(recipe);
          emit(poscone::operator_to_json(T), *out);
          std::cerr << "built L=" << recipe.L << " operator, delta=" << recipe.delta << "\n";
          return kExitOk;
        };
      });
    }

    auto* rank_one = cmd->add_subcommand("rank-one", "rank-one positive perturbation");
    {
      auto in = std::make_shared<std::string>();
      auto out = std::make_shared<std::string>();
      auto source = std::make_shared<std::size_t>(0);
      auto targets = std::make_shared<std::string>();
      auto delta = std::make_shared<double>(0.0);
      rank_one->add_option("--in", *in, "operator JSON file")->required();
      rank_one->add_option("--out", *out, "output path (default: stdout)");
      rank_one->add_option("--source", *source, "functional index i")->required();
      rank_one->add_option("--targets", *targets, "comma-separated target indices")->required();
      rank_one->add_option("--delta", *delta, "perturbation size > 0")->required();
      rank_one->callback([in, out, source, targets, delta, &action] {
        action = [in, out, source, targets, delta] {
          const auto T = poscone::read_operator_file(*in);
          const auto S = poscone::rank_one_perturbation(T, *source, parse_index_list(*targets),
                                                        *delta);
          emit(poscone::operator_to_json(S), *out);
          return kExitOk;
        };
      });
    }

    auto* extend = cmd->add_subcommand("extend", "block extension diag(T, lambda I)");
    {
      auto in = std::make_shared<std::string>();
      auto out = std::make_shared<std::string>();
      auto target = std::make_shared<std::size_t>(0);
      auto lambda = std::make_shared<double>(1.0);
      extend->add_option("--in", *in, "operator JSON file")->required();
      extend->add_option("--out", *out, "output path (default: stdout)");
      extend->add_option("--target-dim", *target, "extended dimension")->required();
      extend->add_option("--lambda", *lambda, "tail diagonal weight >= 0 (default 1)");
      extend->callback([in, out, target, lambda, &action] {
        action = [in, out, target, lambda] {
          const auto T = poscone::read_operator_file(*in);
          const auto S = poscone::extend_with_scalar_tail(T, *target, *lambda);
          emit(poscone::operator_to_json(S), *out);
          return kExitOk;
        };
      });
    }
  }

  // ---- verify-theorem ---------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("verify-theorem",
                                   "commutant collapse of the theorem operator at finite scale");
    auto recipe_path = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--recipe", *recipe_path, "recipe JSON file")->required();
    cmd->add_option("--out", *out, "output path (default: stdout)");
    cmd->callback([recipe_path, out, &action] {
      action = [recipe_path, out] {
        const auto recipe = poscone::recipe_from_json(poscone::read_json_file(*recipe_path));
        const auto report = poscone::verify_theorem_commutant_collapse(recipe);
        emit(poscone::collapse_report_to_json(report), *out);
        if (!report.all_infeasible) {
          std::cerr << "VIOLATION: a constraint came back feasible at L=" << report.L
                    << "; flagging for review\n";
          return kExitTheoremViolation;
        }
        std::cerr << "all " << report.constraints.size() << " constraints infeasible at L="
                  << report.L << "\n";
        return kExitOk;
      };
    });
  }

  // ---- sample -----------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("sample", "ensemble statistics for the labeled properties");
    auto spec_path = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto csv = std::make_shared<std::string>();
    auto dim = std::make_shared<std::size_t>(4);
    auto q = std::make_shared<double>(2.0);
    auto kind = std::make_shared<std::string>("iid_uniform_rescaled");
    auto count = std::make_shared<std::size_t>(100);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto threads = std::make_shared<unsigned>(0);
    auto damping = std::make_shared<double>(0.9);
    auto density = std::make_shared<double>(0.2);
    auto bandwidth = std::make_shared<std::size_t>(1);
    cmd->add_option("--spec", *spec_path, "ensemble spec JSON (flags override)");
    cmd->add_option("--out", *out, "output path (default: stdout)");
    cmd->add_option("--csv", *csv, "also write the report as CSV");
    cmd->add_option("--dim", *dim, "dimension (default 4)");
    cmd->add_option("--q", *q, "space exponent (default 2)");
    cmd->add_option("--kind", *kind,
                    "iid_uniform_rescaled | column_stochastic_damped | sparse_band");
    cmd->add_option("--count", *count, "number of trials (default 100)");
    cmd->add_option("--seed", *seed, "ensemble seed");
    cmd->add_option("--threads", *threads, "parallel trial workers (default: hardware)");
    cmd->add_option("--damping", *damping, "column_stochastic_damped damping (default 0.9)");
    cmd->add_option("--density", *density, "sparse_band density (default 0.2)");
    cmd->add_option("--bandwidth", *bandwidth, "sparse_band bandwidth (default 1)");
    cmd->callback([=, &action] {
      const bool has_spec = !spec_path->empty();
      const bool seed_given = cmd->count("--seed") > 0;
      const bool dim_given = cmd->count("--dim") > 0;
      const bool q_given = cmd->count("--q") > 0;
      const bool kind_given = cmd->count("--kind") > 0;
      const bool count_given = cmd->count("--count") > 0;
      const bool damping_given = cmd->count("--damping") > 0;
      const bool density_given = cmd->count("--density") > 0;
      const bool bandwidth_given = cmd->count("--bandwidth") > 0;
      action = [=] {
        poscone::EnsembleSpec spec;
        if (has_spec) spec = poscone::ensemble_spec_from_json(poscone::read_json_file(*spec_path));
        if (!has_spec || dim_given) spec.dim = *dim;
        if (!has_spec || q_given) spec.q = *q;
        if (!has_spec || kind_given) spec.kind = poscone::ensemble_kind_from_string(*kind);
        if (!has_spec || count_given) spec.count = *count;
        if (!has_spec || damping_given) spec.damping = *damping;
        if (!has_spec || density_given) spec.density = *density;
        if (!has_spec || bandwidth_given) spec.bandwidth = *bandwidth;
        // seed precedence: flag > POSCONE_SEED env > spec file > default
        if (seed_given) {
          spec.seed = *seed;
        } else if (const char* env = std::getenv("POSCONE_SEED")) {
          spec.seed = std::strtoull(env, nullptr, 10);
        } else if (!has_spec) {
          spec.seed = *seed;
        }
        const auto report = poscone::typicality_report(spec, *threads);
        if (!csv->empty()) poscone::write_text_file(*csv, poscone::typicality_to_csv(report));
        emit(poscone::typicality_to_json(report), *out);
        std::cerr << "sampled " << report.trials << " operators (" << poscone::to_string(spec.kind)
                  << ", dim " << spec.dim << ")\n";
        return kExitOk;
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
        e.get_name() == "CallForVersion")
      return app.exit(e);
    app.exit(e);
    return kExitParse;
  }

  try {
    return action ? action() : kExitParse;
  } catch (const poscone::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const poscone::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}
