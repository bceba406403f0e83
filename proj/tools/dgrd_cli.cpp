// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. One subcommand per study; configuration comes
// from an optional key=value file plus repeatable --set overrides
// (precedence: flag > file > default). All numeric output uses 17
// significant digits; reports carry no timestamps, so identical
// configurations produce byte-identical artifacts.
//
// Exit codes: 0 = all gates pass, 1 = configuration/runtime error,
// 2 = a numerical gate failed.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "dgrd/analysis.hpp"
#include "dgrd/common.hpp"
#include "dgrd/config.hpp"
#include "dgrd/report.hpp"
#include "dgrd/solver.hpp"
#include "dgrd/study.hpp"

namespace {

using namespace dgrd;

ManufacturedCase resolve_case(const RunConfig& cfg) {
  if (cfg.case_id == "zero") {
    ManufacturedCase c;
    c.id = "zero";
    c.k_spec = cfg.coefficient;
    c.u = [](double, double) { return 0.0; };
    c.grad_u = [](double, double) -> std::array<double, 2> {
      return {0.0, 0.0};
    };
    c.f = [](double, double) { return 0.0; };
    c.lhs = [](double, double) { return 0.0; };
    return c;
  }
  return manufactured(cfg.case_id);
}

VbvpConfig to_vbvp(const RunConfig& cfg, const ManufacturedCase& c) {
  VbvpConfig v;
  v.domain = cfg.domain;
  v.nx = cfg.nx;
  v.ny = cfg.ny;
  v.degrees = cfg.degrees.empty() ? std::vector<int>{cfg.p} : cfg.degrees;
  v.quad_order = cfg.quad_order;
  v.coefficient = c.k_spec;
  v.params = cfg.params;
  v.f = c.f;
  v.threads = cfg.threads;
  return v;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.output_dir);
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

void emit(const std::string& key, double value) {
  std::printf("%s = %s\n", key.c_str(), format17(value).c_str());
}

int cmd_solve(const RunConfig& cfg) {
  const ManufacturedCase c = resolve_case(cfg);
  const VbvpResult r = solve_vbvp(to_vbvp(cfg, c));
  const ErrorReport err =
      error_norms(*r.u, c.u, c.grad_u, *r.coefficient, cfg.params);
  const double max_abs_coeff = r.u->coeffs.cwiseAbs().maxCoeff();
  std::printf("case = %s\n", c.id.c_str());
  std::printf("dofs = %d\n", r.space->num_dofs());
  std::printf("method = %s\n", r.report.method.c_str());
  std::printf("iterations = %d\n", r.report.iterations);
  emit("rel_residual", r.report.rel_residual);
  emit("triple_norm", r.triple_norm_u);
  emit("max_abs_coeff", max_abs_coeff);
  emit("l2_error", err.l2);
  emit("h1_error", err.broken_h1);
  emit("triple_error", err.triple);

  std::string csv = "dofs,method,iterations,rel_residual,triple_norm,"
                    "max_abs_coeff,l2_error,h1_error,triple_error\n";
  csv += csv_line({std::to_string(r.space->num_dofs()), r.report.method,
                   std::to_string(r.report.iterations),
                   format17(r.report.rel_residual), format17(r.triple_norm_u),
                   format17(max_abs_coeff), format17(err.l2),
                   format17(err.broken_h1), format17(err.triple)});
  write_text_file(out_path(cfg, "solve.csv"), csv);
  write_text_file(out_path(cfg, "solution.vtk"),
                  grid_export(*r.u, cfg.grid_nx, cfg.grid_ny, "u"));
  return 0;
}

int cmd_converge(const RunConfig& cfg) {
  if (cfg.case_id == "zero") {
    throw invalid_input(
        "converge: requires a manufactured case with an exact solution");
  }
  const ManufacturedCase c = resolve_case(cfg);
  const ConvergenceTable table =
      convergence_study(c, cfg.params, cfg.levels, cfg.p, cfg.threads);
  write_text_file(out_path(cfg, "converge.csv"), convergence_csv(table));
  std::printf("nx  h  dofs  l2_error  h1_error  triple_error  order_l2  "
              "order_h1\n");
  for (const ConvergenceRow& row : table.rows) {
    std::printf("%d %s %d %s %s %s %s %s\n", row.nx, format17(row.h).c_str(),
                row.dofs, format17(row.l2).c_str(), format17(row.h1).c_str(),
                format17(row.triple).c_str(), format17(row.order_l2).c_str(),
                format17(row.order_h1).c_str());
  }
  if (!table.gated) {
    std::printf("gates = SKIPPED (p = 1)\n");
    return 0;
  }
  bool pass = true;
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const ConvergenceRow& a = table.rows[i - 1];
    const ConvergenceRow& b = table.rows[i];
    pass = pass && b.l2 < a.l2 && b.h1 < a.h1 && b.triple < a.triple;
  }
  const double min_order = static_cast<double>(cfg.p) - 0.25;
  pass = pass && table.rows.back().order_h1 >= min_order;
  std::printf("gates = %s\n", pass ? "PASS" : "FAIL");
  return pass ? 0 : 2;
}

int cmd_infsup(const RunConfig& cfg) {
  const ManufacturedCase c = resolve_case(cfg);
  const Mesh mesh = build_rect_mesh(cfg.domain, cfg.nx, cfg.ny);
  const std::vector<int> degrees =
      cfg.degrees.empty() ? std::vector<int>{cfg.p} : cfg.degrees;
  const BrokenSpace space =
      degrees.size() == 1
          ? BrokenSpace::uniform(mesh, degrees[0], cfg.quad_order)
          : BrokenSpace(mesh, degrees, cfg.quad_order);
  const CoefficientField k = make_coefficient(space, c.k_spec);
  const AssembledSystem sys =
      assemble_system(space, k, cfg.params, c.f, cfg.threads);
  const Eigen::MatrixXd g = build_gram(space, k, cfg.params, cfg.threads);
  const MeasuredConstants measured =
      measure_constants(sys.B, g, sys.fingerprint);
  const TheoryConstants theory = theory_constants(
      cfg.params, mesh.h, space.min_degree(), cfg.beta, continuity_c(k));

  InfSupRow row;
  row.nx = cfg.nx;
  row.ny = cfg.ny;
  row.p = space.min_degree();
  row.params = cfg.params;
  row.measured = measured;
  row.theory = theory;
  write_text_file(out_path(cfg, "infsup.csv"), infsup_csv({row}));

  std::printf("dofs = %d\n", measured.dofs);
  emit("gamma_h", measured.gamma_h);
  emit("m_h", measured.m_h);
  emit("m_theory", theory.m);
  emit("xi1", theory.xi1);
  emit("xi2", theory.xi2);
  emit("gamma_lb", theory.gamma_lb);
  const bool pass =
      measured.gamma_h > 0.0 && measured.m_h <= theory.m * (1.0 + 1e-9);
  std::printf("gates = %s\n", pass ? "PASS" : "FAIL");
  return pass ? 0 : 2;
}

int cmd_conserve(const RunConfig& cfg) {
  const ManufacturedCase c = resolve_case(cfg);
  const VbvpResult r = solve_vbvp(to_vbvp(cfg, c));
  const ConservationReport rep =
      conservation_check(*r.u, c.f, *r.coefficient);
  write_text_file(out_path(cfg, "conserve.csv"), conservation_csv(rep));
  emit("max_abs_residual", rep.max_abs);
  emit("f_l2", rep.f_l2);
  emit("global_sum", rep.global_sum);
  const bool pass = rep.max_abs <= 1e-10 * std::max(1.0, rep.f_l2);
  std::printf("gates = %s\n", pass ? "PASS" : "FAIL");
  return pass ? 0 : 2;
}

int cmd_constants(const RunConfig& cfg) {
  const ManufacturedCase c = resolve_case(cfg);
  const Mesh mesh = build_rect_mesh(cfg.domain, cfg.nx, cfg.ny);
  const BrokenSpace space = BrokenSpace::uniform(mesh, cfg.p, cfg.quad_order);
  const CoefficientField k = make_coefficient(space, c.k_spec);
  const TheoryConstants theory = theory_constants(cfg.params, mesh.h, cfg.p,
                                                  cfg.beta, continuity_c(k));
  write_text_file(out_path(cfg, "constants.csv"),
                  constants_csv(theory, cfg.params, mesh.h, cfg.p));
  emit("beta", theory.beta);
  emit("c", theory.c);
  emit("h", mesh.h);
  std::printf("p = %d\n", cfg.p);
  emit("m", theory.m);
  emit("xi1", theory.xi1);
  emit("xi2", theory.xi2);
  emit("gamma_lb", theory.gamma_lb);
  std::printf("xi2_positive = %d\n", theory.xi2_positive ? 1 : 0);
  std::printf("note: %s\n", theory.note.c_str());
  return 0;
}

int cmd_lemmas(const RunConfig& cfg) {
  const ManufacturedCase c = resolve_case(cfg);
  const Mesh mesh = build_rect_mesh(cfg.domain, cfg.nx, cfg.ny);
  const BrokenSpace space = BrokenSpace::uniform(mesh, cfg.p, cfg.quad_order);
  const CoefficientField k = make_coefficient(space, c.k_spec);
  const LemmaReport rep =
      lemma_check(space, k, cfg.params, cfg.beta, cfg.samples, cfg.seed);
  write_text_file(out_path(cfg, "lemmas.csv"), lemmas_csv(rep));
  std::printf("samples = %d\n", static_cast<int>(rep.samples.size()));
  std::printf("seed = %llu\n",
              static_cast<unsigned long long>(rep.seed));
  emit("xi1", rep.theory.xi1);
  emit("xi2", rep.theory.xi2);
  emit("r1_max", rep.r1_max);
  emit("r2_min", rep.r2_min);
  std::printf("r1_within = %d\n", rep.r1_within);
  std::printf("r2_within = %d\n", rep.r2_within);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discontinuous Galerkin reaction-diffusion solver and "
               "well-posedness laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--set", overrides,
                 "override one configuration key (key=value, repeatable)");

  CLI::App* sub_solve =
      app.add_subcommand("solve", "solve one problem; report fields + norms");
  CLI::App* sub_converge =
      app.add_subcommand("converge", "mesh-refinement error study");
  CLI::App* sub_infsup = app.add_subcommand(
      "infsup", "measured inf-sup/continuity constants vs theory");
  CLI::App* sub_conserve =
      app.add_subcommand("conserve", "element-wise conservation residuals");
  CLI::App* sub_constants =
      app.add_subcommand("constants", "closed-form theory constants; no solve");
  CLI::App* sub_lemmas =
      app.add_subcommand("lemmas", "sampled lemma-level inequality checks");
  for (CLI::App* sub : {sub_solve, sub_converge, sub_infsup, sub_conserve,
                        sub_constants, sub_lemmas}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1; // --help exits 0; any parse error is 1
  }

  try {
    const RunConfig cfg = load_config(config_path, overrides);
    if (sub_solve->parsed()) {
      return cmd_solve(cfg);
    }
    if (sub_converge->parsed()) {
      return cmd_converge(cfg);
    }
    if (sub_infsup->parsed()) {
      return cmd_infsup(cfg);
    }
    if (sub_conserve->parsed()) {
      return cmd_conserve(cfg);
    }
    if (sub_constants->parsed()) {
      return cmd_constants(cfg);
    }
    return cmd_lemmas(cfg);
  } catch (const invalid_input& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 1;
  } catch (const solver_failure& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
