// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdio>
#include <string>
#include <vector>

#include "dgrd/common.hpp"
#include "dgrd/config.hpp"
#include "dgrd/mesh.hpp"
#include "dgrd/report.hpp"
#include "dgrd/space.hpp"

using namespace dgrd;

TEST_SUITE("config_report") {

TEST_CASE("defaults survive an empty load") {
  const RunConfig c = load_config("", {});
  CHECK(c.schema_version == 1);
  CHECK(c.nx == 8);
  CHECK(c.ny == 8);
  CHECK(c.p == 2);
  CHECK(c.params.sigma == 1.0);
  CHECK(c.params.lambda == 0.0);
  CHECK(c.case_id == "a");
  CHECK(c.levels == std::vector<int>{4, 8, 16});
  CHECK(c.beta == -0.4);
  CHECK(c.seed == 12345);
  CHECK(c.threads == 1);
}

TEST_CASE("config text parsing: comments, whitespace, full key set") {
  const std::string text =
      "# run description\n"
      "schema_version = 1\n"
      "\n"
      "domain = 0 0 1 1\n"
      "nx = 4   # trailing comment\n"
      "ny=6\n"
      "p = 3\n"
      "quad_order = 7\n"
      "sigma = 0.5\n"
      "lambda = 1\n"
      "zeta = 2\n"
      "nu = 1\n"
      "theta = 1\n"
      "coefficient = checkerboard 1 10\n"
      "case = b\n"
      "levels = 2 4 8 16\n"
      "beta = -0.25\n"
      "samples = 9\n"
      "seed = 777\n"
      "threads = 2\n"
      "output_dir = out\n"
      "grid_nx = 11\n"
      "grid_ny = 21\n";
  const RunConfig c = parse_config_text(text);
  CHECK(c.nx == 4);
  CHECK(c.ny == 6);
  CHECK(c.p == 3);
  CHECK(c.quad_order == 7);
  CHECK(c.params.sigma == 0.5);
  CHECK(c.params.lambda == 1.0);
  CHECK(c.params.zeta == 2.0);
  CHECK(c.coefficient.kind == "checkerboard");
  CHECK(c.coefficient.a == 1.0);
  CHECK(c.coefficient.b == 10.0);
  CHECK(c.case_id == "b");
  CHECK(c.levels == std::vector<int>{2, 4, 8, 16});
  CHECK(c.beta == -0.25);
  CHECK(c.samples == 9);
  CHECK(c.seed == 777);
  CHECK(c.output_dir == "out");
  CHECK(c.grid_nx == 11);
  CHECK(c.grid_ny == 21);
}

TEST_CASE("malformed configuration text is rejected with context") {
  CHECK_THROWS_AS(parse_config_text("nx = 4\n"), invalid_input); // no version
  CHECK_THROWS_AS(parse_config_text("schema_version = 2\n"), invalid_input);
  CHECK_THROWS_AS(parse_config_text("schema_version = 1\nwat\n"),
                  invalid_input);
  CHECK_THROWS_AS(parse_config_text("schema_version = 1\nnx = four\n"),
                  invalid_input);
  CHECK_THROWS_AS(parse_config_text("schema_version = 1\nbogus_key = 1\n"),
                  invalid_input);
  bool threw = false;
  try {
    parse_config_text("schema_version = 1\nbroken line\n");
  } catch (const invalid_input& e) {
    threw = true;
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK(threw);
  threw = false;
  try {
    parse_config_text("schema_version = 1\nwibble = 3\n");
  } catch (const invalid_input& e) {
    threw = true;
    CHECK(std::string(e.what()).find("wibble") != std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("coefficient values enforce their arity") {
  RunConfig c;
  apply_config_entry(c, "coefficient", "constant 2.5");
  CHECK(c.coefficient.kind == "constant");
  CHECK(c.coefficient.a == 2.5);
  apply_config_entry(c, "coefficient", "quadrant 1 10");
  CHECK(c.coefficient.kind == "quadrant");
  CHECK(c.coefficient.b == 10.0);
  apply_config_entry(c, "coefficient", "one_plus_x2");
  CHECK(c.coefficient.kind == "one_plus_x2");
  CHECK_THROWS_AS(apply_config_entry(c, "coefficient", "checkerboard 1"),
                  invalid_input);
  CHECK_THROWS_AS(apply_config_entry(c, "coefficient", "one_plus_x2 3"),
                  invalid_input);
  CHECK_THROWS_AS(apply_config_entry(c, "coefficient", "constant 1 2 3"),
                  invalid_input);
  CHECK_THROWS_AS(apply_config_entry(c, "coefficient", "mystery 1"),
                  invalid_input);
}

TEST_CASE("override precedence: flag beats file beats default") {
  const std::string path = "test_config_precedence.cfg";
  write_text_file(path, "schema_version = 1\nnx = 4\nny = 5\n");
  const RunConfig c = load_config(path, {"ny=7", "p = 3"});
  std::remove(path.c_str());
  CHECK(c.nx == 4); // from the file
  CHECK(c.ny == 7); // flag wins over the file
  CHECK(c.p == 3);  // flag wins over the default
  CHECK(c.samples == 50); // untouched default

  CHECK_THROWS_AS(load_config("no_such_file.cfg", {}), invalid_input);
  CHECK_THROWS_AS(load_config("", {"nx"}), invalid_input); // not key=value
}

TEST_CASE("validation rejects inconsistent configurations") {
  auto broken = [](const std::string& entry) {
    return load_config("", {entry});
  };
  CHECK_THROWS_AS(broken("nx=0"), invalid_input);
  CHECK_THROWS_AS(broken("p=0"), invalid_input);
  CHECK_THROWS_AS(broken("sigma=-1"), invalid_input);
  CHECK_THROWS_AS(broken("sigma=0"), invalid_input);
  CHECK_THROWS_AS(broken("case=x"), invalid_input);
  CHECK_THROWS_AS(broken("samples=0"), invalid_input);
  CHECK_THROWS_AS(broken("threads=0"), invalid_input);
  CHECK_THROWS_AS(broken("grid_nx=1"), invalid_input);
  CHECK_THROWS_AS(broken("quad_order=-1"), invalid_input);
  // the built-in manufactured cases live on the unit square
  CHECK_THROWS_AS(broken("domain=0 0 2 1"), invalid_input);
  const RunConfig ok = load_config("", {"domain=0 0 2 1", "case=zero"});
  CHECK(ok.case_id == "zero");
  // sigma = 0 needs the explicit comparison switch
  const RunConfig cmp = load_config("", {"sigma=0", "allow_sigma_zero=true"});
  CHECK(cmp.params.allow_sigma_zero);
  // degrees must match the element count
  CHECK_THROWS_AS(load_config("", {"nx=2", "ny=2", "degrees=1 2 3"}),
                  invalid_input);
  const RunConfig deg = load_config("", {"nx=2", "ny=2", "degrees=1 2 2 3"});
  CHECK(deg.degrees.size() == 4);
}

TEST_CASE("csv emission uses fixed headers and 17-digit values") {
  CHECK(csv_line({"a", "b", "c"}) == "a,b,c\n");
  CHECK(csv_line({}) == "\n");

  ConvergenceTable t;
  ConvergenceRow r;
  r.nx = 4;
  r.h = 0.25;
  r.dofs = 144;
  r.l2 = 0.1;
  r.h1 = 0.5;
  r.triple = 1.0;
  t.rows.push_back(r);
  const std::string csv = convergence_csv(t);
  CHECK(csv ==
        "nx,h,dofs,l2_error,h1_error,triple_error,order_l2,order_h1\n"
        "4,0.25,144,0.10000000000000001,0.5,1,0,0\n");

  ConservationReport cons;
  cons.residuals = {0.0, -1.5e-16};
  const std::string ccsv = conservation_csv(cons);
  CHECK(ccsv == "element,residual\n0,0\n1,-1.5e-16\n");

  LemmaReport lem;
  lem.samples = {{0.5, 0.25}};
  CHECK(lemmas_csv(lem) == "sample,r1,r2\n0,0.5,0.25\n");

  TheoryConstants theory;
  theory.beta = -0.4;
  theory.c = 1.0;
  theory.m = 3.0;
  theory.xi1 = 1.5;
  theory.xi2 = 0.1;
  theory.gamma_lb = 0.066226617853252193;
  theory.xi2_positive = true;
  const PenaltyParams params;
  const std::string kcsv = constants_csv(theory, params, 0.25, 2);
  CHECK(kcsv ==
        "beta,c,sigma,lambda,zeta,nu,theta,h,p,m,xi1,xi2,gamma_lb,"
        "xi2_positive\n"
        "-0.40000000000000002,1,1,0,0,0,0,0.25,2,3,1.5,"
        "0.10000000000000001,0.066226617853252193,1\n");

  InfSupRow row;
  row.nx = 2;
  row.ny = 2;
  row.p = 2;
  row.measured.dofs = 36;
  row.measured.gamma_h = 0.25;
  row.measured.m_h = 2.0;
  row.theory.m = 3.0;
  row.theory.xi1 = 1.5;
  row.theory.xi2 = 0.1;
  row.theory.gamma_lb = 0.05;
  const std::string icsv = infsup_csv({row});
  CHECK(icsv ==
        "nx,ny,p,sigma,lambda,zeta,nu,theta,dofs,gamma_h,m_h,m_theory,"
        "xi1,xi2,gamma_lb\n"
        "2,2,2,1,0,0,0,0,36,0.25,2,3,1.5,0.10000000000000001,"
        "0.050000000000000003\n");
}

TEST_CASE("grid export emits the documented structured-points layout") {
  const Mesh m = build_rect_mesh({0, 0, 1, 1}, 1, 1);
  const BrokenSpace sp = BrokenSpace::uniform(m, 1);
  DGFunction one(sp);
  one.coeffs[0] = 1.0; // the constant mode is identically 1
  CHECK(grid_export(one, 2, 2, "u") ==
        "# vtk DataFile Version 3.0\n"
        "u on a structured sample lattice\n"
        "ASCII\n"
        "DATASET STRUCTURED_POINTS\n"
        "DIMENSIONS 2 2 1\n"
        "ORIGIN 0 0 0\n"
        "SPACING 1 1 1\n"
        "POINT_DATA 4\n"
        "SCALARS u double 1\n"
        "LOOKUP_TABLE default\n"
        "1\n1\n1\n1\n");

  // a linear field on a stretched domain: x varies fastest
  const Mesh m2 = build_rect_mesh({0, 0, 2, 1}, 1, 1);
  const BrokenSpace sp2 = BrokenSpace::uniform(m2, 1);
  DGFunction ux(sp2);
  ux.coeffs[0] = 1.0; // x = 1 + xi on this element
  ux.coeffs[1] = 1.0;
  const std::string vtk = grid_export(ux, 5, 3, "field");
  CHECK(vtk.find("DIMENSIONS 5 3 1\n") != std::string::npos);
  CHECK(vtk.find("SPACING 0.5 0.5 1\n") != std::string::npos);
  CHECK(vtk.find("SCALARS field double 1\n") != std::string::npos);
  const std::string tail = "LOOKUP_TABLE default\n";
  const std::string data = vtk.substr(vtk.find(tail) + tail.size());
  CHECK(data == "0\n0.5\n1\n1.5\n2\n"
                "0\n0.5\n1\n1.5\n2\n"
                "0\n0.5\n1\n1.5\n2\n");

  CHECK_THROWS_AS(grid_export(one, 1, 2, "u"), invalid_input);
  CHECK_THROWS_AS(grid_export(one, 2, 1, "u"), invalid_input);
}

TEST_CASE("write_text_file reports unwritable destinations") {
  CHECK_THROWS_AS(write_text_file("/nonexistent-dir/out.txt", "x"),
                  internal_error);
  const std::string path = "test_write_text.txt";
  write_text_file(path, "payload\n");
  std::FILE* f = std::fopen(path.c_str(), "rb");
  REQUIRE(f != nullptr);
  char buf[32] = {0};
  const std::size_t n = std::fread(buf, 1, sizeof buf, f);
  std::fclose(f);
  std::remove(path.c_str());
  CHECK(std::string(buf, n) == "payload\n");
}

} // TEST_SUITE
