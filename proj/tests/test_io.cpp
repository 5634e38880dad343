#include <doctest.h>

#include "qce/io.hpp"
#include "test_helpers.hpp"

using namespace qce;

TEST_CASE("named states resolve") {
  const ParsedState bell = parse_state_spec(json{{"named", "bell"}});
  CHECK_EQ(bell.rho.dims()[0], 2);
  CHECK_EQ(bell.descriptor, "named:bell");
  CHECK_LE(std::abs(bell.rho.matrix()(0, 3) - cplx(0.5, 0.0)), 1e-12);

  CHECK_EQ(parse_state_spec(json{{"named", "ghz:3"}}).rho.dim(), 8);
  CHECK_EQ(parse_state_spec(json{{"named", "two_bell"}}).rho.dim(), 16);
  CHECK_EQ(parse_state_spec(json{{"named", "example_b"}}).rho.dim(), 4);
  CHECK_THROWS_AS(parse_state_spec(json{{"named", "ghz:x"}}), parse_error);
  CHECK_THROWS_AS(parse_state_spec(json{{"named", "bogus"}}), parse_error);

  // dims regroups a named state
  const ParsedState grouped = parse_state_spec(json{{"named", "two_bell"}, {"dims", {4, 4}}});
  CHECK_EQ(grouped.rho.partition().dims, std::vector<std::size_t>{4, 4});
  CHECK_THROWS_AS(parse_state_spec(json{{"named", "bell"}, {"dims", {2, 2, 2}}}),
                  invalid_state_error);
}

TEST_CASE("pure and density specs") {
  const double r = 1.0 / std::sqrt(2.0);
  json pure_doc = {{"dims", {2, 2}},
                   {"pure", {{r, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {r, 0.0}}}};
  const ParsedState pure = parse_state_spec(pure_doc);
  CHECK_EQ(pure.descriptor, "pure[4]");
  CHECK_LE(std::abs(pure.rho.matrix()(0, 3) - cplx(0.5, 0.0)), 1e-12);

  json density_doc;
  density_doc["dims"] = {2};
  density_doc["density"] = json::array();
  for (double v : {0.5, 0.0, 0.0, 0.5}) density_doc["density"].push_back({v, 0.0});
  const ParsedState dens = parse_state_spec(density_doc);
  CHECK_EQ(dens.descriptor, "density[2]");
  CHECK(dens.rho.matrix().approx_equal(ComplexMatrix::identity(2) * cplx(0.5, 0.0), 1e-12));

  CHECK_THROWS_AS(parse_state_spec(json{{"dims", {2}}, {"pure", {{1.0, 0.0}}}}), parse_error);
  CHECK_THROWS_AS(parse_state_spec(json{{"dims", {2}}}), parse_error);
  CHECK_THROWS_AS(parse_state_spec(json{{"pure", json::array()}}), parse_error);
  json both = {{"dims", {2}}, {"named", "bell"}, {"pure", {{1.0, 0.0}, {0.0, 0.0}}}};
  CHECK_THROWS_AS(parse_state_spec(both), parse_error);

  // a density violating the trace invariant is rejected as an invalid state
  json bad_density;
  bad_density["dims"] = {2};
  bad_density["density"] = json::array();
  for (double v : {0.9, 0.0, 0.0, 0.5}) bad_density["density"].push_back({v, 0.0});
  CHECK_THROWS_AS(parse_state_spec(bad_density), invalid_state_error);
}

TEST_CASE("classical specs") {
  json doc;
  doc["dims"] = {2, 2};
  doc["classical"] = {{"probs", {0.5, 0.0, 0.0, 0.5}}};
  const ParsedState c = parse_state_spec(doc);
  CHECK_EQ(c.descriptor, "classical[4]");
  CHECK_LE(std::abs(c.rho.matrix()(0, 0) - cplx(0.5, 0.0)), 1e-12);

  const double r = 1.0 / std::sqrt(2.0);
  json rotated = doc;
  rotated["classical"]["bases"] = json::array();
  rotated["classical"]["bases"].push_back(
      {{r, 0.0}, {r, 0.0}, {r, 0.0}, {-r, 0.0}});  // Hadamard-like
  json ident = json::array();
  for (double v : {1.0, 0.0, 0.0, 1.0}) ident.push_back({v, 0.0});
  rotated["classical"]["bases"].push_back(ident);
  const ParsedState rotated_state = parse_state_spec(rotated);
  CHECK_LE(std::abs(rotated_state.rho.matrix().trace() - cplx(1.0, 0.0)), 1e-12);

  json bad = doc;
  bad["classical"]["probs"] = {0.5, 0.5};
  CHECK_THROWS_AS(parse_state_spec(bad), parse_error);
}

TEST_CASE("coarse-graining specs") {
  json point_doc;
  point_doc["dims"] = {2, 2};
  point_doc["basis_point"] = json::array();
  json ident = json::array();
  for (double v : {1.0, 0.0, 0.0, 1.0}) ident.push_back({v, 0.0});
  point_doc["basis_point"].push_back(ident);
  point_doc["basis_point"].push_back(ident);
  const ParsedCoarseGraining cg = parse_cg_spec(point_doc);
  CHECK(cg.basis_point.has_value());
  CHECK_EQ(cg.cg.projectors.size(), 4);
  CHECK(validate(cg.cg).pass());

  json proj_doc;
  proj_doc["dims"] = {2};
  proj_doc["projectors"] = json::array();
  proj_doc["projectors"].push_back(json::array({{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}));
  proj_doc["projectors"].push_back(json::array({{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}));
  const ParsedCoarseGraining pj = parse_cg_spec(proj_doc);
  CHECK_FALSE(pj.basis_point.has_value());
  CHECK_EQ(pj.cg.projectors.size(), 2);

  json bad = proj_doc;
  bad["projectors"][1] = json::array({{0.5, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}});
  CHECK_THROWS_AS(parse_cg_spec(bad), invalid_state_error);
  CHECK_THROWS_AS(parse_cg_spec(json{{"dims", {2}}}), parse_error);
}

TEST_CASE("report round trip") {
  EntropyReport r;
  r.state_echo = {{"named", "example_b"}};
  r.descriptor = "named:example_b";
  r.partition = {2, 2};
  r.svn = round9(1.0);
  r.sqc = round9(0.4999981234);
  r.lower_bounds = {{"0", 0.0}, {"1", 0.0}};
  r.upper_bound = round9(0.600876037);
  r.bipartite = true;
  r.iqm = round9(0.600876037);
  r.icl = round9(0.399123963);
  r.gap = round9(0.201752074);
  r.classical_verdict = false;
  r.classical_threshold = 1e-6;
  r.seed = 7;
  r.restarts = 32;
  r.best_per_restart = {round9(1.5), round9(1.5000001)};
  r.converged = true;
  r.runtime_seconds = round9(0.0123456789);

  const json j = report_to_json(r);
  const EntropyReport back = report_from_json(j);
  CHECK(back == r);
  CHECK_EQ(report_to_json(back).dump(), j.dump());

  // schema: fixed top-level keys
  for (const char* key :
       {"state", "partition", "svn_bits", "sqc_bits", "bounds", "mutual", "classical",
        "optimizer", "runtime_seconds"})
    CHECK(j.contains(key));
  CHECK_FALSE(j.contains("oracle"));

  // non-bipartite reports omit the mutual section
  EntropyReport r2 = r;
  r2.bipartite = false;
  r2.iqm = r2.icl = r2.gap = 0.0;
  r2.partition = {2, 2, 2};
  const json j2 = report_to_json(r2);
  CHECK_FALSE(j2.contains("mutual"));
  CHECK(report_from_json(j2) == r2);
}

TEST_CASE("csv output") {
  EntropyReport r;
  r.state_echo = {{"named", "bell"}};
  r.descriptor = "named:bell";
  r.partition = {2, 2};
  r.svn = 0.0;
  r.sqc = 1.0;
  r.lower_bounds = {{"0", 1.0}, {"1", 1.0}};
  r.upper_bound = 2.0;
  r.bipartite = true;
  r.iqm = 2.0;
  r.icl = 1.0;
  r.gap = 1.0;
  r.seed = 0;
  r.restarts = 32;
  r.converged = true;
  r.runtime_seconds = 0.25;

  CHECK_EQ(csv_header(),
           "descriptor,partition,svn_bits,sqc_bits,bound_lower_max,bound_upper,iqm,icl,gap,"
           "classical_verdict,classical_threshold,seed,restarts,converged,runtime_seconds");
  const std::string row = csv_row(r);
  CHECK(row.find("named:bell,2x2,0,1,1,2,2,1,1,false,") == 0);
}

TEST_CASE("nine digit rounding is idempotent") {
  for (double v : {0.0, 1.0, 0.6008760372108754, 1e-16, 123456.789123456, -0.333333333333333}) {
    const double once = round9(v);
    CHECK_EQ(round9(once), once);
  }
}
