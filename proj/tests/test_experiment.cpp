#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "experiment.hpp"
#include "lie.hpp"
#include "rng.hpp"
#include "selftest.hpp"
#include "serialize.hpp"
#include "version.hpp"

using namespace hb;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json result_of(const RunOutcome& out) {
  return parse_json_text(out.payload, "payload");
}

const char* kGoldenConfig = R"({
  "sig": {"n": 1, "m": 1},
  "X": {"rows": 1, "cols": 1, "data": [[1.0, 0.0]]},
  "Y": "iX",
  "curve": {"kind": "circle", "radius": 0.7},
  "integrator": {"steps": 1024, "order": 4}
})";

}  // namespace

TEST_CASE("matrix json survives a round trip") {
  CounterRng rng(42);
  const CMat m = random_gaussian(rng, 3, 2);
  const CMat back = matrix_from_json(matrix_to_json(m), "test");
  CHECK(frobenius(back - m) == 0.0);

  CHECK_THROWS_AS(matrix_from_json(json::parse(R"({"rows":1,"cols":2,"data":[[1,0]]})"), "t"),
                  Error);
  CHECK_THROWS_AS(matrix_from_json(json::parse(R"({"rows":1,"cols":1,"data":[[1]]})"), "t"),
                  Error);
  CHECK_THROWS_AS(matrix_from_json(json::parse(R"({"rows":1,"cols":1,"data":[[1,0]],"x":0})"), "t"),
                  Error);
  CHECK_THROWS_AS(matrix_from_json(json::parse(R"({"cols":1,"data":[[1,0]]})"), "t"),
                  Error);
}

TEST_CASE("curve json parsing applies defaults and catches contradictions") {
  const CurveSpec circle =
      curve_from_json(json::parse(R"({"kind":"circle","radius":0.3})"));
  CHECK(circle.kind == CurveKind::Circle);
  CHECK(circle.center == Eigen::Vector2d(0, 0));
  CHECK(circle.orientation == Orientation::Ccw);
  CHECK(circle.samples == 512);
  CHECK(circle.radius == 0.3);

  const CurveSpec ell = curve_from_json(
      json::parse(R"({"kind":"ellipse","radii":[0.4,0.2],"orientation":"cw","samples":64})"));
  CHECK(ell.kind == CurveKind::Ellipse);
  CHECK(ell.orientation == Orientation::Cw);
  CHECK(ell.samples == 64);

  // Clockwise vertex order: inferred orientation when unstated, an error
  // when the stated orientation disagrees.
  const char* cw_square =
      R"({"kind":"polygon","vertices":[[1,-1],[-1,-1],[-1,1],[1,1]]})";
  CHECK(curve_from_json(json::parse(cw_square)).orientation == Orientation::Cw);
  json stated = json::parse(cw_square);
  stated["orientation"] = "cw";
  CHECK(curve_from_json(stated).orientation == Orientation::Cw);
  stated["orientation"] = "ccw";
  CHECK_THROWS_AS(curve_from_json(stated), Error);

  CHECK_THROWS_AS(curve_from_json(json::parse(R"({"kind":"polygon","vertices":[[1,0]],"radius":1})")),
                  Error);
  CHECK_THROWS_AS(curve_from_json(json::parse(R"({"kind":"square"})")), Error);
  CHECK_THROWS_AS(curve_from_json(json::parse(R"({"kind":"circle","radius":0.3,"samples":0})")),
                  Error);
  CHECK_THROWS_AS(curve_from_json(json::parse(R"({"kind":"circle"})")), Error);
}

TEST_CASE("quadrature and integrator configs validate fields") {
  const QuadratureConfig dq = quadrature_from_json(json::object());
  CHECK(dq.radial == 64);
  CHECK(dq.angular == 128);
  CHECK(dq.max_refinements == 6);
  CHECK(dq.tol == 1e-8);
  CHECK(quadrature_from_json(json::parse(R"({"radial":16,"tol":1e-6})")).radial == 16);
  CHECK_THROWS_AS(quadrature_from_json(json::parse(R"({"radial":1})")), Error);
  CHECK_THROWS_AS(quadrature_from_json(json::parse(R"({"radials":16})")), Error);

  CHECK(integrator_from_json(json::object(), 777).steps == 777);
  CHECK(integrator_from_json(json::parse(R"({"steps":128})"), 777).steps == 128);
  CHECK_THROWS_AS(integrator_from_json(json::parse(R"({"order":3})"), 512), Error);
  CHECK_THROWS_AS(integrator_from_json(json::parse(R"({"steps":4})"), 512), Error);
}

TEST_CASE("classification and report serialization expose the documented keys") {
  CounterRng rng(9);
  const PlanePair pair = make_complex_pair(rng, {2, 2}, 1.5);
  const json cj = classification_to_json(classify_plane(pair.x, pair.y));
  CHECK(cj.at("verdict") == "complex");
  CHECK(cj.at("mu").is_array());
  CHECK(cj.at("lambda").get<double>() == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(cj.contains("closure_residual"));

  HolonomyReport rep;
  rep.v_n = CMat::Identity(1, 1);
  rep.v_m = CMat::Identity(1, 1);
  const json rj = report_to_json(rep);
  CHECK(rj.size() == 8);
  for (const char* key : {"theta", "area", "predicted", "law_residual",
                          "offdiag_residual", "scalar_residual", "V_n", "V_m"})
    CHECK(rj.contains(key));
}

TEST_CASE("csv rows carry twelve significant digits and no locale surprises") {
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(law_csv_header() ==
        "curve_id,radius,area,theta,predicted,law_residual,offdiag_residual,"
        "scalar_residual");
  LawRow row;
  row.curve_id = "circle-0";
  row.radius = 0.5;
  row.theta = -2.0 / 3.0;
  CHECK(law_csv_row(row) == "circle-0,0.5,0,-0.666666666667,0,0,0,0");
}

TEST_CASE("selftest suites pass, rerun identically, and allow zero trials") {
  const auto results = run_selftest(5, 25);
  REQUIRE(results.size() == 4);
  CHECK(selftest_passed(results));
  const auto again = run_selftest(5, 25);
  for (size_t i = 0; i < results.size(); ++i) {
    CHECK(results[i].worst == again[i].worst);
    CHECK(results[i].trials == again[i].trials);
  }
  const auto other = run_selftest(6, 25);
  bool any_differs = false;
  for (size_t i = 0; i < results.size(); ++i)
    any_differs = any_differs || results[i].worst != other[i].worst;
  CHECK(any_differs);

  const auto empty = run_selftest(5, 0);
  CHECK(selftest_passed(empty));
  CHECK(selftest_text(empty, 0).find("vacuous") != std::string::npos);
  CHECK(selftest_to_json(empty, 0).at("vacuous") == true);
  CHECK(selftest_text(results, 25).find("[pass]") != std::string::npos);
}

TEST_CASE("config hash ignores formatting but not values") {
  const json a = parse_json_text(R"({"b": 1, "a": [1, 2]})", "t");
  const json b = parse_json_text("{\"a\":[1,2],  \"b\":1}", "t");
  CHECK(config_hash(a) == config_hash(b));
  const json c = parse_json_text(R"({"b": 2, "a": [1, 2]})", "t");
  CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("classify verb reports the verdict with a manifest") {
  const std::string cfg = R"({
    "sig": {"n": 1, "m": 2},
    "X": {"random_cone": {"lambda": 2.0}},
    "Y": "iX",
    "seed": 7
  })";
  const RunOutcome out = run_verb("classify", cfg);
  CHECK(out.exit_code == 0);
  const json j = result_of(out);
  CHECK(j.at("result").at("verdict") == "complex");
  CHECK(j.at("manifest").at("seed") == 7);
  CHECK(j.at("manifest").at("version") == std::string(kVersion));
  CHECK(j.at("manifest").at("config_hash").get<std::string>().size() == 16);

  // Identical config, identical draw; a different seed moves the cone draw
  // but not the verdict.
  const RunOutcome again = run_verb("classify", cfg);
  CHECK(result_of(again).at("result") == j.at("result"));
  RunOverrides over;
  over.seed = 8;
  const json moved = result_of(run_verb("classify", cfg, over));
  CHECK(moved.at("result").at("verdict") == "complex");
  CHECK(moved.at("manifest").at("seed") == 8);
}

TEST_CASE("holonomy verb checks the law and honors tolerance overrides") {
  const RunOutcome out = run_verb("holonomy", kGoldenConfig);
  CHECK(out.exit_code == 0);
  const json j = result_of(out);
  CHECK(j.at("passed") == true);
  CHECK(j.at("result").at("law_residual").get<double>() < 1e-6);
  const double area = j.at("result").at("area").get<double>();
  CHECK(area == doctest::Approx(M_PI / 2 * (std::cosh(1.4) - 1)).epsilon(1e-8));

  RunOverrides strict;
  strict.tolerance = 1e-20;
  const RunOutcome failed = run_verb("holonomy", kGoldenConfig, strict);
  CHECK(failed.status == Status::LawToleranceExceeded);
  CHECK(failed.exit_code == 3);
  CHECK(!failed.message.empty());
  CHECK(result_of(failed).at("passed") == false);
  CHECK(result_of(failed).contains("result"));
}

TEST_CASE("sweep verb emits ordered rows in both formats") {
  const std::string cfg = R"({
    "sig": {"n": 2, "m": 2},
    "X": {"random_cone": {"lambda": 1.0}},
    "Y": "iX",
    "curve": [
      {"kind": "circle", "radius": 0.2},
      {"kind": "circle", "radius": 0.4},
      {"kind": "circle", "radius": 0.6}
    ],
    "integrator": {"steps": 512},
    "seed": 11
  })";
  const RunOutcome csv = run_verb("sweep", cfg);
  CHECK(csv.exit_code == 0);
  CHECK(csv.payload.rfind(law_csv_header() + "\n", 0) == 0);
  CHECK(csv.payload.find("circle-0,") != std::string::npos);
  CHECK(csv.payload.find("circle-2,") != std::string::npos);
  const RunOutcome csv2 = run_verb("sweep", cfg);
  CHECK(csv.payload == csv2.payload);

  RunOverrides as_json;
  as_json.format = "json";
  const json j = result_of(run_verb("sweep", cfg, as_json));
  REQUIRE(j.at("results").size() == 3);
  CHECK(j.at("results")[0].at("curve_id") == "circle-0");
  CHECK(j.at("passed") == true);
  double prev = 0.0;
  for (const json& row : j.at("results")) {
    CHECK(row.at("law_residual").get<double>() < 1e-6);
    CHECK(row.at("status") == "Ok");
    CHECK(row.at("area").get<double>() > prev);
    prev = row.at("area").get<double>();
  }
}

TEST_CASE("sweep rows keep going after a failing curve") {
  const std::string cfg = R"({
    "sig": {"n": 1, "m": 1},
    "X": {"rows": 1, "cols": 1, "data": [[1.0, 0.0]]},
    "Y": "iX",
    "curve": [
      {"kind": "circle", "radius": 0.3},
      {"kind": "polygon", "vertices": [[1, 1], [-1, 1]]},
      {"kind": "circle", "radius": 0.5}
    ],
    "integrator": {"steps": 256}
  })";
  const RunOutcome out = run_verb("sweep", cfg);
  CHECK(out.exit_code == 3);
  CHECK(out.payload.find("# polygon-1: NonSimpleCurve") != std::string::npos);
  CHECK(out.payload.find("circle-2,") != std::string::npos);

  RunOverrides as_json;
  as_json.format = "json";
  const json j = result_of(run_verb("sweep", cfg, as_json));
  CHECK(j.at("results")[1].at("status") == "NonSimpleCurve");
  CHECK(j.at("results")[2].at("status") == "Ok");
  CHECK(j.at("passed") == false);
}

TEST_CASE("opposite orientations negate the reported phase") {
  const char* base = R"({
    "sig": {"n": 1, "m": 2},
    "X": {"random_cone": {"lambda": 1.0}},
    "Y": "iX",
    "curve": [
      {"kind": "circle", "radius": 0.5, "orientation": "ccw"},
      {"kind": "circle", "radius": 0.5, "orientation": "cw"}
    ],
    "integrator": {"steps": 512},
    "seed": 3
  })";
  RunOverrides as_json;
  as_json.format = "json";
  const json j = result_of(run_verb("sweep", base, as_json));
  const double fwd = j.at("results")[0].at("theta").get<double>();
  const double bwd = j.at("results")[1].at("theta").get<double>();
  CHECK(fwd == doctest::Approx(-bwd).epsilon(1e-9));
  CHECK(fwd > 0.0);
}

TEST_CASE("area verb returns the enclosed Riemannian area") {
  const std::string cfg = R"({
    "X": {"rows": 1, "cols": 1, "data": [[1.0, 0.0]]},
    "Y": "iX",
    "curve": {"kind": "circle", "radius": 0.4}
  })";
  const RunOutcome out = run_verb("area", cfg);
  CHECK(out.exit_code == 0);
  const json j = result_of(out);
  CHECK(j.at("result").at("area").get<double>() ==
        doctest::Approx(M_PI / 2 * (std::cosh(0.8) - 1)).epsilon(1e-8));
  CHECK(j.at("result").contains("refinements"));
}

TEST_CASE("fiber-check verb validates the closed form") {
  RunOverrides over;
  over.seed = 21;
  const RunOutcome out =
      run_verb("fiber-check", R"({"sig": {"n": 2, "m": 3}, "trials": 5})", over);
  CHECK(out.exit_code == 0);
  const json j = result_of(out);
  CHECK(j.at("result").at("max_residual").get<double>() <= 1e-10);
  CHECK(j.at("result").at("max_composition_residual").get<double>() <= 1e-10);
  CHECK(j.at("result").at("passed") == true);
  CHECK(j.at("result").at("trials") == 5);
}

TEST_CASE("selftest verb emits text by default and json on request") {
  const RunOutcome text = run_verb("selftest", R"({"trials": 10, "seed": 4})");
  CHECK(text.exit_code == 0);
  CHECK(text.payload.find("all suites passed") != std::string::npos);

  RunOverrides as_json;
  as_json.format = "json";
  const RunOutcome out = run_verb("selftest", R"({"trials": 10, "seed": 4})", as_json);
  const json j = result_of(out);
  CHECK(j.at("result").at("passed") == true);
  CHECK(j.at("result").at("suites").size() == 4);

  const RunOutcome vac = run_verb("selftest", R"({"trials": 0})");
  CHECK(vac.exit_code == 0);
  CHECK(vac.payload.find("vacuous") != std::string::npos);
}

TEST_CASE("failures come back as error envelopes with the right class") {
  const RunOutcome unk = run_verb("transmogrify", "{}");
  CHECK(unk.status == Status::ConfigError);
  CHECK(unk.exit_code == 1);
  CHECK(result_of(unk).at("error").at("status") == "ConfigError");

  const RunOutcome missing = run_verb("classify", R"({"Y": "iX"})");
  CHECK(missing.exit_code == 1);

  const RunOutcome star = run_verb("classify", R"({
    "X": {"rows": 2, "cols": 2, "data": [[1,0],[0,0],[0,0],[1,0]]},
    "Y": {"rows": 2, "cols": 2, "data": [[0,0],[1,0],[0,0],[0,0]]}
  })");
  CHECK(star.status == Status::StarViolated);
  CHECK(star.exit_code == 2);
  CHECK(result_of(star).at("error").at("exit_class") == 2);

  const RunOutcome malformed = run_verb("classify", "{oops");
  CHECK(malformed.exit_code == 1);
}

TEST_CASE("output files receive exactly the payload, and only on success") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = dir / "hb_test_sweep_out.csv";
  std::filesystem::remove(path);

  const std::string cfg = std::string(R"({
    "sig": {"n": 1, "m": 1},
    "X": {"rows": 1, "cols": 1, "data": [[1.0, 0.0]]},
    "Y": "iX",
    "curve": [{"kind": "circle", "radius": 0.3}],
    "integrator": {"steps": 256},
    "output": {"path": ")") + path.string() + R"("}
  })";
  const RunOutcome out = run_verb("sweep", cfg);
  CHECK(out.exit_code == 0);
  CHECK(out.written_path == path.string());
  CHECK(slurp(path) == out.payload);
  std::filesystem::remove(path);

  // A config error never leaves a file behind.
  const auto never = dir / "hb_test_never.csv";
  std::filesystem::remove(never);
  RunOverrides over;
  over.output_path = never.string();
  const RunOutcome bad = run_verb("sweep", R"({
    "X": {"rows": 1, "cols": 1, "data": [[1.0, 0.0]]},
    "Y": "iX",
    "curve": []
  })",
                                  over);
  CHECK(bad.exit_code == 1);
  CHECK(bad.written_path.empty());
  CHECK(!std::filesystem::exists(never));
}

TEST_CASE("random cone specs draw independent X and Y streams") {
  const std::string cfg = R"({
    "sig": {"n": 1, "m": 3},
    "X": {"random_cone": {"lambda": 1.0, "seed": 13}},
    "Y": {"random_cone": {"lambda": 1.0, "seed": 13}},
    "seed": 13
  })";
  // Same per-matrix seed, different streams: X != Y, so the plane is
  // genuinely 2-dimensional and classification proceeds.
  const RunOutcome out = run_verb("classify", cfg);
  CHECK(out.exit_code == 0);
  const std::string verdict =
      result_of(out).at("result").at("verdict").get<std::string>();
  CHECK((verdict == "not_totally_geodesic" || verdict == "flat" ||
         verdict == "complex"));
}
