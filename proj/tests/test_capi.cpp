// Exercises the shared library through the C boundary only: no core
// headers, matrices as interleaved doubles, reports as JSON text.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include <holobundle.h>
#include <json.hpp>

using nlohmann::json;

namespace {

std::string take(char* s) {
  std::string out = s != nullptr ? s : "";
  hb_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version and status metadata") {
  CHECK(std::string(hb_version()) == "0.1.0");
  CHECK(std::string(hb_status_name(HB_OK)) == "Ok");
  CHECK(std::string(hb_status_name(HB_STAR_VIOLATED)) == "StarViolated");
  CHECK(hb_status_exit_class(HB_OK) == 0);
  CHECK(hb_status_exit_class(HB_CONFIG_ERROR) == 1);
  CHECK(hb_status_exit_class(HB_NOT_IN_CONE) == 2);
  CHECK(hb_status_exit_class(HB_LAW_TOLERANCE_EXCEEDED) == 3);
}

TEST_CASE("classification across the boundary") {
  const double x[] = {1.0, 0.0};  // X = (1)
  const double y[] = {0.0, 1.0};  // Y = (i)
  hb_classification cls{};
  REQUIRE(hb_classify(1, 1, x, y, &cls) == HB_OK);
  CHECK(cls.verdict == HB_VERDICT_COMPLEX);
  CHECK(cls.has_mu == 1);
  CHECK(cls.mu_re == doctest::Approx(0.0));
  CHECK(cls.mu_im == doctest::Approx(1.0));
  CHECK(cls.has_lambda == 1);
  CHECK(cls.lambda == doctest::Approx(1.0));

  // Flat pair in signature (1, 2): orthonormal columns e1, e2.
  const double xf[] = {1.0, 0.0, 0.0, 0.0};
  const double yf[] = {0.0, 0.0, 1.0, 0.0};
  REQUIRE(hb_classify(2, 1, xf, yf, &cls) == HB_OK);
  CHECK(cls.verdict == HB_VERDICT_FLAT);

  CHECK(hb_classify(1, 1, x, y, nullptr) == HB_INVALID_ARGUMENT);
  CHECK(std::strlen(hb_last_error()) > 0);
  CHECK(hb_classify(1, 1, nullptr, y, &cls) == HB_INVALID_ARGUMENT);
}

TEST_CASE("precondition failures surface as status codes") {
  // Non-scalar X*Y: X = I2, Y = e12.
  const double x[] = {1, 0, 0, 0, 0, 0, 1, 0};
  const double y[] = {0, 0, 1, 0, 0, 0, 0, 0};
  hb_classification cls{};
  CHECK(hb_classify(2, 2, x, y, &cls) == HB_STAR_VIOLATED);
  hb_chart* chart = nullptr;
  CHECK(hb_chart_create(2, 2, x, y, &chart) == HB_STAR_VIOLATED);
  CHECK(chart == nullptr);
  CHECK(std::string(hb_last_error()).find("scalar") != std::string::npos);
}

TEST_CASE("chart lifecycle, holonomy report, and area") {
  const double x[] = {1.0, 0.0};
  const double y[] = {0.0, 1.0};
  hb_chart* chart = nullptr;
  REQUIRE(hb_chart_create(1, 1, x, y, &chart) == HB_OK);
  REQUIRE(chart != nullptr);

  hb_classification cls{};
  REQUIRE(hb_chart_classification(chart, &cls) == HB_OK);
  CHECK(cls.verdict == HB_VERDICT_COMPLEX);

  char* report = nullptr;
  REQUIRE(hb_chart_holonomy(chart,
                            R"({"kind":"circle","radius":0.7,"samples":1024})",
                            nullptr, nullptr, &report) == HB_OK);
  const json rep = json::parse(take(report));
  CHECK(rep.at("law_residual").get<double>() < 1e-6);
  const double expected_area = M_PI / 2 * (std::cosh(1.4) - 1);
  CHECK(rep.at("area").get<double>() ==
        doctest::Approx(expected_area).epsilon(1e-8));
  CHECK(rep.at("theta").get<double>() ==
        doctest::Approx(2 * expected_area - 2 * M_PI).epsilon(1e-6));

  double area = 0.0;
  REQUIRE(hb_chart_area(chart, R"({"kind":"circle","radius":0.7})", nullptr,
                        &area) == HB_OK);
  CHECK(area == doctest::Approx(expected_area).epsilon(1e-8));

  char* none = nullptr;
  CHECK(hb_chart_holonomy(chart, R"({"kind":"circle")", nullptr, nullptr,
                          &none) == HB_CONFIG_ERROR);
  CHECK(none == nullptr);
  CHECK(hb_chart_holonomy(chart,
                          R"({"kind":"polygon","vertices":[[1,1],[-1,1]]})",
                          nullptr, nullptr, &none) == HB_NON_SIMPLE_CURVE);

  hb_chart_free(chart);
  hb_chart_free(nullptr);  // free of null is a no-op
}

TEST_CASE("config runner behind the C boundary") {
  hb_run_options opts{};
  opts.has_seed = 1;
  opts.seed = 4;
  opts.format = "json";
  char* payload = nullptr;
  char* written = nullptr;
  REQUIRE(hb_run("selftest", R"({"trials": 10})", &opts, &payload, &written) ==
          HB_OK);
  CHECK(written == nullptr);
  const json j = json::parse(take(payload));
  CHECK(j.at("result").at("passed") == true);
  CHECK(j.at("manifest").at("seed") == 4);

  payload = nullptr;
  CHECK(hb_run("transmogrify", "{}", nullptr, &payload, nullptr) ==
        HB_CONFIG_ERROR);
  const std::string envelope = take(payload);
  CHECK(envelope.find("unknown verb") != std::string::npos);
  CHECK(std::string(hb_last_error()).find("transmogrify") != std::string::npos);

  CHECK(hb_run(nullptr, "{}", nullptr, &payload, nullptr) ==
        HB_INVALID_ARGUMENT);
}
