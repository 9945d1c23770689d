#include "holobundle.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

#include "experiment.hpp"
#include "holonomy.hpp"
#include "lie.hpp"
#include "serialize.hpp"
#include "surface.hpp"
#include "version.hpp"

namespace {

// The C enum mirrors hb::Status value for value; keep the casts honest.
static_assert(static_cast<int>(hb::Status::Ok) == HB_OK);
static_assert(static_cast<int>(hb::Status::ConfigError) == HB_CONFIG_ERROR);
static_assert(static_cast<int>(hb::Status::NotInCone) == HB_NOT_IN_CONE);
static_assert(static_cast<int>(hb::Status::StarViolated) == HB_STAR_VIOLATED);
static_assert(static_cast<int>(hb::Status::LawToleranceExceeded) ==
              HB_LAW_TOLERANCE_EXCEEDED);
static_assert(static_cast<int>(hb::Status::Internal) == HB_INTERNAL);

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  hb::require(out != nullptr, hb::Status::Internal, "allocation failed");
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename F>
hb_status guarded(F&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const hb::Error& e) {
    g_last_error = e.what();
    return static_cast<hb_status>(e.status());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HB_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return HB_INTERNAL;
  }
}

hb::CMat matrix_from_interleaved(int m, int n, const double* data) {
  hb::require(m >= 1 && n >= 1, hb::Status::InvalidArgument,
              "matrix dimensions must be positive");
  hb::require(data != nullptr, hb::Status::InvalidArgument,
              "matrix data must not be null");
  hb::CMat out(m, n);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < n; ++c) {
      const double* e = data + 2 * (static_cast<size_t>(r) * n + c);
      out(r, c) = hb::cplx(e[0], e[1]);
    }
  return out;
}

void fill_classification(const hb::PlaneClassification& cls,
                         hb_classification* out) {
  out->verdict = static_cast<int>(cls.verdict);
  out->has_mu = cls.mu.has_value();
  out->mu_re = cls.mu ? cls.mu->real() : 0.0;
  out->mu_im = cls.mu ? cls.mu->imag() : 0.0;
  out->has_lambda = cls.lambda.has_value();
  out->lambda = cls.lambda ? *cls.lambda : 0.0;
  out->closure_residual = cls.closure_residual;
}

hb::json parse_or_empty(const char* text, const char* ctx) {
  if (text == nullptr || *text == '\0') return hb::json::object();
  return hb::parse_json_text(text, ctx);
}

}  // namespace

struct hb_chart {
  hb::SurfaceChart chart;
};

extern "C" {

const char* hb_version(void) { return hb::kVersion; }

const char* hb_status_name(hb_status s) {
  return hb::status_name(static_cast<hb::Status>(s));
}

int hb_status_exit_class(hb_status s) {
  return hb::exit_class(static_cast<hb::Status>(s));
}

const char* hb_last_error(void) { return g_last_error.c_str(); }

void hb_string_free(char* s) { std::free(s); }

hb_status hb_classify(int m, int n, const double* x, const double* y,
                      hb_classification* out) {
  return guarded([&]() -> hb_status {
    hb::require(out != nullptr, hb::Status::InvalidArgument,
                "output pointer must not be null");
    const hb::CMat mx = matrix_from_interleaved(m, n, x);
    const hb::CMat my = matrix_from_interleaved(m, n, y);
    fill_classification(hb::classify_plane(mx, my), out);
    return HB_OK;
  });
}

hb_status hb_chart_create(int m, int n, const double* x, const double* y,
                          hb_chart** out) {
  return guarded([&]() -> hb_status {
    hb::require(out != nullptr, hb::Status::InvalidArgument,
                "output pointer must not be null");
    const hb::CMat mx = matrix_from_interleaved(m, n, x);
    const hb::CMat my = matrix_from_interleaved(m, n, y);
    *out = new hb_chart{hb::make_chart(mx, my)};
    return HB_OK;
  });
}

void hb_chart_free(hb_chart* chart) { delete chart; }

hb_status hb_chart_classification(const hb_chart* chart,
                                  hb_classification* out) {
  return guarded([&]() -> hb_status {
    hb::require(chart != nullptr && out != nullptr, hb::Status::InvalidArgument,
                "chart and output pointers must not be null");
    fill_classification(chart->chart.cls, out);
    return HB_OK;
  });
}

hb_status hb_chart_holonomy(const hb_chart* chart, const char* curve_json,
                            const char* integrator_json,
                            const char* quadrature_json, char** report_json) {
  return guarded([&]() -> hb_status {
    hb::require(chart != nullptr && curve_json != nullptr && report_json != nullptr,
                hb::Status::InvalidArgument,
                "chart, curve, and output pointers must not be null");
    const hb::CurveSpec curve =
        hb::curve_from_json(hb::parse_json_text(curve_json, "curve"));
    const hb::IntegratorConfig icfg = hb::integrator_from_json(
        parse_or_empty(integrator_json, "integrator"), curve.samples);
    const hb::QuadratureConfig quad =
        hb::quadrature_from_json(parse_or_empty(quadrature_json, "quadrature"));
    const hb::HolonomyReport rep =
        hb::horizontal_holonomy(chart->chart, curve, icfg, quad);
    *report_json = dup_string(hb::report_to_json(rep).dump(2) + "\n");
    return HB_OK;
  });
}

hb_status hb_chart_area(const hb_chart* chart, const char* curve_json,
                        const char* quadrature_json, double* area) {
  return guarded([&]() -> hb_status {
    hb::require(chart != nullptr && curve_json != nullptr && area != nullptr,
                hb::Status::InvalidArgument,
                "chart, curve, and output pointers must not be null");
    const hb::CurveSpec curve =
        hb::curve_from_json(hb::parse_json_text(curve_json, "curve"));
    const hb::QuadratureConfig quad =
        hb::quadrature_from_json(parse_or_empty(quadrature_json, "quadrature"));
    *area = hb::area_of_region(chart->chart, curve, quad).area;
    return HB_OK;
  });
}

hb_status hb_run(const char* verb, const char* config_json,
                 const hb_run_options* options, char** payload,
                 char** written_path_opt) {
  return guarded([&]() -> hb_status {
    hb::require(verb != nullptr && payload != nullptr,
                hb::Status::InvalidArgument,
                "verb and payload pointers must not be null");
    hb::RunOverrides over;
    if (options != nullptr) {
      if (options->output_path != nullptr) over.output_path = options->output_path;
      if (options->format != nullptr) over.format = options->format;
      if (options->has_tolerance) over.tolerance = options->tolerance;
      if (options->has_seed) over.seed = options->seed;
    }
    const hb::RunOutcome out =
        hb::run_verb(verb, config_json != nullptr ? config_json : "", over);
    *payload = dup_string(out.payload);
    if (written_path_opt != nullptr)
      *written_path_opt =
          out.written_path.empty() ? nullptr : dup_string(out.written_path);
    if (out.status != hb::Status::Ok)
      g_last_error = out.message.empty() ? hb::status_name(out.status) : out.message;
    return static_cast<hb_status>(out.status);
  });
}

}  // extern "C"
