#include "serialize.hpp"

#include <charconv>
#include <cmath>
#include <complex>
#include <string>

#include "errors.hpp"
#include "lie.hpp"

namespace hb {

namespace {

std::string describe(const char* ctx, const std::string& detail) {
  return std::string(ctx) + ": " + detail;
}

const json& member(const json& j, const char* key, const char* ctx) {
  require(j.contains(key), Status::ConfigError,
          describe(ctx, std::string("missing key \"") + key + "\""));
  return j.at(key);
}

Eigen::Vector2d vec2_value(const json& v, const char* what, const char* ctx) {
  require(v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number(),
          Status::ConfigError,
          describe(ctx, std::string(what) + " must be a [a, b] number pair"));
  const Eigen::Vector2d out(v[0].get<double>(), v[1].get<double>());
  require(std::isfinite(out.x()) && std::isfinite(out.y()), Status::ConfigError,
          describe(ctx, std::string(what) + " must be finite"));
  return out;
}

std::complex<double> complex_entry(const json& v, const char* ctx) {
  require(v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number(),
          Status::ConfigError,
          describe(ctx, "matrix entries must be [re, im] pairs"));
  const std::complex<double> z(v[0].get<double>(), v[1].get<double>());
  require(std::isfinite(z.real()) && std::isfinite(z.imag()),
          Status::ConfigError, describe(ctx, "matrix entries must be finite"));
  return z;
}

}  // namespace

json parse_json_text(const std::string& text, const char* ctx) {
  json j = json::parse(text, nullptr, false);
  require(!j.is_discarded(), Status::ConfigError,
          describe(ctx, "malformed JSON"));
  return j;
}

double json_number(const json& j, const char* key, const char* ctx) {
  const json& v = member(j, key, ctx);
  require(v.is_number(), Status::ConfigError,
          describe(ctx, std::string("\"") + key + "\" must be a number"));
  const double x = v.get<double>();
  require(std::isfinite(x), Status::ConfigError,
          describe(ctx, std::string("\"") + key + "\" must be finite"));
  return x;
}

int json_int(const json& j, const char* key, const char* ctx, int fallback,
             int min_value) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  require(v.is_number_integer(), Status::ConfigError,
          describe(ctx, std::string("\"") + key + "\" must be an integer"));
  const long long x = v.get<long long>();
  require(x >= min_value, Status::ConfigError,
          describe(ctx, std::string("\"") + key + "\" must be >= " +
                            std::to_string(min_value)));
  return static_cast<int>(x);
}

std::uint64_t json_u64(const json& j, const char* key, const char* ctx,
                       std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  require(v.is_number_integer() && (v.is_number_unsigned() || v.get<long long>() >= 0),
          Status::ConfigError,
          describe(ctx, std::string("\"") + key + "\" must be a non-negative integer"));
  return v.get<std::uint64_t>();
}

void check_keys(const json& j, const char* ctx,
                std::initializer_list<const char*> allowed) {
  require(j.is_object(), Status::ConfigError,
          describe(ctx, "expected a JSON object"));
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    require(known, Status::ConfigError,
            describe(ctx, "unknown key \"" + item.key() + "\""));
  }
}

json matrix_to_json(const CMat& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      data.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

CMat matrix_from_json(const json& j, const char* ctx) {
  check_keys(j, ctx, {"rows", "cols", "data"});
  const int rows = json_int(j, "rows", ctx, -1, 1);
  const int cols = json_int(j, "cols", ctx, -1, 1);
  require(rows >= 1 && cols >= 1, Status::ConfigError,
          describe(ctx, "\"rows\" and \"cols\" are required"));
  const json& data = member(j, "data", ctx);
  require(data.is_array() &&
              data.size() == static_cast<size_t>(rows) * static_cast<size_t>(cols),
          Status::ConfigError,
          describe(ctx, "\"data\" must hold rows*cols entries, row-major"));
  CMat m(rows, cols);
  size_t idx = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = complex_entry(data[idx++], ctx);
  return m;
}

json curve_to_json(const CurveSpec& spec) {
  json j;
  j["orientation"] = spec.orientation == Orientation::Ccw ? "ccw" : "cw";
  j["samples"] = spec.samples;
  switch (spec.kind) {
    case CurveKind::Circle:
      j["kind"] = "circle";
      j["center"] = {spec.center.x(), spec.center.y()};
      j["radius"] = spec.radius;
      break;
    case CurveKind::Ellipse:
      j["kind"] = "ellipse";
      j["center"] = {spec.center.x(), spec.center.y()};
      j["radii"] = {spec.radii.x(), spec.radii.y()};
      break;
    case CurveKind::Polygon: {
      j["kind"] = "polygon";
      json verts = json::array();
      for (const auto& v : spec.vertices) verts.push_back({v.x(), v.y()});
      j["vertices"] = std::move(verts);
      break;
    }
  }
  return j;
}

CurveSpec curve_from_json(const json& j) {
  static const char* ctx = "curve";
  require(j.is_object(), Status::ConfigError,
          describe(ctx, "expected a JSON object"));
  const json& kind = member(j, "kind", ctx);
  require(kind.is_string(), Status::ConfigError,
          describe(ctx, "\"kind\" must be a string"));
  const std::string name = kind.get<std::string>();

  CurveSpec spec;
  const bool has_orientation = j.contains("orientation");
  if (has_orientation) {
    const json& o = j.at("orientation");
    require(o.is_string() && (o == "ccw" || o == "cw"), Status::ConfigError,
            describe(ctx, "\"orientation\" must be \"ccw\" or \"cw\""));
    spec.orientation = o == "ccw" ? Orientation::Ccw : Orientation::Cw;
  }
  spec.samples = json_int(j, "samples", ctx, spec.samples, 1);

  if (name == "circle") {
    check_keys(j, ctx, {"kind", "center", "radius", "orientation", "samples"});
    spec.kind = CurveKind::Circle;
    if (j.contains("center")) spec.center = vec2_value(j.at("center"), "\"center\"", ctx);
    spec.radius = json_number(j, "radius", ctx);
  } else if (name == "ellipse") {
    check_keys(j, ctx, {"kind", "center", "radii", "orientation", "samples"});
    spec.kind = CurveKind::Ellipse;
    if (j.contains("center")) spec.center = vec2_value(j.at("center"), "\"center\"", ctx);
    spec.radii = vec2_value(member(j, "radii", ctx), "\"radii\"", ctx);
  } else if (name == "polygon") {
    check_keys(j, ctx, {"kind", "vertices", "orientation", "samples"});
    spec.kind = CurveKind::Polygon;
    const json& verts = member(j, "vertices", ctx);
    require(verts.is_array(), Status::ConfigError,
            describe(ctx, "\"vertices\" must be an array of [a, b] pairs"));
    for (const auto& v : verts)
      spec.vertices.push_back(vec2_value(v, "vertex", ctx));
    if (spec.vertices.size() >= 3) {
      const int wind = curve_winding_sign(spec);
      if (has_orientation) {
        const int stated = spec.orientation == Orientation::Ccw ? 1 : -1;
        require(wind == stated, Status::ConfigError,
                describe(ctx, std::string("vertex order winds ") +
                                  (wind > 0 ? "ccw" : "cw") +
                                  " but \"orientation\" says otherwise"));
      }
      spec.orientation = wind > 0 ? Orientation::Ccw : Orientation::Cw;
    }
  } else {
    fail(Status::ConfigError,
         describe(ctx, "\"kind\" must be circle, ellipse, or polygon"));
  }
  return spec;
}

QuadratureConfig quadrature_from_json(const json& j) {
  static const char* ctx = "quadrature";
  check_keys(j, ctx, {"radial", "angular", "max_refinements", "tol"});
  QuadratureConfig quad;
  quad.radial = json_int(j, "radial", ctx, quad.radial, 2);
  quad.angular = json_int(j, "angular", ctx, quad.angular, 4);
  quad.max_refinements = json_int(j, "max_refinements", ctx, quad.max_refinements, 0);
  if (j.contains("tol")) {
    quad.tol = json_number(j, "tol", ctx);
    require(quad.tol > 0.0, Status::ConfigError,
            describe(ctx, "\"tol\" must be positive"));
  }
  return quad;
}

IntegratorConfig integrator_from_json(const json& j, int fallback_steps) {
  static const char* ctx = "integrator";
  check_keys(j, ctx, {"steps", "order", "renormalize_every"});
  IntegratorConfig cfg;
  cfg.steps = json_int(j, "steps", ctx, fallback_steps, 8);
  cfg.order = json_int(j, "order", ctx, cfg.order, 2);
  require(cfg.order == 2 || cfg.order == 4, Status::ConfigError,
          describe(ctx, "\"order\" must be 2 or 4"));
  cfg.renormalize_every = json_int(j, "renormalize_every", ctx, cfg.renormalize_every, 1);
  return cfg;
}

json classification_to_json(const PlaneClassification& cls) {
  json j;
  j["verdict"] = verdict_name(cls.verdict);
  j["mu"] = cls.mu ? json::array({cls.mu->real(), cls.mu->imag()}) : json();
  j["lambda"] = cls.lambda ? json(*cls.lambda) : json();
  j["closure_residual"] = cls.closure_residual;
  return j;
}

json report_to_json(const HolonomyReport& rep) {
  return json{{"theta", rep.theta},
              {"area", rep.area},
              {"predicted", rep.predicted},
              {"law_residual", rep.law_residual},
              {"offdiag_residual", rep.offdiag_residual},
              {"scalar_residual", rep.scalar_residual},
              {"V_n", matrix_to_json(rep.v_n)},
              {"V_m", matrix_to_json(rep.v_m)}};
}

json area_to_json(const AreaResult& area) {
  return json{{"area", area.area},
              {"radial", area.radial_used},
              {"angular", area.angular_used},
              {"refinements", area.refinements},
              {"last_change", area.last_change}};
}

std::string format_number(double v) {
  char buf[48];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::string law_csv_header() {
  return "curve_id,radius,area,theta,predicted,law_residual,offdiag_residual,"
         "scalar_residual";
}

std::string law_csv_row(const LawRow& row) {
  std::string out = row.curve_id;
  for (const double v : {row.radius, row.area, row.theta, row.predicted,
                         row.law_residual, row.offdiag_residual,
                         row.scalar_residual}) {
    out += ',';
    out += format_number(v);
  }
  return out;
}

}  // namespace hb
