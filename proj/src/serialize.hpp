#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>

#include <json.hpp>

#include "holonomy.hpp"
#include "surface.hpp"

namespace hb {

using json = nlohmann::json;

// Parses text into a JSON value; parse failures become ConfigError.
json parse_json_text(const std::string& text, const char* ctx);

// Rejects keys outside the allowed set so config typos fail loudly instead
// of silently falling back to defaults.
void check_keys(const json& j, const char* ctx,
                std::initializer_list<const char*> allowed);

// Field accessors with uniform ConfigError messages. json_number requires
// the key; the integer forms return the fallback when the key is absent.
double json_number(const json& j, const char* key, const char* ctx);
int json_int(const json& j, const char* key, const char* ctx, int fallback,
             int min_value);
std::uint64_t json_u64(const json& j, const char* key, const char* ctx,
                       std::uint64_t fallback);

// Complex matrix wire format: {"rows", "cols", "data": [[re, im], ...]},
// data row-major with rows*cols entries.
json matrix_to_json(const CMat& m);
CMat matrix_from_json(const json& j, const char* ctx);

json curve_to_json(const CurveSpec& spec);

// {"kind": "circle"|"ellipse"|"polygon", ...}. The shape-defining field
// (radius / radii / vertices) is required; center, orientation, and samples
// default. A polygon traversal order that contradicts an explicit
// orientation key is a config error rather than a silent override.
CurveSpec curve_from_json(const json& j);

QuadratureConfig quadrature_from_json(const json& j);

// Steps default to fallback_steps (callers pass the curve sample count) so
// one knob drives both the sampling density and the integrator.
IntegratorConfig integrator_from_json(const json& j, int fallback_steps);

json classification_to_json(const PlaneClassification& cls);

json report_to_json(const HolonomyReport& rep);

json area_to_json(const AreaResult& area);

// Shortest-round-trip formatting at 12 significant digits via to_chars;
// locale-independent by construction.
std::string format_number(double v);

std::string law_csv_header();
std::string law_csv_row(const LawRow& row);

}  // namespace hb
