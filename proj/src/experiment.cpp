#include "experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <fstream>
#include <thread>
#include <vector>

#include "holonomy.hpp"
#include "lie.hpp"
#include "rng.hpp"
#include "selftest.hpp"
#include "version.hpp"

namespace hb {

namespace {

constexpr double kDefaultLawTol = 1e-6;
constexpr double kDefaultFiberTol = 1e-10;

struct Context {
  json cfg;
  RunOverrides over;
  std::uint64_t seed = 0;
  std::chrono::steady_clock::time_point start;
};

std::string hex16(std::uint64_t v) {
  char buf[16];
  for (int i = 15; i >= 0; --i) {
    buf[i] = "0123456789abcdef"[v & 0xf];
    v >>= 4;
  }
  return std::string(buf, 16);
}

json manifest_json(const Context& ctx) {
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start)
          .count();
  return json{{"config_hash", hex16(config_hash(ctx.cfg))},
              {"version", kVersion},
              {"seed", ctx.seed},
              {"wall_clock_seconds", wall}};
}

struct OutputPlan {
  std::string path;
  std::string format;
};

OutputPlan resolve_output(const Context& ctx, const char* default_format,
                          std::initializer_list<const char*> allowed) {
  OutputPlan plan{"", default_format};
  if (ctx.cfg.contains("output")) {
    const json& out = ctx.cfg.at("output");
    check_keys(out, "output", {"path", "format"});
    if (out.contains("path")) {
      require(out.at("path").is_string(), Status::ConfigError,
              "output: \"path\" must be a string");
      plan.path = out.at("path").get<std::string>();
    }
    if (out.contains("format")) {
      require(out.at("format").is_string(), Status::ConfigError,
              "output: \"format\" must be a string");
      plan.format = out.at("format").get<std::string>();
    }
  }
  if (ctx.over.output_path) plan.path = *ctx.over.output_path;
  if (ctx.over.format) plan.format = *ctx.over.format;
  bool known = false;
  for (const char* f : allowed) known = known || plan.format == f;
  require(known, Status::ConfigError,
          "output: format \"" + plan.format + "\" is not supported by this verb");
  return plan;
}

// Writes the payload to the planned file, if any. Error envelopes never get
// here, so a failed run leaves no file behind.
RunOutcome deliver(Status status, std::string payload, const OutputPlan& plan,
                   std::string message = {}) {
  RunOutcome out;
  out.status = status;
  out.exit_code = exit_class(status);
  out.payload = std::move(payload);
  out.message = std::move(message);
  if (!plan.path.empty()) {
    std::ofstream f(plan.path, std::ios::binary | std::ios::trunc);
    f << out.payload;
    f.flush();
    require(f.good(), Status::ConfigError,
            "output: cannot write \"" + plan.path + "\"");
    out.written_path = plan.path;
  }
  return out;
}

RunOutcome error_outcome(Status s, const std::string& message) {
  const json env{{"error",
                  {{"status", status_name(s)},
                   {"exit_class", exit_class(s)},
                   {"message", message}}}};
  RunOutcome out;
  out.status = s;
  out.exit_code = exit_class(s);
  out.payload = env.dump(2) + "\n";
  out.message = message;
  return out;
}

std::optional<Signature> sig_from(const json& cfg) {
  if (!cfg.contains("sig")) return std::nullopt;
  const json& s = cfg.at("sig");
  check_keys(s, "sig", {"n", "m"});
  require(s.contains("n") && s.contains("m"), Status::ConfigError,
          "sig: both \"n\" and \"m\" are required");
  return make_signature(json_int(s, "n", "sig", 1, 1),
                        json_int(s, "m", "sig", 1, 1));
}

// Streams 1 and 2 are reserved for the X and Y cone draws so an explicit
// per-matrix seed changes one factor without disturbing the other.
CMat matrix_spec(const Context& ctx, const char* which, std::uint64_t stream,
                 const std::optional<Signature>& sig, const CMat* x_prior) {
  const json& spec = ctx.cfg.at(which);
  if (spec.is_string()) {
    require(spec.get<std::string>() == "iX" && x_prior != nullptr,
            Status::ConfigError,
            std::string(which) + ": the only string spec is \"iX\", and only for Y");
    return cplx(0.0, 1.0) * (*x_prior);
  }
  require(spec.is_object(), Status::ConfigError,
          std::string(which) +
              ": expected a matrix object, \"iX\", or {\"random_cone\": ...}");
  if (spec.contains("random_cone")) {
    check_keys(spec, which, {"random_cone"});
    const json& rc = spec.at("random_cone");
    check_keys(rc, "random_cone", {"lambda", "seed"});
    const double lambda = json_number(rc, "lambda", "random_cone");
    require(lambda > 0.0, Status::ConfigError,
            "random_cone: \"lambda\" must be positive");
    require(sig.has_value(), Status::ConfigError,
            std::string("\"sig\" is required when ") + which + " is drawn randomly");
    CounterRng rng(json_u64(rc, "seed", "random_cone", ctx.seed), stream);
    return random_cone_member(rng, sig->m, sig->n, lambda);
  }
  return matrix_from_json(spec, which);
}

struct ChartInputs {
  std::optional<Signature> sig;
  CMat x, y;
};

ChartInputs chart_inputs(const Context& ctx) {
  ChartInputs in;
  in.sig = sig_from(ctx.cfg);
  require(ctx.cfg.contains("X"), Status::ConfigError, "config: missing key \"X\"");
  require(ctx.cfg.contains("Y"), Status::ConfigError, "config: missing key \"Y\"");
  in.x = matrix_spec(ctx, "X", 1, in.sig, nullptr);
  if (in.sig)
    require(in.sig->m == in.x.rows() && in.sig->n == in.x.cols(),
            Status::ConfigError, "config: \"sig\" disagrees with the dimensions of X");
  in.y = matrix_spec(ctx, "Y", 2, in.sig, &in.x);
  return in;
}

double resolve_tolerance(const Context& ctx, double fallback) {
  double tol = fallback;
  if (ctx.cfg.contains("tolerance")) tol = json_number(ctx.cfg, "tolerance", "config");
  if (ctx.over.tolerance) tol = *ctx.over.tolerance;
  require(tol > 0.0, Status::ConfigError, "config: \"tolerance\" must be positive");
  return tol;
}

const json& curve_member(const Context& ctx) {
  require(ctx.cfg.contains("curve"), Status::ConfigError,
          "config: missing key \"curve\"");
  return ctx.cfg.at("curve");
}

const char* kind_name(CurveKind k) {
  switch (k) {
    case CurveKind::Circle: return "circle";
    case CurveKind::Ellipse: return "ellipse";
    default: return "polygon";
  }
}

json law_row_to_json(const LawRow& r) {
  json j{{"curve_id", r.curve_id},
         {"radius", r.radius},
         {"area", r.area},
         {"theta", r.theta},
         {"predicted", r.predicted},
         {"law_residual", r.law_residual},
         {"offdiag_residual", r.offdiag_residual},
         {"scalar_residual", r.scalar_residual},
         {"status", status_name(r.status)}};
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

LawRow compute_row(const SurfaceChart& ch, const CurveSpec& spec, size_t idx,
                   const json& integ_json, const QuadratureConfig& quad) {
  LawRow row;
  row.curve_id = std::string(kind_name(spec.kind)) + "-" + std::to_string(idx);
  try {
    row.radius = curve_reference_radius(spec);
    const IntegratorConfig icfg = integrator_from_json(integ_json, spec.samples);
    const HolonomyReport rep = horizontal_holonomy(ch, spec, icfg, quad);
    row.area = rep.area;
    row.theta = rep.theta;
    row.predicted = rep.predicted;
    row.law_residual =
        std::abs(std::polar(1.0, rep.theta) - std::polar(1.0, rep.predicted));
    row.offdiag_residual = rep.offdiag_residual;
    row.scalar_residual = rep.scalar_residual;
  } catch (const Error& e) {
    row.status = e.status();
    row.message = e.what();
  } catch (const std::exception& e) {
    row.status = Status::Internal;
    row.message = e.what();
  }
  return row;
}

RunOutcome do_classify(Context& ctx) {
  check_keys(ctx.cfg, "config", {"sig", "X", "Y", "seed", "output"});
  const OutputPlan plan = resolve_output(ctx, "json", {"json"});
  const ChartInputs in = chart_inputs(ctx);
  const PlaneClassification cls = classify_plane(in.x, in.y);
  const json env{{"manifest", manifest_json(ctx)},
                 {"result", classification_to_json(cls)}};
  return deliver(Status::Ok, env.dump(2) + "\n", plan);
}

RunOutcome do_holonomy(Context& ctx) {
  check_keys(ctx.cfg, "config",
             {"sig", "X", "Y", "curve", "integrator", "quadrature", "tolerance",
              "seed", "output"});
  const OutputPlan plan = resolve_output(ctx, "json", {"json"});
  const json& cj = curve_member(ctx);
  require(cj.is_object(), Status::ConfigError,
          "config: holonomy expects a single curve object; use sweep for lists");
  const CurveSpec curve = curve_from_json(cj);
  const IntegratorConfig icfg = integrator_from_json(
      ctx.cfg.contains("integrator") ? ctx.cfg.at("integrator") : json::object(),
      curve.samples);
  const QuadratureConfig quad = quadrature_from_json(
      ctx.cfg.contains("quadrature") ? ctx.cfg.at("quadrature") : json::object());
  const double tol = resolve_tolerance(ctx, kDefaultLawTol);
  const ChartInputs in = chart_inputs(ctx);
  const SurfaceChart ch = make_chart(in.x, in.y);
  const HolonomyReport rep = horizontal_holonomy(ch, curve, icfg, quad);
  const bool pass = rep.law_residual <= tol;
  const json env{{"manifest", manifest_json(ctx)},
                 {"result", report_to_json(rep)},
                 {"tolerance", tol},
                 {"passed", pass}};
  return deliver(pass ? Status::Ok : Status::LawToleranceExceeded,
                 env.dump(2) + "\n", plan,
                 pass ? "" : "law_residual " + format_number(rep.law_residual) +
                                 " above tolerance " + format_number(tol));
}

RunOutcome do_area(Context& ctx) {
  check_keys(ctx.cfg, "config",
             {"sig", "X", "Y", "curve", "quadrature", "seed", "output"});
  const OutputPlan plan = resolve_output(ctx, "json", {"json"});
  const json& cj = curve_member(ctx);
  require(cj.is_object(), Status::ConfigError,
          "config: area expects a single curve object");
  const CurveSpec curve = curve_from_json(cj);
  const QuadratureConfig quad = quadrature_from_json(
      ctx.cfg.contains("quadrature") ? ctx.cfg.at("quadrature") : json::object());
  const ChartInputs in = chart_inputs(ctx);
  const SurfaceChart ch = make_chart(in.x, in.y);
  const AreaResult area = area_of_region(ch, curve, quad);
  const json env{{"manifest", manifest_json(ctx)}, {"result", area_to_json(area)}};
  return deliver(Status::Ok, env.dump(2) + "\n", plan);
}

RunOutcome do_sweep(Context& ctx) {
  check_keys(ctx.cfg, "config",
             {"sig", "X", "Y", "curve", "integrator", "quadrature", "tolerance",
              "seed", "output"});
  const OutputPlan plan = resolve_output(ctx, "csv", {"csv", "json"});
  const json& cj = curve_member(ctx);
  require(cj.is_array(), Status::ConfigError,
          "config: sweep expects an array of curves");
  require(!cj.empty(), Status::ConfigError,
          "config: sweep needs a non-empty curve list");
  std::vector<CurveSpec> curves;
  for (const json& one : cj) curves.push_back(curve_from_json(one));
  const json integ_json =
      ctx.cfg.contains("integrator") ? ctx.cfg.at("integrator") : json::object();
  integrator_from_json(integ_json, 512);  // validate once, before any work
  const QuadratureConfig quad = quadrature_from_json(
      ctx.cfg.contains("quadrature") ? ctx.cfg.at("quadrature") : json::object());
  const double tol = resolve_tolerance(ctx, kDefaultLawTol);
  const ChartInputs in = chart_inputs(ctx);
  const SurfaceChart ch = make_chart(in.x, in.y);

  // Worker pool over an atomic index; rows land at their input slots, so
  // emission order never depends on scheduling.
  std::vector<LawRow> rows(curves.size());
  std::atomic<size_t> next{0};
  const unsigned workers = std::max<unsigned>(
      1, std::min<unsigned>(std::thread::hardware_concurrency(),
                            static_cast<unsigned>(curves.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (size_t i; (i = next.fetch_add(1)) < curves.size();)
        rows[i] = compute_row(ch, curves[i], i, integ_json, quad);
    });
  for (std::thread& th : pool) th.join();

  bool pass = true;
  for (const LawRow& row : rows)
    pass = pass && row.status == Status::Ok && row.law_residual <= tol;

  std::string payload;
  if (plan.format == "csv") {
    payload = law_csv_header() + "\n";
    for (const LawRow& row : rows) {
      payload += law_csv_row(row) + "\n";
      if (row.status != Status::Ok)
        payload += "# " + row.curve_id + ": " + status_name(row.status) + " " +
                   row.message + "\n";
    }
  } else {
    json results = json::array();
    for (const LawRow& row : rows) results.push_back(law_row_to_json(row));
    const json env{{"manifest", manifest_json(ctx)},
                   {"results", std::move(results)},
                   {"tolerance", tol},
                   {"passed", pass}};
    payload = env.dump(2) + "\n";
  }
  return deliver(pass ? Status::Ok : Status::LawToleranceExceeded,
                 std::move(payload), plan,
                 pass ? "" : "one or more sweep rows missed the law tolerance");
}

RunOutcome do_fiber_check(Context& ctx) {
  check_keys(ctx.cfg, "config",
             {"sig", "X", "trials", "grid", "tolerance", "seed", "output"});
  const OutputPlan plan = resolve_output(ctx, "json", {"json"});
  const double tol = resolve_tolerance(ctx, kDefaultFiberTol);
  const int grid = json_int(ctx.cfg, "grid", "config", 32, 2);
  const Signature sig = sig_from(ctx.cfg).value_or(make_signature(1, 2));

  std::vector<CMat> xs;
  if (ctx.cfg.contains("X") && !ctx.cfg.at("X").is_object()) {
    fail(Status::ConfigError,
         "X: fiber-check expects a matrix object or {\"random_cone\": ...}");
  } else if (ctx.cfg.contains("X") && !ctx.cfg.at("X").contains("random_cone")) {
    xs.push_back(matrix_from_json(ctx.cfg.at("X"), "X"));
  } else {
    const int trials = json_int(ctx.cfg, "trials", "config", 20, 1);
    std::uint64_t base = ctx.seed;
    std::optional<double> fixed_lambda;
    if (ctx.cfg.contains("X")) {
      check_keys(ctx.cfg.at("X"), "X", {"random_cone"});
      const json& rc = ctx.cfg.at("X").at("random_cone");
      check_keys(rc, "random_cone", {"lambda", "seed"});
      fixed_lambda = json_number(rc, "lambda", "random_cone");
      require(*fixed_lambda > 0.0, Status::ConfigError,
              "random_cone: \"lambda\" must be positive");
      base = json_u64(rc, "seed", "random_cone", ctx.seed);
    }
    CounterRng rng(base, 1);
    for (int t = 0; t < trials; ++t) {
      const double lambda =
          fixed_lambda ? *fixed_lambda : rng.log_uniform(0.25, 4.0);
      xs.push_back(random_cone_member(rng, sig.m, sig.n, lambda));
    }
  }

  CounterRng pair_rng(ctx.seed, 3);
  double worst = 0.0, worst_comp = 0.0;
  for (const CMat& x : xs) {
    const ConeCheck cone = unitary_cone_check(x);
    require(cone.is_member, Status::NotInCone,
            "fiber-check: X must satisfy X*X = lambda I with lambda > 0");
    const CMat k = k_matrix(x).mat;
    for (int i = 0; i < grid; ++i) {
      const double theta = 4.0 * M_PI * i / (grid - 1);
      worst = std::max(worst, frobenius(fiber_closed_form(x, theta) -
                                        expm(-(theta / cone.lambda) * k)));
    }
    const double t1 = pair_rng.uniform(0.0, 2.0 * M_PI);
    const double t2 = pair_rng.uniform(0.0, 2.0 * M_PI);
    worst_comp = std::max(
        worst_comp, frobenius(fiber_closed_form(x, t1) * fiber_closed_form(x, t2) -
                              fiber_closed_form(x, t1 + t2)));
  }
  const bool pass = worst <= tol && worst_comp <= tol;
  const json env{{"manifest", manifest_json(ctx)},
                 {"result",
                  {{"trials", xs.size()},
                   {"grid", grid},
                   {"max_residual", worst},
                   {"max_composition_residual", worst_comp},
                   {"tolerance", tol},
                   {"passed", pass}}}};
  return deliver(pass ? Status::Ok : Status::LawToleranceExceeded,
                 env.dump(2) + "\n", plan,
                 pass ? "" : "fiber residual above tolerance");
}

RunOutcome do_selftest(Context& ctx) {
  check_keys(ctx.cfg, "config", {"trials", "seed", "output"});
  const OutputPlan plan = resolve_output(ctx, "text", {"text", "json"});
  const int trials = json_int(ctx.cfg, "trials", "config", 100, 0);
  const std::vector<SuiteResult> results = run_selftest(ctx.seed, trials);
  const bool pass = selftest_passed(results);
  std::string payload;
  if (plan.format == "json") {
    const json env{{"manifest", manifest_json(ctx)},
                   {"result", selftest_to_json(results, trials)}};
    payload = env.dump(2) + "\n";
  } else {
    payload = selftest_text(results, trials);
  }
  return deliver(pass ? Status::Ok : Status::SelftestFailed, std::move(payload),
                 plan, pass ? "" : "one or more selftest suites failed");
}

}  // namespace

std::uint64_t config_hash(const json& config) {
  const std::string canon = config.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

RunOutcome run_verb(const std::string& verb, const std::string& config_text,
                    const RunOverrides& overrides) {
  Context ctx;
  ctx.start = std::chrono::steady_clock::now();
  ctx.over = overrides;
  try {
    ctx.cfg = config_text.empty() ? json::object()
                                  : parse_json_text(config_text, "config");
    require(ctx.cfg.is_object(), Status::ConfigError,
            "config: expected a JSON object");
    ctx.seed = overrides.seed ? *overrides.seed
                              : json_u64(ctx.cfg, "seed", "config", 0);
    if (verb == "classify") return do_classify(ctx);
    if (verb == "holonomy") return do_holonomy(ctx);
    if (verb == "area") return do_area(ctx);
    if (verb == "sweep") return do_sweep(ctx);
    if (verb == "fiber-check") return do_fiber_check(ctx);
    if (verb == "selftest") return do_selftest(ctx);
    fail(Status::ConfigError,
         "unknown verb \"" + verb +
             "\"; expected classify, holonomy, area, sweep, fiber-check, or selftest");
  } catch (const Error& e) {
    return error_outcome(e.status(), e.what());
  } catch (const std::exception& e) {
    return error_outcome(Status::Internal, e.what());
  }
}

}  // namespace hb
