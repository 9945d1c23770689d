#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <holobundle.h>

namespace {

struct Flags {
  std::string config, output, format;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  bool has_output = false, has_format = false, has_tolerance = false,
       has_seed = false;
};

int run_one(const std::string& verb, const Flags& flags) {
  std::string config_text;
  if (!flags.config.empty()) {
    std::ifstream f(flags.config, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot read config \"" << flags.config << "\"\n";
      return 1;
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    config_text = ss.str();
  }

  hb_run_options opts{};
  if (flags.has_output) opts.output_path = flags.output.c_str();
  if (flags.has_format) opts.format = flags.format.c_str();
  opts.has_tolerance = flags.has_tolerance;
  opts.tolerance = flags.tolerance;
  opts.has_seed = flags.has_seed;
  opts.seed = flags.seed;

  char* payload = nullptr;
  char* written = nullptr;
  const hb_status st =
      hb_run(verb.c_str(), config_text.c_str(), &opts, &payload, &written);
  if (payload != nullptr) {
    if (written == nullptr)
      std::cout << payload;
    else
      std::cerr << "wrote " << written << "\n";
  }
  if (st != HB_OK)
    std::cerr << "error: " << hb_status_name(st) << ": " << hb_last_error()
              << "\n";
  hb_string_free(payload);
  hb_string_free(written);
  return hb_status_exit_class(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holonomy and totally geodesic surfaces over the pseudo-unitary "
               "bundle"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hb_version()));

  Flags flags;
  app.add_option("--config", flags.config, "JSON config file");
  auto* oo = app.add_option("--output", flags.output,
                            "write the payload to this file");
  auto* of = app.add_option("--format", flags.format,
                            "json | csv (sweep) | text (selftest)");
  auto* ot = app.add_option("--tolerance", flags.tolerance,
                            "override the pass/fail tolerance");
  auto* os = app.add_option("--seed", flags.seed, "override the run seed");

  app.add_subcommand("classify", "verdict for the 2-plane spanned by X and Y");
  app.add_subcommand("holonomy",
                     "horizontal holonomy of one closed curve, with the "
                     "phase-area check");
  app.add_subcommand("area", "Riemannian area enclosed by a curve");
  app.add_subcommand("sweep", "law table over a list of curves");
  app.add_subcommand("fiber-check",
                     "closed form of the central fiber elements");
  app.add_subcommand("selftest", "randomized invariant suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  flags.has_output = oo->count() > 0;
  flags.has_format = of->count() > 0;
  flags.has_tolerance = ot->count() > 0;
  flags.has_seed = os->count() > 0;
  return run_one(app.get_subcommands().front()->get_name(), flags);
}
