#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "serialize.hpp"

namespace hb {

// Command-line overrides; unset fields defer to the config, then defaults.
struct RunOverrides {
  std::optional<std::string> output_path;
  std::optional<std::string> format;  // "json", "csv", or "text"
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
};

struct RunOutcome {
  Status status = Status::Ok;
  int exit_code = 0;
  std::string payload;       // JSON, CSV, or text; always populated
  std::string written_path;  // non-empty when the payload went to a file
  std::string message;       // one-line diagnostic when status != Ok
};

// Dispatches one verb (classify, holonomy, area, sweep, fiber-check,
// selftest) against a JSON config. Never throws: failures come back as an
// error payload with the matching exit class, and no file is written.
RunOutcome run_verb(const std::string& verb, const std::string& config_text,
                    const RunOverrides& overrides = {});

// FNV-1a over the canonical dump, so hashes ignore whitespace and key order.
std::uint64_t config_hash(const json& config);

}  // namespace hb
