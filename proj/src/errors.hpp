#pragma once

#include <stdexcept>
#include <string>

namespace hb {

enum class Status {
  Ok = 0,
  ConfigError,
  DimensionMismatch,
  NotFinite,
  SizeLimit,
  NotInCone,
  PlaneDegenerate,
  StarViolated,
  NotTotallyGeodesic,
  NonSimpleCurve,
  NonClosedCurve,
  NotStarShaped,
  QuadratureNotConverged,
  BlockLeakage,
  LawToleranceExceeded,
  SelftestFailed,
  InvalidArgument,
  Internal,
};

const char* status_name(Status s);

// Process exit classes: 0 ok, 1 config error, 2 precondition violation,
// 3 numeric failure.
int exit_class(Status s);

class Error : public std::runtime_error {
 public:
  Error(Status s, const std::string& what) : std::runtime_error(what), status_(s) {}
  Status status() const { return status_; }

 private:
  Status status_;
};

[[noreturn]] inline void fail(Status s, const std::string& what) { throw Error(s, what); }

inline void require(bool cond, Status s, const std::string& what) {
  if (!cond) fail(s, what);
}

}  // namespace hb
