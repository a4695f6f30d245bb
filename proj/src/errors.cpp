#include "critspec/errors.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace critspec {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidRequest: return "invalid-request";
    case ErrorKind::NotHyperkahler: return "not-hyperkahler";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::DomainMismatch: return "domain-mismatch";
    case ErrorKind::ZeroFrequency: return "zero-frequency";
    case ErrorKind::FrequencyBelowCutoff: return "frequency-below-cutoff";
    case ErrorKind::IndexOutOfRange: return "index-out-of-range";
    case ErrorKind::ContractionViolated: return "contraction-violated";
    case ErrorKind::MaxItersExceeded: return "max-iters-exceeded";
    case ErrorKind::RefinementDiverged: return "refinement-diverged";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

namespace {

std::mutex& handler_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& handler() {
  static WarningHandler h = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
  return h;
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler h) {
  std::lock_guard lock(handler_mutex());
  return std::exchange(handler(), std::move(h));
}

void warn(const std::string& message) {
  std::lock_guard lock(handler_mutex());
  if (handler()) handler()(message);
}

}  // namespace critspec
