#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace critspec {

enum class ErrorKind {
  InvalidRequest,
  NotHyperkahler,
  DimensionMismatch,
  DomainMismatch,
  ZeroFrequency,
  FrequencyBelowCutoff,
  IndexOutOfRange,
  ContractionViolated,
  MaxItersExceeded,
  RefinementDiverged,
  Config,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Non-fatal conditions (coarse grids, insufficient quadrature). The default
// handler prints to stderr; tests and the CLI may replace it.
using WarningHandler = std::function<void(const std::string&)>;
WarningHandler set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

}  // namespace critspec
