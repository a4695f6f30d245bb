#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "critspec/config.hpp"

namespace critspec {

const char* version();

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitCheckFailed = 2, kExitContraction = 3 };

struct CheckResult {
  std::string name;
  bool passed = false;
  double defect = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

// Identity, block, spectrum, transform and orthonormality checks for the
// module on the given time domain, frequencies up to k_max.
std::vector<CheckResult> run_checks(std::shared_ptr<const CliffordModule> module, TimeDomain domain, int k_max,
                                    std::uint64_t seed);

struct SpectrumRow {
  std::string k;
  double norm = 0.0;
  std::vector<double> eigenvalues;           // distinct, ascending
  std::vector<double> predicted_eigenvalues;
  bool kernel = false;
  double inverse_norm = 0.0;
  double predicted_inverse_norm = 0.0;
  double deviation = 0.0;
};

std::vector<SpectrumRow> spectrum_rows(const CliffordModule& module, TimeDomain domain, int k_min, int k_max);
std::string spectrum_csv(const std::vector<SpectrumRow>& rows);

struct Overrides {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

void apply_overrides(RunConfig& config, const Overrides& o);

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err);

// Loads the config, applies overrides and dispatches; config errors give 1.
int run_command(const std::string& command, const std::string& config_path, const Overrides& o, std::ostream& out,
                std::ostream& err);

}  // namespace critspec
