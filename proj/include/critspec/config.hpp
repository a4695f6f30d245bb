#pragma once

#include <optional>
#include <string>
#include <vector>

#include "critspec/io.hpp"
#include "critspec/reduction.hpp"
#include "critspec/solver.hpp"

namespace critspec {

inline constexpr double kAutoSafety = 0.5;

struct RunConfig {
  std::string name;
  TimeDomain domain = TimeDomain::Torus;
  int r = 1;  // SU(2) fixes r = 3
  // Inline module; otherwise build_module(r, domain == SU2).
  std::optional<CliffordModule> module;
  std::vector<HamiltonianTerm> hamiltonian;
  std::optional<Eigen::MatrixXd> lattice;  // identity when absent
  int N = 0;                               // 0: "auto", min_truncation at kAutoSafety
  ReductionOptions reduction;
  SearchOptions search;
  int refine_N_plus = 2;  // 0 skips refine_and_verify after solve
  std::string out_dir = "out";
  std::string points_file = "points.json";
  std::string summary_file = "summary.csv";
  std::string report_file = "report.json";
  int spectrum_k_min = 0;
  int spectrum_k_max = 5;
  int verify_k_max = 0;  // 0: 5 on the torus, 8 on SU(2)
};

// Throws Error(Config) on schema violations.
RunConfig parse_config(const Json& j);
Json config_to_json(const RunConfig& config);
RunConfig load_config(const std::string& path);

std::shared_ptr<const CliffordModule> config_module(const RunConfig& config);
// Also checks the module against the domain: SU(2) needs a hyperkahler one.
TrigHamiltonian config_hamiltonian(const RunConfig& config);

}  // namespace critspec
