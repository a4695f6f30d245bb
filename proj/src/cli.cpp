#include "critspec/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>

#include "critspec/errors.hpp"

#ifndef CRITSPEC_VERSION
#define CRITSPEC_VERSION "0.0.0"
#endif

namespace critspec {

namespace fs = std::filesystem;

const char* version() { return CRITSPEC_VERSION; }

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Config, "cannot write " + path.string());
  out << text;
}

std::string sci(double x, int digits = 3) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*e", digits, x);
  return buf;
}

int verify_k_max(const RunConfig& c) {
  if (c.verify_k_max > 0) return c.verify_k_max;
  return c.domain == TimeDomain::SU2 ? 8 : 5;
}

}  // namespace

void apply_overrides(RunConfig& config, const Overrides& o) {
  if (o.out_dir) config.out_dir = *o.out_dir;
  if (o.seed) config.search.rng_seed = *o.seed;
  if (o.threads) config.search.threads = *o.threads;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::shared_ptr<const CliffordModule> module;
  try {
    module = config_module(config);
    if (config.domain == TimeDomain::SU2 && !module->hyperkahler())
      throw Error(ErrorKind::NotHyperkahler, "the su2 domain needs a hyperkahler module");
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  const auto checks = run_checks(module, config.domain, verify_k_max(config), config.search.rng_seed);
  bool all = true;
  out << "verify " << to_string(config.domain) << ", n = " << module->dim() << ", r = " << module->count()
      << ", k <= " << verify_k_max(config) << '\n';
  for (const auto& c : checks) {
    all = all && c.passed;
    out << (c.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(44) << c.name << " defect " << sci(c.defect)
        << "  tol " << sci(c.tolerance, 0);
    if (!c.passed && !c.detail.empty()) out << "  at " << c.detail;
    out << '\n';
  }
  if (!all) {
    for (const auto& c : checks)
      if (!c.passed) err << "violated: " << c.name << (c.detail.empty() ? "" : " at " + c.detail) << '\n';
    return kExitCheckFailed;
  }
  return kExitOk;
}

int cmd_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::shared_ptr<const CliffordModule> module;
  try {
    module = config_module(config);
    validate(*module);
    if (config.domain == TimeDomain::SU2 && !module->hyperkahler())
      throw Error(ErrorKind::NotHyperkahler, "the su2 domain needs a hyperkahler module");
    const std::string csv =
        spectrum_csv(spectrum_rows(*module, config.domain, config.spectrum_k_min, config.spectrum_k_max));
    out << csv;
    fs::create_directories(config.out_dir);
    write_file(fs::path(config.out_dir) / "spectrum.csv", csv);
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto t0 = Clock::now();
  std::shared_ptr<const CliffordModule> module;
  std::optional<TrigHamiltonian> H;
  try {
    module = config_module(config);
    validate(*module);
    H.emplace(config_hamiltonian(config));
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  const bool automatic = config.N == 0;
  const int N = automatic ? min_truncation(*H, config.domain, kAutoSafety) : config.N;
  const double rho = contraction_factor(*H, config.domain, N);
  if (!(rho < 1.0)) {
    err << "contraction impossible at N = " << N << ": factor " << rho << " >= 1 (use \"N\": \"auto\")\n";
    return kExitContraction;
  }
  std::optional<ReducedProblem> problem;
  try {
    problem.emplace(module, *H, N, config.reduction);
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return e.kind() == ErrorKind::ContractionViolated ? kExitContraction : kExitConfig;
  }

  const auto t_search = Clock::now();
  std::vector<std::string> warnings;
  auto previous = set_warning_handler([&](const std::string& m) { warnings.push_back(m); });
  SearchResult result = find_critical_points(*problem, config.search);
  const CountReport report = count_report(result.records, module->dim());
  const double search_s = seconds_since(t_search);

  const auto t_refine = Clock::now();
  std::vector<Json> refinements(result.records.size());
  int accepted = 0, rejected = 0, diverged = 0;
  double max_displacement = 0.0;
  if (config.refine_N_plus > 0) {
    for (std::size_t i = 0; i < result.records.size(); ++i) {
      try {
        const auto ref = refine_and_verify(*problem, result.records[i], config.refine_N_plus, config.search);
        refinements[i] = refinement_to_json(ref);
        max_displacement = std::max(max_displacement, ref.displacement);
        (ref.accepted ? accepted : rejected)++;
      } catch (const Error& e) {
        refinements[i] = Json{{"accepted", false}, {"error", e.what()}};
        ++diverged;
      }
    }
  }
  const double refine_s = seconds_since(t_refine);
  set_warning_handler(previous);

  // a cluster with null directions is a sampled piece of a critical continuum
  std::set<int> continuum;
  for (const auto& rec : result.records)
    if (rec.null_directions.cols() > 0) continuum.insert(rec.cluster);

  Json points = Json::array();
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    Json p = record_to_json(*problem, result.records[i]);
    if (config.refine_N_plus > 0) p["refinement"] = refinements[i];
    points.push_back(p);
  }
  const Json points_doc{{"domain", to_string(config.domain)},
                        {"n", module->dim()},
                        {"r", module->count()},
                        {"N", N},
                        {"tail_band", problem->tail_band()},
                        {"points", points}};

  Json rep{{"tool", "critspec"},
           {"version", version()},
           {"config", config_to_json(config)},
           {"N", N},
           {"N_policy", automatic ? "auto (rho = 0.5)" : "fixed"},
           {"contraction_factor", rho},
           {"tail_band", problem->tail_band()},
           {"quadrature", problem->quadrature()},
           {"reduced_dimension", problem->dim()},
           {"dedup_radius", config.search.dedup_radius},
           {"count_report", report_to_json(report)},
           {"degenerate_family", !report.all_nondegenerate},
           {"clusters", result.clusters},
           {"clusters_with_null_directions", continuum.size()},
           {"diagnostics", diagnostics_to_json(result.diagnostics)},
           {"refinement",
            Json{{"N_plus", config.refine_N_plus},
                 {"accepted", accepted},
                 {"rejected", rejected},
                 {"diverged", diverged},
                 {"max_displacement", max_displacement}}},
           {"warnings", warnings}};
  rep["timings"] = Json{{"search_s", search_s}, {"refine_s", refine_s}, {"total_s", seconds_since(t0)}};

  try {
    fs::create_directories(config.out_dir);
    const fs::path dir(config.out_dir);
    write_file(dir / config.points_file, points_doc.dump(1) + "\n");
    write_file(dir / config.summary_file, summary_csv(result.records));
    write_file(dir / config.report_file, rep.dump(1) + "\n");
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  out << "solve " << to_string(config.domain) << ", n = " << module->dim() << ", N = " << N
      << (automatic ? " (auto)" : "") << ", contraction " << std::setprecision(4) << rho << ", reduced dim "
      << problem->dim() << '\n';
  out << "found " << report.found << " (records " << report.records << "), SB " << report.sb_bound << ", CL+1 "
      << report.cl_bound << ", all nondegenerate " << (report.all_nondegenerate ? "yes" : "no") << "\n";
  out << report.status << '\n';
  if (config.refine_N_plus > 0)
    out << "refinement N+" << config.refine_N_plus << ": " << accepted << " accepted, " << rejected << " rejected, "
        << diverged << " diverged\n";
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  out << "wrote " << (fs::path(config.out_dir) / config.points_file).string() << ", "
      << (fs::path(config.out_dir) / config.summary_file).string() << ", "
      << (fs::path(config.out_dir) / config.report_file).string() << '\n';
  return kExitOk;
}

int run_command(const std::string& command, const std::string& config_path, const Overrides& o, std::ostream& out,
                std::ostream& err) {
  RunConfig config;
  try {
    config = load_config(config_path);
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  apply_overrides(config, o);
  if (command == "verify") return cmd_verify(config, out, err);
  if (command == "solve") return cmd_solve(config, out, err);
  if (command == "spectrum") return cmd_spectrum(config, out, err);
  err << "unknown command " << command << '\n';
  return kExitConfig;
}

}  // namespace critspec
