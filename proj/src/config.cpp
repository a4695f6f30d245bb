#include "critspec/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "critspec/errors.hpp"

namespace critspec {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Config, what); }

const std::vector<std::string> kTopLevel = {"name",   "domain", "r",      "module", "hamiltonian", "lattice", "N",
                                            "reduction", "search", "refine", "rng_seed", "threads", "output",
                                            "spectrum", "verify"};

void check_keys(const Json& j, const std::vector<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      bad("unknown field \"" + key + "\" in " + where);
}

template <class T>
T read(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    bad(std::string("field \"") + key + "\" has the wrong type");
  }
}

int read_int(const Json& j, const char* key, int fallback) {
  if (j.contains(key) && !j.at(key).is_number_integer()) bad(std::string("field \"") + key + "\" must be an integer");
  return read<int>(j, key, fallback);
}

double read_real(const Json& j, const char* key, double fallback) {
  if (j.contains(key) && !j.at(key).is_number()) bad(std::string("field \"") + key + "\" must be a number");
  return read<double>(j, key, fallback);
}

bool read_bool(const Json& j, const char* key, bool fallback) {
  if (j.contains(key) && !j.at(key).is_boolean()) bad(std::string("field \"") + key + "\" must be a boolean");
  return read<bool>(j, key, fallback);
}

const Json& object_or_empty(const Json& j, const char* key) {
  static const Json empty = Json::object();
  if (!j.contains(key)) return empty;
  if (!j.at(key).is_object()) bad(std::string("field \"") + key + "\" must be an object");
  return j.at(key);
}

Json flat_matrix(const Eigen::MatrixXd& m) {
  Json a = Json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int k = 0; k < m.cols(); ++k) a.push_back(m(i, k));
  return a;
}

}  // namespace

RunConfig parse_config(const Json& j) {
  if (!j.is_object()) bad("config must be a JSON object");
  check_keys(j, kTopLevel, "config");
  RunConfig c;
  c.name = read<std::string>(j, "name", "");

  const auto domain = read<std::string>(j, "domain", "torus");
  if (domain == "torus")
    c.domain = TimeDomain::Torus;
  else if (domain == "su2")
    c.domain = TimeDomain::SU2;
  else
    bad("domain must be \"torus\" or \"su2\"");

  c.r = read_int(j, "r", c.domain == TimeDomain::SU2 ? 3 : 1);
  if (j.contains("module")) {
    const Json& m = j.at("module");
    if (m.is_object() && m.contains("auto")) {
      check_keys(m, {"auto"}, "module");
      if (!m.at("auto").is_number_integer()) bad("module \"auto\" must be an integer r");
      const int r = m.at("auto").get<int>();
      if (j.contains("r") && r != c.r) bad("module \"auto\" disagrees with \"r\"");
      c.r = r;
    } else {
      c.module = module_from_json(m);
      if (j.contains("r") && c.module->count() != c.r) bad("inline module has a different r");
      c.r = c.module->count();
    }
  }
  if (c.r < 1) bad("r must be positive");
  if (c.domain == TimeDomain::SU2 && c.r != 3) bad("the su2 domain fixes r = 3");

  if (!j.contains("hamiltonian")) bad("missing field \"hamiltonian\"");
  c.hamiltonian = terms_from_json(j.at("hamiltonian"));

  if (j.contains("lattice")) {
    const Eigen::VectorXd v = vector_from_json(j.at("lattice"), "\"lattice\"");
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(v.size()))));
    if (n * n != v.size() || n == 0) bad("lattice must be a row-major square matrix");
    c.lattice = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(v.data(), n, n);
  }

  if (j.contains("N")) {
    const Json& N = j.at("N");
    if (N.is_string() && N.get<std::string>() == "auto")
      c.N = 0;
    else if (N.is_number_integer() && N.get<int>() >= 1)
      c.N = N.get<int>();
    else
      bad("N must be a positive integer or \"auto\"");
  }

  const Json& red = object_or_empty(j, "reduction");
  check_keys(red, {"fixed_point_tol", "max_fixed_point_iters", "tail_band", "quadrature"}, "reduction");
  c.reduction.fixed_point_tol = read_real(red, "fixed_point_tol", c.reduction.fixed_point_tol);
  c.reduction.max_fixed_point_iters = read_int(red, "max_fixed_point_iters", c.reduction.max_fixed_point_iters);
  c.reduction.tail_band = read_int(red, "tail_band", 0);
  c.reduction.quadrature = read_int(red, "quadrature", 0);

  const Json& s = object_or_empty(j, "search");
  check_keys(s,
             {"seed_count", "grad_tol", "dedup_radius", "max_newton_steps", "fiber_perturbation", "degeneracy_tol",
              "residual_tol", "hessian_step", "escalate"},
             "search");
  auto& so = c.search;
  so.seed_count = read_int(s, "seed_count", so.seed_count);
  so.grad_tol = read_real(s, "grad_tol", so.grad_tol);
  so.dedup_radius = read_real(s, "dedup_radius", so.dedup_radius);
  so.max_newton_steps = read_int(s, "max_newton_steps", so.max_newton_steps);
  so.fiber_perturbation = read_real(s, "fiber_perturbation", so.fiber_perturbation);
  so.degeneracy_tol = read_real(s, "degeneracy_tol", so.degeneracy_tol);
  so.residual_tol = read_real(s, "residual_tol", so.residual_tol);
  so.hessian_step = read_real(s, "hessian_step", so.hessian_step);
  so.escalate = read_bool(s, "escalate", so.escalate);
  if (so.seed_count < 0 || so.grad_tol <= 0 || so.dedup_radius <= 0 || so.max_newton_steps < 1 ||
      so.hessian_step <= 0)
    bad("search parameters out of range");
  if (j.contains("rng_seed")) {
    if (!j.at("rng_seed").is_number_unsigned()) bad("rng_seed must be a non-negative integer");
    so.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  }
  so.threads = read_int(j, "threads", 0);

  const Json& ref = object_or_empty(j, "refine");
  check_keys(ref, {"N_plus"}, "refine");
  c.refine_N_plus = read_int(ref, "N_plus", c.refine_N_plus);
  if (c.refine_N_plus < 0) bad("refine N_plus must be non-negative");

  const Json& out = object_or_empty(j, "output");
  check_keys(out, {"dir", "points", "summary", "report"}, "output");
  c.out_dir = read<std::string>(out, "dir", c.out_dir);
  c.points_file = read<std::string>(out, "points", c.points_file);
  c.summary_file = read<std::string>(out, "summary", c.summary_file);
  c.report_file = read<std::string>(out, "report", c.report_file);

  const Json& sp = object_or_empty(j, "spectrum");
  check_keys(sp, {"k_min", "k_max"}, "spectrum");
  c.spectrum_k_min = read_int(sp, "k_min", c.spectrum_k_min);
  c.spectrum_k_max = read_int(sp, "k_max", c.spectrum_k_max);
  if (c.spectrum_k_min < 0 || c.spectrum_k_max < c.spectrum_k_min) bad("spectrum range is empty or negative");

  const Json& ve = object_or_empty(j, "verify");
  check_keys(ve, {"k_max"}, "verify");
  c.verify_k_max = read_int(ve, "k_max", 0);
  if (c.verify_k_max < 0) bad("verify k_max must be non-negative");
  return c;
}

Json config_to_json(const RunConfig& c) {
  Json j;
  j["name"] = c.name;
  j["domain"] = c.domain == TimeDomain::SU2 ? "su2" : "torus";
  j["r"] = c.r;
  j["module"] = c.module ? module_to_json(*c.module) : Json{{"auto", c.r}};
  j["hamiltonian"] = terms_to_json(c.hamiltonian);
  if (c.lattice) j["lattice"] = flat_matrix(*c.lattice);
  j["N"] = c.N == 0 ? Json("auto") : Json(c.N);
  j["reduction"] = Json{{"fixed_point_tol", c.reduction.fixed_point_tol},
                        {"max_fixed_point_iters", c.reduction.max_fixed_point_iters},
                        {"tail_band", c.reduction.tail_band},
                        {"quadrature", c.reduction.quadrature}};
  const auto& s = c.search;
  j["search"] = Json{{"seed_count", s.seed_count},         {"grad_tol", s.grad_tol},
                     {"dedup_radius", s.dedup_radius},     {"max_newton_steps", s.max_newton_steps},
                     {"fiber_perturbation", s.fiber_perturbation}, {"degeneracy_tol", s.degeneracy_tol},
                     {"residual_tol", s.residual_tol},     {"hessian_step", s.hessian_step},
                     {"escalate", s.escalate}};
  j["refine"] = Json{{"N_plus", c.refine_N_plus}};
  j["rng_seed"] = s.rng_seed;
  j["threads"] = s.threads;
  j["output"] = Json{{"dir", c.out_dir}, {"points", c.points_file}, {"summary", c.summary_file}, {"report", c.report_file}};
  j["spectrum"] = Json{{"k_min", c.spectrum_k_min}, {"k_max", c.spectrum_k_max}};
  j["verify"] = Json{{"k_max", c.verify_k_max}};
  return j;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open config " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    bad("config " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

std::shared_ptr<const CliffordModule> config_module(const RunConfig& c) {
  if (c.module) return std::make_shared<const CliffordModule>(*c.module);
  try {
    return std::make_shared<const CliffordModule>(build_module(c.r, c.domain == TimeDomain::SU2));
  } catch (const Error& e) {
    bad(std::string("cannot build a module: ") + e.what());
  }
}

TrigHamiltonian config_hamiltonian(const RunConfig& c) {
  const auto module = config_module(c);
  const int n = module->dim();
  if (c.domain == TimeDomain::SU2 && !module->hyperkahler())
    throw Error(ErrorKind::NotHyperkahler, "the su2 domain needs a hyperkahler module");
  for (const auto& t : c.hamiltonian) {
    if (t.nu.size() != n) bad("term frequency nu must have length n = " + std::to_string(n));
    if (t.time.kind == TimeFactor::Kind::Torus && t.time.m.size() != c.r)
      bad("torus time frequency m must have length r = " + std::to_string(c.r));
  }
  try {
    return c.lattice ? TrigHamiltonian(n, c.domain, c.hamiltonian, Lattice(*c.lattice))
                     : TrigHamiltonian(n, c.domain, c.hamiltonian);
  } catch (const Error& e) {
    bad(std::string("invalid hamiltonian: ") + e.what());
  }
}

}  // namespace critspec
