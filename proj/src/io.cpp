#include "critspec/io.hpp"

#include <cstdio>
#include <sstream>

#include "critspec/errors.hpp"

namespace critspec {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Config, what); }

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int get_int(const Json& j, const char* key) {
  const Json& v = member(j, key);
  if (!v.is_number_integer()) bad(std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

double get_real(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number()) bad(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

std::string format(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

}  // namespace

Json to_json_array(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

Json to_json_array(const Eigen::VectorXi& v) {
  Json a = Json::array();
  for (int x : v) a.push_back(x);
  return a;
}

Eigen::VectorXd vector_from_json(const Json& j, const char* what) {
  if (!j.is_array()) bad(std::string(what) + " must be an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) bad(std::string(what) + " must be an array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Eigen::VectorXi ivector_from_json(const Json& j, const char* what) {
  if (!j.is_array()) bad(std::string(what) + " must be an array of integers");
  Eigen::VectorXi v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) bad(std::string(what) + " must be an array of integers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<int>();
  }
  return v;
}

Json module_to_json(const CliffordModule& module) {
  Json J = Json::array();
  for (const auto& s : module.structures()) {
    Json flat = Json::array();
    for (int i = 0; i < s.rows(); ++i)
      for (int k = 0; k < s.cols(); ++k) flat.push_back(s(i, k));
    J.push_back(flat);
  }
  return Json{{"n", module.dim()}, {"r", module.count()}, {"J", J}, {"hyperkahler", module.hyperkahler()}};
}

CliffordModule module_from_json(const Json& j) {
  const int n = get_int(j, "n");
  const int r = get_int(j, "r");
  if (n < 1 || r < 1) bad("module needs n >= 1 and r >= 1");
  const Json& J = member(j, "J");
  if (!J.is_array() || static_cast<int>(J.size()) != r) bad("module \"J\" must hold r matrices");
  std::vector<Eigen::MatrixXd> structures;
  for (const auto& flat : J) {
    const Eigen::VectorXd v = vector_from_json(flat, "structure matrix");
    if (v.size() != n * n) bad("structure matrix must have n*n entries");
    structures.push_back(Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        v.data(), n, n));
  }
  bool hk = false;
  if (j.contains("hyperkahler")) {
    if (!j.at("hyperkahler").is_boolean()) bad("\"hyperkahler\" must be a boolean");
    hk = j.at("hyperkahler").get<bool>();
  }
  try {
    return CliffordModule(std::move(structures), hk);
  } catch (const Error& e) {
    bad(std::string("invalid module: ") + e.what());
  }
}

Json term_to_json(const HamiltonianTerm& term) {
  Json time;
  switch (term.time.kind) {
    case TimeFactor::Kind::Constant: time = Json{{"type", "const"}}; break;
    case TimeFactor::Kind::Torus:
      time = Json{{"type", "torus"}, {"m", to_json_array(term.time.m)}, {"phase", term.time.phase}};
      break;
    case TimeFactor::Kind::SU2:
      time = Json{{"type", "su2"}, {"k", term.time.k}, {"a", term.time.a}, {"b", term.time.b},
                  {"part", term.time.imaginary ? "im" : "re"}};
      break;
  }
  return Json{{"time", time}, {"nu", to_json_array(term.nu)}, {"amp", term.amplitude}, {"phase", term.phase}};
}

HamiltonianTerm term_from_json(const Json& j) {
  HamiltonianTerm t;
  t.nu = ivector_from_json(member(j, "nu"), "\"nu\"");
  if (!j.contains("amp")) bad("term is missing \"amp\"");
  t.amplitude = get_real(j, "amp", 0.0);
  t.phase = get_real(j, "phase", 0.0);
  const Json time = j.contains("time") ? j.at("time") : Json{{"type", "const"}};
  if (!time.is_object() || !time.contains("type") || !time.at("type").is_string()) bad("term \"time\" needs a \"type\"");
  const auto type = time.at("type").get<std::string>();
  if (type == "const") {
    t.time.kind = TimeFactor::Kind::Constant;
  } else if (type == "torus") {
    t.time.kind = TimeFactor::Kind::Torus;
    t.time.m = ivector_from_json(member(time, "m"), "\"m\"");
    t.time.phase = get_real(time, "phase", 0.0);
  } else if (type == "su2") {
    t.time.kind = TimeFactor::Kind::SU2;
    t.time.k = get_int(time, "k");
    t.time.a = get_int(time, "a");
    t.time.b = get_int(time, "b");
    const std::string part = time.contains("part") ? time.at("part").get<std::string>() : "re";
    if (part != "re" && part != "im") bad("SU(2) \"part\" must be \"re\" or \"im\"");
    t.time.imaginary = part == "im";
  } else {
    bad("unknown time factor type \"" + type + "\"");
  }
  return t;
}

Json terms_to_json(const std::vector<HamiltonianTerm>& terms) {
  Json a = Json::array();
  for (const auto& t : terms) a.push_back(term_to_json(t));
  return a;
}

std::vector<HamiltonianTerm> terms_from_json(const Json& j) {
  if (!j.is_array()) bad("hamiltonian must be a list of terms");
  std::vector<HamiltonianTerm> out;
  for (const auto& t : j) out.push_back(term_from_json(t));
  return out;
}

Json field_to_json(const TorusField& f) {
  Json coeffs = Json::array();
  for (int m = 0; m < f.modes().size(); ++m)
    coeffs.push_back(Json{{"k", to_json_array(Eigen::VectorXi(f.modes().k(m)))},
                          {"v", to_json_array(Eigen::VectorXd(f.coeffs().col(m)))}});
  return Json{{"mean", to_json_array(f.mean())}, {"coeffs", coeffs}, {"N", f.N()}};
}

TorusField torus_field_from_json(const Json& j, std::shared_ptr<const CliffordModule> module) {
  auto f = TorusField::zero(module, get_int(j, "N"));
  const Eigen::VectorXd mean = vector_from_json(member(j, "mean"), "\"mean\"");
  if (mean.size() != module->dim()) bad("field mean has the wrong length");
  f.mean() = mean;
  for (const auto& c : member(j, "coeffs")) {
    const Eigen::VectorXi k = ivector_from_json(member(c, "k"), "\"k\"");
    const Eigen::VectorXd v = vector_from_json(member(c, "v"), "\"v\"");
    if (k.size() != f.r() || v.size() != module->dim()) bad("field coefficient has the wrong shape");
    if (f.modes().find(k) < 0) bad("field coefficient outside the mode band");
    f.set_coeff(k, v);
  }
  return f;
}

Json field_to_json(const SU2Field& f) {
  Json coeffs = Json::array();
  for (int m = 0; m < f.modes().size(); ++m) {
    const auto& md = f.modes().mode(m);
    coeffs.push_back(Json{{"k", md.k}, {"a", md.a}, {"b", md.b}, {"v", to_json_array(Eigen::VectorXd(f.coeffs().col(m)))}});
  }
  return Json{{"mean", to_json_array(f.mean())}, {"coeffs", coeffs}, {"N", f.N()}};
}

SU2Field su2_field_from_json(const Json& j, std::shared_ptr<const CliffordModule> module) {
  auto f = SU2Field::zero(module, get_int(j, "N"));
  const Eigen::VectorXd mean = vector_from_json(member(j, "mean"), "\"mean\"");
  if (mean.size() != module->dim()) bad("field mean has the wrong length");
  f.mean() = mean;
  for (const auto& c : member(j, "coeffs")) {
    const int k = get_int(c, "k"), a = get_int(c, "a"), b = get_int(c, "b");
    const Eigen::VectorXd v = vector_from_json(member(c, "v"), "\"v\"");
    if (v.size() != module->dim()) bad("field coefficient has the wrong length");
    if (f.modes().find(k, a, b) < 0) bad("field coefficient outside the mode band");
    f.set_coeff(k, a, b, v);
  }
  return f;
}

Json field_to_json(const ReducedProblem& problem, const SpectralField& f) {
  const auto& disc = problem.discretization();
  const bool torus = problem.domain() == TimeDomain::Torus;
  Json coeffs = Json::array();
  for (int m = 0; m < disc.mode_count(); ++m) {
    const auto key = disc.mode_key(m);
    Json c;
    if (torus) {
      c["k"] = key;
    } else {
      c["k"] = key[0];
      c["a"] = key[1];
      c["b"] = key[2];
    }
    c["v"] = to_json_array(Eigen::VectorXd(f.coeffs.col(m)));
    coeffs.push_back(c);
  }
  return Json{{"mean", to_json_array(f.mean)}, {"coeffs", coeffs}, {"N", problem.tail_band()}};
}

Json record_to_json(const ReducedProblem& problem, const CriticalPointRecord& r) {
  return Json{{"action", r.action},
              {"residual", r.residual},
              {"grad_norm", r.grad_norm},
              {"hessian_min_abs_eigenvalue", r.hessian_min_abs_eigenvalue},
              {"nondegenerate", r.nondegenerate},
              {"morse_index_window", r.morse_index_window},
              {"basin_seed", r.basin_seed},
              {"cluster", r.cluster},
              {"newton_steps", r.newton_steps},
              {"null_dimension", r.null_directions.cols()},
              {"g", to_json_array(r.g)},
              {"f", field_to_json(problem, r.f)}};
}

Json report_to_json(const CountReport& r) {
  return Json{{"found", r.found},
              {"records", r.records},
              {"sb_bound", r.sb_bound},
              {"cl_bound", r.cl_bound},
              {"all_nondegenerate", r.all_nondegenerate},
              {"satisfied_sb", r.satisfied_sb},
              {"sb_asserted", r.sb_asserted},
              {"satisfied_cl", r.satisfied_cl},
              {"status", r.status}};
}

Json diagnostics_to_json(const SearchDiagnostics& d) {
  return Json{{"seeds", d.seeds},
              {"converged", d.converged},
              {"not_converged", d.not_converged},
              {"fiber_failures", d.fiber_failures},
              {"residual_rejected", d.residual_rejected},
              {"duplicates", d.duplicates},
              {"escalations", d.escalations}};
}

Json refinement_to_json(const RefinementResult& r) {
  return Json{{"N", r.N},
              {"displacement", r.displacement},
              {"residual_before", r.residual_before},
              {"residual_after", r.residual_after},
              {"accepted", r.accepted}};
}

std::string summary_csv(const std::vector<CriticalPointRecord>& records) {
  std::ostringstream os;
  os << "index,action,residual,min_abs_eig,nondegenerate,index_window,cluster\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    os << i << ',' << format(r.action) << ',' << format(r.residual) << ',' << format(r.hessian_min_abs_eigenvalue)
       << ',' << (r.nondegenerate ? "true" : "false") << ',' << r.morse_index_window << ',' << r.cluster << '\n';
  }
  return os.str();
}

}  // namespace critspec
