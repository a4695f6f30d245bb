#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "critspec/clifford.hpp"
#include "critspec/hamiltonian.hpp"
#include "critspec/reduction.hpp"
#include "critspec/solver.hpp"
#include "critspec/su2_spectral.hpp"
#include "critspec/torus_spectral.hpp"

namespace critspec {

using Json = nlohmann::ordered_json;

// {"n", "r", "J": [row-major n*n reals per structure], "hyperkahler"}.
// Reading checks shapes only; the algebra is left to check_invariants.
Json module_to_json(const CliffordModule& module);
CliffordModule module_from_json(const Json& j);

// {"time": {...}, "nu": [ints], "amp", "phase"} with time one of
// {"type": "const"}, {"type": "torus", "m", "phase"},
// {"type": "su2", "k", "a", "b", "part": "re" | "im"}.
Json term_to_json(const HamiltonianTerm& term);
HamiltonianTerm term_from_json(const Json& j);
Json terms_to_json(const std::vector<HamiltonianTerm>& terms);
std::vector<HamiltonianTerm> terms_from_json(const Json& j);

// Torus: {"mean", "coeffs": [{"k": [ints], "v"}], "N"}.
// SU(2): {"mean", "coeffs": [{"k", "a", "b", "v"}], "N"}.
Json field_to_json(const TorusField& f);
TorusField torus_field_from_json(const Json& j, std::shared_ptr<const CliffordModule> module);
Json field_to_json(const SU2Field& f);
SU2Field su2_field_from_json(const Json& j, std::shared_ptr<const CliffordModule> module);
// A problem's field in the same schema, N being the tail band.
Json field_to_json(const ReducedProblem& problem, const SpectralField& f);

Json record_to_json(const ReducedProblem& problem, const CriticalPointRecord& record);
Json report_to_json(const CountReport& report);
Json diagnostics_to_json(const SearchDiagnostics& d);
Json refinement_to_json(const RefinementResult& r);

// One row per point: action, residual, min |eig|, nondegenerate, index window.
std::string summary_csv(const std::vector<CriticalPointRecord>& records);

Eigen::VectorXd vector_from_json(const Json& j, const char* what);
Eigen::VectorXi ivector_from_json(const Json& j, const char* what);
Json to_json_array(const Eigen::VectorXd& v);
Json to_json_array(const Eigen::VectorXi& v);

}  // namespace critspec
