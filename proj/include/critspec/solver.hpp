#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "critspec/reduction.hpp"

namespace critspec {

struct SearchOptions {
  int seed_count = 0;  // 0: two seeds per point of the half lattice, 2 * 2^n
  std::uint64_t rng_seed = 1;
  double grad_tol = 1e-10;
  double dedup_radius = 1e-4;
  int max_newton_steps = 60;
  double fiber_perturbation = 1e-3;
  double degeneracy_tol = 1e-6;
  double residual_tol = 1e-6;
  double hessian_step = 1e-5;
  int threads = 0;  // 0: hardware concurrency
  bool escalate = true;
};

struct CriticalPointRecord {
  Eigen::VectorXd g;  // reduced coordinates, mean in the fundamental cell
  SpectralField f;    // g + h(g)
  double action = 0.0;
  double residual = 0.0;
  double grad_norm = 0.0;
  double hessian_min_abs_eigenvalue = 0.0;
  bool nondegenerate = false;
  int morse_index_window = 0;  // negative eigenvalues of the computed block
  int basin_seed = -1;
  int newton_steps = 0;
  int cluster = -1;
  Eigen::VectorXd eigenvalues;      // ascending
  Eigen::MatrixXd null_directions;  // eigenvectors with |lambda| <= degeneracy_tol
};

struct SearchDiagnostics {
  int seeds = 0;
  int converged = 0;
  int not_converged = 0;
  int fiber_failures = 0;
  int residual_rejected = 0;
  int duplicates = 0;
  int escalations = 0;
};

struct SearchResult {
  std::vector<CriticalPointRecord> records;
  SearchDiagnostics diagnostics;
  int clusters = 0;
};

struct CountReport {
  int found = 0;  // clusters
  int records = 0;
  int sb_bound = 0;
  int cl_bound = 0;
  bool all_nondegenerate = false;
  bool satisfied_sb = false;
  bool satisfied_cl = false;
  // satisfied_sb is meaningful only when all points are nondegenerate.
  bool sb_asserted = false;
  std::string status;
};

// Seeds in reduced coordinates: B(u + c) for c in {0, 1/2}^n and a uniform
// shift u in [0, 1/2)^n per round, plus Gaussian fiber noise. Seeds
// [first, first + count) of the stream for rng_seed.
std::vector<Eigen::VectorXd> make_seeds(const ReducedProblem& problem, const SearchOptions& options, int first,
                                        int count);

struct NewtonResult {
  Eigen::VectorXd x;
  Eigen::MatrixXd tail;
  double value = 0.0;
  double grad_norm = 0.0;
  int steps = 0;
  bool converged = false;
};

// Trust-region Newton on grad Phi = 0 with the merit |grad Phi|; falls back to
// gradient descent on the merit when the trust region collapses.
NewtonResult newton_search(const ReducedProblem& problem, const Eigen::VectorXd& x0, const SearchOptions& options,
                           const Eigen::MatrixXd* warm_tail = nullptr);

CriticalPointRecord classify(const ReducedProblem& problem, CriticalPointRecord record,
                             const SearchOptions& options = {});

SearchResult find_critical_points(const ReducedProblem& problem, const SearchOptions& options = {});

// Wrapped W distance of the means plus the L^2 distance of the coefficients.
double field_distance(const ReducedProblem& problem, const SpectralField& a, const SpectralField& b);

// Union-find clustering after projecting out the null directions of either
// endpoint; sets record.cluster and returns the number of clusters.
int cluster_records(const ReducedProblem& problem, std::vector<CriticalPointRecord>& records, double radius);

// Bounds for W = T^n: SB = 2^n, CL + 1 = n + 1. Records with cluster < 0
// count as singletons.
CountReport count_report(const std::vector<CriticalPointRecord>& records, int n);

struct RefinementResult {
  CriticalPointRecord record;
  int N = 0;
  double displacement = 0.0;
  double residual_before = 0.0;
  double residual_after = 0.0;
  bool accepted = false;
};

// Newton again at truncation N + N_plus from the embedded field. Throws
// RefinementDiverged if Newton does not converge there.
RefinementResult refine_and_verify(const ReducedProblem& problem, const CriticalPointRecord& record, int N_plus,
                                   const SearchOptions& options = {});

// Coefficients of f re-indexed into another problem's mode set; modes absent
// there are dropped.
SpectralField embed_field(const ReducedProblem& from, const SpectralField& f, const ReducedProblem& to);

}  // namespace critspec
