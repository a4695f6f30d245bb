#include "critspec/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "critspec/errors.hpp"

namespace critspec {

namespace {

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

double cell_scale(const ReducedProblem& p) { return p.lattice().basis().colwise().norm().minCoeff(); }

int default_seed_count(int n) { return 2 * (1 << n); }

// Gradient descent on 1/2 |grad Phi|^2 with backtracking; used when the
// Newton direction stops reducing the merit.
bool descend(const ReducedProblem& p, Eigen::VectorXd& x, ReducedEvaluation& ev, const Eigen::MatrixXd& hess,
             double start) {
  const Eigen::VectorXd d = -(hess * ev.grad);
  const double dn = d.norm();
  if (!(dn > 0.0)) return false;
  const double g0 = ev.grad.norm();
  for (double len = start; len > 1e-14 * start; len *= 0.5) {
    const Eigen::VectorXd trial_x = x + (len / dn) * d;
    try {
      auto trial = evaluate_reduced(p, trial_x, &ev.fiber.tail);
      if (trial.grad.norm() < g0) {
        x = p.normalize(trial_x);
        ev = std::move(trial);
        return true;
      }
    } catch (const Error&) {
    }
  }
  return false;
}

CriticalPointRecord make_record(const ReducedProblem& p, const NewtonResult& nr, int seed) {
  CriticalPointRecord rec;
  rec.g = nr.x;
  rec.f = p.assemble(nr.x, nr.tail);
  rec.action = nr.value;
  rec.residual = residual(p, rec.f);
  rec.grad_norm = nr.grad_norm;
  rec.basin_seed = seed;
  rec.newton_steps = nr.steps;
  return rec;
}

Eigen::VectorXd coordinate_difference(const ReducedProblem& p, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd d = b - a;
  d.head(p.n()) = p.lattice().wrap(d.head(p.n()));
  return d;
}

bool lexicographic_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

struct DisjointSets {
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> parent;
};

}  // namespace

std::vector<Eigen::VectorXd> make_seeds(const ReducedProblem& problem, const SearchOptions& options, int first,
                                        int count) {
  const int n = problem.n();
  const int corners = 1 << n;
  std::mt19937_64 rng(options.rng_seed);
  std::uniform_real_distribution<double> shift(0.0, 0.5);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<Eigen::VectorXd> seeds;
  Eigen::VectorXd u(n);
  for (int i = 0; i < first + count; ++i) {
    if (i % corners == 0)
      for (auto& c : u) c = shift(rng);
    Eigen::VectorXd x(problem.dim());
    Eigen::VectorXd lat = u;
    for (int j = 0; j < n; ++j)
      if ((i % corners) >> j & 1) lat[j] += 0.5;
    x.head(n) = problem.lattice().basis() * lat;
    for (Eigen::Index j = n; j < x.size(); ++j) x[j] = options.fiber_perturbation * noise(rng);
    if (i >= first) seeds.push_back(problem.normalize(x));
  }
  return seeds;
}

NewtonResult newton_search(const ReducedProblem& problem, const Eigen::VectorXd& x0, const SearchOptions& options,
                           const Eigen::MatrixXd* warm_tail) {
  NewtonResult out;
  Eigen::VectorXd x = problem.normalize(x0);
  ReducedEvaluation ev = evaluate_reduced(problem, x, warm_tail);
  double gn = ev.grad.norm();

  const double cell = cell_scale(problem);
  const double initial_radius = 0.05 * cell, max_radius = 0.25 * cell;
  double radius = initial_radius;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  Eigen::MatrixXd hess;
  bool have = false, fresh = false;

  int step = 0;
  for (; step < options.max_newton_steps && !(gn < options.grad_tol); ++step) {
    if (!have) {
      hess = generating_hess(problem, x, options.hessian_step, &ev.fiber.tail);
      es.compute(hess);
      have = fresh = true;
    }
    const Eigen::VectorXd& lam = es.eigenvalues();
    const double mu = 1e-14 * lam.cwiseAbs2().maxCoeff();
    Eigen::VectorXd coef = es.eigenvectors().transpose() * ev.grad;
    for (Eigen::Index i = 0; i < coef.size(); ++i) {
      const double den = lam[i] * lam[i] + mu;
      coef[i] = den > 0.0 ? -lam[i] / den * coef[i] : 0.0;
    }
    Eigen::VectorXd delta = es.eigenvectors() * coef;
    if (delta.norm() > radius) delta *= radius / delta.norm();

    bool accepted = false;
    try {
      auto trial = evaluate_reduced(problem, x + delta, &ev.fiber.tail);
      const double tn = trial.grad.norm();
      if (tn < gn) {
        accepted = true;
        const double ratio = tn / gn;
        x = problem.normalize(x + delta);
        ev = std::move(trial);
        gn = tn;
        if (ratio < 0.5) radius = std::min(2.0 * radius, max_radius);
        fresh = false;
        // keep the Hessian while Newton converges fast
        if (ratio > 0.25) have = false;
      }
    } catch (const Error&) {
    }
    if (accepted) continue;
    if (!fresh) {
      have = false;
      continue;
    }
    radius *= 0.25;
    if (radius < 1e-12 * cell) {
      if (!descend(problem, x, ev, hess, initial_radius)) break;
      gn = ev.grad.norm();
      radius = initial_radius;
      have = false;
    }
  }
  out.x = x;
  out.tail = ev.fiber.tail;
  out.value = ev.value;
  out.grad_norm = gn;
  out.steps = step;
  out.converged = gn < options.grad_tol;
  return out;
}

CriticalPointRecord classify(const ReducedProblem& problem, CriticalPointRecord record, const SearchOptions& options) {
  const Eigen::MatrixXd tail = record.f.coeffs.rightCols(problem.tail_count());
  const Eigen::MatrixXd hess = generating_hess(problem, record.g, options.hessian_step, &tail);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess);
  record.eigenvalues = es.eigenvalues();
  record.hessian_min_abs_eigenvalue = es.eigenvalues().cwiseAbs().minCoeff();
  record.nondegenerate = record.hessian_min_abs_eigenvalue > options.degeneracy_tol;
  record.morse_index_window = static_cast<int>((es.eigenvalues().array() < -options.degeneracy_tol).count());
  std::vector<int> null;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()[i]) <= options.degeneracy_tol) null.push_back(static_cast<int>(i));
  record.null_directions.resize(problem.dim(), static_cast<Eigen::Index>(null.size()));
  for (std::size_t j = 0; j < null.size(); ++j) record.null_directions.col(j) = es.eigenvectors().col(null[j]);
  return record;
}

double field_distance(const ReducedProblem& problem, const SpectralField& a, const SpectralField& b) {
  return problem.lattice().wrap(b.mean - a.mean).norm() + (b.coeffs - a.coeffs).norm();
}

int cluster_records(const ReducedProblem& problem, std::vector<CriticalPointRecord>& records, double radius) {
  const int count = static_cast<int>(records.size());
  DisjointSets sets(count);
  for (int i = 0; i < count; ++i)
    for (int j = i + 1; j < count; ++j) {
      Eigen::VectorXd d = coordinate_difference(problem, records[i].g, records[j].g);
      const auto& Ni = records[i].null_directions;
      const auto& Nj = records[j].null_directions;
      if (Ni.cols() + Nj.cols() > 0) {
        Eigen::MatrixXd basis(problem.dim(), Ni.cols() + Nj.cols());
        basis << Ni, Nj;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
        const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(problem.dim(), qr.rank());
        d -= Q * (Q.transpose() * d);
      }
      if (d.norm() < radius) sets.unite(i, j);
    }
  std::vector<int> label(count, -1);
  int clusters = 0;
  for (int i = 0; i < count; ++i) {
    const int root = sets.find(i);
    if (label[root] < 0) label[root] = clusters++;
    records[i].cluster = label[root];
  }
  return clusters;
}

CountReport count_report(const std::vector<CriticalPointRecord>& records, int n) {
  CountReport rep;
  rep.records = static_cast<int>(records.size());
  std::vector<int> ids;
  int singletons = 0;
  for (const auto& r : records) {
    if (r.cluster < 0)
      ++singletons;
    else
      ids.push_back(r.cluster);
  }
  std::sort(ids.begin(), ids.end());
  rep.found = singletons + static_cast<int>(std::unique(ids.begin(), ids.end()) - ids.begin());
  rep.sb_bound = 1 << n;
  rep.cl_bound = n + 1;
  rep.all_nondegenerate =
      !records.empty() && std::all_of(records.begin(), records.end(), [](const auto& r) { return r.nondegenerate; });
  rep.sb_asserted = rep.all_nondegenerate;
  rep.satisfied_sb = rep.found >= rep.sb_bound;
  rep.satisfied_cl = rep.found >= rep.cl_bound;
  const bool met = rep.sb_asserted ? rep.satisfied_sb : rep.satisfied_cl;
  rep.status = met ? "found >= bound" : "found < bound (search incomplete or bound violated)";
  if (!met)
    warn("found " + std::to_string(rep.found) + " critical points, below the " +
         (rep.sb_asserted ? "Betti-sum bound " + std::to_string(rep.sb_bound)
                          : "cup-length bound " + std::to_string(rep.cl_bound)) +
         "; search incomplete or bound violated");
  return rep;
}

SearchResult find_critical_points(const ReducedProblem& problem, const SearchOptions& options) {
  SearchResult result;
  const int n = problem.n();
  const int per_pass = options.seed_count > 0 ? options.seed_count : default_seed_count(n);
  std::vector<CriticalPointRecord> candidates;

  auto run_pass = [&](int first, int count) {
    const auto seeds = make_seeds(problem, options, first, count);
    std::vector<std::optional<CriticalPointRecord>> found(count);
    std::vector<int> status(count, 0);  // 1 converged, 2 not converged, 3 fiber failure, 4 residual
    parallel_for(count, options.threads, [&](int i) {
      try {
        const NewtonResult nr = newton_search(problem, seeds[i], options);
        if (!nr.converged) {
          status[i] = 2;
          return;
        }
        auto rec = make_record(problem, nr, first + i);
        if (!(rec.residual < options.residual_tol)) {
          status[i] = 4;
          return;
        }
        status[i] = 1;
        found[i] = std::move(rec);
      } catch (const Error&) {
        status[i] = 3;
      }
    });
    result.diagnostics.seeds += count;
    for (int i = 0; i < count; ++i) {
      result.diagnostics.converged += status[i] == 1 || status[i] == 4;
      result.diagnostics.not_converged += status[i] == 2;
      result.diagnostics.fiber_failures += status[i] == 3;
      result.diagnostics.residual_rejected += status[i] == 4;
      if (found[i]) candidates.push_back(std::move(*found[i]));
    }
  };

  auto merge = [&] {
    std::vector<CriticalPointRecord> sorted = candidates;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
      if (a.action != b.action) return a.action < b.action;
      return lexicographic_less(a.g, b.g);
    });
    std::vector<CriticalPointRecord> kept;
    int duplicates = 0;
    for (auto& c : sorted) {
      auto it = std::find_if(kept.begin(), kept.end(), [&](const auto& k) {
        return field_distance(problem, k.f, c.f) < options.dedup_radius;
      });
      if (it == kept.end()) {
        kept.push_back(std::move(c));
        continue;
      }
      ++duplicates;
      if (c.residual < it->residual) *it = std::move(c);
    }
    result.diagnostics.duplicates = duplicates;
    parallel_for(static_cast<int>(kept.size()), options.threads,
                 [&](int i) { kept[i] = classify(problem, std::move(kept[i]), options); });
    result.clusters = cluster_records(problem, kept, options.dedup_radius);
    result.records = std::move(kept);
  };

  run_pass(0, per_pass);
  merge();
  if (options.escalate) {
    const bool all_nondegenerate = !result.records.empty() &&
                                   std::all_of(result.records.begin(), result.records.end(),
                                               [](const auto& r) { return r.nondegenerate; });
    const int bound = all_nondegenerate ? (1 << n) : n + 1;
    if (result.clusters < bound) {
      result.diagnostics.escalations = 1;
      run_pass(per_pass, per_pass);
      merge();
    }
  }
  return result;
}

SpectralField embed_field(const ReducedProblem& from, const SpectralField& f, const ReducedProblem& to) {
  SpectralField e{f.mean, Eigen::MatrixXd::Zero(to.n(), to.discretization().mode_count())};
  const auto& src = from.discretization();
  for (int m = 0; m < src.mode_count(); ++m) {
    const int j = to.discretization().find(src.mode_key(m));
    if (j >= 0) e.coeffs.col(j) = f.coeffs.col(m);
  }
  return e;
}

RefinementResult refine_and_verify(const ReducedProblem& problem, const CriticalPointRecord& record, int N_plus,
                                   const SearchOptions& options) {
  if (N_plus < 0) throw Error(ErrorKind::InvalidRequest, "N_plus must be non-negative");
  ReductionOptions ro = problem.options();
  ro.tail_band = 0;
  ro.quadrature = 0;
  ReducedProblem fine(problem.module_ptr(), problem.hamiltonian(), problem.N() + N_plus, ro);

  const SpectralField e = embed_field(problem, record.f, fine);
  const Eigen::VectorXd x0 = fine.join(e.mean, e.coeffs.leftCols(fine.low_count()));
  const Eigen::MatrixXd warm = e.coeffs.rightCols(fine.tail_count());
  NewtonResult nr;
  try {
    nr = newton_search(fine, x0, options, &warm);
  } catch (const Error& err) {
    throw Error(ErrorKind::RefinementDiverged, std::string("refinement failed: ") + err.what());
  }
  if (!nr.converged)
    throw Error(ErrorKind::RefinementDiverged,
                "Newton did not converge at N = " + std::to_string(fine.N()) + " (|grad| = " +
                    std::to_string(nr.grad_norm) + ")");

  RefinementResult out;
  out.N = fine.N();
  out.record = classify(fine, make_record(fine, nr, record.basin_seed), options);
  out.displacement = field_distance(fine, e, out.record.f);
  out.residual_before = record.residual;
  out.residual_after = out.record.residual;
  out.accepted = out.displacement < 1e-5 && out.residual_after <= out.residual_before + 1e-7;
  return out;
}

}  // namespace critspec
