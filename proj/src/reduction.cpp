#include "critspec/reduction.hpp"

#include <cmath>

#include "critspec/errors.hpp"
#include "critspec/torus_spectral.hpp"

namespace critspec {

ReducedProblem::ReducedProblem(std::shared_ptr<const CliffordModule> module, TrigHamiltonian H, int N,
                               ReductionOptions options)
    : module_(std::move(module)), H_(std::move(H)), N_(N), options_(options) {
  if (N < 1) throw Error(ErrorKind::InvalidRequest, "truncation N must be positive");
  if (H_.target_dim() != module_->dim())
    throw Error(ErrorKind::DimensionMismatch, "Hamiltonian and module have different dimensions");
  if (domain() == TimeDomain::SU2 && !module_->hyperkahler())
    throw Error(ErrorKind::NotHyperkahler, "SU(2) time needs a hyperkahler module");
  contraction_ = contraction_factor(H_, domain(), N);
  if (!(contraction_ < 1.0))
    throw Error(ErrorKind::ContractionViolated,
                "contraction factor " + std::to_string(contraction_) + " at N = " + std::to_string(N) + " is not below 1");
  if (options_.fixed_point_tol <= 0.0 || options_.max_fixed_point_iters < 1)
    throw Error(ErrorKind::InvalidRequest, "fixed-point tolerance and iteration cap must be positive");

  const int b = H_.time_band();
  N_tail_ = options_.tail_band > 0 ? options_.tail_band : 2 * N + b;
  if (N_tail_ <= N) throw Error(ErrorKind::InvalidRequest, "tail band must exceed N");
  if (domain() == TimeDomain::Torus) {
    if (options_.quadrature <= 0) options_.quadrature = fft_size_at_least(std::max(2 * N_tail_ - 1, 4 * (N + b)));
    disc_ = make_torus_discretization(module_, N_tail_, options_.quadrature);
  } else {
    if (options_.quadrature <= 0) options_.quadrature = std::max(2 * (N_tail_ - 1), 4 * (N + b));
    disc_ = make_su2_discretization(module_, N_tail_, options_.quadrature);
  }
  options_.tail_band = N_tail_;
  low_ = disc_->count_below(N);
  for (int j = 0; j < disc_->node_count(); ++j) {
    factors_.push_back(H_.time_factors(disc_->node(j)));
    weights_.push_back(disc_->weight(j));
  }
}

Eigen::MatrixXd ReducedProblem::low_of(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) throw Error(ErrorKind::DimensionMismatch, "reduced coordinates have the wrong length");
  return Eigen::Map<const Eigen::MatrixXd>(x.data() + n(), n(), low_);
}

Eigen::VectorXd ReducedProblem::join(const Eigen::VectorXd& mean, const Eigen::MatrixXd& low) const {
  if (mean.size() != n() || low.rows() != n() || low.cols() != low_)
    throw Error(ErrorKind::DimensionMismatch, "mean or low coefficients have the wrong shape");
  Eigen::VectorXd x(dim());
  x.head(n()) = mean;
  x.tail(n() * low_) = Eigen::Map<const Eigen::VectorXd>(low.data(), low.size());
  return x;
}

Eigen::VectorXd ReducedProblem::normalize(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = x;
  y.head(n()) = lattice().reduce(x.head(n()));
  return y;
}

SpectralField ReducedProblem::assemble(const Eigen::VectorXd& x, const Eigen::MatrixXd& tail) const {
  if (tail.rows() != n() || tail.cols() != tail_count())
    throw Error(ErrorKind::DimensionMismatch, "tail coefficients have the wrong shape");
  SpectralField f;
  f.mean = mean_of(x);
  f.coeffs.resize(n(), disc_->mode_count());
  f.coeffs.leftCols(low_) = low_of(x);
  f.coeffs.rightCols(tail_count()) = tail;
  return f;
}

Eigen::MatrixXd ReducedProblem::grad_at_nodes(const Eigen::MatrixXd& values) const {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(values.rows(), values.cols());
  for (Eigen::Index j = 0; j < values.cols(); ++j) H_.add_grad_factors(factors_[j], values.col(j), g.col(j));
  return g;
}

double ReducedProblem::integral_at_nodes(const Eigen::MatrixXd& values) const {
  double s = 0.0;
  for (Eigen::Index j = 0; j < values.cols(); ++j) s += weights_[j] * H_.eval_factors(factors_[j], values.col(j));
  return s;
}

namespace {

struct Projection {
  Eigen::VectorXd mean;
  Eigen::MatrixXd coeffs;
  double discarded = 0.0;
};

// Analysis of grad H(f) at the nodes, with the quadrature norm of what the
// modes below N_tail miss.
Projection project_gradient(const ReducedProblem& p, const SpectralField& f) {
  const auto& disc = p.discretization();
  const Eigen::MatrixXd values = disc.synthesize(f.mean, f.coeffs);
  const Eigen::MatrixXd grads = p.grad_at_nodes(values);
  Projection out;
  disc.analyze(grads, out.mean, out.coeffs);
  double total = 0.0;
  for (Eigen::Index j = 0; j < grads.cols(); ++j) total += disc.weight(static_cast<int>(j)) * grads.col(j).squaredNorm();
  const double captured = out.mean.squaredNorm() + out.coeffs.squaredNorm();
  out.discarded = std::sqrt(std::max(total - captured, 0.0));
  return out;
}

}  // namespace

FiberSolution solve_fiber(const ReducedProblem& problem, const Eigen::VectorXd& x, const Eigen::MatrixXd* warm_start) {
  const int n = problem.n(), tail = problem.tail_count();
  const auto& disc = problem.discretization();
  const auto& opt = problem.options();
  FiberSolution sol;
  sol.tail = Eigen::MatrixXd::Zero(n, tail);
  if (warm_start && warm_start->rows() == n && warm_start->cols() == tail) sol.tail = *warm_start;
  if (tail == 0) return sol;

  SpectralField f = problem.assemble(x, sol.tail);
  double previous_step = -1.0;
  for (int it = 1; it <= opt.max_fixed_point_iters; ++it) {
    Projection pr = project_gradient(problem, f);
    Eigen::MatrixXd forcing = Eigen::MatrixXd::Zero(n, disc.mode_count());
    forcing.rightCols(tail) = pr.coeffs.rightCols(tail);
    const Eigen::MatrixXd next = disc.apply_dirac_inverse(forcing).rightCols(tail);
    const double step = (next - sol.tail).norm();
    sol.tail = next;
    sol.iterations = it;
    sol.discarded_norm = pr.discarded;
    f.coeffs.rightCols(tail) = next;
    // ratios of steps near the tolerance are rounding noise
    if (previous_step > 100.0 * opt.fixed_point_tol && step > 0.0) {
      const double ratio = step / previous_step;
      sol.max_step_ratio = std::max(sol.max_step_ratio, ratio);
      if (ratio >= 1.0)
        throw Error(ErrorKind::ContractionViolated, "Picard step ratio " + std::to_string(ratio) + " >= 1");
    }
    if (step < opt.fixed_point_tol) return sol;
    previous_step = step;
  }
  throw Error(ErrorKind::MaxItersExceeded,
              "fiber fixed point did not converge in " + std::to_string(opt.max_fixed_point_iters) + " iterations");
}

double action_quadratic(const ReducedProblem& problem, const SpectralField& f) {
  const Eigen::MatrixXd Df = problem.discretization().apply_dirac(f.coeffs);
  return 0.5 * (Df.array() * f.coeffs.array()).sum();
}

double action_total(const ReducedProblem& problem, const SpectralField& f) {
  const Eigen::MatrixXd values = problem.discretization().synthesize(f.mean, f.coeffs);
  return action_quadratic(problem, f) - problem.integral_at_nodes(values);
}

ReducedEvaluation evaluate_reduced(const ReducedProblem& problem, const Eigen::VectorXd& x,
                                   const Eigen::MatrixXd* warm_start) {
  ReducedEvaluation ev;
  ev.fiber = solve_fiber(problem, x, warm_start);
  const SpectralField f = problem.assemble(x, ev.fiber.tail);
  const auto& disc = problem.discretization();
  const Eigen::MatrixXd values = disc.synthesize(f.mean, f.coeffs);
  const Eigen::MatrixXd Df = disc.apply_dirac(f.coeffs);
  ev.value = 0.5 * (Df.array() * f.coeffs.array()).sum() - problem.integral_at_nodes(values);

  Eigen::VectorXd gm;
  Eigen::MatrixXd gc;
  disc.analyze(problem.grad_at_nodes(values), gm, gc);
  const int low = problem.low_count();
  ev.grad = problem.join(-gm, Df.leftCols(low) - gc.leftCols(low));
  return ev;
}

double generating_value(const ReducedProblem& problem, const Eigen::VectorXd& x) {
  return evaluate_reduced(problem, x).value;
}

Eigen::VectorXd generating_grad(const ReducedProblem& problem, const Eigen::VectorXd& x) {
  return evaluate_reduced(problem, x).grad;
}

Eigen::MatrixXd generating_hess(const ReducedProblem& problem, const Eigen::VectorXd& x, double step,
                                const Eigen::MatrixXd* warm_start) {
  const int d = problem.dim();
  Eigen::MatrixXd H(d, d);
  Eigen::MatrixXd warm;
  if (warm_start) warm = *warm_start;
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += step;
    xm[i] -= step;
    const auto ep = evaluate_reduced(problem, xp, warm_start ? &warm : nullptr);
    const auto em = evaluate_reduced(problem, xm, warm_start ? &warm : nullptr);
    H.col(i) = (ep.grad - em.grad) / (2.0 * step);
  }
  return 0.5 * (H + H.transpose());
}

double residual(const ReducedProblem& problem, const SpectralField& f) {
  const auto& disc = problem.discretization();
  if (f.mean.size() != problem.n() || f.coeffs.rows() != problem.n() || f.coeffs.cols() != disc.mode_count())
    throw Error(ErrorKind::DimensionMismatch, "field does not match the problem's mode set");
  const Projection pr = project_gradient(problem, f);
  const Eigen::MatrixXd r = disc.apply_dirac(f.coeffs) - pr.coeffs;
  return std::sqrt(pr.mean.squaredNorm() + r.squaredNorm()) + pr.discarded;
}

}  // namespace critspec
