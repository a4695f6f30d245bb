#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "critspec/clifford.hpp"
#include "critspec/discretization.hpp"
#include "critspec/hamiltonian.hpp"

namespace critspec {

struct ReductionOptions {
  double fixed_point_tol = 1e-12;
  int max_fixed_point_iters = 200;
  // Working tail band N_tail; <= 0 selects 2N + time band of H.
  int tail_band = 0;
  // Torus: grid points per axis. SU(2): quadrature band. <= 0 selects
  // max(2 N_tail - 1, 4 (N + b)) (torus, rounded up to an FFT size) or
  // max(2 (N_tail - 1), 4 (N + b)) (SU(2)), b the time band of H.
  int quadrature = 0;
};

// A map M -> V in the problem's mode basis: the mean plus an n x mode_count
// coefficient matrix over all modes below N_tail.
struct SpectralField {
  Eigen::VectorXd mean;
  Eigen::MatrixXd coeffs;
};

// Conley-Zehnder reduction of the action
//   A_H(f) = 1/2 <Dirac f, f> - int_M H(t, f(t)) dt
// onto E_N = W x F_N. Reduced coordinates are x = (mean, vec(C_low)) with
// C_low the n x low_count coefficients of the modes below N.
class ReducedProblem {
 public:
  // Throws ContractionViolated when hess_sup_bound / (2 pi N) (torus) or
  // hess_sup_bound / N (SU(2)) is not below 1.
  ReducedProblem(std::shared_ptr<const CliffordModule> module, TrigHamiltonian H, int N,
                 ReductionOptions options = {});

  TimeDomain domain() const { return H_.domain(); }
  const CliffordModule& module() const { return *module_; }
  const std::shared_ptr<const CliffordModule>& module_ptr() const { return module_; }
  const TrigHamiltonian& hamiltonian() const { return H_; }
  const Lattice& lattice() const { return H_.lattice(); }
  const Discretization& discretization() const { return *disc_; }
  const ReductionOptions& options() const { return options_; }

  int N() const { return N_; }
  int tail_band() const { return N_tail_; }
  int quadrature() const { return options_.quadrature; }
  int n() const { return module_->dim(); }
  int low_count() const { return low_; }
  int tail_count() const { return disc_->mode_count() - low_; }
  int dim() const { return n() * (1 + low_); }
  double contraction() const { return contraction_; }

  Eigen::VectorXd mean_of(const Eigen::VectorXd& x) const { return x.head(n()); }
  Eigen::MatrixXd low_of(const Eigen::VectorXd& x) const;
  Eigen::VectorXd join(const Eigen::VectorXd& mean, const Eigen::MatrixXd& low) const;
  // Reduce the mean modulo the lattice.
  Eigen::VectorXd normalize(const Eigen::VectorXd& x) const;
  SpectralField assemble(const Eigen::VectorXd& x, const Eigen::MatrixXd& tail) const;

  // Values of H and grad_w H at the quadrature nodes for the given samples.
  Eigen::MatrixXd grad_at_nodes(const Eigen::MatrixXd& values) const;
  double integral_at_nodes(const Eigen::MatrixXd& values) const;

 private:
  std::shared_ptr<const CliffordModule> module_;
  TrigHamiltonian H_;
  int N_;
  int N_tail_;
  int low_;
  ReductionOptions options_;
  double contraction_;
  std::shared_ptr<const Discretization> disc_;
  std::vector<Eigen::VectorXd> factors_;
  std::vector<double> weights_;
};

struct FiberSolution {
  Eigen::MatrixXd tail;  // n x tail_count
  int iterations = 0;
  double max_step_ratio = 0.0;
  double discarded_norm = 0.0;
};

// Picard iteration h <- Dirac^{-1} P_N^perp grad H(g + h) within the tail
// band. Starts from h0 = 0 unless a warm start of the right shape is given.
FiberSolution solve_fiber(const ReducedProblem& problem, const Eigen::VectorXd& x,
                          const Eigen::MatrixXd* warm_start = nullptr);

double action_quadratic(const ReducedProblem& problem, const SpectralField& f);
double action_total(const ReducedProblem& problem, const SpectralField& f);

struct ReducedEvaluation {
  FiberSolution fiber;
  double value = 0.0;
  Eigen::VectorXd grad;
};

// Phi(g) and grad Phi(g) = Dirac g - P_N grad H(g + h(g)) with one fiber solve.
ReducedEvaluation evaluate_reduced(const ReducedProblem& problem, const Eigen::VectorXd& x,
                                   const Eigen::MatrixXd* warm_start = nullptr);
double generating_value(const ReducedProblem& problem, const Eigen::VectorXd& x);
Eigen::VectorXd generating_grad(const ReducedProblem& problem, const Eigen::VectorXd& x);
// Central differences of the gradient, symmetrized.
Eigen::MatrixXd generating_hess(const ReducedProblem& problem, const Eigen::VectorXd& x, double step = 1e-5,
                                const Eigen::MatrixXd* warm_start = nullptr);

// L^2 norm of P_{N_tail}(Dirac f - grad H(f)) plus the part of grad H(f)
// beyond the tail band as seen by the quadrature.
double residual(const ReducedProblem& problem, const SpectralField& f);

}  // namespace critspec
