#pragma once

#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "critspec/su2_harmonics.hpp"

namespace critspec {

enum class TimeDomain { Torus, SU2 };

const char* to_string(TimeDomain domain);

// A point of the time manifold: t in R^r (read mod Z^r) or an element of SU(2).
using TimePoint = std::variant<Eigen::VectorXd, SU2Point>;

// The lattice Gamma = B Z^n in V; W = V / Gamma.
class Lattice {
 public:
  explicit Lattice(Eigen::MatrixXd basis);
  static Lattice standard(int n) { return Lattice(Eigen::MatrixXd::Identity(n, n)); }

  int dim() const { return static_cast<int>(basis_.rows()); }
  const Eigen::MatrixXd& basis() const { return basis_; }

  // Representative in the fundamental cell B [0,1)^n.
  Eigen::VectorXd reduce(const Eigen::VectorXd& w) const;
  // Representative of a difference with lattice coordinates in [-1/2, 1/2).
  Eigen::VectorXd wrap(const Eigen::VectorXd& d) const;
  // Frequency in V of the dual-lattice vector nu: B^{-T} nu.
  Eigen::VectorXd dual(const Eigen::VectorXi& nu) const;

 private:
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd inverse_;
};

struct TimeFactor {
  enum class Kind { Constant, Torus, SU2 };

  Kind kind = Kind::Constant;
  // Torus: cos(2 pi m.t + phase).
  Eigen::VectorXi m;
  double phase = 0.0;
  // SU(2): real or imaginary part of matrix_coeff(k, a, b, x).
  int k = 0;
  int a = 0;
  int b = 0;
  bool imaginary = false;

  double eval(const TimePoint& t) const;
  // Time band: |m| (rounded up) for the torus, k for SU(2).
  int band() const;
};

// amplitude * T(t) * cos(2 pi nu^* . w + phase), with nu^* = B^{-T} nu.
struct HamiltonianTerm {
  TimeFactor time;
  Eigen::VectorXi nu;
  double amplitude = 0.0;
  double phase = 0.0;
};

class TrigHamiltonian {
 public:
  TrigHamiltonian(int target_dim, TimeDomain domain, std::vector<HamiltonianTerm> terms,
                  Lattice lattice);
  TrigHamiltonian(int target_dim, TimeDomain domain, std::vector<HamiltonianTerm> terms)
      : TrigHamiltonian(target_dim, domain, std::move(terms), Lattice::standard(target_dim)) {}

  int target_dim() const { return dim_; }
  TimeDomain domain() const { return domain_; }
  const std::vector<HamiltonianTerm>& terms() const { return terms_; }
  const Lattice& lattice() const { return lattice_; }

  double eval(const TimePoint& t, const Eigen::VectorXd& w) const;
  Eigen::VectorXd grad_w(const TimePoint& t, const Eigen::VectorXd& w) const;
  Eigen::MatrixXd hess_w(const TimePoint& t, const Eigen::VectorXd& w) const;

  // Time factors of every term at t. The *_factors variants take them
  // precomputed, which is how quadrature loops use the Hamiltonian.
  Eigen::VectorXd time_factors(const TimePoint& t) const;
  double eval_factors(const Eigen::VectorXd& factors, const Eigen::Ref<const Eigen::VectorXd>& w) const;
  void add_grad_factors(const Eigen::VectorXd& factors, const Eigen::Ref<const Eigen::VectorXd>& w,
                        Eigen::Ref<Eigen::VectorXd> out, double scale = 1.0) const;

  // Sum over terms of |amplitude| (2 pi |nu^*|)^2 sup|T|: bounds the operator
  // norm of hess_w uniformly in (t, w).
  double hess_sup_bound() const;
  // Sum over terms of |amplitude| 2 pi |nu^*|: bounds |grad_w|.
  double grad_sup_bound() const;
  int time_band() const;
  bool time_independent() const;

 private:
  void check_time(const TimePoint& t) const;

  int dim_;
  TimeDomain domain_;
  std::vector<HamiltonianTerm> terms_;
  Lattice lattice_;
  std::vector<Eigen::VectorXd> frequencies_;
};

// Smallest N >= 1 with hess_sup_bound / (2 pi N) <= rho (torus) or
// hess_sup_bound / N <= rho (SU(2)).
int min_truncation(const TrigHamiltonian& H, TimeDomain domain, double rho);

// hess_sup_bound / (2 pi N) or hess_sup_bound / N.
double contraction_factor(const TrigHamiltonian& H, TimeDomain domain, int N);

}  // namespace critspec
