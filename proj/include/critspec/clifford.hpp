#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace critspec {

// A real vector space V = R^n carrying r orthogonal, pairwise anti-commuting
// complex structures J_1..J_r. Immutable once constructed; the constructor
// only checks shapes, use check_invariants() / validate() for the algebra.
class CliffordModule {
 public:
  CliffordModule(std::vector<Eigen::MatrixXd> structures, bool hyperkahler);

  int dim() const { return dim_; }
  int count() const { return static_cast<int>(structures_.size()); }
  bool hyperkahler() const { return hyperkahler_; }

  // 0-based: structure(0) is J_1.
  const Eigen::MatrixXd& structure(int l) const { return structures_.at(l); }
  const std::vector<Eigen::MatrixXd>& structures() const { return structures_; }

  // Matrix of omega_l(X, Y) = -<X, J_l Y>, i.e. omega_l(X, Y) = X^T S Y.
  Eigen::MatrixXd symplectic_form(int l) const;

 private:
  int dim_;
  std::vector<Eigen::MatrixXd> structures_;
  bool hyperkahler_;
};

struct InvariantCheck {
  std::string identity;
  bool passed;
  double defect;
};

inline constexpr double kCliffordTolerance = 1e-12;

std::vector<InvariantCheck> check_invariants(const CliffordModule& module,
                                             double tol = kCliffordTolerance);

// Throws Error(InvalidRequest) naming the first violated identity.
void validate(const CliffordModule& module, double tol = kCliffordTolerance);

// Maximal number of anti-commuting complex structures on R^n:
// n = 2^(4d+c) * b with b odd, 0 <= c <= 3, gives 8d + 2^c - 1.
int radon_hurwitz_bound(int n);

// Smallest n with radon_hurwitz_bound(n) >= r.
int minimal_module_dim(int r);

// r = 1: the standard structure on R^2. r = 2, 3: left multiplication by
// i, j (, k) on the quaternions. r >= 4: Kronecker words over the real 2x2
// matrices {I, X, Z, E} chosen by a deterministic first-fit search.
// hyperkahler_requested requires r = 3; every r = 3 module is hyperkahler.
CliffordModule build_module(int r, bool hyperkahler_requested = false);

// sum_l lambda_l J_l; squares to -(sum lambda_l^2) I.
Eigen::MatrixXd pencil_symbol(const CliffordModule& module, const Eigen::VectorXd& lambda);

// Orthonormal bases (as matrix columns) of V_0, V_1 = J_1 V_0, V_2 = J_2 V_0,
// V_3 = J_3 V_0. Requires a hyperkahler module.
std::array<Eigen::MatrixXd, 4> quaternionic_split(const CliffordModule& module);

}  // namespace critspec
