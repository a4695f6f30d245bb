#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "critspec/clifford.hpp"
#include "critspec/su2_harmonics.hpp"

namespace critspec {

namespace detail {
class BatchedFft;
}

struct SU2Mode {
  int k;
  int a;
  int b;
};

// Modes (k, a, b) with max(lo, 1) <= k < hi and 0 <= a, b <= k, ordered by
// (k, a, b). Each F_k is present in full.
class SU2Modes {
 public:
  SU2Modes(int lo, int hi);

  int lo() const { return lo_; }
  int hi() const { return hi_; }
  int size() const { return static_cast<int>(modes_.size()); }
  const SU2Mode& mode(int m) const { return modes_[m]; }
  double degree(int m) const { return modes_[m].k; }
  // Index of (k, a, b), or -1.
  int find(int k, int a, int b) const;
  int count_below(int N) const;

 private:
  int lo_, hi_;
  std::vector<SU2Mode> modes_;
};

// Block action of the Dirac operator J_1 L_{v_1} + J_2 L_{v_2} + J_3 L_{v_3}
// on coefficient matrices (n x modes.size()), coefficient of the function
// sqrt(k+1) matrix_coeff(k, a, b, .) with i acting as J_3.
//   b = 0:  k on the whole of V.
//   b >= 1: couples (a, b) with (k-a, k-b+1) through
//           [[k-2b, c s K], [-c s K, 2b-k-2]],
//           c = 2 sqrt(b (k-b+1)), s = (-1)^(a+b),
//           K = U0 U2^T - U1 U3^T - U2 U0^T + U3 U1^T  (K^2 = -I).
class SU2Dirac {
 public:
  SU2Dirac(std::shared_ptr<const CliffordModule> module, std::shared_ptr<const SU2Modes> modes);

  Eigen::MatrixXd apply(const Eigen::MatrixXd& coeffs) const;
  Eigen::MatrixXd apply_inverse(const Eigen::MatrixXd& coeffs) const;
  const Eigen::MatrixXd& coupling() const { return K_; }

 private:
  std::shared_ptr<const CliffordModule> module_;
  std::shared_ptr<const SU2Modes> modes_;
  Eigen::MatrixXd K_;
  std::vector<int> pair_;
};

class SU2Field {
 public:
  SU2Field(std::shared_ptr<const CliffordModule> module, std::shared_ptr<const SU2Modes> modes);
  SU2Field(std::shared_ptr<const CliffordModule> module, std::shared_ptr<const SU2Modes> modes, Eigen::VectorXd mean,
           Eigen::MatrixXd coeffs);
  // Zero field with modes 0 < k < N.
  static SU2Field zero(std::shared_ptr<const CliffordModule> module, int N);

  const CliffordModule& module() const { return *module_; }
  const std::shared_ptr<const CliffordModule>& module_ptr() const { return module_; }
  const SU2Modes& modes() const { return *modes_; }
  const std::shared_ptr<const SU2Modes>& modes_ptr() const { return modes_; }
  int N() const { return modes_->hi(); }

  const Eigen::VectorXd& mean() const { return mean_; }
  Eigen::VectorXd& mean() { return mean_; }
  const Eigen::MatrixXd& coeffs() const { return coeffs_; }
  Eigen::MatrixXd& coeffs() { return coeffs_; }

  Eigen::VectorXd coeff(int k, int a, int b) const;
  void set_coeff(int k, int a, int b, const Eigen::VectorXd& v);

  // Direct evaluation from the matrix coefficients.
  Eigen::VectorXd value_at(const SU2Point& x) const;

 private:
  std::shared_ptr<const CliffordModule> module_;
  std::shared_ptr<const SU2Modes> modes_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd coeffs_;
};

SU2Field dirac_apply_su2(const SU2Field& field);
// The field's modes must start at k >= N; its mean is dropped.
SU2Field dirac_inverse_tail_su2(const SU2Field& tail, int N);
double l2_inner(const SU2Field& a, const SU2Field& b);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights);

// Product rule in Hopf coordinates alpha = cos(eta) e^{i xi1},
// beta = sin(eta) e^{i xi2}: M uniform points per angle and Gauss-Legendre in
// u = cos(2 eta), which is uniform under Haar measure. Exact for polynomials
// in the matrix coefficients of total degree <= band. Node order is
// (eta, xi1, xi2) with xi2 fastest.
class SU2Quadrature {
 public:
  // max_degree bounds the mode degrees the transforms may be asked for;
  // defaults to band.
  explicit SU2Quadrature(int band, int max_degree = -1);

  int band() const { return band_; }
  int angles() const { return M_; }
  int polar() const { return Q_; }
  int size() const { return Q_ * M_ * M_; }
  SU2Point node(int j) const;
  double weight(int j) const { return polar_weights_[j / (M_ * M_)] / (static_cast<double>(M_) * M_); }

  // n x size() values.
  Eigen::MatrixXd synthesize(const Eigen::VectorXd& mean, const Eigen::MatrixXd& coeffs, const SU2Modes& modes,
                             const Eigen::MatrixXd& J3) const;
  void analyze(const Eigen::MatrixXd& values, const SU2Modes& modes, const Eigen::MatrixXd& J3, Eigen::VectorXd& mean,
               Eigen::MatrixXd& coeffs) const;

  void write_csv(std::ostream& out) const;

 private:
  void check_degree(int hi) const;
  const detail::BatchedFft& fft(int n) const;

  int band_, M_, Q_, max_degree_;
  std::vector<double> eta_;
  std::vector<double> polar_weights_;  // Gauss-Legendre weight / 2
  // profiles_[q][k](a, b) = sqrt(k+1) d^{(k)}_{a,b}(eta_q)
  std::vector<std::vector<Eigen::MatrixXd>> profiles_;
};

// Band needed for exact analysis of fields with modes below N.
inline int su2_exact_band(int N) { return 2 * std::max(N - 1, 0); }

// Warns when the rule's band is below 2(N-1).
SU2Field haar_analyze(const Eigen::MatrixXd& values, const SU2Quadrature& rule,
                      std::shared_ptr<const CliffordModule> module, int N);
Eigen::MatrixXd haar_synthesize(const SU2Field& field, const SU2Quadrature& rule);

}  // namespace critspec
