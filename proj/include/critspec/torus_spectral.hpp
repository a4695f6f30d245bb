#pragma once

#include <map>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "critspec/clifford.hpp"

namespace critspec {

namespace detail {
class BatchedFft;
}

using Frequency = Eigen::VectorXi;

// k != 0 whose first non-zero component is positive.
bool is_canonical(const Frequency& k);

// Frequencies k in Z^r with lo <= |k| < hi and k != 0, ordered by |k|^2 and
// then lexicographically. Both k and -k are present, so every degree prefix
// is a union of mode pairs.
class TorusModes {
 public:
  TorusModes(int r, int lo, int hi);

  int r() const { return r_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  int size() const { return static_cast<int>(modes_.size()); }

  const Frequency& k(int m) const { return modes_[m]; }
  double degree(int m) const { return degrees_[m]; }
  int partner(int m) const { return partners_[m]; }
  bool canonical(int m) const { return canonical_[m]; }
  // Index of k, or -1.
  int find(const Frequency& k) const;
  // Number of leading modes with |k| < N.
  int count_below(int N) const;

 private:
  int r_, lo_, hi_;
  std::vector<Frequency> modes_;
  std::vector<double> degrees_;
  std::vector<int> partners_;
  std::vector<bool> canonical_;
  std::map<std::vector<int>, int> index_;
};

// The 2n x 2n action of the Dirac operator on F_{k*} = V (+) V, first slot
// for -k, second for +k:
//   2 pi [[k_r I, -J S], [J S, -k_r I]],  J = J_r,  S = sum_{l<r} k_l J_l.
Eigen::MatrixXd dirac_block(const CliffordModule& module, const Frequency& k);
// A / (4 pi^2 |k|^2).
Eigen::MatrixXd dirac_block_inverse(const CliffordModule& module, const Frequency& k);

struct ModePair {
  Frequency k;
  Eigen::MatrixXd block;
};

ModePair make_mode_pair(const CliffordModule& module, const Frequency& k);

// Blockwise Dirac action on coefficient matrices (n x modes.size()).
class TorusDirac {
 public:
  TorusDirac(std::shared_ptr<const CliffordModule> module, std::shared_ptr<const TorusModes> modes);

  Eigen::MatrixXd apply(const Eigen::MatrixXd& coeffs) const;
  Eigen::MatrixXd apply_inverse(const Eigen::MatrixXd& coeffs) const;

 private:
  Eigen::MatrixXd apply_scaled(const Eigen::MatrixXd& coeffs, bool inverse) const;

  std::shared_ptr<const CliffordModule> module_;
  std::shared_ptr<const TorusModes> modes_;
  std::vector<Eigen::MatrixXd> js_;  // J_r sum_{l<r} k_l J_l for canonical modes
};

// Truncated spectral representation of a map T^r -> W:
//   f(t) = mean + sum_k exp(2 pi k.t J_r) f_k.
// Coefficients are stored per frequency as columns of an n x modes matrix.
class TorusField {
 public:
  TorusField(std::shared_ptr<const CliffordModule> module, std::shared_ptr<const TorusModes> modes);
  TorusField(std::shared_ptr<const CliffordModule> module, std::shared_ptr<const TorusModes> modes,
             Eigen::VectorXd mean, Eigen::MatrixXd coeffs);
  // Zero field with modes 0 < |k| < N.
  static TorusField zero(std::shared_ptr<const CliffordModule> module, int N);

  const CliffordModule& module() const { return *module_; }
  const std::shared_ptr<const CliffordModule>& module_ptr() const { return module_; }
  const TorusModes& modes() const { return *modes_; }
  const std::shared_ptr<const TorusModes>& modes_ptr() const { return modes_; }
  int r() const { return modes_->r(); }
  int N() const { return modes_->hi(); }

  const Eigen::VectorXd& mean() const { return mean_; }
  Eigen::VectorXd& mean() { return mean_; }
  const Eigen::MatrixXd& coeffs() const { return coeffs_; }
  Eigen::MatrixXd& coeffs() { return coeffs_; }

  Eigen::VectorXd coeff(const Frequency& k) const;
  void set_coeff(const Frequency& k, const Eigen::VectorXd& v);

  // Pointwise value exp(2 pi k.t J) summed directly, without a transform.
  Eigen::VectorXd value_at(const Eigen::VectorXd& t) const;

 private:
  std::shared_ptr<const CliffordModule> module_;
  std::shared_ptr<const TorusModes> modes_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd coeffs_;
};

TorusField dirac_apply(const TorusField& field);
// The field's modes must start at |k| >= N; its mean is dropped.
TorusField dirac_inverse_tail(const TorusField& tail, int N);
double l2_inner(const TorusField& a, const TorusField& b);

// Uniform G^r grid t_j = j / G (row-major, first axis slowest) with FFT-based
// synthesis and analysis in the mode basis exp(2 pi k.t J).
class TorusGrid {
 public:
  TorusGrid(int r, int G, int n);

  int r() const { return r_; }
  int size() const { return G_; }
  int points() const { return points_; }
  Eigen::VectorXd point(int j) const;

  // n x points values.
  Eigen::MatrixXd synthesize(const Eigen::VectorXd& mean, const Eigen::MatrixXd& coeffs, const TorusModes& modes,
                             const Eigen::MatrixXd& J) const;
  // Discrete L^2 projection onto the modes (exact for band-limited input
  // when G >= 2 hi - 1).
  void analyze(const Eigen::MatrixXd& values, const TorusModes& modes, const Eigen::MatrixXd& J,
               Eigen::VectorXd& mean, Eigen::MatrixXd& coeffs) const;

 private:
  int flat_index(const Frequency& k) const;

  int r_, G_, n_, points_;
  std::shared_ptr<const detail::BatchedFft> fft_;
};

// Smallest integer >= n whose only prime factors are 2, 3 and 5.
int fft_size_at_least(int n);

Eigen::MatrixXd synthesize(const TorusField& field, int G);
// Warns when G < 2N - 1.
TorusField analyze(const Eigen::MatrixXd& values, int G, std::shared_ptr<const CliffordModule> module, int N);

}  // namespace critspec
