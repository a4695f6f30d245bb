#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "critspec/clifford.hpp"
#include "critspec/hamiltonian.hpp"

namespace critspec {

// Spectral basis of maps M -> V below a degree `hi`, together with the
// quadrature used to evaluate nonlinear terms. Modes are ordered by degree,
// so every lower-degree band is a prefix of the coefficient matrix
// (n x mode_count). Synthesis and analysis are adjoint to each other under
// the quadrature weights.
class Discretization {
 public:
  virtual ~Discretization() = default;

  virtual TimeDomain domain() const = 0;
  virtual int dim() const = 0;
  virtual int band() const = 0;  // hi
  virtual int mode_count() const = 0;
  virtual int count_below(int N) const = 0;
  virtual double degree(int m) const = 0;
  // Torus: k. SU(2): (k, a, b).
  virtual std::vector<int> mode_key(int m) const = 0;
  virtual int find(const std::vector<int>& key) const = 0;

  virtual Eigen::MatrixXd apply_dirac(const Eigen::MatrixXd& coeffs) const = 0;
  virtual Eigen::MatrixXd apply_dirac_inverse(const Eigen::MatrixXd& coeffs) const = 0;

  virtual int node_count() const = 0;
  virtual double weight(int j) const = 0;
  virtual TimePoint node(int j) const = 0;
  // Size of the quadrature: grid points per axis (torus) or exact band (SU(2)).
  virtual int quadrature_size() const = 0;

  virtual Eigen::MatrixXd synthesize(const Eigen::VectorXd& mean, const Eigen::MatrixXd& coeffs) const = 0;
  virtual void analyze(const Eigen::MatrixXd& values, Eigen::VectorXd& mean, Eigen::MatrixXd& coeffs) const = 0;
};

// Torus T^r with modes |k| < hi on a G^r grid.
std::shared_ptr<const Discretization> make_torus_discretization(std::shared_ptr<const CliffordModule> module,
                                                                int hi, int G);
// SU(2) with modes k < hi and the Hopf product rule of the given band.
std::shared_ptr<const Discretization> make_su2_discretization(std::shared_ptr<const CliffordModule> module,
                                                              int hi, int band);

}  // namespace critspec
