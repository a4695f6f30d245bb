#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace critspec {

// Element of SU(2) stored as a unit quaternion q = (q0, q1, q2, q3), identified
// with the matrix [[alpha, -conj(beta)], [beta, conj(alpha)]] where
// alpha = q0 + i q1 and beta = q2 + i q3.
struct SU2Point {
  Eigen::Vector4d q = Eigen::Vector4d::UnitX();

  static SU2Point identity() { return {}; }
  static SU2Point from_matrix(const Eigen::Matrix2cd& x);
  // alpha = cos(eta) e^{i xi1}, beta = sin(eta) e^{i xi2}.
  static SU2Point from_hopf(double eta, double xi1, double xi2);

  std::complex<double> alpha() const { return {q[0], q[1]}; }
  std::complex<double> beta() const { return {q[2], q[3]}; }
  Eigen::Matrix2cd matrix() const;
  bool valid(double tol = 1e-12) const { return std::abs(q.norm() - 1.0) <= tol; }
};

SU2Point operator*(const SU2Point& x, const SU2Point& y);

// Values at the identity of the right-invariant fields v_1, v_2, v_3
// (l is 0-based). Each squares to -I.
Eigen::Matrix2cd su2_generator(int l);

// exp(s v_l)
SU2Point su2_exp(int l, double s);

// Normalized matrix coefficient of the degree-k representation on
// homogeneous polynomials, (x.p)(z) = p(x^{-1} z), in the monomial basis
// e_a = z1^a z2^(k-a) with ||e_a||^2 = a!(k-a)!. The Hermitian product is
// conjugate-linear in its first slot:
//   matrix_coeff(k,a,b,x) = <x.e_a, e_b> / (||e_a|| ||e_b||).
// With this convention the Lie derivatives along the right-invariant fields
// reproduce the block structure used in su2_spectral literally; the choice
// is pinned by the oracle tests.
std::complex<double> matrix_coeff(int k, int a, int b, const SU2Point& x);

// All (k+1)^2 coefficients at once: result(a, b) = matrix_coeff(k, a, b, x).
Eigen::MatrixXcd matrix_coeffs(int k, const SU2Point& x);

// Real profile d^{(k)}_{a,b}(eta) of the coefficient in Hopf coordinates:
// matrix_coeff(k,a,b, from_hopf(eta, xi1, xi2))
//   = d(eta) * exp(i ((a+b-k) xi1 + (a-b) xi2)).
Eigen::MatrixXd hopf_profile(int k, double eta);
inline int hopf_frequency_1(int k, int a, int b) { return a + b - k; }
inline int hopf_frequency_2(int /*k*/, int a, int b) { return a - b; }

// sqrt(k+1) * matrix_coeff(k,a,b,.), orthonormal in L^2(SU(2), Haar).
struct SchurFunction {
  int k;
  int a;
  int b;
  std::complex<double> operator()(const SU2Point& x) const;
};

std::vector<SchurFunction> schur_orthonormal_basis(int k);

// Central difference (step h) of s -> matrix_coeff(k,a,b, exp(s v_l) x) at 0.
std::complex<double> lie_derivative_oracle(int l, int k, int a, int b, const SU2Point& x,
                                           double h = 1e-6);

}  // namespace critspec
