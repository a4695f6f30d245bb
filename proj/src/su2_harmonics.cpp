#include "critspec/su2_harmonics.hpp"

#include <cmath>

#include "critspec/errors.hpp"

namespace critspec {

namespace {

using cd = std::complex<double>;

double binomial(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

void check_indices(int k, int a, int b) {
  if (k < 0 || a < 0 || b < 0 || a > k || b > k)
    throw Error(ErrorKind::IndexOutOfRange,
                "matrix coefficient (" + std::to_string(k) + "," + std::to_string(a) + "," + std::to_string(b) + ")");
}

}  // namespace

SU2Point SU2Point::from_matrix(const Eigen::Matrix2cd& x) {
  SU2Point p;
  p.q << x(0, 0).real(), x(0, 0).imag(), x(1, 0).real(), x(1, 0).imag();
  return p;
}

SU2Point SU2Point::from_hopf(double eta, double xi1, double xi2) {
  SU2Point p;
  p.q << std::cos(eta) * std::cos(xi1), std::cos(eta) * std::sin(xi1), std::sin(eta) * std::cos(xi2),
      std::sin(eta) * std::sin(xi2);
  return p;
}

Eigen::Matrix2cd SU2Point::matrix() const {
  Eigen::Matrix2cd x;
  x << alpha(), -std::conj(beta()), beta(), std::conj(alpha());
  return x;
}

SU2Point operator*(const SU2Point& x, const SU2Point& y) { return SU2Point::from_matrix(x.matrix() * y.matrix()); }

Eigen::Matrix2cd su2_generator(int l) {
  const cd i(0.0, 1.0);
  Eigen::Matrix2cd v;
  switch (l) {
    case 0: v << 0.0, i, i, 0.0; break;
    case 1: v << 0.0, -1.0, 1.0, 0.0; break;
    case 2: v << i, 0.0, 0.0, -i; break;
    default: throw Error(ErrorKind::IndexOutOfRange, "su(2) generator index " + std::to_string(l));
  }
  return v;
}

SU2Point su2_exp(int l, double s) {
  // v_l^2 = -I, so exp(s v_l) = cos(s) I + sin(s) v_l.
  const Eigen::Matrix2cd m = std::cos(s) * Eigen::Matrix2cd::Identity() + std::sin(s) * su2_generator(l);
  return SU2Point::from_matrix(m);
}

Eigen::MatrixXcd matrix_coeffs(int k, const SU2Point& x) {
  if (k < 0) throw Error(ErrorKind::IndexOutOfRange, "negative degree");
  const cd al = x.alpha();
  const cd be = x.beta();
  // x^{-1} z = (conj(al) z1 + conj(be) z2, -be z1 + al z2)
  const cd p = std::conj(al), q = std::conj(be), r = -be, s = al;
  std::vector<cd> pp(k + 1), qp(k + 1), rp(k + 1), sp(k + 1);
  pp[0] = qp[0] = rp[0] = sp[0] = 1.0;
  for (int i = 1; i <= k; ++i) {
    pp[i] = pp[i - 1] * p;
    qp[i] = qp[i - 1] * q;
    rp[i] = rp[i - 1] * r;
    sp[i] = sp[i - 1] * s;
  }
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(k + 1, k + 1);
  for (int a = 0; a <= k; ++a) {
    for (int i = 0; i <= a; ++i) {
      const cd left = binomial(a, i) * pp[i] * qp[a - i];
      for (int j = 0; j <= k - a; ++j) C(a, i + j) += left * binomial(k - a, j) * rp[j] * sp[k - a - j];
    }
  }
  std::vector<double> log_norm(k + 1);
  for (int a = 0; a <= k; ++a) log_norm[a] = 0.5 * (std::lgamma(a + 1.0) + std::lgamma(k - a + 1.0));
  Eigen::MatrixXcd out(k + 1, k + 1);
  for (int a = 0; a <= k; ++a)
    for (int b = 0; b <= k; ++b) out(a, b) = std::conj(C(a, b)) * std::exp(log_norm[b] - log_norm[a]);
  return out;
}

std::complex<double> matrix_coeff(int k, int a, int b, const SU2Point& x) {
  check_indices(k, a, b);
  return matrix_coeffs(k, x)(a, b);
}

Eigen::MatrixXd hopf_profile(int k, double eta) { return matrix_coeffs(k, SU2Point::from_hopf(eta, 0.0, 0.0)).real(); }

std::complex<double> SchurFunction::operator()(const SU2Point& x) const {
  return std::sqrt(k + 1.0) * matrix_coeff(k, a, b, x);
}

std::vector<SchurFunction> schur_orthonormal_basis(int k) {
  if (k < 0) throw Error(ErrorKind::IndexOutOfRange, "negative degree");
  std::vector<SchurFunction> out;
  for (int a = 0; a <= k; ++a)
    for (int b = 0; b <= k; ++b) out.push_back({k, a, b});
  return out;
}

std::complex<double> lie_derivative_oracle(int l, int k, int a, int b, const SU2Point& x, double h) {
  check_indices(k, a, b);
  const cd plus = matrix_coeff(k, a, b, su2_exp(l, h) * x);
  const cd minus = matrix_coeff(k, a, b, su2_exp(l, -h) * x);
  return (plus - minus) / (2.0 * h);
}

}  // namespace critspec
