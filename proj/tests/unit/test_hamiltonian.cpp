#include <cmath>
#include <numbers>

#include "critspec/hamiltonian.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace critspec;
constexpr double kPi = std::numbers::pi;

namespace {

HamiltonianTerm constant_term(Eigen::VectorXi nu, double amp, double phase = 0.0) {
  HamiltonianTerm t;
  t.nu = std::move(nu);
  t.amplitude = amp;
  t.phase = phase;
  return t;
}

HamiltonianTerm torus_term(Eigen::VectorXi m, double tphase, Eigen::VectorXi nu, double amp, double phase) {
  HamiltonianTerm t = constant_term(std::move(nu), amp, phase);
  t.time.kind = TimeFactor::Kind::Torus;
  t.time.m = std::move(m);
  t.time.phase = tphase;
  return t;
}

HamiltonianTerm su2_term(int k, int a, int b, bool im, Eigen::VectorXi nu, double amp, double phase) {
  HamiltonianTerm t = constant_term(std::move(nu), amp, phase);
  t.time.kind = TimeFactor::Kind::SU2;
  t.time.k = k;
  t.time.a = a;
  t.time.b = b;
  t.time.imaginary = im;
  return t;
}

Eigen::VectorXi vec(std::initializer_list<int> v) {
  Eigen::VectorXi x(static_cast<int>(v.size()));
  int i = 0;
  for (int c : v) x[i++] = c;
  return x;
}

TrigHamiltonian random_torus_h(int n, int r) {
  std::vector<HamiltonianTerm> terms;
  for (int i = 0; i < 4; ++i) {
    Eigen::VectorXi nu(n), m(r);
    for (auto& c : nu) c = static_cast<int>(std::lround(testing::uniform(-2.4, 2.4)));
    for (auto& c : m) c = static_cast<int>(std::lround(testing::uniform(-1.4, 1.4)));
    terms.push_back(torus_term(m, testing::uniform(), nu, testing::uniform(-0.1, 0.1), testing::uniform()));
  }
  return TrigHamiltonian(n, TimeDomain::Torus, terms);
}

SU2Point random_point() {
  SU2Point x;
  x.q = Eigen::Vector4d(testing::uniform(), testing::uniform(), testing::uniform(), testing::uniform()).normalized();
  return x;
}

}  // namespace

TEST_CASE("evaluation examples") {
  TrigHamiltonian zero(3, TimeDomain::Torus, {});
  Eigen::VectorXd t = Eigen::VectorXd::Zero(1), w = testing::random_vector(3);
  CHECK(zero.eval(t, w) == 0.0);
  CHECK(zero.grad_w(t, w).isZero());
  CHECK(zero.hess_w(t, w).isZero());
  CHECK(zero.hess_sup_bound() == 0.0);
  CHECK(min_truncation(zero, TimeDomain::Torus, 0.5) == 1);

  const double eps = 0.07;
  TrigHamiltonian H(3, TimeDomain::Torus, {constant_term(vec({1, 0, 0}), eps)});
  CHECK(H.eval(t, Eigen::VectorXd::Zero(3)) == doctest::Approx(eps).epsilon(1e-15));
  Eigen::VectorXd quarter = Eigen::VectorXd::Zero(3);
  quarter[0] = 0.25;
  CHECK(std::abs(H.eval(t, quarter)) < 1e-15);
  const Eigen::VectorXd g = H.grad_w(t, w);
  CHECK(g[0] == doctest::Approx(-2 * kPi * eps * std::sin(2 * kPi * w[0])));
  CHECK(g[1] == 0.0);
  CHECK(H.hess_w(t, w)(0, 0) == doctest::Approx(-4 * kPi * kPi * eps * std::cos(2 * kPi * w[0])));
  CHECK(H.hess_sup_bound() == doctest::Approx(4 * kPi * kPi * eps));

  TrigHamiltonian H2(2, TimeDomain::Torus, {constant_term(vec({1, 0}), 0.03), constant_term(vec({0, 1}), 0.05)});
  CHECK(H2.hess_sup_bound() == doctest::Approx(4 * kPi * kPi * 0.08));
}

TEST_CASE("min truncation") {
  TrigHamiltonian H(2, TimeDomain::Torus, {constant_term(vec({1, 0}), 0.1)});
  CHECK(min_truncation(H, TimeDomain::Torus, 0.5) == 2);
  CHECK(min_truncation(H, TimeDomain::SU2, 0.5) == 8);
  CHECK(contraction_factor(H, TimeDomain::Torus, 2) <= 0.5);
  CHECK(contraction_factor(H, TimeDomain::Torus, 1) > 0.5);
  CHECK_THROWS_KIND(min_truncation(H, TimeDomain::Torus, 1.0), ErrorKind::InvalidRequest);
  CHECK_THROWS_KIND(min_truncation(H, TimeDomain::Torus, 0.0), ErrorKind::InvalidRequest);
}

TEST_CASE("derivatives match finite differences") {
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 3, r = 1 + trial % 2;
    auto H = random_torus_h(n, r);
    Eigen::VectorXd t = testing::random_vector(r), w = testing::random_vector(n);
    const double h = 1e-5;
    Eigen::VectorXd g = H.grad_w(t, w);
    Eigen::MatrixXd hess = H.hess_w(t, w);
    Eigen::VectorXd gfd(n);
    Eigen::MatrixXd hfd(n, n);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Unit(n, i) * h;
      gfd[i] = (H.eval(t, w + e) - H.eval(t, w - e)) / (2 * h);
      hfd.col(i) = (H.grad_w(t, w + e) - H.grad_w(t, w - e)) / (2 * h);
    }
    const double scale = std::max(1.0, g.norm());
    CHECK((g - gfd).norm() <= 1e-8 * scale);
    CHECK((hess - hfd).norm() <= 1e-8 * std::max(1.0, hess.norm()));
    CHECK((hess - hess.transpose()).norm() < 1e-14);
  }
}

TEST_CASE("lattice periodicity") {
  Eigen::MatrixXd B(2, 2);
  B << 1.0, 0.3, 0.0, 0.8;
  Lattice L(B);
  std::vector<HamiltonianTerm> terms = {constant_term(vec({1, 0}), 0.05, 0.2), constant_term(vec({1, -2}), 0.02),
                                        torus_term(vec({1}), 0.1, vec({0, 1}), 0.03, 0.0)};
  TrigHamiltonian H(2, TimeDomain::Torus, terms, L);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd t = testing::random_vector(1), w = testing::random_vector(2);
    Eigen::VectorXi c(2);
    c << static_cast<int>(std::lround(testing::uniform(-3, 3))), static_cast<int>(std::lround(testing::uniform(-3, 3)));
    Eigen::VectorXd xi = B * c.cast<double>();
    CHECK(std::abs(H.eval(t, w + xi) - H.eval(t, w)) < 1e-12);
    CHECK((H.grad_w(t, w + xi) - H.grad_w(t, w)).norm() < 1e-12);
    Eigen::VectorXd red = L.reduce(w);
    Eigen::VectorXd coords = B.inverse() * red;
    CHECK(coords.minCoeff() >= 0.0);
    CHECK(coords.maxCoeff() < 1.0);
    CHECK(std::abs(H.eval(t, red) - H.eval(t, w)) < 1e-12);
    Eigen::VectorXd wrapped = B.inverse() * L.wrap(w + xi - red);
    CHECK(wrapped.cwiseAbs().maxCoeff() < 1e-9);
  }
  CHECK_THROWS_KIND(Lattice(Eigen::MatrixXd::Zero(2, 2)), ErrorKind::InvalidRequest);
}

TEST_CASE("hessian bound dominates sampled norms") {
  auto H = random_torus_h(3, 2);
  double worst = 0.0;
  for (int s = 0; s < 10000; ++s) {
    Eigen::VectorXd t = testing::random_vector(2), w = testing::random_vector(3);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(H.hess_w(t, w));
    worst = std::max(worst, svd.singularValues()[0]);
  }
  CHECK(H.hess_sup_bound() >= worst);

  std::vector<HamiltonianTerm> terms = {su2_term(1, 0, 1, false, vec({1, 0, 0, 0}), 0.05, 0.0),
                                        su2_term(2, 1, 1, true, vec({0, 1, 1, 0}), 0.02, 0.3)};
  TrigHamiltonian S(4, TimeDomain::SU2, terms);
  worst = 0.0;
  for (int s = 0; s < 10000; ++s) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(S.hess_w(random_point(), testing::random_vector(4)));
    worst = std::max(worst, svd.singularValues()[0]);
  }
  CHECK(S.hess_sup_bound() >= worst);
}

TEST_CASE("time factors and domains") {
  std::vector<HamiltonianTerm> terms = {su2_term(1, 0, 1, false, vec({1, 0, 0, 0}), 0.05, 0.0),
                                        su2_term(1, 0, 1, true, vec({1, 0, 0, 0}), 0.05, 0.0)};
  TrigHamiltonian S(4, TimeDomain::SU2, terms);
  auto x = random_point();
  Eigen::VectorXd w = testing::random_vector(4);
  const auto c = matrix_coeff(1, 0, 1, x);
  CHECK(S.eval(x, w) == doctest::Approx(0.05 * (c.real() + c.imag()) * std::cos(2 * kPi * w[0])));
  CHECK(S.time_band() == 1);
  CHECK_FALSE(S.time_independent());
  CHECK_THROWS_KIND(S.eval(Eigen::VectorXd::Zero(3), w), ErrorKind::DomainMismatch);

  TrigHamiltonian T(2, TimeDomain::Torus, {torus_term(vec({2, 1}), 0.0, vec({1, 0}), 0.1, 0.0)});
  CHECK(T.time_band() == 3);  // ceil(sqrt 5)
  CHECK_THROWS_KIND(T.eval(x, Eigen::VectorXd::Zero(2)), ErrorKind::DomainMismatch);
  CHECK_THROWS_KIND(T.eval(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(3)), ErrorKind::DimensionMismatch);
  CHECK_THROWS_KIND(TrigHamiltonian(2, TimeDomain::Torus, {su2_term(1, 0, 0, false, vec({1, 0}), 0.1, 0.0)}),
                    ErrorKind::DomainMismatch);
  CHECK_THROWS_KIND(TrigHamiltonian(4, TimeDomain::SU2, {su2_term(1, 2, 0, false, vec({1, 0, 0, 0}), 0.1, 0.0)}),
                    ErrorKind::IndexOutOfRange);
  CHECK_THROWS_KIND(TrigHamiltonian(2, TimeDomain::Torus, {constant_term(vec({1, 0, 0}), 0.1)}),
                    ErrorKind::DimensionMismatch);
}
