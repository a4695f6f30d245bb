#include <cmath>

#include "critspec/clifford.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace critspec;
using testing::max_abs;

namespace {

Eigen::MatrixXd quat_left(int unit) {
  // left multiplication by i, j, k on (1, i, j, k) coordinates
  Eigen::Matrix4d m;
  if (unit == 1) m << 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0;
  if (unit == 2) m << 0, 0, -1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, -1, 0, 0;
  if (unit == 3) m << 0, 0, 0, -1, 0, 0, -1, 0, 0, 1, 0, 0, 1, 0, 0, 0;
  return m;
}

// Brute force over n: smallest n admitting r structures by the bound.
int smallest_dim(int r) {
  for (int n = 1;; ++n) {
    int m = n, s = 0;
    while (m % 2 == 0) m /= 2, ++s;
    const int d = s / 4, c = s % 4;
    if (8 * d + (1 << c) - 1 >= r) return n;
  }
}

}  // namespace

TEST_CASE("radon-hurwitz bound") {
  CHECK(radon_hurwitz_bound(4) == 3);
  CHECK(radon_hurwitz_bound(1) == 0);
  CHECK(radon_hurwitz_bound(16) == 8);
  CHECK(radon_hurwitz_bound(12) == 3);
  CHECK(radon_hurwitz_bound(2) == 1);
  CHECK(radon_hurwitz_bound(8) == 7);
  CHECK(radon_hurwitz_bound(32) == 9);
}

TEST_CASE("small modules") {
  auto m1 = build_module(1);
  CHECK(m1.dim() == 2);
  Eigen::Matrix2d J;
  J << 0, -1, 1, 0;
  CHECK(max_abs(m1.structure(0) - J) == 0.0);

  auto m3 = build_module(3);
  CHECK(m3.dim() == 4);
  CHECK(m3.hyperkahler());
  for (int l = 0; l < 3; ++l) CHECK(max_abs(m3.structure(l) - quat_left(l + 1)) == 0.0);

  CHECK(build_module(2).dim() == 4);
  CHECK_FALSE(build_module(2).hyperkahler());
  CHECK(build_module(3, true).hyperkahler());
  CHECK_THROWS_KIND(build_module(2, true), ErrorKind::InvalidRequest);
  CHECK_THROWS_KIND(build_module(0), ErrorKind::InvalidRequest);
}

TEST_CASE("modules satisfy the algebra up to r = 10") {
  for (int r = 1; r <= 10; ++r) {
    CAPTURE(r);
    auto m = build_module(r);
    CHECK(m.count() == r);
    CHECK(m.dim() == smallest_dim(r));
    CHECK(r <= radon_hurwitz_bound(m.dim()));
    const int n = m.dim();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    for (int l = 0; l < r; ++l) {
      const auto& Jl = m.structure(l);
      CHECK(max_abs(Jl.transpose() * Jl - I) <= 1e-12);
      CHECK(max_abs(Jl * Jl + I) <= 1e-12);
      for (int j = l + 1; j < r; ++j) CHECK(max_abs(Jl * m.structure(j) + m.structure(j) * Jl) <= 1e-12);
    }
    for (const auto& c : check_invariants(m)) CHECK_MESSAGE(c.passed, c.identity);
    CHECK_NOTHROW(validate(m));
  }
}

TEST_CASE("validation rejects broken modules") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(2, 2);
  CliffordModule bad({A}, false);
  CHECK_THROWS_KIND(validate(bad), ErrorKind::InvalidRequest);

  auto m = build_module(2);
  CliffordModule commuting({m.structure(0), m.structure(0)}, false);
  CHECK_THROWS_KIND(validate(commuting), ErrorKind::InvalidRequest);

  // claims hyperkahler although J1 J2 = -J3
  auto q = build_module(3);
  CliffordModule flipped({q.structure(0), q.structure(1), -q.structure(2)}, true);
  CHECK_THROWS_KIND(validate(flipped), ErrorKind::InvalidRequest);
}

TEST_CASE("pencil symbol") {
  auto m = build_module(3);
  Eigen::VectorXd e1 = Eigen::VectorXd::Unit(3, 0);
  CHECK(max_abs(pencil_symbol(m, e1) - m.structure(0)) == 0.0);

  Eigen::VectorXd ones = Eigen::VectorXd::Ones(3);
  Eigen::MatrixXd P = pencil_symbol(m, ones);
  CHECK(max_abs(P * P + 3.0 * Eigen::MatrixXd::Identity(4, 4)) <= 1e-12);
  CHECK(max_abs(pencil_symbol(m, Eigen::VectorXd::Zero(3))) == 0.0);
  CHECK_THROWS_KIND(pencil_symbol(m, Eigen::VectorXd::Zero(2)), ErrorKind::DimensionMismatch);

  for (int r = 1; r <= 9; ++r) {
    auto mr = build_module(r);
    const int n = mr.dim();
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd lambda = testing::random_vector(r);
      Eigen::MatrixXd S = pencil_symbol(mr, lambda);
      Eigen::MatrixXd inv = -S / lambda.squaredNorm();
      CHECK(max_abs(S * inv - Eigen::MatrixXd::Identity(n, n)) <= 1e-12);
    }
  }
}

TEST_CASE("symplectic forms") {
  for (int r = 1; r <= 4; ++r) {
    auto m = build_module(r);
    for (int l = 0; l < r; ++l) {
      Eigen::MatrixXd w = m.symplectic_form(l);
      CHECK(max_abs(w + w.transpose()) <= 1e-12);
      CHECK(std::abs(w.determinant()) > 0.5);
      // <X, Y> = omega(X, J Y)
      Eigen::VectorXd X = testing::random_vector(m.dim()), Y = testing::random_vector(m.dim());
      CHECK(std::abs(X.dot(Y) - X.dot(w * (m.structure(l) * Y))) <= 1e-12);
    }
  }
}

TEST_CASE("quaternionic split") {
  auto q = build_module(3);
  auto U = quaternionic_split(q);
  for (int m = 0; m < 4; ++m) {
    REQUIRE(U[m].cols() == 1);
    CHECK(max_abs(U[m] - Eigen::VectorXd::Unit(4, m)) <= 1e-12);
  }

  // H^2 as a block-diagonal module
  std::vector<Eigen::MatrixXd> J;
  for (int l = 1; l <= 3; ++l) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(8, 8);
    b.topLeftCorner(4, 4) = quat_left(l);
    b.bottomRightCorner(4, 4) = quat_left(l);
    J.push_back(b);
  }
  CliffordModule h2(J, true);
  validate(h2);
  auto U2 = quaternionic_split(h2);
  Eigen::MatrixXd all(8, 8);
  for (int m = 0; m < 4; ++m) {
    CHECK(U2[m].cols() == 2);
    all.middleCols(2 * m, 2) = U2[m];
    if (m > 0) CHECK(max_abs(U2[m] - h2.structure(m - 1) * U2[0]) <= 1e-12);
  }
  CHECK(max_abs(all.transpose() * all - Eigen::MatrixXd::Identity(8, 8)) <= 1e-12);

  CHECK_THROWS_KIND(quaternionic_split(build_module(2)), ErrorKind::NotHyperkahler);
}
