#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "critspec/errors.hpp"

namespace testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Eigen::VectorXd random_vector(int n, double scale = 1.0) {
  Eigen::VectorXd v(n);
  for (auto& x : v) x = scale * uniform();
  return v;
}

inline Eigen::MatrixXd random_matrix(int rows, int cols, double scale = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j) m.col(j) = random_vector(rows, scale);
  return m;
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// 8th-order central difference of a vector-valued function of one variable.
inline Eigen::VectorXd derivative8(const std::function<Eigen::VectorXd(double)>& f, double h = 1e-3) {
  static const double c[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  Eigen::VectorXd d = c[0] * (f(h) - f(-h));
  for (int i = 1; i < 4; ++i) d += c[i] * (f((i + 1) * h) - f(-(i + 1) * h));
  return d / h;
}

// Collects warnings for the lifetime of the object.
class WarningCapture {
 public:
  WarningCapture() {
    previous_ = critspec::set_warning_handler([this](const std::string& m) { messages.push_back(m); });
  }
  ~WarningCapture() { critspec::set_warning_handler(previous_); }
  std::vector<std::string> messages;

 private:
  critspec::WarningHandler previous_;
};

}  // namespace testing

#define CHECK_THROWS_KIND(expr, k)                                          \
  do {                                                                      \
    bool thrown_ = false;                                                   \
    try {                                                                   \
      (void)(expr);                                                         \
    } catch (const critspec::Error& e_) {                                   \
      thrown_ = true;                                                       \
      CHECK_MESSAGE(e_.kind() == (k), "unexpected error kind: " << e_.what()); \
    }                                                                       \
    CHECK_MESSAGE(thrown_, "expected an error from " #expr);                \
  } while (0)
