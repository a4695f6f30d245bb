#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "critspec/cli.hpp"
#include "critspec/errors.hpp"
#include "critspec/su2_harmonics.hpp"
#include "critspec/su2_spectral.hpp"
#include "critspec/torus_spectral.hpp"

namespace critspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Worst {
  double defect = 0.0;
  std::string where;
  void update(double d, const std::string& w) {
    if (!(d <= defect)) {
      defect = d;
      where = w;
    }
  }
};

std::string key_string(const Frequency& k) {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < k.size(); ++i) os << (i ? " " : "") << k[i];
  os << ')';
  return os.str();
}

CheckResult make_check(std::string name, const Worst& w, double tol) {
  return {std::move(name), w.defect <= tol, w.defect, tol, w.where};
}

// Runs body, turning library errors into a failed check.
void guarded(std::vector<CheckResult>& out, const std::string& name, double tol, const std::function<Worst()>& body) {
  try {
    out.push_back(make_check(name, body(), tol));
  } catch (const Error& e) {
    out.push_back({name, false, INFINITY, tol, e.what()});
  }
}

Eigen::VectorXd rotate(const Eigen::MatrixXd& J, double theta, const Eigen::VectorXd& v) {
  return std::cos(theta) * v + std::sin(theta) * (J * v);
}

Eigen::VectorXd derivative8(const std::function<Eigen::VectorXd(double)>& f, double h) {
  static const double c[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  Eigen::VectorXd d = c[0] * (f(h) - f(-h));
  for (int i = 1; i < 4; ++i) d += c[i] * (f((i + 1) * h) - f(-(i + 1) * h));
  return d / h;
}

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

void torus_checks(std::vector<CheckResult>& out, std::shared_ptr<const CliffordModule> M, int k_max,
                  std::mt19937_64& rng) {
  const int r = M->count(), n = M->dim();
  const TorusModes modes(r, 1, k_max + 1);
  std::vector<Frequency> canonical;
  for (int m = 0; m < modes.size(); ++m)
    if (modes.canonical(m) && modes.degree(m) <= k_max + 1e-9) canonical.push_back(modes.k(m));
  const Eigen::MatrixXd& J = M->structure(r - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  guarded(out, "Dirac block vs finite differences", 1e-8, [&] {
    Worst w;
    for (const auto& k : canonical) {
      const Eigen::MatrixXd A = dirac_block(*M, k);
      for (int p = 0; p < 2; ++p) {
        Eigen::VectorXd t(r);
        for (auto& x : t) x = unit(rng);
        const double phase = kTwoPi * k.cast<double>().dot(t);
        for (int j = 0; j < 2 * n; ++j) {
          const Eigen::VectorXd e = Eigen::VectorXd::Unit(2 * n, j);
          auto field = [&](const Eigen::VectorXd& c, const Eigen::VectorXd& s) {
            const double ph = kTwoPi * k.cast<double>().dot(s);
            return Eigen::VectorXd(rotate(J, -ph, c.head(n)) + rotate(J, ph, c.tail(n)));
          };
          Eigen::VectorXd fd = Eigen::VectorXd::Zero(n);
          for (int l = 0; l < r; ++l) {
            auto along = [&](double s) {
              Eigen::VectorXd ts = t;
              ts[l] += s;
              return field(e, ts);
            };
            fd += M->structure(l) * derivative8(along, 1e-3);
          }
          const Eigen::VectorXd Ae = A * e;
          const Eigen::VectorXd want = rotate(J, -phase, Ae.head(n)) + rotate(J, phase, Ae.tail(n));
          w.update((fd - want).cwiseAbs().maxCoeff() / (1.0 + kTwoPi * k.cast<double>().norm()), key_string(k));
        }
      }
    }
    return w;
  });

  guarded(out, "A A^-1 = I", 1e-12, [&] {
    Worst w;
    for (const auto& k : canonical) {
      const Eigen::MatrixXd P = dirac_block(*M, k) * dirac_block_inverse(*M, k);
      w.update((P - Eigen::MatrixXd::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff(), key_string(k));
    }
    return w;
  });

  guarded(out, "|A^-1| = 1/(2 pi |k|)", 1e-10, [&] {
    Worst w;
    for (const auto& k : canonical) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(dirac_block_inverse(*M, k));
      w.update(std::abs(svd.singularValues()[0] - 1.0 / (kTwoPi * k.cast<double>().norm())), key_string(k));
    }
    return w;
  });

  guarded(out, "block spectrum +-2 pi |k|", 1e-10, [&] {
    Worst w;
    for (const auto& k : canonical) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dirac_block(*M, k));
      const double lam = kTwoPi * k.cast<double>().norm();
      double d = 0.0;
      for (int i = 0; i < 2 * n; ++i) d = std::max(d, std::abs(es.eigenvalues()[i] - (i < n ? -lam : lam)));
      w.update(d / lam, key_string(k));
    }
    return w;
  });

  const int N = std::min(k_max, 5) + 1;
  const int G = fft_size_at_least(2 * N - 1);
  auto random_field = [&] {
    auto f = TorusField::zero(M, N);
    f.mean() = random_matrix(rng, n, 1).col(0);
    f.coeffs() = random_matrix(rng, n, f.modes().size());
    return f;
  };

  guarded(out, "mode orthonormality (grid round trip)", 1e-12, [&] {
    Worst w;
    for (int trial = 0; trial < 5; ++trial) {
      const auto f = random_field();
      const auto g = analyze(synthesize(f, G), G, M, N);
      w.update(std::max((g.coeffs() - f.coeffs()).cwiseAbs().maxCoeff(), (g.mean() - f.mean()).cwiseAbs().maxCoeff()),
               "trial " + std::to_string(trial));
    }
    return w;
  });

  guarded(out, "Parseval", 1e-10, [&] {
    Worst w;
    for (int trial = 0; trial < 5; ++trial) {
      const auto f = random_field();
      const Eigen::MatrixXd v = synthesize(f, G);
      const double grid = v.squaredNorm() / v.cols();
      const double coeff = f.mean().squaredNorm() + f.coeffs().squaredNorm();
      w.update(std::abs(grid - coeff) / coeff, "trial " + std::to_string(trial));
    }
    return w;
  });

  guarded(out, "Dirac self-adjoint", 1e-12, [&] {
    Worst w;
    for (int trial = 0; trial < 5; ++trial) {
      const auto f = random_field(), g = random_field();
      const double a = l2_inner(dirac_apply(f), g), b = l2_inner(f, dirac_apply(g));
      w.update(std::abs(a - b) / (1.0 + std::abs(a)), "trial " + std::to_string(trial));
    }
    return w;
  });
}

Eigen::MatrixXd dense(const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>& op, int n, int count) {
  Eigen::MatrixXd A(n * count, n * count);
  for (int j = 0; j < n * count; ++j) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, count);
    e(j % n, j / n) = 1.0;
    const Eigen::MatrixXd o = op(e);
    A.col(j) = Eigen::Map<const Eigen::VectorXd>(o.data(), o.size());
  }
  return A;
}

SU2Point random_point(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  SU2Point x;
  x.q = Eigen::Vector4d(g(rng), g(rng), g(rng), g(rng)).normalized();
  return x;
}

void su2_checks(std::vector<CheckResult>& out, std::shared_ptr<const CliffordModule> M, int k_max,
                std::mt19937_64& rng) {
  const int n = M->dim();
  using cd = std::complex<double>;

  guarded(out, "block spectrum {k, -(k+2)}", 1e-9, [&] {
    Worst w;
    for (int k = 1; k <= k_max; ++k) {
      auto modes = std::make_shared<const SU2Modes>(k, k + 1);
      SU2Dirac D(M, modes);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
          dense([&](const Eigen::MatrixXd& c) { return D.apply(c); }, n, modes->size()));
      double d = 0.0;
      int low = 0;
      for (double lam : es.eigenvalues()) {
        d = std::max(d, std::min(std::abs(lam - k), std::abs(lam + k + 2)));
        low += lam < 0;
      }
      // multiplicities n k (k+1) / 2 and n (k+1) (k+2) / 2
      if (low != n * k * (k + 1) / 2) d = std::max(d, 1.0);
      w.update(d, "k = " + std::to_string(k));
    }
    return w;
  });

  guarded(out, "|D^-1| = 1/k", 1e-9, [&] {
    Worst w;
    for (int k = 1; k <= k_max; ++k) {
      auto modes = std::make_shared<const SU2Modes>(k, k + 1);
      SU2Dirac D(M, modes);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(
          dense([&](const Eigen::MatrixXd& c) { return D.apply_inverse(c); }, n, modes->size()));
      w.update(std::abs(svd.singularValues()[0] - 1.0 / k), "k = " + std::to_string(k));
    }
    return w;
  });

  const int N = std::min(k_max, 4) + 1;
  auto random_field = [&] {
    auto f = SU2Field::zero(M, N);
    f.mean() = random_matrix(rng, n, 1).col(0);
    f.coeffs() = random_matrix(rng, n, f.modes().size());
    return f;
  };

  guarded(out, "Dirac vs Lie-derivative oracle", 1e-5, [&] {
    Worst w;
    const auto& J3 = M->structure(2);
    for (int trial = 0; trial < 5; ++trial) {
      const auto f = random_field();
      const auto Df = dirac_apply_su2(f);
      const SU2Point x = random_point(rng);
      Eigen::VectorXd oracle = Eigen::VectorXd::Zero(n);
      for (int m = 0; m < f.modes().size(); ++m) {
        const auto& md = f.modes().mode(m);
        for (int l = 0; l < 3; ++l) {
          const cd d = std::sqrt(md.k + 1.0) * lie_derivative_oracle(l, md.k, md.a, md.b, x);
          const Eigen::VectorXd v = f.coeffs().col(m);
          oracle += M->structure(l) * (d.real() * v + d.imag() * (J3 * v));
        }
      }
      w.update((Df.value_at(x) - oracle).cwiseAbs().maxCoeff() / (1.0 + oracle.cwiseAbs().maxCoeff()),
               "trial " + std::to_string(trial));
    }
    return w;
  });

  guarded(out, "Schur orthonormality (k <= 3)", 1e-8, [&] {
    Worst w;
    SU2Quadrature rule(6);
    std::vector<SchurFunction> basis;
    for (int k = 0; k <= 3; ++k)
      for (const auto& s : schur_orthonormal_basis(k)) basis.push_back(s);
    const int B = static_cast<int>(basis.size());
    Eigen::MatrixXcd values(B, rule.size());
    for (int j = 0; j < rule.size(); ++j) {
      const SU2Point x = rule.node(j);
      for (int i = 0; i < B; ++i) values(i, j) = basis[i](x) * std::sqrt(rule.weight(j));
    }
    const Eigen::MatrixXcd gram = values.conjugate() * values.transpose();
    w.update((gram - Eigen::MatrixXcd::Identity(B, B)).cwiseAbs().maxCoeff(), "Gram matrix");
    return w;
  });

  SU2Quadrature rule(su2_exact_band(N) + 2);
  guarded(out, "mode orthonormality (quadrature round trip)", 1e-12, [&] {
    Worst w;
    for (int trial = 0; trial < 3; ++trial) {
      const auto f = random_field();
      const auto g = haar_analyze(haar_synthesize(f, rule), rule, M, N);
      w.update(std::max((g.coeffs() - f.coeffs()).cwiseAbs().maxCoeff(), (g.mean() - f.mean()).cwiseAbs().maxCoeff()),
               "trial " + std::to_string(trial));
    }
    return w;
  });

  guarded(out, "Parseval", 1e-10, [&] {
    Worst w;
    SU2Quadrature fine(2 * N);
    for (int trial = 0; trial < 3; ++trial) {
      const auto f = random_field();
      const Eigen::MatrixXd v = haar_synthesize(f, fine);
      double quad = 0.0;
      for (int j = 0; j < fine.size(); ++j) quad += fine.weight(j) * v.col(j).squaredNorm();
      const double coeff = f.mean().squaredNorm() + f.coeffs().squaredNorm();
      w.update(std::abs(quad - coeff) / coeff, "trial " + std::to_string(trial));
    }
    return w;
  });

  guarded(out, "Dirac self-adjoint", 1e-12, [&] {
    Worst w;
    for (int trial = 0; trial < 3; ++trial) {
      const auto f = random_field(), g = random_field();
      const double a = l2_inner(dirac_apply_su2(f), g), b = l2_inner(f, dirac_apply_su2(g));
      w.update(std::abs(a - b) / (1.0 + std::abs(a)), "trial " + std::to_string(trial));
    }
    return w;
  });
}

std::vector<double> distinct(std::vector<double> v, double tol) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || std::abs(x - out.back()) > tol) out.push_back(x);
  return out;
}

}  // namespace

std::vector<CheckResult> run_checks(std::shared_ptr<const CliffordModule> module, TimeDomain domain, int k_max,
                                    std::uint64_t seed) {
  std::vector<CheckResult> out;
  for (const auto& c : check_invariants(*module)) out.push_back({c.identity, c.passed, c.defect, kCliffordTolerance, ""});
  std::mt19937_64 rng(seed);
  if (domain == TimeDomain::Torus)
    torus_checks(out, module, k_max, rng);
  else
    su2_checks(out, module, k_max, rng);
  return out;
}

std::vector<SpectrumRow> spectrum_rows(const CliffordModule& module, TimeDomain domain, int k_min, int k_max) {
  std::vector<SpectrumRow> rows;
  const int n = module.dim();
  if (k_min == 0) {
    SpectrumRow row;
    row.k = domain == TimeDomain::Torus ? key_string(Frequency::Zero(module.count())) : "0";
    row.kernel = true;
    row.eigenvalues = {0.0};
    row.predicted_eigenvalues = {0.0};
    rows.push_back(row);
  }
  if (domain == TimeDomain::Torus) {
    const TorusModes modes(module.count(), std::max(k_min, 1), k_max + 1);
    for (int m = 0; m < modes.size(); ++m) {
      const Frequency& k = modes.k(m);
      const double norm = k.cast<double>().norm();
      if (!modes.canonical(m) || norm < k_min || norm > k_max + 1e-9) continue;
      SpectrumRow row;
      row.k = key_string(k);
      row.norm = norm;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dirac_block(module, k));
      row.eigenvalues = distinct({es.eigenvalues().data(), es.eigenvalues().data() + 2 * n}, 1e-8);
      row.predicted_eigenvalues = {-kTwoPi * norm, kTwoPi * norm};
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(dirac_block_inverse(module, k));
      row.inverse_norm = svd.singularValues()[0];
      row.predicted_inverse_norm = 1.0 / (kTwoPi * norm);
      rows.push_back(row);
    }
  } else {
    auto M = std::make_shared<const CliffordModule>(module);
    for (int k = std::max(k_min, 1); k <= k_max; ++k) {
      auto modes = std::make_shared<const SU2Modes>(k, k + 1);
      SU2Dirac D(M, modes);
      SpectrumRow row;
      row.k = std::to_string(k);
      row.norm = k;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
          dense([&](const Eigen::MatrixXd& c) { return D.apply(c); }, n, modes->size()));
      row.eigenvalues = distinct({es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()}, 1e-8);
      row.predicted_eigenvalues = {-(k + 2.0), double(k)};
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(
          dense([&](const Eigen::MatrixXd& c) { return D.apply_inverse(c); }, n, modes->size()));
      row.inverse_norm = svd.singularValues()[0];
      row.predicted_inverse_norm = 1.0 / k;
      rows.push_back(row);
    }
  }
  for (auto& row : rows) {
    if (row.kernel) continue;
    double d = std::abs(row.inverse_norm - row.predicted_inverse_norm);
    if (row.eigenvalues.size() != row.predicted_eigenvalues.size()) {
      d = INFINITY;
    } else {
      for (std::size_t i = 0; i < row.eigenvalues.size(); ++i)
        d = std::max(d, std::abs(row.eigenvalues[i] - row.predicted_eigenvalues[i]));
    }
    row.deviation = d;
  }
  return rows;
}

std::string spectrum_csv(const std::vector<SpectrumRow>& rows) {
  auto join = [](const std::vector<double>& v) {
    std::ostringstream os;
    os.precision(15);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ";" : "") << v[i];
    return os.str();
  };
  std::ostringstream os;
  os << "k,norm,eigenvalues,predicted_eigenvalues,inverse_norm,predicted_inverse_norm,deviation\n";
  os.precision(15);
  for (const auto& r : rows) {
    os << r.k << ',' << r.norm << ',' << join(r.eigenvalues) << ',' << join(r.predicted_eigenvalues) << ',';
    if (r.kernel)
      os << "kernel mode,none,0\n";
    else
      os << r.inverse_norm << ',' << r.predicted_inverse_norm << ',' << r.deviation << '\n';
  }
  return os.str();
}

}  // namespace critspec
