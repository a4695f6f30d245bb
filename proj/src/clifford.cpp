#include "critspec/clifford.hpp"

#include <cmath>
#include <sstream>

#include "critspec/errors.hpp"

namespace critspec {

CliffordModule::CliffordModule(std::vector<Eigen::MatrixXd> structures, bool hyperkahler)
    : dim_(0), structures_(std::move(structures)), hyperkahler_(hyperkahler) {
  if (structures_.empty()) throw Error(ErrorKind::InvalidRequest, "a module needs at least one structure");
  dim_ = static_cast<int>(structures_.front().rows());
  for (const auto& J : structures_) {
    if (J.rows() != dim_ || J.cols() != dim_)
      throw Error(ErrorKind::DimensionMismatch, "all structures must be square of the same size");
  }
  if (hyperkahler_ && count() != 3)
    throw Error(ErrorKind::InvalidRequest, "the hyperkahler flag requires exactly three structures");
}

Eigen::MatrixXd CliffordModule::symplectic_form(int l) const { return -structure(l); }

std::vector<InvariantCheck> check_invariants(const CliffordModule& module, double tol) {
  const int n = module.dim();
  const int r = module.count();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  std::vector<InvariantCheck> out;
  auto record = [&](std::string name, double defect) {
    out.push_back({std::move(name), defect <= tol, defect});
  };
  for (int l = 0; l < r; ++l) {
    const auto& J = module.structure(l);
    const std::string tag = "J_" + std::to_string(l + 1);
    record(tag + "^T " + tag + " = I", (J.transpose() * J - I).cwiseAbs().maxCoeff());
    record(tag + "^2 = -I", (J * J + I).cwiseAbs().maxCoeff());
  }
  for (int l = 0; l < r; ++l) {
    for (int j = l + 1; j < r; ++j) {
      const auto& A = module.structure(l);
      const auto& B = module.structure(j);
      record("J_" + std::to_string(l + 1) + " J_" + std::to_string(j + 1) + " + J_" + std::to_string(j + 1) +
                 " J_" + std::to_string(l + 1) + " = 0",
             (A * B + B * A).cwiseAbs().maxCoeff());
    }
  }
  if (module.hyperkahler()) {
    record("J_1 J_2 = J_3",
           (module.structure(0) * module.structure(1) - module.structure(2)).cwiseAbs().maxCoeff());
  }
  const int bound = radon_hurwitz_bound(n);
  out.push_back({"r <= radon_hurwitz_bound(n)", r <= bound, static_cast<double>(std::max(0, r - bound))});
  return out;
}

void validate(const CliffordModule& module, double tol) {
  for (const auto& check : check_invariants(module, tol)) {
    if (!check.passed) {
      std::ostringstream os;
      os << "violated identity " << check.identity << " (defect " << check.defect << ")";
      throw Error(ErrorKind::InvalidRequest, os.str());
    }
  }
}

int radon_hurwitz_bound(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidRequest, "dimension must be positive");
  int p = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++p;
  }
  const int d = p / 4;
  const int c = p % 4;
  return 8 * d + (1 << c) - 1;
}

int minimal_module_dim(int r) {
  if (r < 1) throw Error(ErrorKind::InvalidRequest, "r must be positive");
  int n = 2;
  while (radon_hurwitz_bound(n) < r) n *= 2;
  return n;
}

namespace {

// Letters of a Kronecker word. X, Z and E pairwise anti-commute; E^2 = -I.
enum Letter : int { kI = 0, kX = 1, kZ = 2, kE = 3 };

Eigen::Matrix2d letter_matrix(int letter) {
  Eigen::Matrix2d m;
  switch (letter) {
    case kX: m << 0, 1, 1, 0; break;
    case kZ: m << 1, 0, 0, -1; break;
    case kE: m << 0, -1, 1, 0; break;
    default: m.setIdentity();
  }
  return m;
}

using Word = std::vector<int>;

bool squares_to_minus_identity(const Word& w) {
  int e = 0;
  for (int letter : w) e += letter == kE;
  return e % 2 == 1;
}

bool anticommute(const Word& a, const Word& b) {
  int clashes = 0;
  for (std::size_t i = 0; i < a.size(); ++i) clashes += (a[i] != kI && b[i] != kI && a[i] != b[i]);
  return clashes % 2 == 1;
}

Eigen::MatrixXd kronecker(const Word& w) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Ones(1, 1);
  for (int letter : w) {
    const Eigen::Matrix2d f = letter_matrix(letter);
    Eigen::MatrixXd next(m.rows() * 2, m.cols() * 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) next.block(i * m.rows(), j * m.cols(), m.rows(), m.cols()) = f(i, j) * m;
    m = std::move(next);
  }
  return m;
}

bool extend(const std::vector<Word>& words, std::size_t start, int r, std::vector<Word>& chosen) {
  if (static_cast<int>(chosen.size()) == r) return true;
  for (std::size_t i = start; i < words.size(); ++i) {
    bool ok = true;
    for (const auto& c : chosen) {
      if (!anticommute(words[i], c)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    chosen.push_back(words[i]);
    if (extend(words, i + 1, r, chosen)) return true;
    chosen.pop_back();
  }
  return false;
}

std::vector<Eigen::MatrixXd> kronecker_generators(int r, int n) {
  int m = 0;
  while ((1 << m) < n) ++m;
  std::vector<Word> words;
  const int total = 1 << (2 * m);
  for (int code = 0; code < total; ++code) {
    Word w(m);
    for (int i = 0; i < m; ++i) w[i] = (code >> (2 * (m - 1 - i))) & 3;
    if (squares_to_minus_identity(w)) words.push_back(std::move(w));
  }
  std::vector<Word> chosen;
  if (!extend(words, 0, r, chosen))
    throw Error(ErrorKind::InvalidRequest, "no Kronecker generators found for r = " + std::to_string(r));
  std::vector<Eigen::MatrixXd> out;
  for (const auto& w : chosen) out.push_back(kronecker(w));
  return out;
}

Eigen::Matrix4d left_i() {
  Eigen::Matrix4d m;
  m << 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0;
  return m;
}
Eigen::Matrix4d left_j() {
  Eigen::Matrix4d m;
  m << 0, 0, -1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, -1, 0, 0;
  return m;
}
Eigen::Matrix4d left_k() {
  Eigen::Matrix4d m;
  m << 0, 0, 0, -1, 0, 0, -1, 0, 0, 1, 0, 0, 1, 0, 0, 0;
  return m;
}

}  // namespace

CliffordModule build_module(int r, bool hyperkahler_requested) {
  if (r < 1) throw Error(ErrorKind::InvalidRequest, "r must be positive");
  if (hyperkahler_requested && r != 3)
    throw Error(ErrorKind::InvalidRequest, "a hyperkahler module has exactly r = 3 structures");
  if (r == 1) {
    Eigen::MatrixXd J(2, 2);
    J << 0, -1, 1, 0;
    return CliffordModule({J}, false);
  }
  if (r == 2) return CliffordModule({left_i(), left_j()}, false);
  if (r == 3) return CliffordModule({left_i(), left_j(), left_k()}, true);
  return CliffordModule(kronecker_generators(r, minimal_module_dim(r)), false);
}

Eigen::MatrixXd pencil_symbol(const CliffordModule& module, const Eigen::VectorXd& lambda) {
  if (lambda.size() != module.count())
    throw Error(ErrorKind::DimensionMismatch,
                "lambda has length " + std::to_string(lambda.size()) + ", expected " + std::to_string(module.count()));
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(module.dim(), module.dim());
  for (int l = 0; l < module.count(); ++l) out += lambda[l] * module.structure(l);
  return out;
}

std::array<Eigen::MatrixXd, 4> quaternionic_split(const CliffordModule& module) {
  if (module.count() != 3) throw Error(ErrorKind::NotHyperkahler, "quaternionic split needs r = 3");
  const auto& J1 = module.structure(0);
  const auto& J2 = module.structure(1);
  const auto& J3 = module.structure(2);
  if (!module.hyperkahler() || (J1 * J2 - J3).cwiseAbs().maxCoeff() > kCliffordTolerance)
    throw Error(ErrorKind::NotHyperkahler, "J_1 J_2 = J_3 does not hold");
  const int n = module.dim();
  if (n % 4 != 0) throw Error(ErrorKind::NotHyperkahler, "dimension is not a multiple of 4");

  std::vector<Eigen::VectorXd> base;
  Eigen::MatrixXd span(n, 0);
  for (int j = 0; j < n && static_cast<int>(base.size()) * 4 < n; ++j) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(n, j);
    if (span.cols() > 0) v -= span * (span.transpose() * v);
    const double norm = v.norm();
    if (norm < 1e-8) continue;
    v /= norm;
    base.push_back(v);
    Eigen::MatrixXd grown(n, span.cols() + 4);
    grown << span, v, J1 * v, J2 * v, J3 * v;
    span = std::move(grown);
  }
  const int p = static_cast<int>(base.size());
  std::array<Eigen::MatrixXd, 4> out;
  for (auto& m : out) m.resize(n, p);
  for (int i = 0; i < p; ++i) {
    out[0].col(i) = base[i];
    out[1].col(i) = J1 * base[i];
    out[2].col(i) = J2 * base[i];
    out[3].col(i) = J3 * base[i];
  }
  return out;
}

}  // namespace critspec
