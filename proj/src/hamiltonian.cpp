#include "critspec/hamiltonian.hpp"

#include <cmath>
#include <numbers>

#include "critspec/errors.hpp"

namespace critspec {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

const char* to_string(TimeDomain domain) { return domain == TimeDomain::Torus ? "torus" : "su2"; }

Lattice::Lattice(Eigen::MatrixXd basis) : basis_(std::move(basis)) {
  if (basis_.rows() != basis_.cols() || basis_.rows() == 0)
    throw Error(ErrorKind::DimensionMismatch, "lattice basis must be a non-empty square matrix");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_);
  if (!lu.isInvertible()) throw Error(ErrorKind::InvalidRequest, "lattice basis is singular");
  inverse_ = lu.inverse();
}

Eigen::VectorXd Lattice::reduce(const Eigen::VectorXd& w) const {
  Eigen::VectorXd c = inverse_ * w;
  for (auto& x : c) {
    x -= std::floor(x);
    if (x >= 1.0) x = 0.0;
  }
  return basis_ * c;
}

Eigen::VectorXd Lattice::wrap(const Eigen::VectorXd& d) const {
  Eigen::VectorXd c = inverse_ * d;
  for (auto& x : c) x -= std::floor(x + 0.5);
  return basis_ * c;
}

Eigen::VectorXd Lattice::dual(const Eigen::VectorXi& nu) const {
  if (nu.size() != dim()) throw Error(ErrorKind::DimensionMismatch, "target frequency has the wrong length");
  return inverse_.transpose() * nu.cast<double>();
}

double TimeFactor::eval(const TimePoint& t) const {
  switch (kind) {
    case Kind::Constant:
      return 1.0;
    case Kind::Torus: {
      const auto* tt = std::get_if<Eigen::VectorXd>(&t);
      if (!tt) throw Error(ErrorKind::DomainMismatch, "torus time factor evaluated at an SU(2) point");
      if (tt->size() != m.size()) throw Error(ErrorKind::DimensionMismatch, "time point has the wrong length");
      return std::cos(kTwoPi * m.cast<double>().dot(*tt) + phase);
    }
    case Kind::SU2: {
      const auto* x = std::get_if<SU2Point>(&t);
      if (!x) throw Error(ErrorKind::DomainMismatch, "SU(2) time factor evaluated at a torus point");
      const auto c = matrix_coeff(k, a, b, *x);
      return imaginary ? c.imag() : c.real();
    }
  }
  return 0.0;
}

int TimeFactor::band() const {
  switch (kind) {
    case Kind::Torus: return static_cast<int>(std::ceil(m.cast<double>().norm() - 1e-12));
    case Kind::SU2: return k;
    default: return 0;
  }
}

TrigHamiltonian::TrigHamiltonian(int target_dim, TimeDomain domain, std::vector<HamiltonianTerm> terms,
                                 Lattice lattice)
    : dim_(target_dim), domain_(domain), terms_(std::move(terms)), lattice_(std::move(lattice)) {
  if (lattice_.dim() != dim_) throw Error(ErrorKind::DimensionMismatch, "lattice and target dimensions differ");
  for (const auto& term : terms_) {
    if (!std::isfinite(term.amplitude) || !std::isfinite(term.phase))
      throw Error(ErrorKind::InvalidRequest, "non-finite amplitude or phase");
    if (term.time.kind == TimeFactor::Kind::Torus && domain_ != TimeDomain::Torus)
      throw Error(ErrorKind::DomainMismatch, "torus time factor in an SU(2) Hamiltonian");
    if (term.time.kind == TimeFactor::Kind::SU2) {
      if (domain_ != TimeDomain::SU2) throw Error(ErrorKind::DomainMismatch, "SU(2) time factor in a torus Hamiltonian");
      const auto& f = term.time;
      if (f.k < 0 || f.a < 0 || f.b < 0 || f.a > f.k || f.b > f.k)
        throw Error(ErrorKind::IndexOutOfRange, "SU(2) time factor indices out of range");
    }
    frequencies_.push_back(lattice_.dual(term.nu));
  }
}

void TrigHamiltonian::check_time(const TimePoint& t) const {
  const bool torus = std::holds_alternative<Eigen::VectorXd>(t);
  if (torus != (domain_ == TimeDomain::Torus))
    throw Error(ErrorKind::DomainMismatch, std::string("time point does not belong to the ") + to_string(domain_) +
                                               " domain");
}

Eigen::VectorXd TrigHamiltonian::time_factors(const TimePoint& t) const {
  check_time(t);
  Eigen::VectorXd f(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) f[i] = terms_[i].time.eval(t);
  return f;
}

double TrigHamiltonian::eval_factors(const Eigen::VectorXd& factors,
                                     const Eigen::Ref<const Eigen::VectorXd>& w) const {
  double v = 0.0;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const double theta = kTwoPi * frequencies_[i].dot(w) + terms_[i].phase;
    v += terms_[i].amplitude * factors[i] * std::cos(theta);
  }
  return v;
}

void TrigHamiltonian::add_grad_factors(const Eigen::VectorXd& factors, const Eigen::Ref<const Eigen::VectorXd>& w,
                                       Eigen::Ref<Eigen::VectorXd> out, double scale) const {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const double theta = kTwoPi * frequencies_[i].dot(w) + terms_[i].phase;
    out -= (scale * terms_[i].amplitude * factors[i] * kTwoPi * std::sin(theta)) * frequencies_[i];
  }
}

double TrigHamiltonian::eval(const TimePoint& t, const Eigen::VectorXd& w) const {
  if (w.size() != dim_) throw Error(ErrorKind::DimensionMismatch, "target point has the wrong length");
  return eval_factors(time_factors(t), w);
}

Eigen::VectorXd TrigHamiltonian::grad_w(const TimePoint& t, const Eigen::VectorXd& w) const {
  if (w.size() != dim_) throw Error(ErrorKind::DimensionMismatch, "target point has the wrong length");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim_);
  add_grad_factors(time_factors(t), w, g);
  return g;
}

Eigen::MatrixXd TrigHamiltonian::hess_w(const TimePoint& t, const Eigen::VectorXd& w) const {
  if (w.size() != dim_) throw Error(ErrorKind::DimensionMismatch, "target point has the wrong length");
  const Eigen::VectorXd factors = time_factors(t);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim_, dim_);
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const double theta = kTwoPi * frequencies_[i].dot(w) + terms_[i].phase;
    h -= (terms_[i].amplitude * factors[i] * kTwoPi * kTwoPi * std::cos(theta)) *
         (frequencies_[i] * frequencies_[i].transpose());
  }
  return h;
}

double TrigHamiltonian::hess_sup_bound() const {
  double bound = 0.0;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const double f = kTwoPi * frequencies_[i].norm();
    bound += std::abs(terms_[i].amplitude) * f * f;
  }
  return bound;
}

double TrigHamiltonian::grad_sup_bound() const {
  double bound = 0.0;
  for (std::size_t i = 0; i < terms_.size(); ++i) bound += std::abs(terms_[i].amplitude) * kTwoPi * frequencies_[i].norm();
  return bound;
}

int TrigHamiltonian::time_band() const {
  int band = 0;
  for (const auto& term : terms_) band = std::max(band, term.time.band());
  return band;
}

bool TrigHamiltonian::time_independent() const {
  for (const auto& term : terms_)
    if (term.time.kind != TimeFactor::Kind::Constant) return false;
  return true;
}

double contraction_factor(const TrigHamiltonian& H, TimeDomain domain, int N) {
  const double bound = H.hess_sup_bound();
  return domain == TimeDomain::Torus ? bound / (kTwoPi * N) : bound / N;
}

int min_truncation(const TrigHamiltonian& H, TimeDomain domain, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw Error(ErrorKind::InvalidRequest, "safety factor must lie in (0, 1)");
  const double bound = H.hess_sup_bound();
  const double scale = domain == TimeDomain::Torus ? kTwoPi : 1.0;
  const double n = std::ceil(bound / (scale * rho) - 1e-12);
  return std::max(1, static_cast<int>(n));
}

}  // namespace critspec
