#include "critspec/su2_spectral.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "critspec/errors.hpp"
#include "critspec/torus_spectral.hpp"
#include "fft.hpp"

namespace critspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int block_offset(int k) {
  // sum_{j<k} (j+1)^2
  return k * (k + 1) * (2 * k + 1) / 6;
}

void check_pair(const CliffordModule& module, int modes_cols, const Eigen::MatrixXd& coeffs) {
  if (coeffs.rows() != module.dim() || coeffs.cols() != modes_cols)
    throw Error(ErrorKind::DimensionMismatch, "coefficient matrix does not match the mode set");
}

}  // namespace

SU2Modes::SU2Modes(int lo, int hi) : lo_(std::max(lo, 0)), hi_(hi) {
  if (hi < 0) throw Error(ErrorKind::InvalidRequest, "negative truncation degree");
  for (int k = std::max(lo_, 1); k < hi_; ++k)
    for (int a = 0; a <= k; ++a)
      for (int b = 0; b <= k; ++b) modes_.push_back({k, a, b});
}

int SU2Modes::find(int k, int a, int b) const {
  const int first = std::max(lo_, 1);
  if (k < first || k >= hi_ || a < 0 || b < 0 || a > k || b > k) return -1;
  return block_offset(k) - block_offset(first) + a * (k + 1) + b;
}

int SU2Modes::count_below(int N) const {
  const int first = std::max(lo_, 1);
  const int top = std::clamp(N, first, hi_);
  return block_offset(top) - block_offset(first);
}

SU2Dirac::SU2Dirac(std::shared_ptr<const CliffordModule> module, std::shared_ptr<const SU2Modes> modes)
    : module_(std::move(module)), modes_(std::move(modes)) {
  if (!module_->hyperkahler() || module_->count() != 3)
    throw Error(ErrorKind::NotHyperkahler, "the SU(2) Dirac operator needs a hyperkahler module");
  const auto U = quaternionic_split(*module_);
  K_ = U[0] * U[2].transpose() - U[1] * U[3].transpose() - U[2] * U[0].transpose() + U[3] * U[1].transpose();
  pair_.resize(modes_->size(), -1);
  for (int m = 0; m < modes_->size(); ++m) {
    const auto& md = modes_->mode(m);
    if (md.b > 0) pair_[m] = modes_->find(md.k, md.k - md.a, md.k - md.b + 1);
  }
}

Eigen::MatrixXd SU2Dirac::apply(const Eigen::MatrixXd& coeffs) const {
  check_pair(*module_, modes_->size(), coeffs);
  Eigen::MatrixXd out(coeffs.rows(), coeffs.cols());
  for (int m = 0; m < modes_->size(); ++m) {
    const auto& [k, a, b] = modes_->mode(m);
    if (b == 0) {
      out.col(m) = k * coeffs.col(m);
      continue;
    }
    const double cs = 2.0 * std::sqrt(static_cast<double>(b) * (k - b + 1)) * (((a + b) % 2) ? -1.0 : 1.0);
    out.col(m) = (k - 2.0 * b) * coeffs.col(m) + cs * (K_ * coeffs.col(pair_[m]));
  }
  return out;
}

Eigen::MatrixXd SU2Dirac::apply_inverse(const Eigen::MatrixXd& coeffs) const {
  check_pair(*module_, modes_->size(), coeffs);
  Eigen::MatrixXd out(coeffs.rows(), coeffs.cols());
  for (int m = 0; m < modes_->size(); ++m) {
    const auto& [k, a, b] = modes_->mode(m);
    if (b == 0) {
      out.col(m) = coeffs.col(m) / k;
      continue;
    }
    const double det = -static_cast<double>(k) * (k + 2);
    const double cs = 2.0 * std::sqrt(static_cast<double>(b) * (k - b + 1)) * (((a + b) % 2) ? -1.0 : 1.0);
    out.col(m) = ((2.0 * b - k - 2.0) / det) * coeffs.col(m) - (cs / det) * (K_ * coeffs.col(pair_[m]));
  }
  return out;
}

SU2Field::SU2Field(std::shared_ptr<const CliffordModule> module, std::shared_ptr<const SU2Modes> modes)
    : module_(std::move(module)), modes_(std::move(modes)) {
  mean_ = Eigen::VectorXd::Zero(module_->dim());
  coeffs_ = Eigen::MatrixXd::Zero(module_->dim(), modes_->size());
}

SU2Field::SU2Field(std::shared_ptr<const CliffordModule> module, std::shared_ptr<const SU2Modes> modes,
                   Eigen::VectorXd mean, Eigen::MatrixXd coeffs)
    : module_(std::move(module)), modes_(std::move(modes)), mean_(std::move(mean)), coeffs_(std::move(coeffs)) {
  if (mean_.size() != module_->dim() || coeffs_.rows() != module_->dim() || coeffs_.cols() != modes_->size())
    throw Error(ErrorKind::DimensionMismatch, "field data does not match the module and mode set");
}

SU2Field SU2Field::zero(std::shared_ptr<const CliffordModule> module, int N) {
  return SU2Field(std::move(module), std::make_shared<const SU2Modes>(0, N));
}

Eigen::VectorXd SU2Field::coeff(int k, int a, int b) const {
  const int m = modes_->find(k, a, b);
  if (m < 0) return Eigen::VectorXd::Zero(module_->dim());
  return coeffs_.col(m);
}

void SU2Field::set_coeff(int k, int a, int b, const Eigen::VectorXd& v) {
  const int m = modes_->find(k, a, b);
  if (m < 0) throw Error(ErrorKind::IndexOutOfRange, "mode outside the field's truncation");
  if (v.size() != module_->dim()) throw Error(ErrorKind::DimensionMismatch, "coefficient has the wrong length");
  coeffs_.col(m) = v;
}

Eigen::VectorXd SU2Field::value_at(const SU2Point& x) const {
  if (module_->count() != 3) throw Error(ErrorKind::NotHyperkahler, "SU(2) fields need three complex structures");
  const Eigen::MatrixXd& J3 = module_->structure(2);
  Eigen::VectorXd v = mean_;
  for (int k = std::max(modes_->lo(), 1); k < modes_->hi(); ++k) {
    const Eigen::MatrixXcd C = std::sqrt(k + 1.0) * matrix_coeffs(k, x);
    for (int a = 0; a <= k; ++a)
      for (int b = 0; b <= k; ++b) {
        const auto c = coeffs_.col(modes_->find(k, a, b));
        v += C(a, b).real() * c + C(a, b).imag() * (J3 * c);
      }
  }
  return v;
}

SU2Field dirac_apply_su2(const SU2Field& field) {
  SU2Dirac D(field.module_ptr(), field.modes_ptr());
  return SU2Field(field.module_ptr(), field.modes_ptr(), Eigen::VectorXd::Zero(field.module().dim()),
                  D.apply(field.coeffs()));
}

SU2Field dirac_inverse_tail_su2(const SU2Field& tail, int N) {
  if (N < 1) throw Error(ErrorKind::InvalidRequest, "cutoff must be positive");
  if (tail.modes().lo() < N) throw Error(ErrorKind::FrequencyBelowCutoff, "tail field carries modes below the cutoff");
  SU2Dirac D(tail.module_ptr(), tail.modes_ptr());
  return SU2Field(tail.module_ptr(), tail.modes_ptr(), Eigen::VectorXd::Zero(tail.module().dim()),
                  D.apply_inverse(tail.coeffs()));
}

double l2_inner(const SU2Field& a, const SU2Field& b) {
  if (a.module().dim() != b.module().dim() || a.modes().lo() != b.modes().lo() || a.modes().hi() != b.modes().hi())
    throw Error(ErrorKind::DimensionMismatch, "fields have different shapes");
  return a.mean().dot(b.mean()) + (a.coeffs().array() * b.coeffs().array()).sum();
}

void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights) {
  if (count < 1) throw Error(ErrorKind::InvalidRequest, "Gauss-Legendre rule needs at least one node");
  nodes.assign(count, 0.0);
  weights.assign(count, 0.0);
  // P_count(x) and its derivative by the three-term recurrence.
  auto legendre = [count](double x, double& dp) {
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= count; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = count * (x * p1 - p0) / (x * x - 1.0);
    return p1;
  };
  for (int i = 0; i < (count + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      const double dx = legendre(x, dp) / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(x, dp);
    nodes[i] = -x;
    nodes[count - 1 - i] = x;
    weights[i] = weights[count - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (count % 2 == 1) nodes[count / 2] = 0.0;
}

SU2Quadrature::SU2Quadrature(int band, int max_degree) : band_(band) {
  if (band < 0) throw Error(ErrorKind::InvalidRequest, "quadrature band must be non-negative");
  max_degree_ = max_degree < 0 ? band : max_degree;
  M_ = fft_size_at_least(band + 1);
  Q_ = band / 4 + 1;
  std::vector<double> u, w;
  gauss_legendre(Q_, u, w);
  profiles_.resize(Q_);
  for (int q = 0; q < Q_; ++q) {
    eta_.push_back(0.5 * std::acos(u[q]));
    polar_weights_.push_back(0.5 * w[q]);
    for (int k = 0; k <= max_degree_; ++k) profiles_[q].push_back(std::sqrt(k + 1.0) * hopf_profile(k, eta_[q]));
  }
}

SU2Point SU2Quadrature::node(int j) const {
  const int q = j / (M_ * M_);
  const int j1 = (j / M_) % M_;
  const int j2 = j % M_;
  return SU2Point::from_hopf(eta_[q], kTwoPi * j1 / M_, kTwoPi * j2 / M_);
}

void SU2Quadrature::check_degree(int hi) const {
  if (hi - 1 > max_degree_)
    throw Error(ErrorKind::InvalidRequest, "mode degree " + std::to_string(hi - 1) +
                                               " exceeds the quadrature's precomputed degree " +
                                               std::to_string(max_degree_));
}

Eigen::MatrixXd SU2Quadrature::synthesize(const Eigen::VectorXd& mean, const Eigen::MatrixXd& coeffs,
                                          const SU2Modes& modes, const Eigen::MatrixXd& J3) const {
  const int n = static_cast<int>(mean.size());
  if (coeffs.rows() != n || coeffs.cols() != modes.size())
    throw Error(ErrorKind::DimensionMismatch, "field data does not match the mode set");
  check_degree(modes.hi());
  const int MM = M_ * M_;
  auto fft = detail::BatchedFft::get({M_, M_}, Q_ * n);
  auto buf = fft->make_buffer();
  // f = mean + Re sum e^{i(m1 xi1 + m2 xi2)} d(eta) (c - i J3 c)
  const Eigen::MatrixXd Jc = J3 * coeffs;
  for (int m = 0; m < modes.size(); ++m) {
    const auto& [k, a, b] = modes.mode(m);
    const int m1 = ((hopf_frequency_1(k, a, b) % M_) + M_) % M_;
    const int m2 = ((hopf_frequency_2(k, a, b) % M_) + M_) % M_;
    const int idx = m1 * M_ + m2;
    for (int q = 0; q < Q_; ++q) {
      const double d = profiles_[q][k](a, b);
      for (int c = 0; c < n; ++c)
        buf[static_cast<std::size_t>(q * n + c) * MM + idx] += std::complex<double>(d * coeffs(c, m), -d * Jc(c, m));
    }
  }
  fft->backward(buf);
  Eigen::MatrixXd values(n, size());
  for (int q = 0; q < Q_; ++q)
    for (int c = 0; c < n; ++c) {
      const std::size_t base = static_cast<std::size_t>(q * n + c) * MM;
      for (int j = 0; j < MM; ++j) values(c, q * MM + j) = mean[c] + buf[base + j].real();
    }
  return values;
}

void SU2Quadrature::analyze(const Eigen::MatrixXd& values, const SU2Modes& modes, const Eigen::MatrixXd& J3,
                            Eigen::VectorXd& mean, Eigen::MatrixXd& coeffs) const {
  const int n = static_cast<int>(values.rows());
  if (values.cols() != size()) throw Error(ErrorKind::DimensionMismatch, "values do not match the quadrature nodes");
  check_degree(modes.hi());
  const int MM = M_ * M_;
  auto fft = detail::BatchedFft::get({M_, M_}, Q_ * n);
  auto buf = fft->make_buffer();
  for (int q = 0; q < Q_; ++q)
    for (int c = 0; c < n; ++c) {
      const std::size_t base = static_cast<std::size_t>(q * n + c) * MM;
      for (int j = 0; j < MM; ++j) buf[base + j] = values(c, q * MM + j);
    }
  fft->forward(buf);
  const double inv = 1.0 / MM;
  // Per node and frequency, Re F + J3 Im F collects sum d_R(eta) v_R over
  // modes R sharing that frequency; the polar rule then separates them.
  mean = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd re = Eigen::MatrixXd::Zero(n, modes.size());
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(n, modes.size());
  for (int q = 0; q < Q_; ++q) {
    const double wq = polar_weights_[q] * inv;
    for (int c = 0; c < n; ++c) mean[c] += wq * buf[static_cast<std::size_t>(q * n + c) * MM].real();
    for (int m = 0; m < modes.size(); ++m) {
      const auto& [k, a, b] = modes.mode(m);
      const int m1 = ((hopf_frequency_1(k, a, b) % M_) + M_) % M_;
      const int m2 = ((hopf_frequency_2(k, a, b) % M_) + M_) % M_;
      const int idx = m1 * M_ + m2;
      const double d = wq * profiles_[q][k](a, b);
      for (int c = 0; c < n; ++c) {
        const auto z = buf[static_cast<std::size_t>(q * n + c) * MM + idx];
        re(c, m) += d * z.real();
        im(c, m) += d * z.imag();
      }
    }
  }
  // The mean's imaginary part vanishes for real input; J3 Im F only matters
  // for k >= 1.
  coeffs = re + J3 * im;
}

void SU2Quadrature::write_csv(std::ostream& out) const {
  out << "q0,q1,q2,q3,weight\n";
  out.precision(17);
  for (int j = 0; j < size(); ++j) {
    const auto x = node(j);
    out << x.q[0] << ',' << x.q[1] << ',' << x.q[2] << ',' << x.q[3] << ',' << weight(j) << '\n';
  }
}

SU2Field haar_analyze(const Eigen::MatrixXd& values, const SU2Quadrature& rule,
                      std::shared_ptr<const CliffordModule> module, int N) {
  if (rule.band() < su2_exact_band(N))
    warn("quadrature band " + std::to_string(rule.band()) + " is below 2(N-1) = " +
         std::to_string(su2_exact_band(N)) + "; the analysis is not exact");
  if (module->count() != 3) throw Error(ErrorKind::NotHyperkahler, "SU(2) fields need three complex structures");
  auto modes = std::make_shared<const SU2Modes>(0, N);
  Eigen::VectorXd mean;
  Eigen::MatrixXd coeffs;
  rule.analyze(values, *modes, module->structure(2), mean, coeffs);
  return SU2Field(std::move(module), std::move(modes), std::move(mean), std::move(coeffs));
}

Eigen::MatrixXd haar_synthesize(const SU2Field& field, const SU2Quadrature& rule) {
  if (field.module().count() != 3) throw Error(ErrorKind::NotHyperkahler, "SU(2) fields need three complex structures");
  return rule.synthesize(field.mean(), field.coeffs(), field.modes(), field.module().structure(2));
}

}  // namespace critspec
