#include "critspec/torus_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "critspec/errors.hpp"
#include "fft.hpp"

namespace critspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<int> key_of(const Frequency& k) { return std::vector<int>(k.data(), k.data() + k.size()); }

void check_frequency(const CliffordModule& module, const Frequency& k) {
  if (k.size() != module.count())
    throw Error(ErrorKind::DimensionMismatch, "frequency length differs from the number of complex structures");
  if (k.isZero()) throw Error(ErrorKind::ZeroFrequency, "k = 0 has no Dirac block");
  if (!is_canonical(k)) throw Error(ErrorKind::InvalidRequest, "frequency is not the canonical pair representative");
}

// J_r sum_{l<r} k_l J_l.
Eigen::MatrixXd js_matrix(const CliffordModule& module, const Frequency& k) {
  const int n = module.dim();
  const int r = module.count();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  for (int l = 0; l + 1 < r; ++l) S += k[l] * module.structure(l);
  return module.structure(r - 1) * S;
}

}  // namespace

bool is_canonical(const Frequency& k) {
  for (int i = 0; i < k.size(); ++i)
    if (k[i] != 0) return k[i] > 0;
  return false;
}

TorusModes::TorusModes(int r, int lo, int hi) : r_(r), lo_(std::max(lo, 0)), hi_(hi) {
  if (r < 1) throw Error(ErrorKind::InvalidRequest, "time dimension must be positive");
  if (hi < 0) throw Error(ErrorKind::InvalidRequest, "negative truncation degree");
  const int m = std::max(hi - 1, 0);
  const long lo2 = static_cast<long>(lo_) * lo_;
  const long hi2 = static_cast<long>(hi_) * hi_;
  Frequency k = Frequency::Constant(r, -m);
  if (hi_ > 0) {
    while (true) {
      const long n2 = k.cast<long>().squaredNorm();
      if (n2 > 0 && n2 >= lo2 && n2 < hi2) modes_.push_back(k);
      int i = r - 1;
      while (i >= 0 && k[i] == m) k[i--] = -m;
      if (i < 0) break;
      ++k[i];
    }
  }
  std::sort(modes_.begin(), modes_.end(), [](const Frequency& a, const Frequency& b) {
    const int na = a.squaredNorm(), nb = b.squaredNorm();
    if (na != nb) return na < nb;
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  for (int i = 0; i < size(); ++i) {
    index_.emplace(key_of(modes_[i]), i);
    degrees_.push_back(std::sqrt(static_cast<double>(modes_[i].squaredNorm())));
    canonical_.push_back(is_canonical(modes_[i]));
  }
  for (int i = 0; i < size(); ++i) partners_.push_back(find(-modes_[i]));
}

int TorusModes::find(const Frequency& k) const {
  auto it = index_.find(key_of(k));
  return it == index_.end() ? -1 : it->second;
}

int TorusModes::count_below(int N) const {
  const long n2 = static_cast<long>(N) * N;
  int c = 0;
  while (c < size() && modes_[c].squaredNorm() < n2) ++c;
  return c;
}

Eigen::MatrixXd dirac_block(const CliffordModule& module, const Frequency& k) {
  check_frequency(module, k);
  const int n = module.dim();
  const Eigen::MatrixXd JS = js_matrix(module, k);
  const double kr = k[k.size() - 1];
  Eigen::MatrixXd A(2 * n, 2 * n);
  A.topLeftCorner(n, n) = kr * Eigen::MatrixXd::Identity(n, n);
  A.topRightCorner(n, n) = -JS;
  A.bottomLeftCorner(n, n) = JS;
  A.bottomRightCorner(n, n) = -kr * Eigen::MatrixXd::Identity(n, n);
  return kTwoPi * A;
}

Eigen::MatrixXd dirac_block_inverse(const CliffordModule& module, const Frequency& k) {
  const Eigen::MatrixXd A = dirac_block(module, k);
  return A / (kTwoPi * kTwoPi * k.squaredNorm());
}

ModePair make_mode_pair(const CliffordModule& module, const Frequency& k) { return {k, dirac_block(module, k)}; }

TorusDirac::TorusDirac(std::shared_ptr<const CliffordModule> module, std::shared_ptr<const TorusModes> modes)
    : module_(std::move(module)), modes_(std::move(modes)) {
  if (modes_->r() != module_->count())
    throw Error(ErrorKind::DimensionMismatch, "mode set and module have different time dimensions");
  js_.resize(modes_->size());
  for (int m = 0; m < modes_->size(); ++m)
    if (modes_->canonical(m)) js_[m] = js_matrix(*module_, modes_->k(m));
}

Eigen::MatrixXd TorusDirac::apply_scaled(const Eigen::MatrixXd& coeffs, bool inverse) const {
  if (coeffs.rows() != module_->dim() || coeffs.cols() != modes_->size())
    throw Error(ErrorKind::DimensionMismatch, "coefficient matrix does not match the mode set");
  Eigen::MatrixXd out(coeffs.rows(), coeffs.cols());
  const int r = modes_->r();
  for (int m = 0; m < modes_->size(); ++m) {
    if (!modes_->canonical(m)) continue;
    const int p = modes_->partner(m);
    const Frequency& k = modes_->k(m);
    double scale = kTwoPi;
    if (inverse) scale /= kTwoPi * kTwoPi * k.squaredNorm();
    const double kr = k[r - 1];
    const auto X = coeffs.col(p);
    const auto Y = coeffs.col(m);
    out.col(p) = scale * (kr * X - js_[m] * Y);
    out.col(m) = scale * (js_[m] * X - kr * Y);
  }
  return out;
}

Eigen::MatrixXd TorusDirac::apply(const Eigen::MatrixXd& coeffs) const { return apply_scaled(coeffs, false); }

Eigen::MatrixXd TorusDirac::apply_inverse(const Eigen::MatrixXd& coeffs) const {
  if (modes_->lo() == 0 && modes_->size() > 0 && modes_->degree(0) == 0.0)
    throw Error(ErrorKind::ZeroFrequency, "k = 0 has no inverse block");
  return apply_scaled(coeffs, true);
}

TorusField::TorusField(std::shared_ptr<const CliffordModule> module, std::shared_ptr<const TorusModes> modes)
    : module_(std::move(module)), modes_(std::move(modes)) {
  if (modes_->r() != module_->count())
    throw Error(ErrorKind::DimensionMismatch, "mode set and module have different time dimensions");
  mean_ = Eigen::VectorXd::Zero(module_->dim());
  coeffs_ = Eigen::MatrixXd::Zero(module_->dim(), modes_->size());
}

TorusField::TorusField(std::shared_ptr<const CliffordModule> module, std::shared_ptr<const TorusModes> modes,
                       Eigen::VectorXd mean, Eigen::MatrixXd coeffs)
    : module_(std::move(module)), modes_(std::move(modes)), mean_(std::move(mean)), coeffs_(std::move(coeffs)) {
  if (modes_->r() != module_->count())
    throw Error(ErrorKind::DimensionMismatch, "mode set and module have different time dimensions");
  if (mean_.size() != module_->dim() || coeffs_.rows() != module_->dim() || coeffs_.cols() != modes_->size())
    throw Error(ErrorKind::DimensionMismatch, "field data does not match the module and mode set");
}

TorusField TorusField::zero(std::shared_ptr<const CliffordModule> module, int N) {
  auto modes = std::make_shared<const TorusModes>(module->count(), 0, N);
  return TorusField(std::move(module), std::move(modes));
}

Eigen::VectorXd TorusField::coeff(const Frequency& k) const {
  const int m = modes_->find(k);
  if (m < 0) return Eigen::VectorXd::Zero(module_->dim());
  return coeffs_.col(m);
}

void TorusField::set_coeff(const Frequency& k, const Eigen::VectorXd& v) {
  const int m = modes_->find(k);
  if (m < 0) throw Error(ErrorKind::IndexOutOfRange, "frequency outside the field's truncation");
  if (v.size() != module_->dim()) throw Error(ErrorKind::DimensionMismatch, "coefficient has the wrong length");
  coeffs_.col(m) = v;
}

Eigen::VectorXd TorusField::value_at(const Eigen::VectorXd& t) const {
  if (t.size() != r()) throw Error(ErrorKind::DimensionMismatch, "time point has the wrong length");
  const Eigen::MatrixXd& J = module_->structure(r() - 1);
  Eigen::VectorXd v = mean_;
  for (int m = 0; m < modes_->size(); ++m) {
    const double theta = kTwoPi * modes_->k(m).cast<double>().dot(t);
    v += std::cos(theta) * coeffs_.col(m) + std::sin(theta) * (J * coeffs_.col(m));
  }
  return v;
}

TorusField dirac_apply(const TorusField& field) {
  TorusDirac D(field.module_ptr(), field.modes_ptr());
  return TorusField(field.module_ptr(), field.modes_ptr(), Eigen::VectorXd::Zero(field.module().dim()),
                    D.apply(field.coeffs()));
}

TorusField dirac_inverse_tail(const TorusField& tail, int N) {
  if (N < 1) throw Error(ErrorKind::InvalidRequest, "cutoff must be positive");
  if (tail.modes().lo() < N)
    throw Error(ErrorKind::FrequencyBelowCutoff, "tail field carries modes below the cutoff");
  TorusDirac D(tail.module_ptr(), tail.modes_ptr());
  return TorusField(tail.module_ptr(), tail.modes_ptr(), Eigen::VectorXd::Zero(tail.module().dim()),
                    D.apply_inverse(tail.coeffs()));
}

double l2_inner(const TorusField& a, const TorusField& b) {
  if (a.module().dim() != b.module().dim() || a.r() != b.r() || a.modes().lo() != b.modes().lo() ||
      a.modes().hi() != b.modes().hi())
    throw Error(ErrorKind::DimensionMismatch, "fields have different shapes");
  return a.mean().dot(b.mean()) + (a.coeffs().array() * b.coeffs().array()).sum();
}

int fft_size_at_least(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int x = m;
    for (int p : {2, 3, 5})
      while (x % p == 0) x /= p;
    if (x == 1) return m;
  }
}

TorusGrid::TorusGrid(int r, int G, int n) : r_(r), G_(G), n_(n), points_(1) {
  if (r < 1 || G < 1 || n < 1) throw Error(ErrorKind::InvalidRequest, "grid dimensions must be positive");
  for (int i = 0; i < r; ++i) points_ *= G;
  fft_ = detail::BatchedFft::get(std::vector<int>(r, G), n);
}

Eigen::VectorXd TorusGrid::point(int j) const {
  Eigen::VectorXd t(r_);
  for (int i = r_ - 1; i >= 0; --i) {
    t[i] = static_cast<double>(j % G_) / G_;
    j /= G_;
  }
  return t;
}

int TorusGrid::flat_index(const Frequency& k) const {
  int idx = 0;
  for (int i = 0; i < r_; ++i) idx = idx * G_ + ((k[i] % G_) + G_) % G_;
  return idx;
}

Eigen::MatrixXd TorusGrid::synthesize(const Eigen::VectorXd& mean, const Eigen::MatrixXd& coeffs,
                                      const TorusModes& modes, const Eigen::MatrixXd& J) const {
  if (modes.r() != r_ || coeffs.rows() != n_ || coeffs.cols() != modes.size() || mean.size() != n_)
    throw Error(ErrorKind::DimensionMismatch, "field data does not match the grid");
  // f(t) = Re sum_k e^{2 pi i k.t} (c_k - i J c_k)
  auto buf = fft_->make_buffer();
  const Eigen::MatrixXd Jc = J * coeffs;
  for (int m = 0; m < modes.size(); ++m) {
    const int idx = flat_index(modes.k(m));
    for (int c = 0; c < n_; ++c) buf[static_cast<std::size_t>(c) * points_ + idx] += std::complex<double>(coeffs(c, m), -Jc(c, m));
  }
  fft_->backward(buf);
  Eigen::MatrixXd values(n_, points_);
  for (int c = 0; c < n_; ++c)
    for (int j = 0; j < points_; ++j) values(c, j) = mean[c] + buf[static_cast<std::size_t>(c) * points_ + j].real();
  return values;
}

void TorusGrid::analyze(const Eigen::MatrixXd& values, const TorusModes& modes, const Eigen::MatrixXd& J,
                        Eigen::VectorXd& mean, Eigen::MatrixXd& coeffs) const {
  if (modes.r() != r_ || values.rows() != n_ || values.cols() != points_)
    throw Error(ErrorKind::DimensionMismatch, "grid values do not match the grid");
  auto buf = fft_->make_buffer();
  for (int c = 0; c < n_; ++c)
    for (int j = 0; j < points_; ++j) buf[static_cast<std::size_t>(c) * points_ + j] = values(c, j);
  fft_->forward(buf);
  const double inv = 1.0 / points_;
  mean.resize(n_);
  for (int c = 0; c < n_; ++c) mean[c] = buf[static_cast<std::size_t>(c) * points_].real() * inv;
  // c_k = Re F_k + J Im F_k
  Eigen::MatrixXd re(n_, modes.size()), im(n_, modes.size());
  for (int m = 0; m < modes.size(); ++m) {
    const int idx = flat_index(modes.k(m));
    for (int c = 0; c < n_; ++c) {
      const auto z = buf[static_cast<std::size_t>(c) * points_ + idx];
      re(c, m) = z.real() * inv;
      im(c, m) = z.imag() * inv;
    }
  }
  coeffs = re + J * im;
}

Eigen::MatrixXd synthesize(const TorusField& field, int G) {
  TorusGrid grid(field.r(), G, field.module().dim());
  return grid.synthesize(field.mean(), field.coeffs(), field.modes(), field.module().structure(field.r() - 1));
}

TorusField analyze(const Eigen::MatrixXd& values, int G, std::shared_ptr<const CliffordModule> module, int N) {
  if (G < 2 * N - 1)
    warn("grid size " + std::to_string(G) + " is below 2N-1 = " + std::to_string(2 * N - 1) +
         "; the analysis aliases");
  const int r = module->count();
  TorusGrid grid(r, G, module->dim());
  auto modes = std::make_shared<const TorusModes>(r, 0, N);
  Eigen::VectorXd mean;
  Eigen::MatrixXd coeffs;
  grid.analyze(values, *modes, module->structure(r - 1), mean, coeffs);
  return TorusField(std::move(module), std::move(modes), std::move(mean), std::move(coeffs));
}

}  // namespace critspec
