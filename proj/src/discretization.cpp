#include "critspec/discretization.hpp"

#include "critspec/errors.hpp"
#include "critspec/su2_spectral.hpp"
#include "critspec/torus_spectral.hpp"

namespace critspec {

namespace {

class TorusDiscretization final : public Discretization {
 public:
  TorusDiscretization(std::shared_ptr<const CliffordModule> module, int hi, int G)
      : module_(std::move(module)),
        modes_(std::make_shared<const TorusModes>(module_->count(), 0, hi)),
        dirac_(module_, modes_),
        grid_(module_->count(), G, module_->dim()) {
    if (G < 2 * hi - 1)
      warn("grid size " + std::to_string(G) + " is below 2N-1 = " + std::to_string(2 * hi - 1) +
           "; the analysis aliases");
    for (int j = 0; j < grid_.points(); ++j) nodes_.push_back(grid_.point(j));
  }

  TimeDomain domain() const override { return TimeDomain::Torus; }
  int dim() const override { return module_->dim(); }
  int band() const override { return modes_->hi(); }
  int mode_count() const override { return modes_->size(); }
  int count_below(int N) const override { return modes_->count_below(N); }
  double degree(int m) const override { return modes_->degree(m); }
  std::vector<int> mode_key(int m) const override {
    const auto& k = modes_->k(m);
    return std::vector<int>(k.data(), k.data() + k.size());
  }
  int find(const std::vector<int>& key) const override {
    if (static_cast<int>(key.size()) != modes_->r()) return -1;
    return modes_->find(Eigen::Map<const Eigen::VectorXi>(key.data(), static_cast<Eigen::Index>(key.size())));
  }

  Eigen::MatrixXd apply_dirac(const Eigen::MatrixXd& c) const override { return dirac_.apply(c); }
  Eigen::MatrixXd apply_dirac_inverse(const Eigen::MatrixXd& c) const override { return dirac_.apply_inverse(c); }

  int node_count() const override { return grid_.points(); }
  double weight(int) const override { return 1.0 / grid_.points(); }
  TimePoint node(int j) const override { return nodes_[j]; }
  int quadrature_size() const override { return grid_.size(); }

  Eigen::MatrixXd synthesize(const Eigen::VectorXd& mean, const Eigen::MatrixXd& coeffs) const override {
    return grid_.synthesize(mean, coeffs, *modes_, J());
  }
  void analyze(const Eigen::MatrixXd& values, Eigen::VectorXd& mean, Eigen::MatrixXd& coeffs) const override {
    grid_.analyze(values, *modes_, J(), mean, coeffs);
  }

 private:
  const Eigen::MatrixXd& J() const { return module_->structure(module_->count() - 1); }

  std::shared_ptr<const CliffordModule> module_;
  std::shared_ptr<const TorusModes> modes_;
  TorusDirac dirac_;
  TorusGrid grid_;
  std::vector<Eigen::VectorXd> nodes_;
};

class SU2Discretization final : public Discretization {
 public:
  SU2Discretization(std::shared_ptr<const CliffordModule> module, int hi, int band)
      : module_(std::move(module)),
        modes_(std::make_shared<const SU2Modes>(0, hi)),
        dirac_(module_, modes_),
        rule_(band, std::max(hi - 1, 0)) {
    if (band < su2_exact_band(hi))
      warn("quadrature band " + std::to_string(band) + " is below 2(N-1) = " + std::to_string(su2_exact_band(hi)) +
           "; the analysis is not exact");
    for (int j = 0; j < rule_.size(); ++j) {
      nodes_.push_back(rule_.node(j));
      weights_.push_back(rule_.weight(j));
    }
  }

  TimeDomain domain() const override { return TimeDomain::SU2; }
  int dim() const override { return module_->dim(); }
  int band() const override { return modes_->hi(); }
  int mode_count() const override { return modes_->size(); }
  int count_below(int N) const override { return modes_->count_below(N); }
  double degree(int m) const override { return modes_->degree(m); }
  std::vector<int> mode_key(int m) const override {
    const auto& md = modes_->mode(m);
    return {md.k, md.a, md.b};
  }
  int find(const std::vector<int>& key) const override {
    if (key.size() != 3) return -1;
    return modes_->find(key[0], key[1], key[2]);
  }

  Eigen::MatrixXd apply_dirac(const Eigen::MatrixXd& c) const override { return dirac_.apply(c); }
  Eigen::MatrixXd apply_dirac_inverse(const Eigen::MatrixXd& c) const override { return dirac_.apply_inverse(c); }

  int node_count() const override { return rule_.size(); }
  double weight(int j) const override { return weights_[j]; }
  TimePoint node(int j) const override { return nodes_[j]; }
  int quadrature_size() const override { return rule_.band(); }

  Eigen::MatrixXd synthesize(const Eigen::VectorXd& mean, const Eigen::MatrixXd& coeffs) const override {
    return rule_.synthesize(mean, coeffs, *modes_, module_->structure(2));
  }
  void analyze(const Eigen::MatrixXd& values, Eigen::VectorXd& mean, Eigen::MatrixXd& coeffs) const override {
    rule_.analyze(values, *modes_, module_->structure(2), mean, coeffs);
  }

 private:
  std::shared_ptr<const CliffordModule> module_;
  std::shared_ptr<const SU2Modes> modes_;
  SU2Dirac dirac_;
  SU2Quadrature rule_;
  std::vector<SU2Point> nodes_;
  std::vector<double> weights_;
};

}  // namespace

std::shared_ptr<const Discretization> make_torus_discretization(std::shared_ptr<const CliffordModule> module,
                                                                int hi, int G) {
  return std::make_shared<const TorusDiscretization>(std::move(module), hi, G);
}

std::shared_ptr<const Discretization> make_su2_discretization(std::shared_ptr<const CliffordModule> module, int hi,
                                                              int band) {
  return std::make_shared<const SU2Discretization>(std::move(module), hi, band);
}

}  // namespace critspec
