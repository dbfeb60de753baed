#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "setcast/dataset.hpp"
#include "setcast/direction.hpp"
#include "setcast/kernel.hpp"

namespace setcast::svm {

/// +1 for Up, -1 for Down.
constexpr int sign_of(Direction d) noexcept { return d == Direction::Up ? 1 : -1; }

struct TrainerConfig {
  double cost = 1.0;  // box constraint C
  double kkt_tol = 1e-3;
  std::size_t max_passes = 100;  // full sweeps over the training set
  std::uint64_t seed = 0;
  bool standardize = false;  // z-score features with training statistics

  void validate() const;
};

struct SupportVector {
  std::vector<double> x;  // in model (possibly standardized) space
  double alpha = 0.0;
  int label = 1;  // +1 / -1
};

/// Affine feature transform fitted on training data. Empty means identity.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  bool active() const noexcept { return !mean.empty(); }
  std::vector<double> apply(std::span<const double> x) const;
  static Standardizer fit(const Dataset& dataset);
};

/// Dual-form decision function b + sum_i alpha_i y_i K(x_i, x). Immutable.
class SvmModel {
 public:
  SvmModel(KernelSpec kernel, double cost, double bias, std::size_t dimension, std::vector<SupportVector> svs,
           Standardizer standardizer = {}, bool converged = true);

  const KernelSpec& kernel() const noexcept { return kernel_; }
  double cost() const noexcept { return cost_; }
  double bias() const noexcept { return bias_; }
  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<SupportVector>& support_vectors() const noexcept { return svs_; }
  const Standardizer& standardizer() const noexcept { return standardizer_; }
  bool converged() const noexcept { return converged_; }

  /// w = sum_i alpha_i y_i x_i (model space). Linear kernel only.
  std::vector<double> weight_vector() const;

  void save(std::ostream& out) const;
  static SvmModel load(std::istream& in);

 private:
  KernelSpec kernel_;
  double cost_;
  double bias_;
  std::size_t dimension_;
  std::vector<SupportVector> svs_;
  Standardizer standardizer_;
  bool converged_;
};

/// Trained model together with the full per-sample dual vector.
struct SmoResult {
  SvmModel model;
  std::vector<double> alpha;  // one per training sample
  std::size_t passes = 0;
  bool converged = false;
  double max_kkt_violation = 0.0;
};

/// Sequential minimal optimization on the soft-margin dual. Second indices
/// are tried by the largest |E1 - E2| first and then by scans starting at a
/// seeded random position.
SmoResult fit_smo(const Dataset& dataset, const KernelSpec& kernel, const TrainerConfig& config = {});

inline SvmModel train_smo(const Dataset& dataset, const KernelSpec& kernel, const TrainerConfig& config = {}) {
  return fit_smo(dataset, kernel, config).model;
}

double decision_value(const SvmModel& model, std::span<const double> x);

/// Up when the decision value is strictly positive.
Direction classify(const SvmModel& model, std::span<const double> x);

ClassDistribution hard_distribution(const SvmModel& model, std::span<const double> x);

/// sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K(x_i, x_j) over raw features.
double dual_objective(const Dataset& dataset, const KernelSpec& kernel, std::span<const double> alpha);

/// Largest KKT violation over the training samples for the given dual vector:
/// alpha = 0 needs y f >= 1, 0 < alpha < C needs y f = 1, alpha = C needs y f <= 1.
double kkt_violation(const SvmModel& model, const Dataset& dataset, std::span<const double> alpha);

}  // namespace setcast::svm
