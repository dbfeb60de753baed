#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "setcast/dataset.hpp"
#include "setcast/direction.hpp"

namespace setcast::nb {

/// Lower bound on every fitted standard deviation (percent units).
inline constexpr double kSigmaFloor = 1e-9;

/// Resolution used when an attribute has fewer than two distinct values.
inline constexpr double kDefaultResolution = 0.01;

struct GaussianParams {
  double mu = 0.0;
  double sigma = 1.0;
};

enum class SigmaConvention { Population, Sample };

struct GaussianFitOptions {
  SigmaConvention convention = SigmaConvention::Population;
  /// When positive, values are snapped to the nearest multiple of the
  /// resolution before the moments are taken and sigma is floored at
  /// resolution / 6.
  double resolution = 0.0;
};

/// Mean and standard deviation of `values`, floored at kSigmaFloor.
GaussianParams fit_gaussian(std::span<const double> values, const GaussianFitOptions& options = {});

double gaussian_pdf(double x, const GaussianParams& params);
double log_gaussian_pdf(double x, const GaussianParams& params);

/// Average gap between consecutive distinct sorted values; kDefaultResolution
/// when there are fewer than two distinct values.
double attribute_resolution(std::span<const double> values);

/// Nearest multiple of `resolution`, ties to even. Identity when resolution <= 0.
double snap_to_resolution(double x, double resolution);

// ---------------------------------------------------------------------------

enum class AttributeKind { Continuous, Categorical };

/// Per-attribute kind, in feature order.
using Schema = std::vector<AttributeKind>;

inline Schema all_continuous(std::size_t n) { return Schema(n, AttributeKind::Continuous); }

enum class PriorMode { Frequency, Uniform };

/// AddOne: (count + 1) / (class size + distinct categories in T).
/// PaperFallback: raw class frequency, or 1 / freq(value in T) when the class never saw the value.
enum class Smoothing { AddOne, PaperFallback };

/// How continuous attributes are estimated. Resolution snaps values to the
/// attribute's data resolution and uses population moments; the other two
/// are plain moments with the named denominator.
enum class NumericEstimator { Resolution, Population, Sample };

struct TrainOptions {
  PriorMode priors = PriorMode::Frequency;
  Smoothing smoothing = Smoothing::AddOne;
  NumericEstimator estimator = NumericEstimator::Resolution;
};

struct ClassPriors {
  std::array<double, kNumClasses> p{};

  double operator[](Direction d) const noexcept { return p[index(d)]; }
};

/// count(C_i) / n. Throws TrainingError when a class has no samples.
ClassPriors estimate_priors(const Dataset& dataset);
ClassPriors uniform_priors() noexcept;

/// Category counts for one categorical attribute, split by class.
class CategoricalTable {
 public:
  CategoricalTable() = default;

  void add(double value, Direction label);

  /// Smoothed P(value | label). Always > 0.
  double probability(double value, Direction label, Smoothing smoothing) const;

  std::size_t distinct_categories() const noexcept { return counts_.size(); }
  std::size_t class_total(Direction label) const noexcept { return totals_[index(label)]; }
  std::size_t count(double value, Direction label) const;
  std::size_t overall_count(double value) const;

  const std::map<double, std::array<std::size_t, kNumClasses>>& counts() const noexcept { return counts_; }

 private:
  std::map<double, std::array<std::size_t, kNumClasses>> counts_;
  std::array<std::size_t, kNumClasses> totals_{};
};

struct AttributeModel {
  std::string name;
  AttributeKind kind = AttributeKind::Continuous;
  std::array<GaussianParams, kNumClasses> gaussian{};  // continuous only
  double resolution = 0.0;                              // 0: query values used as-is
  CategoricalTable table;                               // categorical only
};

/// Immutable after training; prediction is safe from many threads.
class NaiveBayesModel {
 public:
  NaiveBayesModel(ClassPriors priors, std::vector<AttributeModel> attributes, Smoothing smoothing);

  const ClassPriors& priors() const noexcept { return priors_; }
  const std::vector<AttributeModel>& attributes() const noexcept { return attributes_; }
  Smoothing smoothing() const noexcept { return smoothing_; }
  std::size_t dimension() const noexcept { return attributes_.size(); }

  const GaussianParams& gaussian(std::size_t attribute, Direction label) const;

  /// log P(C) + sum_k log P(x_k | C), per class.
  std::array<double, kNumClasses> log_scores(std::span<const double> features) const;

  void save(std::ostream& out) const;
  static NaiveBayesModel load(std::istream& in);

 private:
  ClassPriors priors_;
  std::vector<AttributeModel> attributes_;
  Smoothing smoothing_;
};

NaiveBayesModel train(const Dataset& dataset, const Schema& schema, const TrainOptions& options = {});

/// P(value | label) for a categorical attribute. Throws on a non-categorical or unknown attribute.
double categorical_likelihood(const NaiveBayesModel& model, Direction label, std::size_t attribute, double value);

/// Normalized posterior, computed in log space with max-subtraction.
ClassDistribution predict_distribution(const NaiveBayesModel& model, std::span<const double> features);

/// Maximum-posterior class; exact ties go to Up.
Direction classify(const NaiveBayesModel& model, std::span<const double> features);

}  // namespace setcast::nb
