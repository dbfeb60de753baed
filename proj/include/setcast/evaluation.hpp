#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "setcast/dataset.hpp"
#include "setcast/direction.hpp"

namespace setcast::eval {

struct PredictionRecord {
  Direction actual = Direction::Up;
  ClassDistribution distribution;
  Direction predicted = Direction::Up;  // argmax of distribution, ties to Up

  /// Checks that the distribution sums to 1 within 1e-9 and fills `predicted`.
  static PredictionRecord make(Direction actual, const ClassDistribution& distribution);
};

/// counts[actual][predicted], rows and columns in (Up, Down) order.
struct ConfusionMatrix {
  std::array<std::array<std::size_t, kNumClasses>, kNumClasses> counts{};

  std::size_t at(Direction actual, Direction predicted) const noexcept {
    return counts[index(actual)][index(predicted)];
  }
  std::size_t total() const noexcept;
  std::size_t trace() const noexcept;
  std::size_t row_sum(Direction actual) const noexcept;
  std::size_t col_sum(Direction predicted) const noexcept;

  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion_matrix(std::span<const PredictionRecord> records);

/// trace / total. Throws on an empty matrix.
double accuracy(const ConfusionMatrix& m);

/// Cohen's kappa; 0 when expected agreement is 1.
double kappa(const ConfusionMatrix& m);

struct ProbabilisticErrors {
  double mae = 0.0;
  double rmse = 0.0;
};

/// Component errors |p_j - t_j| averaged over records and classes.
ProbabilisticErrors probabilistic_errors(std::span<const PredictionRecord> records);

/// Reference predictor behind the relative errors: for each record, the
/// class distribution of the training partition it was predicted from.
struct BaselineProfile {
  std::vector<ClassDistribution> fold_distributions;
  std::vector<std::size_t> record_fold;  // one per record

  const ClassDistribution& for_record(std::size_t r) const { return fold_distributions.at(record_fold.at(r)); }

  /// Every record predicted by the same baseline distribution.
  static BaselineProfile single(const ClassDistribution& d, std::size_t records);
};

/// Training-class frequencies with add-one smoothing: (count + 1) / (n + classes).
ClassDistribution baseline_distribution(const Dataset& training);

struct RelativeErrors {
  double rae = 0.0;   // percent
  double rrse = 0.0;  // percent
};

/// 100 x error(records) / error(baseline on the same records). Throws when the baseline error is zero.
RelativeErrors relative_errors(std::span<const PredictionRecord> records, const BaselineProfile& baseline);

struct ClassStats {
  double tp_rate = 0.0;
  double fp_rate = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  double roc_area = 0.0;
  bool never_predicted = false;  // precision reported as 0
};

/// Mann-Whitney estimate of P(score of a positive > score of a negative),
/// ties counted half, using distribution[cls] as the score. NaN if either group is empty.
double roc_area(std::span<const PredictionRecord> records, Direction cls);

std::array<ClassStats, kNumClasses> per_class_stats(const ConfusionMatrix& m,
                                                     std::span<const PredictionRecord> records);

struct EvaluationReport {
  ConfusionMatrix matrix;
  std::size_t n = 0;
  double accuracy = 0.0;
  double kappa = 0.0;
  double mae = 0.0;
  double rmse = 0.0;
  double rae = 0.0;
  double rrse = 0.0;
  std::array<ClassStats, kNumClasses> per_class{};
  ClassStats weighted;  // per-class stats weighted by actual class counts
  std::vector<std::string> warnings;
};

EvaluationReport evaluate(std::span<const PredictionRecord> records, const BaselineProfile& baseline);

// ---------------------------------------------------------------------------

using Predictor = std::function<ClassDistribution(std::span<const double>)>;

/// Training returns a predictor bound to an immutable model. `train` must be
/// callable concurrently on different datasets when jobs > 1.
struct Learner {
  std::string name;
  std::function<Predictor(const Dataset&)> train;
};

struct CrossValidationResult {
  EvaluationReport report;
  FoldAssignment folds;
  std::vector<PredictionRecord> records;  // ordered by (fold, dataset index)
  std::vector<std::size_t> record_index;  // dataset index of each record
  BaselineProfile baseline;
};

CrossValidationResult cross_validate(const Learner& learner, const Dataset& dataset, const FoldAssignment& folds,
                                     std::size_t jobs = 1);

CrossValidationResult cross_validate(const Learner& learner, const Dataset& dataset, std::size_t k,
                                     std::uint64_t seed, std::size_t jobs = 1);

}  // namespace setcast::eval
