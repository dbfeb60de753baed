#include "setcast/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "setcast/error.hpp"

namespace setcast::eval {

PredictionRecord PredictionRecord::make(Direction actual, const ClassDistribution& distribution) {
  const double s = distribution.sum();
  if (!(std::abs(s - 1.0) <= 1e-9)) throw InvalidArgument("class distribution does not sum to 1");
  for (double p : distribution.p) {
    if (!(p >= 0.0)) throw InvalidArgument("class distribution has a negative component");
  }
  return {actual, distribution, distribution.argmax()};
}

// --- confusion matrix -----------------------------------------------------------

std::size_t ConfusionMatrix::total() const noexcept {
  std::size_t t = 0;
  for (const auto& row : counts)
    for (auto c : row) t += c;
  return t;
}

std::size_t ConfusionMatrix::trace() const noexcept {
  std::size_t t = 0;
  for (std::size_t i = 0; i < kNumClasses; ++i) t += counts[i][i];
  return t;
}

std::size_t ConfusionMatrix::row_sum(Direction actual) const noexcept {
  std::size_t t = 0;
  for (auto c : counts[index(actual)]) t += c;
  return t;
}

std::size_t ConfusionMatrix::col_sum(Direction predicted) const noexcept {
  std::size_t t = 0;
  for (const auto& row : counts) t += row[index(predicted)];
  return t;
}

ConfusionMatrix confusion_matrix(std::span<const PredictionRecord> records) {
  if (records.empty()) throw InvalidArgument("confusion matrix of zero records");
  ConfusionMatrix m;
  for (const auto& r : records) ++m.counts[index(r.actual)][index(r.predicted)];
  return m;
}

double accuracy(const ConfusionMatrix& m) {
  if (m.total() == 0) throw InvalidArgument("accuracy of an empty matrix");
  return static_cast<double>(m.trace()) / static_cast<double>(m.total());
}

double kappa(const ConfusionMatrix& m) {
  if (m.total() == 0) throw InvalidArgument("kappa of an empty matrix");
  const double n = static_cast<double>(m.total());
  const double observed = static_cast<double>(m.trace()) / n;
  double expected = 0.0;
  for (auto d : kDirections) {
    expected += static_cast<double>(m.row_sum(d)) * static_cast<double>(m.col_sum(d));
  }
  expected /= n * n;
  if (expected == 1.0) return 0.0;
  return (observed - expected) / (1.0 - expected);
}

// --- error measures --------------------------------------------------------------------

namespace {

struct ErrorSums {
  double abs = 0.0;
  double sq = 0.0;
};

ErrorSums error_sums(const ClassDistribution& p, Direction actual) {
  ErrorSums s;
  for (auto d : kDirections) {
    const double e = p[d] - (d == actual ? 1.0 : 0.0);
    s.abs += std::abs(e);
    s.sq += e * e;
  }
  return s;
}

}  // namespace

ProbabilisticErrors probabilistic_errors(std::span<const PredictionRecord> records) {
  if (records.empty()) throw InvalidArgument("error measures of zero records");
  double abs = 0.0;
  double sq = 0.0;
  for (const auto& r : records) {
    const auto s = error_sums(r.distribution, r.actual);
    abs += s.abs;
    sq += s.sq;
  }
  const double components = static_cast<double>(records.size() * kNumClasses);
  return {abs / components, std::sqrt(sq / components)};
}

BaselineProfile BaselineProfile::single(const ClassDistribution& d, std::size_t records) {
  return {{d}, std::vector<std::size_t>(records, 0)};
}

ClassDistribution baseline_distribution(const Dataset& training) {
  const auto counts = training.class_counts();
  const double denom = static_cast<double>(training.size() + kNumClasses);
  ClassDistribution d;
  for (auto c : kDirections) d[c] = (static_cast<double>(counts[index(c)]) + 1.0) / denom;
  return d;
}

RelativeErrors relative_errors(std::span<const PredictionRecord> records, const BaselineProfile& baseline) {
  if (records.empty()) throw InvalidArgument("relative errors of zero records");
  if (baseline.record_fold.size() != records.size()) {
    throw InvalidArgument("baseline profile does not cover every record");
  }
  ErrorSums model;
  ErrorSums ref;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto m = error_sums(records[r].distribution, records[r].actual);
    const auto b = error_sums(baseline.for_record(r), records[r].actual);
    model.abs += m.abs;
    model.sq += m.sq;
    ref.abs += b.abs;
    ref.sq += b.sq;
  }
  if (ref.abs == 0.0 || ref.sq == 0.0) throw InvalidArgument("baseline error is zero");
  return {100.0 * model.abs / ref.abs, 100.0 * std::sqrt(model.sq / ref.sq)};
}

// --- per-class statistics -------------------------------------------------------------------

double roc_area(std::span<const PredictionRecord> records, Direction cls) {
  // Sort by score and credit each positive with the negatives ranked below it.
  std::vector<std::pair<double, bool>> scored;
  scored.reserve(records.size());
  for (const auto& r : records) scored.emplace_back(r.distribution[cls], r.actual == cls);
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  double positives = 0.0;
  double negatives = 0.0;
  double credit = 0.0;
  double negatives_below = 0.0;
  for (std::size_t i = 0; i < scored.size();) {
    std::size_t j = i;
    double pos_in_tie = 0.0;
    double neg_in_tie = 0.0;
    while (j < scored.size() && scored[j].first == scored[i].first) {
      (scored[j].second ? pos_in_tie : neg_in_tie) += 1.0;
      ++j;
    }
    credit += pos_in_tie * (negatives_below + 0.5 * neg_in_tie);
    negatives_below += neg_in_tie;
    positives += pos_in_tie;
    negatives += neg_in_tie;
    i = j;
  }
  if (positives == 0.0 || negatives == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return credit / (positives * negatives);
}

std::array<ClassStats, kNumClasses> per_class_stats(const ConfusionMatrix& m,
                                                     std::span<const PredictionRecord> records) {
  if (m.total() == 0) throw InvalidArgument("per-class statistics of an empty matrix");
  auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  std::array<ClassStats, kNumClasses> out{};
  for (auto c : kDirections) {
    auto& s = out[index(c)];
    const std::size_t tp = m.at(c, c);
    const std::size_t fp = m.col_sum(c) - tp;
    const std::size_t negatives = m.total() - m.row_sum(c);
    s.tp_rate = ratio(tp, m.row_sum(c));
    s.recall = s.tp_rate;
    s.fp_rate = ratio(fp, negatives);
    s.never_predicted = m.col_sum(c) == 0;
    s.precision = ratio(tp, m.col_sum(c));
    s.f_measure = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    s.roc_area = records.empty() ? std::numeric_limits<double>::quiet_NaN() : roc_area(records, c);
  }
  return out;
}

EvaluationReport evaluate(std::span<const PredictionRecord> records, const BaselineProfile& baseline) {
  EvaluationReport rep;
  rep.matrix = confusion_matrix(records);
  rep.n = records.size();
  rep.accuracy = accuracy(rep.matrix);
  rep.kappa = kappa(rep.matrix);
  const auto pe = probabilistic_errors(records);
  rep.mae = pe.mae;
  rep.rmse = pe.rmse;
  const auto re = relative_errors(records, baseline);
  rep.rae = re.rae;
  rep.rrse = re.rrse;
  rep.per_class = per_class_stats(rep.matrix, records);

  const double n = static_cast<double>(rep.n);
  for (auto c : kDirections) {
    const auto& s = rep.per_class[index(c)];
    const double w = static_cast<double>(rep.matrix.row_sum(c)) / n;
    rep.weighted.tp_rate += w * s.tp_rate;
    rep.weighted.fp_rate += w * s.fp_rate;
    rep.weighted.precision += w * s.precision;
    rep.weighted.recall += w * s.recall;
    rep.weighted.f_measure += w * s.f_measure;
    rep.weighted.roc_area += w * s.roc_area;
    if (s.never_predicted) {
      rep.warnings.push_back("class " + std::string(to_string(c)) + " never predicted; precision reported as 0");
    }
    if (std::isnan(s.roc_area)) {
      rep.warnings.push_back("roc area undefined for class " + std::string(to_string(c)));
    }
  }
  return rep;
}

// --- cross-validation ----------------------------------------------------------------------------

namespace {

struct FoldOutput {
  std::vector<PredictionRecord> records;
  std::vector<std::size_t> indices;
  ClassDistribution baseline;
};

FoldOutput run_fold(const Learner& learner, const Dataset& dataset, const FoldAssignment& folds, std::size_t f) {
  FoldOutput out;
  const Dataset train = dataset.subset(folds.train_indices(f));
  out.indices = folds.test_indices(f);
  out.baseline = baseline_distribution(train);
  const Predictor predict = learner.train(train);
  for (auto i : out.indices) {
    out.records.push_back(PredictionRecord::make(dataset[i].label, predict(dataset[i].features)));
  }
  return out;
}

}  // namespace

CrossValidationResult cross_validate(const Learner& learner, const Dataset& dataset, const FoldAssignment& folds,
                                     std::size_t jobs) {
  if (folds.fold_of.size() != dataset.size()) throw InvalidArgument("fold assignment does not match dataset");
  if (!learner.train) throw InvalidArgument("learner has no training function");

  std::vector<FoldOutput> outputs(folds.k);
  std::vector<std::exception_ptr> failures(folds.k);
  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, folds.k);
  if (workers == 1) {
    for (std::size_t f = 0; f < folds.k; ++f) outputs[f] = run_fold(learner, dataset, folds, f);
  } else {
    std::atomic<std::size_t> next{0};
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (std::size_t f = next++; f < folds.k; f = next++) {
            try {
              outputs[f] = run_fold(learner, dataset, folds, f);
            } catch (...) {
              failures[f] = std::current_exception();
            }
          }
        });
      }
    }
    for (auto& e : failures) {
      if (e) std::rethrow_exception(e);
    }
  }

  // Merge in (fold, within-fold) order so the result does not depend on scheduling.
  CrossValidationResult result;
  result.folds = folds;
  for (std::size_t f = 0; f < folds.k; ++f) {
    result.baseline.fold_distributions.push_back(outputs[f].baseline);
    for (std::size_t r = 0; r < outputs[f].records.size(); ++r) {
      result.records.push_back(outputs[f].records[r]);
      result.record_index.push_back(outputs[f].indices[r]);
      result.baseline.record_fold.push_back(f);
    }
  }
  result.report = evaluate(result.records, result.baseline);
  return result;
}

CrossValidationResult cross_validate(const Learner& learner, const Dataset& dataset, std::size_t k,
                                     std::uint64_t seed, std::size_t jobs) {
  return cross_validate(learner, dataset, stratified_folds(dataset, k, seed), jobs);
}

}  // namespace setcast::eval
