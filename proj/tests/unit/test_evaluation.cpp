#include <gtest/gtest.h>

#include <cmath>

#include "setcast/error.hpp"
#include "setcast/evaluation.hpp"
#include "setcast/learners.hpp"
#include "setcast/random.hpp"

using namespace setcast;
using namespace setcast::eval;

namespace {

const std::filesystem::path kData = SETCAST_TEST_DATA_DIR;

constexpr Direction U = Direction::Up;
constexpr Direction D = Direction::Down;

std::vector<PredictionRecord> hard_records(std::size_t uu, std::size_t ud, std::size_t du, std::size_t dd) {
  std::vector<PredictionRecord> r;
  auto add = [&](std::size_t n, Direction actual, Direction predicted) {
    for (std::size_t i = 0; i < n; ++i) r.push_back(PredictionRecord::make(actual, ClassDistribution::one_hot(predicted)));
  };
  add(uu, U, U);
  add(ud, U, D);
  add(du, D, U);
  add(dd, D, D);
  return r;
}

ConfusionMatrix matrix(std::size_t uu, std::size_t ud, std::size_t du, std::size_t dd) {
  ConfusionMatrix m;
  m.counts = {{{uu, ud}, {du, dd}}};
  return m;
}

PredictionRecord soft(Direction actual, double p_up) { return PredictionRecord::make(actual, {{p_up, 1.0 - p_up}}); }

}  // namespace

TEST(Metrics, NaiveBayesMatrix) {
  const ConfusionMatrix m = matrix(13, 3, 7, 7);
  EXPECT_NEAR(accuracy(m), 20.0 / 30.0, 1e-15);
  EXPECT_NEAR(kappa(m), 0.3182, 1e-4);
  const auto stats = per_class_stats(m, {});
  EXPECT_NEAR(stats[0].precision, 0.65, 1e-12);
  EXPECT_NEAR(stats[0].recall, 13.0 / 16.0, 1e-12);
  EXPECT_NEAR(stats[0].f_measure, 2 * 0.65 * 0.8125 / (0.65 + 0.8125), 1e-12);
  EXPECT_NEAR(stats[0].f_measure, 0.722, 5e-4);
  EXPECT_NEAR(stats[1].precision, 0.7, 1e-12);
  EXPECT_NEAR(stats[1].recall, 0.5, 1e-12);
  EXPECT_NEAR(stats[0].fp_rate, 0.5, 1e-12);
}

TEST(Metrics, SvmHardRecords) {
  const auto r = hard_records(11, 5, 8, 6);
  const ConfusionMatrix m = confusion_matrix(r);
  EXPECT_EQ(m, matrix(11, 5, 8, 6));
  EXPECT_NEAR(accuracy(m), 17.0 / 30.0, 1e-15);
  const auto e = probabilistic_errors(r);
  EXPECT_NEAR(e.mae, 13.0 / 30.0, 1e-15);
  EXPECT_NEAR(e.rmse, std::sqrt(13.0 / 30.0), 1e-15);
  EXPECT_NEAR(e.mae, 0.4333, 1e-4);
  EXPECT_NEAR(e.rmse, 0.6583, 1e-4);
}

TEST(Metrics, SingleSoftRecord) {
  const std::vector<PredictionRecord> r{soft(U, 0.75)};
  const auto e = probabilistic_errors(r);
  EXPECT_DOUBLE_EQ(e.mae, 0.25);
  EXPECT_DOUBLE_EQ(e.rmse, 0.25);
}

TEST(Metrics, KappaDegenerateAndEmpty) {
  EXPECT_DOUBLE_EQ(kappa(matrix(5, 0, 0, 0)), 0.0);
  EXPECT_DOUBLE_EQ(kappa(matrix(4, 0, 0, 6)), 1.0);
  EXPECT_THROW(accuracy(ConfusionMatrix{}), InvalidArgument);
}

TEST(Metrics, NeverPredictedClass) {
  const auto r = hard_records(3, 0, 2, 0);
  const auto stats = per_class_stats(confusion_matrix(r), r);
  EXPECT_TRUE(stats[1].never_predicted);
  EXPECT_DOUBLE_EQ(stats[1].precision, 0.0);
  EXPECT_FALSE(stats[0].never_predicted);
}

TEST(PredictionRecord, RejectsUnnormalized) {
  EXPECT_THROW(PredictionRecord::make(U, {{0.6, 0.6}}), InvalidArgument);
  EXPECT_EQ(PredictionRecord::make(U, {{0.5, 0.5}}).predicted, U);
}

TEST(Roc, PerfectTiedAndEmpty) {
  const std::vector<PredictionRecord> perfect{soft(U, 0.9), soft(U, 0.8), soft(D, 0.3), soft(D, 0.1)};
  EXPECT_DOUBLE_EQ(roc_area(perfect, U), 1.0);
  EXPECT_DOUBLE_EQ(roc_area(perfect, D), 1.0);
  const std::vector<PredictionRecord> tied{soft(U, 0.5), soft(D, 0.5)};
  EXPECT_DOUBLE_EQ(roc_area(tied, U), 0.5);
  const std::vector<PredictionRecord> mixed{soft(U, 0.9), soft(U, 0.2), soft(D, 0.5), soft(D, 0.2)};
  EXPECT_DOUBLE_EQ(roc_area(mixed, U), 2.5 / 4.0);
  const std::vector<PredictionRecord> one_class{soft(U, 0.9)};
  EXPECT_TRUE(std::isnan(roc_area(one_class, U)));
}

TEST(RelativeErrors, AgainstBaseline) {
  const ClassDistribution base{{0.5, 0.5}};
  const std::vector<PredictionRecord> same{soft(U, 0.5), soft(D, 0.5)};
  const auto same_err = relative_errors(same, BaselineProfile::single(base, 2));
  EXPECT_DOUBLE_EQ(same_err.rae, 100.0);
  EXPECT_DOUBLE_EQ(same_err.rrse, 100.0);
  const std::vector<PredictionRecord> perfect{soft(U, 1.0), soft(D, 0.0)};
  const auto zero = relative_errors(perfect, BaselineProfile::single(base, 2));
  EXPECT_DOUBLE_EQ(zero.rae, 0.0);
  EXPECT_DOUBLE_EQ(zero.rrse, 0.0);
  EXPECT_THROW(relative_errors(perfect, BaselineProfile::single({{1.0, 0.0}}, 1)), std::exception);
}

TEST(RelativeErrors, BaselineDistributionIsAddOne) {
  const Dataset d = load_samples(kData / "appendix_b.csv");
  const ClassDistribution b = baseline_distribution(d);
  EXPECT_DOUBLE_EQ(b[U], 17.0 / 32.0);
  EXPECT_DOUBLE_EQ(b[D], 15.0 / 32.0);
}

// MAE = 1 - accuracy and RMSE = sqrt(1 - accuracy) for any one-hot predictor.
TEST(Properties, HardPredictorIdentities) {
  SeededRng rng(99);
  for (int t = 0; t < 500; ++t) {
    const auto r = hard_records(rng.below(20), rng.below(20), rng.below(20), 1 + rng.below(20));
    const double acc = accuracy(confusion_matrix(r));
    const auto e = probabilistic_errors(r);
    EXPECT_NEAR(e.mae, 1.0 - acc, 1e-12);
    EXPECT_NEAR(e.rmse, std::sqrt(1.0 - acc), 1e-12);
  }
}

TEST(Properties, ErrorOrdering) {
  SeededRng rng(7);
  for (int t = 0; t < 500; ++t) {
    std::vector<PredictionRecord> r;
    const std::size_t n = 1 + rng.below(30);
    for (std::size_t i = 0; i < n; ++i) r.push_back(soft(rng.below(2) ? U : D, rng.unit()));
    const auto e = probabilistic_errors(r);
    EXPECT_LE(e.mae, e.rmse + 1e-12);
    EXPECT_LE(e.rmse, std::sqrt(e.mae) + 1e-12);
    const double kp = kappa(confusion_matrix(r));
    EXPECT_GE(kp, -1.0 - 1e-12);
    EXPECT_LE(kp, 1.0 + 1e-12);
  }
}

TEST(CrossValidation, NaiveBayesSeedOne) {
  const Dataset d = load_samples(kData / "appendix_b.csv");
  const auto cv = cross_validate(naive_bayes_learner(), d, 10, 1);
  EXPECT_EQ(cv.report.n, 30u);
  EXPECT_EQ(cv.report.matrix, matrix(13, 3, 7, 7));
  for (const auto& rec : cv.records) EXPECT_NEAR(rec.distribution.sum(), 1.0, 1e-9);
}

// A learner that memorizes its training set would score perfectly if test rows
// leaked into training. It predicts Up only for rows it has seen.
TEST(CrossValidation, NoLeakageCanary) {
  const Dataset d = load_samples(kData / "appendix_b.csv");
  const Learner canary{"canary", [](const Dataset& train) -> Predictor {
                         auto rows = std::make_shared<std::vector<std::vector<double>>>();
                         for (const auto& s : train.samples()) rows->push_back(s.features);
                         return [rows](std::span<const double> x) {
                           for (const auto& r : *rows) {
                             if (std::equal(r.begin(), r.end(), x.begin(), x.end())) return ClassDistribution::one_hot(U);
                           }
                           return ClassDistribution::one_hot(D);
                         };
                       }};
  const auto cv = cross_validate(canary, d, 10, 4);
  EXPECT_EQ(cv.report.matrix.col_sum(U), 0u);
  const auto resub = canary.train(d);
  for (const auto& s : d.samples()) EXPECT_EQ(resub(s.features).argmax(), U);
}

TEST(CrossValidation, ParallelMatchesSerial) {
  const Dataset d = load_samples(kData / "appendix_b.csv");
  for (const auto& learner : {naive_bayes_learner(), svm_learner()}) {
    const auto serial = cross_validate(learner, d, 10, 3, 1);
    const auto parallel = cross_validate(learner, d, 10, 3, 4);
    ASSERT_EQ(serial.records.size(), parallel.records.size());
    for (std::size_t i = 0; i < serial.records.size(); ++i) {
      EXPECT_EQ(serial.records[i].distribution.p, parallel.records[i].distribution.p);
    }
    EXPECT_EQ(serial.record_index, parallel.record_index);
    EXPECT_EQ(serial.report.rae, parallel.report.rae);
  }
}

TEST(CrossValidation, FoldFailurePropagates) {
  const Dataset d = load_samples(kData / "appendix_b.csv");
  const Learner broken{"broken", [](const Dataset&) -> Predictor { throw TrainingError("boom"); }};
  EXPECT_THROW(cross_validate(broken, d, 5, 0), TrainingError);
  EXPECT_THROW(cross_validate(broken, d, 5, 0, 3), TrainingError);
}
