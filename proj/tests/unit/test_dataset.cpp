#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "setcast/dataset.hpp"
#include "setcast/error.hpp"

using namespace setcast;

namespace {

const std::filesystem::path kData = SETCAST_TEST_DATA_DIR;
const std::filesystem::path kFixtures = SETCAST_TEST_FIXTURE_DIR;

Dataset parse(const std::string& text) {
  std::istringstream in(text);
  return parse_samples(in);
}

void expect_rel(const std::vector<double>& got, const std::vector<double>& want) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_NEAR(got[i], want[i], 1e-12 * std::max(1.0, std::abs(want[i]))) << "feature " << i;
  }
}

Dataset balanced(std::size_t up, std::size_t down) {
  std::vector<Sample> s;
  for (std::size_t i = 0; i < up; ++i) s.push_back({{double(i)}, Direction::Up});
  for (std::size_t i = 0; i < down; ++i) s.push_back({{-double(i)}, Direction::Down});
  return Dataset::unnamed(std::move(s));
}

}  // namespace

TEST(PercentChange, Examples) {
  EXPECT_DOUBLE_EQ(percent_change(100.0, 101.0), 1.0);
  EXPECT_DOUBLE_EQ(percent_change(200.0, 190.0), -5.0);
  EXPECT_DOUBLE_EQ(percent_change(50.0, 50.0), 0.0);
  EXPECT_THROW(percent_change(0.0, 1.0), InvalidArgument);
  EXPECT_THROW(percent_change(-3.0, 1.0), InvalidArgument);
}

TEST(LabelDirection, FlatDayIsDown) {
  EXPECT_EQ(label_direction(700.0, 705.0), Direction::Up);
  EXPECT_EQ(label_direction(705.0, 700.0), Direction::Down);
  EXPECT_EQ(label_direction(712.0, 712.0), Direction::Down);
}

TEST(LoadSamples, AppendixFixture) {
  const Dataset d = load_samples(kData / "appendix_b.csv");
  ASSERT_EQ(d.size(), 30u);
  EXPECT_EQ(d.dimension(), 6u);
  EXPECT_EQ(d.class_counts()[index(Direction::Up)], 16u);
  EXPECT_EQ(d.class_counts()[index(Direction::Down)], 14u);
  EXPECT_EQ(d.attributes().front(), "NK");
  EXPECT_EQ(d.attributes().back(), "GOLD");
}

TEST(LoadSamples, HeaderOnlyIsEmptyDataset) {
  try {
    parse("NK,HS,SET,USDTHB,SP500,GOLD,SET_DIRECTION\n");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("empty dataset"), std::string::npos);
  }
}

TEST(LoadSamples, ErrorsCarryRowNumber) {
  const std::string header = "NK,HS,SET,USDTHB,SP500,GOLD,SET_DIRECTION\n";
  try {
    parse(header + "1,2,3,4,5,6,UP\n1,2,x,4,5,6,UP\n");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    parse(header + "1,2,3,4,5,UP\n");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  try {
    parse(header + "1,2,3,4,5,6,SIDEWAYS\n");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse("A,B,C\n1,2,3\n"), DataError);
}

TEST(LoadSamples, AcceptsCrlfAndLowercaseLabels) {
  const Dataset d = parse("NK,HS,SET,USDTHB,SP500,GOLD,SET_DIRECTION\r\n1,2,3,4,5,6,up\r\n-1,0,0,0,0,0,Down\r\n");
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].label, Direction::Up);
  EXPECT_EQ(d[1].label, Direction::Down);
}

TEST(LoadSamples, MissingFileIsIoError) {
  EXPECT_THROW(load_samples(kData / "does_not_exist.csv"), IoError);
}

TEST(WriteSamples, RoundTripsExactly) {
  const Dataset d = load_samples(kData / "appendix_b.csv");
  std::ostringstream out;
  write_samples(out, d);
  std::istringstream in(out.str());
  const Dataset back = parse_samples(in);
  ASSERT_EQ(back.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(back[i].features, d[i].features);
    EXPECT_EQ(back[i].label, d[i].label);
  }
}

TEST(BuildTrainingTable, FiveDayFixture) {
  const Dataset d = build_training_table(load_raw_series(kFixtures / "raw_5day.csv"));
  ASSERT_EQ(d.size(), 3u);
  expect_rel(d[0].features, {1.0, -1.0, 1.0, 0.30303030303030304, 0.9090909090909091, -0.9090909090909091});
  EXPECT_EQ(d[0].label, Direction::Down);
  expect_rel(d[1].features, {-0.49504950495049505, 0.5050505050505051, -0.2828854314002829, -0.1510574018126888,
                             -0.45045045045045046, 0.9174311926605505});
  EXPECT_EQ(d[1].label, Direction::Up);
  expect_rel(d[2].features, {1.492537313432836, 1.0050251256281406, 0.7092198581560284, 0.45385779122541603,
                             1.3574660633484164, 1.8181818181818181});
  EXPECT_EQ(d[2].label, Direction::Down);
}

TEST(BuildTrainingTable, RowWithGapIsDroppedBeforePairing) {
  const Dataset d = build_training_table(load_raw_series(kFixtures / "raw_gap.csv"));
  ASSERT_EQ(d.size(), 1u);
  expect_rel(d[0].features, {0.5, -0.5, 0.7142857142857143, 0.15151515151515152, 0.45454545454545453, 0.0});
  EXPECT_EQ(d[0].label, Direction::Up);
}

TEST(BuildTrainingTable, NeedsThreeCompleteDays) {
  std::istringstream in(
      "DATE,NK,HS,SET_CLOSE,SET_OPEN,USDTHB,SP500,GOLD\n"
      "2010-01-04,1,1,1,1,1,1,1\n2010-01-05,2,2,2,2,2,2,2\n");
  EXPECT_THROW(build_training_table(parse_raw_series(in)), InvalidArgument);
}

TEST(ParseRawSeries, RejectsBadDatesAndPrices) {
  const std::string header = "DATE,NK,HS,SET_CLOSE,SET_OPEN,USDTHB,SP500,GOLD\n";
  auto parse_raw = [&](const std::string& body) {
    std::istringstream in(header + body);
    return parse_raw_series(in);
  };
  EXPECT_THROW(parse_raw("2010-02-30,1,1,1,1,1,1,1\n"), DataError);
  EXPECT_THROW(parse_raw("2010-01-05,1,1,1,1,1,1,1\n2010-01-04,1,1,1,1,1,1,1\n"), DataError);
  EXPECT_THROW(parse_raw("2010-01-05,1,1,1,1,0,1,1\n"), DataError);
  EXPECT_NO_THROW(parse_raw("2010-01-05,1,,1,1,1,1,1\n"));
}

TEST(StratifiedFolds, TenFoldsOnFixture) {
  const Dataset d = load_samples(kData / "appendix_b.csv");
  const FoldAssignment f = stratified_folds(d, 10, 1);
  for (std::size_t k = 0; k < 10; ++k) {
    const auto test = f.test_indices(k);
    EXPECT_EQ(test.size(), 3u);
    const auto ups = std::count_if(test.begin(), test.end(), [&](std::size_t i) { return d[i].label == Direction::Up; });
    EXPECT_GE(ups, 1);
    EXPECT_LE(ups, 2);
  }
}

TEST(StratifiedFolds, LeaveOneOutAndInvalidK) {
  const Dataset d = balanced(3, 2);
  const FoldAssignment f = stratified_folds(d, 5, 7);
  for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(f.test_indices(k).size(), 1u);
  EXPECT_THROW(stratified_folds(d, 1, 0), InvalidArgument);
  EXPECT_THROW(stratified_folds(d, 6, 0), InvalidArgument);
  EXPECT_THROW(stratified_folds(balanced(4, 0), 2, 0), InvalidArgument);
}

// Properties over a range of shapes and seeds: folds partition the data, sizes
// differ by at most one, each class is spread within one per fold, and a seed
// fixes the assignment.
TEST(StratifiedFolds, PartitionProperties) {
  for (std::size_t up : {2u, 5u, 16u, 23u}) {
    for (std::size_t down : {2u, 7u, 14u}) {
      const Dataset d = balanced(up, down);
      for (std::size_t k : {std::size_t{2}, std::size_t{3}, std::min<std::size_t>(10, up + down)}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
          const FoldAssignment f = stratified_folds(d, k, seed);
          std::multiset<std::size_t> seen;
          std::size_t lo = d.size(), hi = 0;
          for (std::size_t fold = 0; fold < k; ++fold) {
            const auto test = f.test_indices(fold);
            const auto train = f.train_indices(fold);
            EXPECT_EQ(test.size() + train.size(), d.size());
            for (auto i : test) {
              EXPECT_TRUE(std::find(train.begin(), train.end(), i) == train.end());
            }
            seen.insert(test.begin(), test.end());
            lo = std::min(lo, test.size());
            hi = std::max(hi, test.size());
            const auto n_up = std::count_if(test.begin(), test.end(),
                                            [&](std::size_t i) { return d[i].label == Direction::Up; });
            EXPECT_LE(std::abs(double(n_up) - double(up) / double(k)), 1.0);
          }
          EXPECT_EQ(seen.size(), d.size());
          for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(seen.count(i), 1u);
          EXPECT_LE(hi - lo, 1u);
          const FoldAssignment again = stratified_folds(d, k, seed);
          EXPECT_EQ(again.fold_of, f.fold_of);
          EXPECT_EQ(again.digest(), f.digest());
        }
      }
    }
  }
}

TEST(StratifiedFolds, SeedsChangeAssignment) {
  const Dataset d = load_samples(kData / "appendix_b.csv");
  EXPECT_NE(stratified_folds(d, 10, 1).fold_of, stratified_folds(d, 10, 2).fold_of);
}
