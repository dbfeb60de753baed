#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "setcast/direction.hpp"

namespace setcast {

/// Column names of the labeled-sample CSV, in file order.
inline constexpr std::array<std::string_view, 6> kFeatureNames{"NK", "HS", "SET", "USDTHB", "SP500", "GOLD"};
inline constexpr std::string_view kLabelColumn = "SET_DIRECTION";

/// One trading day: daily percentage changes plus the direction label.
struct Sample {
  std::vector<double> features;
  Direction label = Direction::Down;
};

/// Ordered, labeled samples sharing one attribute list.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<std::string> attributes, std::vector<Sample> samples);

  /// Builds a dataset with generic attribute names ("x0", "x1", ...).
  static Dataset unnamed(std::vector<Sample> samples);

  const std::vector<std::string>& attributes() const noexcept { return attributes_; }
  const std::vector<Sample>& samples() const noexcept { return samples_; }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }

  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  std::size_t dimension() const noexcept { return attributes_.size(); }

  std::array<std::size_t, kNumClasses> class_counts() const noexcept;

  /// Values of attribute `j` across all samples, in order.
  std::vector<double> column(std::size_t j) const;

  /// Samples at `indices`, in the given order.
  Dataset subset(const std::vector<std::size_t>& indices) const;

 private:
  std::vector<std::string> attributes_;
  std::vector<Sample> samples_;
};

// ---------------------------------------------------------------------------
// Labeled-sample CSV: header NK,HS,SET,USDTHB,SP500,GOLD,SET_DIRECTION.

Dataset load_samples(const std::filesystem::path& path);
Dataset parse_samples(std::istream& in);

/// Writes the labeled-sample CSV with shortest round-trip number formatting.
void write_samples(std::ostream& out, const Dataset& dataset);
void save_samples(const std::filesystem::path& path, const Dataset& dataset);

/// Unlabeled (or optionally labeled) feature rows for prediction. Any number
/// of numeric columns is accepted; a trailing SET_DIRECTION column is read as
/// the label. Header-only or empty input yields zero rows.
struct QueryTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::optional<Direction>> labels;
};

QueryTable load_query_table(const std::filesystem::path& path);
QueryTable parse_query_table(std::istream& in);

// ---------------------------------------------------------------------------
// Raw price series and the feature pipeline.

double percent_change(double prev, double curr);

/// UP when the index closed above its open; a flat day counts as DOWN.
Direction label_direction(double open, double close);

/// Column order inside RawRow::values.
enum class RawField : std::size_t { Nk, Hs, SetClose, SetOpen, UsdThb, Sp500, Gold };
inline constexpr std::size_t kNumRawFields = 7;

struct RawRow {
  std::string date;  // ISO-8601 YYYY-MM-DD
  std::array<std::optional<double>, kNumRawFields> values;

  std::optional<double> get(RawField f) const { return values[static_cast<std::size_t>(f)]; }
  bool complete() const noexcept;
};

/// Rows ordered by strictly increasing date; present prices strictly positive.
struct RawSeries {
  std::vector<RawRow> rows;
};

/// Raw CSV header: DATE,NK,HS,SET_CLOSE,SET_OPEN,USDTHB,SP500,GOLD. Empty cells are missing.
RawSeries load_raw_series(const std::filesystem::path& path);
RawSeries parse_raw_series(std::istream& in);

/// Pairs the percent changes from day t-2 to day t-1 with day t's SET
/// direction. Rows with a missing value are dropped before pairing.
Dataset build_training_table(const RawSeries& series);

// ---------------------------------------------------------------------------
// Stratified fold assignment.

struct FoldAssignment {
  std::size_t k = 0;
  std::vector<std::size_t> fold_of;  // per-sample fold index in [0, k)

  std::vector<std::size_t> test_indices(std::size_t fold) const;
  std::vector<std::size_t> train_indices(std::size_t fold) const;

  /// FNV-1a digest of (k, fold_of), printed in reports to show two runs shared folds.
  std::uint64_t digest() const noexcept;
};

/// Each class is shuffled with the seeded generator and dealt round-robin
/// into folds, continuing the deal across classes so fold sizes stay within one.
FoldAssignment stratified_folds(const Dataset& dataset, std::size_t k, std::uint64_t seed);

}  // namespace setcast
