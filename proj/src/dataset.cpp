#include "setcast/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <sstream>

#include "csv_util.hpp"
#include "setcast/error.hpp"
#include "setcast/random.hpp"

namespace setcast {

using detail::format_number;
using detail::LineReader;
using detail::parse_number;
using detail::split_fields;

Dataset::Dataset(std::vector<std::string> attributes, std::vector<Sample> samples)
    : attributes_(std::move(attributes)), samples_(std::move(samples)) {
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (samples_[i].features.size() != attributes_.size()) {
      throw InvalidArgument("sample " + std::to_string(i) + " has " +
                            std::to_string(samples_[i].features.size()) + " features, expected " +
                            std::to_string(attributes_.size()));
    }
  }
}

Dataset Dataset::unnamed(std::vector<Sample> samples) {
  const std::size_t dim = samples.empty() ? 0 : samples.front().features.size();
  std::vector<std::string> names;
  for (std::size_t j = 0; j < dim; ++j) names.push_back("x" + std::to_string(j));
  return Dataset(std::move(names), std::move(samples));
}

std::array<std::size_t, kNumClasses> Dataset::class_counts() const noexcept {
  std::array<std::size_t, kNumClasses> counts{};
  for (const auto& s : samples_) ++counts[index(s.label)];
  return counts;
}

std::vector<double> Dataset::column(std::size_t j) const {
  std::vector<double> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.features.at(j));
  return out;
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  std::vector<Sample> picked;
  picked.reserve(indices.size());
  for (auto i : indices) picked.push_back(samples_.at(i));
  return Dataset(attributes_, std::move(picked));
}

// --- labeled-sample CSV -----------------------------------------------------

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::toupper(static_cast<unsigned char>(x)) == std::toupper(static_cast<unsigned char>(y));
         });
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

}  // namespace

Dataset parse_samples(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) throw DataError(1, "empty dataset");

  const auto header = split_fields(line);
  const std::size_t expected_cols = kFeatureNames.size() + 1;
  bool header_ok = header.size() == expected_cols && iequals(header.back(), kLabelColumn);
  for (std::size_t j = 0; header_ok && j < kFeatureNames.size(); ++j) {
    header_ok = iequals(header[j], kFeatureNames[j]);
  }
  if (!header_ok) {
    throw DataError(reader.line_no(), "expected header NK,HS,SET,USDTHB,SP500,GOLD,SET_DIRECTION");
  }

  std::vector<Sample> samples;
  while (reader.next(line)) {
    if (detail::blank(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() != expected_cols) {
      throw DataError(reader.line_no(), "expected " + std::to_string(expected_cols) + " columns, found " +
                                            std::to_string(fields.size()));
    }
    Sample s;
    s.features.reserve(kFeatureNames.size());
    for (std::size_t j = 0; j < kFeatureNames.size(); ++j) {
      auto v = parse_number(fields[j]);
      if (!v) {
        throw DataError(reader.line_no(),
                        "non-numeric value '" + std::string(fields[j]) + "' in column " + std::string(kFeatureNames[j]));
      }
      s.features.push_back(*v);
    }
    auto label = parse_direction(fields.back());
    if (!label) throw DataError(reader.line_no(), "unknown label '" + std::string(fields.back()) + "'");
    s.label = *label;
    samples.push_back(std::move(s));
  }
  if (samples.empty()) throw DataError(reader.line_no(), "empty dataset");

  return Dataset({kFeatureNames.begin(), kFeatureNames.end()}, std::move(samples));
}

Dataset load_samples(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return parse_samples(in);
  } catch (const DataError& e) {
    throw DataError(e.line(), e.message(), path.string());
  }
}

void write_samples(std::ostream& out, const Dataset& dataset) {
  for (std::size_t j = 0; j < dataset.dimension(); ++j) out << dataset.attributes()[j] << ',';
  out << kLabelColumn << '\n';
  for (const auto& s : dataset.samples()) {
    for (double v : s.features) out << format_number(v) << ',';
    out << to_string(s.label) << '\n';
  }
}

void save_samples(const std::filesystem::path& path, const Dataset& dataset) {
  auto out = open_output(path);
  write_samples(out, dataset);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

QueryTable parse_query_table(std::istream& in) {
  QueryTable table;
  LineReader reader(in);
  std::string line;
  while (reader.next(line) && detail::blank(line)) {
  }
  if (detail::blank(line)) return table;

  for (auto f : split_fields(line)) table.columns.emplace_back(f);
  const bool labeled = !table.columns.empty() && iequals(table.columns.back(), kLabelColumn);
  const std::size_t num_features = table.columns.size() - (labeled ? 1 : 0);

  while (reader.next(line)) {
    if (detail::blank(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() != table.columns.size()) {
      throw DataError(reader.line_no(), "expected " + std::to_string(table.columns.size()) + " columns, found " +
                                            std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(num_features);
    for (std::size_t j = 0; j < num_features; ++j) {
      auto v = parse_number(fields[j]);
      if (!v) throw DataError(reader.line_no(), "non-numeric value '" + std::string(fields[j]) + "'");
      row.push_back(*v);
    }
    std::optional<Direction> label;
    if (labeled) {
      label = parse_direction(fields.back());
      if (!label) throw DataError(reader.line_no(), "unknown label '" + std::string(fields.back()) + "'");
    }
    table.rows.push_back(std::move(row));
    table.labels.push_back(label);
  }
  return table;
}

QueryTable load_query_table(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return parse_query_table(in);
  } catch (const DataError& e) {
    throw DataError(e.line(), e.message(), path.string());
  }
}

// --- raw series ---------------------------------------------------------------

double percent_change(double prev, double curr) {
  if (!(prev > 0.0)) throw InvalidArgument("percent_change: previous price must be positive");
  return 100.0 * (curr - prev) / prev;
}

Direction label_direction(double open, double close) {
  if (!(open > 0.0) || !(close > 0.0)) throw InvalidArgument("label_direction: prices must be positive");
  return close > open ? Direction::Up : Direction::Down;
}

bool RawRow::complete() const noexcept {
  return std::all_of(values.begin(), values.end(), [](const auto& v) { return v.has_value(); });
}

namespace {

constexpr std::array<std::string_view, kNumRawFields + 1> kRawHeader{
    "DATE", "NK", "HS", "SET_CLOSE", "SET_OPEN", "USDTHB", "SP500", "GOLD"};

bool valid_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  int y = 0;
  unsigned m = 0, d = 0;
  for (std::size_t i : {0, 1, 2, 3}) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    y = y * 10 + (s[i] - '0');
  }
  for (std::size_t i : {5, 6, 8, 9}) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  m = static_cast<unsigned>((s[5] - '0') * 10 + (s[6] - '0'));
  d = static_cast<unsigned>((s[8] - '0') * 10 + (s[9] - '0'));
  return std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}}.ok();
}

}  // namespace

RawSeries parse_raw_series(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) throw DataError(1, "empty raw series");
  const auto header = split_fields(line);
  bool header_ok = header.size() == kRawHeader.size();
  for (std::size_t j = 0; header_ok && j < header.size(); ++j) header_ok = iequals(header[j], kRawHeader[j]);
  if (!header_ok) {
    throw DataError(reader.line_no(), "expected header DATE,NK,HS,SET_CLOSE,SET_OPEN,USDTHB,SP500,GOLD");
  }

  RawSeries series;
  while (reader.next(line)) {
    if (detail::blank(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() != kRawHeader.size()) {
      throw DataError(reader.line_no(), "expected " + std::to_string(kRawHeader.size()) + " columns, found " +
                                            std::to_string(fields.size()));
    }
    RawRow row;
    row.date = std::string(fields[0]);
    if (!valid_iso_date(row.date)) throw DataError(reader.line_no(), "invalid date '" + row.date + "'");
    if (!series.rows.empty() && !(series.rows.back().date < row.date)) {
      throw DataError(reader.line_no(), "dates must be strictly increasing");
    }
    for (std::size_t j = 0; j < kNumRawFields; ++j) {
      const auto cell = fields[j + 1];
      if (cell.empty()) continue;
      auto v = parse_number(cell);
      if (!v) throw DataError(reader.line_no(), "non-numeric price '" + std::string(cell) + "'");
      if (!(*v > 0.0)) throw DataError(reader.line_no(), "price must be positive in column " + std::string(kRawHeader[j + 1]));
      row.values[j] = *v;
    }
    series.rows.push_back(std::move(row));
  }
  return series;
}

RawSeries load_raw_series(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return parse_raw_series(in);
  } catch (const DataError& e) {
    throw DataError(e.line(), e.message(), path.string());
  }
}

Dataset build_training_table(const RawSeries& series) {
  std::vector<const RawRow*> complete;
  for (const auto& r : series.rows) {
    if (r.complete()) complete.push_back(&r);
  }
  if (complete.size() < 3) {
    throw InvalidArgument("raw series needs at least 3 complete rows, found " + std::to_string(complete.size()));
  }

  constexpr std::array<RawField, 6> feature_fields{RawField::Nk,     RawField::Hs,    RawField::SetClose,
                                                   RawField::UsdThb, RawField::Sp500, RawField::Gold};
  std::vector<Sample> samples;
  for (std::size_t t = 2; t < complete.size(); ++t) {
    const RawRow& before = *complete[t - 2];
    const RawRow& prior = *complete[t - 1];
    const RawRow& today = *complete[t];
    Sample s;
    for (auto f : feature_fields) s.features.push_back(percent_change(*before.get(f), *prior.get(f)));
    s.label = label_direction(*today.get(RawField::SetOpen), *today.get(RawField::SetClose));
    samples.push_back(std::move(s));
  }
  return Dataset({kFeatureNames.begin(), kFeatureNames.end()}, std::move(samples));
}

// --- folds ----------------------------------------------------------------------

std::vector<std::size_t> FoldAssignment::test_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldAssignment::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] != fold) out.push_back(i);
  }
  return out;
}

std::uint64_t FoldAssignment::digest() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xFFU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(k);
  for (auto f : fold_of) mix(f);
  return h;
}

FoldAssignment stratified_folds(const Dataset& dataset, std::size_t k, std::uint64_t seed) {
  if (k < 2 || k > dataset.size()) {
    throw InvalidArgument("fold count must be in [2, " + std::to_string(dataset.size()) + "], got " +
                          std::to_string(k));
  }
  const auto counts = dataset.class_counts();
  for (auto d : kDirections) {
    if (counts[index(d)] == 0) {
      throw InvalidArgument("class " + std::string(to_string(d)) + " has no samples");
    }
  }

  SeededRng rng(seed);
  FoldAssignment out{k, std::vector<std::size_t>(dataset.size(), 0)};
  std::size_t deal = 0;
  for (auto d : kDirections) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (dataset[i].label == d) members.push_back(i);
    }
    rng.shuffle(std::span<std::size_t>(members));
    for (auto i : members) out.fold_of[i] = deal++ % k;
  }
  return out;
}

}  // namespace setcast
