#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace setcast {

/// Line-oriented `key = value` document. Keys keep insertion order on write.
class KeyValueWriter {
 public:
  void put(std::string_view key, std::string_view value);
  void put(std::string_view key, const char* value) { put(key, std::string_view(value)); }
  void put(std::string_view key, double value);
  void put(std::string_view key, std::int64_t value);
  void put(std::string_view key, std::size_t value);
  void put(std::string_view key, int value) { put(key, static_cast<std::int64_t>(value)); }
  void put(std::string_view key, bool value) { put(key, value ? "true" : "false"); }

  const std::string& str() const noexcept { return text_; }

 private:
  std::string text_;
};

/// Parsed `key = value` document. Blank lines and lines starting with '#' are skipped.
class KeyValueReader {
 public:
  static KeyValueReader parse(std::istream& in);
  static KeyValueReader parse(std::string_view text);

  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& text(const std::string& key) const;
  double real(const std::string& key) const;
  std::size_t count(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// "%.17g": enough digits for any double to round-trip.
std::string format_real(double v);

}  // namespace setcast
