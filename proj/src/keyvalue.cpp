#include "setcast/keyvalue.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <sstream>

#include "csv_util.hpp"
#include "setcast/error.hpp"

namespace setcast {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void KeyValueWriter::put(std::string_view key, std::string_view value) {
  text_.append(key);
  text_.append(" = ");
  text_.append(value);
  text_.push_back('\n');
}

void KeyValueWriter::put(std::string_view key, double value) { put(key, format_real(value)); }

void KeyValueWriter::put(std::string_view key, std::int64_t value) { put(key, std::to_string(value)); }

void KeyValueWriter::put(std::string_view key, std::size_t value) { put(key, std::to_string(value)); }

KeyValueReader KeyValueReader::parse(std::istream& in) {
  KeyValueReader out;
  detail::LineReader reader(in);
  std::string line;
  while (reader.next(line)) {
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw DataError(reader.line_no(), "expected 'key = value'");
    const std::string key(detail::trim(body.substr(0, eq)));
    if (key.empty()) throw DataError(reader.line_no(), "empty key");
    if (!out.values_.emplace(key, std::string(detail::trim(body.substr(eq + 1)))).second) {
      throw DataError(reader.line_no(), "duplicate key '" + key + "'");
    }
  }
  return out;
}

KeyValueReader KeyValueReader::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse(in);
}

const std::string& KeyValueReader::text(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw InvalidArgument("missing key '" + key + "'");
  return it->second;
}

double KeyValueReader::real(const std::string& key) const {
  const auto& s = text(key);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InvalidArgument("key '" + key + "' is not a number: '" + s + "'");
  }
  return v;
}

std::int64_t KeyValueReader::integer(const std::string& key) const {
  const auto& s = text(key);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InvalidArgument("key '" + key + "' is not an integer: '" + s + "'");
  }
  return v;
}

std::size_t KeyValueReader::count(const std::string& key) const {
  const auto v = integer(key);
  if (v < 0) throw InvalidArgument("key '" + key + "' must be non-negative");
  return static_cast<std::size_t>(v);
}

}  // namespace setcast
