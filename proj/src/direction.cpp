#include "setcast/direction.hpp"

#include <cctype>

namespace setcast {

std::string_view to_string(Direction d) noexcept {
  return d == Direction::Up ? "UP" : "DOWN";
}

namespace {

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(a[i])) !=
        std::toupper(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::optional<Direction> parse_direction(std::string_view token) noexcept {
  if (iequals(token, "UP")) return Direction::Up;
  if (iequals(token, "DOWN")) return Direction::Down;
  return std::nullopt;
}

double ClassDistribution::sum() const noexcept {
  double s = 0.0;
  for (double v : p) s += v;
  return s;
}

Direction ClassDistribution::argmax() const noexcept {
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i] > p[best]) best = i;
  }
  return kDirections[best];
}

ClassDistribution ClassDistribution::one_hot(Direction d) noexcept {
  ClassDistribution out;
  out[d] = 1.0;
  return out;
}

}  // namespace setcast
