#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace setcast {

/// Market direction for a trading day. The enumerator order fixes the
/// row/column order of every confusion matrix and distribution.
enum class Direction : std::size_t { Up = 0, Down = 1 };

inline constexpr std::size_t kNumClasses = 2;
inline constexpr std::array<Direction, kNumClasses> kDirections{Direction::Up, Direction::Down};

constexpr std::size_t index(Direction d) noexcept { return static_cast<std::size_t>(d); }

std::string_view to_string(Direction d) noexcept;

/// Case-insensitive parse of "UP" / "DOWN".
std::optional<Direction> parse_direction(std::string_view token) noexcept;

/// Probability vector over kDirections, indexed by `index(Direction)`.
struct ClassDistribution {
  std::array<double, kNumClasses> p{};

  double operator[](Direction d) const noexcept { return p[index(d)]; }
  double& operator[](Direction d) noexcept { return p[index(d)]; }

  double sum() const noexcept;

  /// Argmax with ties resolved toward the first class (Up).
  Direction argmax() const noexcept;

  static ClassDistribution one_hot(Direction d) noexcept;
};

}  // namespace setcast
