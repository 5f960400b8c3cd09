#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace optbt {

/// Exact nonnegative action cost.
///
/// Costs are decimals in configuration files and must add up without
/// rounding, so they are stored as an integer count of millionths. Any
/// decimal with at most six fractional digits is represented exactly.
class Cost {
 public:
  static constexpr std::int64_t kScale = 1'000'000;

  constexpr Cost() = default;

  static constexpr Cost from_units(std::int64_t units) { return Cost(units); }
  static constexpr Cost from_integer(std::int64_t value) { return Cost(value * kScale); }

  /// Parses "12", "0.5", "3.125". Throws std::invalid_argument on negative
  /// values, more than six fractional digits, or garbage.
  static Cost parse(std::string_view text);

  constexpr std::int64_t units() const { return units_; }
  double to_double() const { return static_cast<double>(units_) / kScale; }

  /// Shortest decimal spelling, e.g. "13" or "2.5".
  std::string str() const;

  constexpr Cost& operator+=(Cost other) {
    units_ += other.units_;
    return *this;
  }
  friend constexpr Cost operator+(Cost a, Cost b) { return a += b; }
  friend constexpr Cost operator-(Cost a, Cost b) { return Cost(a.units_ - b.units_); }
  friend constexpr auto operator<=>(Cost, Cost) = default;
  friend constexpr bool operator==(Cost, Cost) = default;

 private:
  constexpr explicit Cost(std::int64_t units) : units_(units) {}
  std::int64_t units_ = 0;
};

/// Cost of reaching a goal; std::nullopt means infeasible.
using MaybeCost = std::optional<Cost>;

std::string to_string(const MaybeCost& cost);

}  // namespace optbt
