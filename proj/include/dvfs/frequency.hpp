#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace dvfs {

/// Exact clock frequency in MHz, held as a reduced fraction.
///
/// PLL outputs such as 50 * 75 / (50 * 2) = 37.5 MHz are not integral, and
/// iso-frequency grouping must compare them without rounding.
class Frequency {
 public:
  constexpr Frequency() = default;
  Frequency(std::int64_t num, std::int64_t den = 1);

  static Frequency mhz(std::int64_t whole) { return Frequency(whole, 1); }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double as_mhz() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// Decimal rendering with exactly three fractional digits, half-up.
  std::string to_string() const;

  friend bool operator==(const Frequency&, const Frequency&) = default;
  friend std::strong_ordering operator<=>(const Frequency& a, const Frequency& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace dvfs
