#include "dvfs/frequency.hpp"

#include <numeric>

#include <fmt/format.h>

#include "dvfs/errors.hpp"

namespace dvfs {

namespace {

// Keeps cross products of two fractions inside int64.
constexpr std::int64_t kLimit = std::int64_t{1} << 31;

}  // namespace

Frequency::Frequency(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InvalidConfig("frequency with zero denominator");
  if (num < 0 || den < 0) throw InvalidConfig("negative frequency");
  if (num > kLimit || den > kLimit) throw InvalidConfig("frequency fraction out of range");
  const std::int64_t g = std::gcd(num, den);
  num_ = g ? num / g : 0;
  den_ = g ? den / g : 1;
}

std::strong_ordering operator<=>(const Frequency& a, const Frequency& b) {
  return a.num_ * b.den_ <=> b.num_ * a.den_;
}

std::string Frequency::to_string() const {
  const std::int64_t milli = (num_ * 2000 + den_) / (2 * den_);
  const std::int64_t whole = milli / 1000;
  const std::int64_t frac = milli % 1000;
  return fmt::format("{}.{:03d}", whole, frac);
}

}  // namespace dvfs
