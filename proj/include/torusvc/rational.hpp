#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace torusvc {

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always kept in lowest terms with a positive denominator. Intermediate
/// products are formed in 128 bits; a result that does not fit back into
/// 64 bits throws std::overflow_error instead of wrapping.
class Rat {
 public:
  constexpr Rat() = default;
  Rat(std::int64_t value) : num_(value), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rat(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Rat operator-() const;
  Rat& operator+=(const Rat& rhs);
  Rat& operator-=(const Rat& rhs);
  Rat& operator*=(const Rat& rhs);
  Rat& operator/=(const Rat& rhs);

  friend Rat operator+(Rat lhs, const Rat& rhs) { return lhs += rhs; }
  friend Rat operator-(Rat lhs, const Rat& rhs) { return lhs -= rhs; }
  friend Rat operator*(Rat lhs, const Rat& rhs) { return lhs *= rhs; }
  friend Rat operator/(Rat lhs, const Rat& rhs) { return lhs /= rhs; }

  friend bool operator==(const Rat&, const Rat&) = default;
  friend std::strong_ordering operator<=>(const Rat& lhs, const Rat& rhs);

  /// Largest integer not above the value.
  std::int64_t floor() const;
  /// The representative of this value modulo 1, in [0, 1).
  Rat mod1() const;

  bool is_integer() const { return den_ == 1; }

  /// "p/q", or "p" when the denominator is 1.
  std::string str() const;
  /// Accepts "p/q", "p" and optional leading sign; throws std::invalid_argument.
  static Rat parse(std::string_view text);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

/// Least common multiple with overflow checking.
std::int64_t checked_lcm(std::int64_t a, std::int64_t b);

}  // namespace torusvc
