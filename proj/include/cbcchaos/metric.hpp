#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cbcchaos/core.hpp"

namespace cbcchaos {

/// A non-negative rational distance, always kept in lowest terms.
class ExactDistance {
 public:
  ExactDistance() = default;
  explicit ExactDistance(mpq_class v);
  explicit ExactDistance(long v) : ExactDistance(mpq_class(v)) {}

  const mpq_class& value() const noexcept { return value_; }
  /// "p/q" with q >= 1, e.g. "49/20" or "0/1".
  std::string fraction() const;
  /// Decimal expansion truncated (not rounded) to `digits` fractional digits.
  std::string decimal(unsigned digits = 12) const;

  mpz_class integer_part() const;
  mpq_class fractional_part() const;

  friend ExactDistance operator+(const ExactDistance& a, const ExactDistance& b) {
    return ExactDistance(mpq_class(a.value_ + b.value_));
  }
  friend bool operator==(const ExactDistance& a, const ExactDistance& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const ExactDistance& a, const ExactDistance& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class value_{0};
};

/// Parses "p/q", an integer, or a plain decimal such as "0.05" into an exact
/// rational. Throws ParseError on anything else.
mpq_class parse_rational(std::string_view text);

/// 10^k as an exact rational, negative k allowed.
mpq_class pow10(long k);

/// Same textual forms as ExactDistance, for any rational.
std::string format_fraction(const mpq_class& v);
std::string format_decimal(const mpq_class& v, unsigned digits);

/// Hamming distance between internal states.
ExactDistance state_distance(const BitBlock& x, const BitBlock& y);

/// (9/N) * sum_j hamming(m_j, m'_j) / 10^(j+1), summed in closed form over the
/// merged prefix and one merged cycle.
ExactDistance message_distance(const MessageStream& m, const MessageStream& other);

/// state_distance + message_distance.
ExactDistance distance(const PhasePoint& x, const PhasePoint& y);

/// Per-block bit-difference counts for blocks 0..k_max.
std::vector<unsigned> block_digit_report(const MessageStream& m, const MessageStream& other,
                                         std::size_t k_max);

}  // namespace cbcchaos
