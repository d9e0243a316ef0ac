#include "cbcchaos/metric.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "cbcchaos/error.hpp"

namespace cbcchaos {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

mpz_class parse_integer(std::string_view s) {
  return mpz_class(std::string(s), 10);
}

}  // namespace

ExactDistance::ExactDistance(mpq_class v) : value_(std::move(v)) {
  value_.canonicalize();
  if (sgn(value_) < 0) throw InvalidArgument("distances are non-negative");
}

std::string ExactDistance::fraction() const { return format_fraction(value_); }

std::string ExactDistance::decimal(unsigned digits) const { return format_decimal(value_, digits); }

mpz_class ExactDistance::integer_part() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return q;
}

mpq_class ExactDistance::fractional_part() const {
  mpq_class f = value_ - mpq_class(integer_part());
  f.canonicalize();
  return f;
}

mpq_class pow10(long k) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(k < 0 ? -k : k));
  if (k >= 0) return mpq_class(p);
  mpq_class r(mpz_class(1), p);
  r.canonicalize();
  return r;
}

std::string format_fraction(const mpq_class& v) {
  mpq_class c(v);
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string format_decimal(const mpq_class& v, unsigned digits) {
  mpq_class c(v);
  c.canonicalize();
  const bool negative = sgn(c) < 0;
  if (negative) c = -c;
  mpq_class scaled = c * pow10(digits);
  mpz_class t;
  mpz_fdiv_q(t.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  std::string s = t.get_str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  std::string out = negative ? "-" : "";
  out += s.substr(0, s.size() - digits);
  if (digits > 0) out += "." + s.substr(s.size() - digits);
  return out;
}

mpq_class parse_rational(std::string_view text) {
  auto fail = [&]() -> mpq_class {
    throw ParseError("not a rational number: '" + std::string(text) + "'");
  };
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) return fail();

  mpq_class value;
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = s.substr(0, slash);
    const auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return fail();
    const mpz_class d = parse_integer(den);
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    value = mpq_class(parse_integer(num), d);
  } else {
    long exponent = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      auto exp_text = s.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      if (!all_digits(exp_text) || exp_text.size() > 6) return fail();
      exponent = std::stol(std::string(exp_text));
      if (exp_negative) exponent = -exponent;
      s = s.substr(0, e);
    }
    const auto dot = s.find('.');
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    if (whole.empty() && frac.empty()) return fail();
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac))) return fail();
    const std::string digits = std::string(whole) + std::string(frac);
    value = mpq_class(parse_integer(digits)) *
            pow10(exponent - static_cast<long>(frac.size()));
  }
  value.canonicalize();
  return negative ? mpq_class(-value) : value;
}

ExactDistance state_distance(const BitBlock& x, const BitBlock& y) {
  return ExactDistance(static_cast<long>(hamming(x, y)));
}

ExactDistance message_distance(const MessageStream& m, const MessageStream& other) {
  require_same_width(m.width(), other.width(), "message_distance");
  const std::size_t head_len = std::max(m.prefix().size(), other.prefix().size());
  const std::size_t period = std::lcm(m.cycle().size(), other.cycle().size());

  // Weighted sums with block j carrying 10^-(j+1).
  mpq_class head_sum = 0;
  for (std::size_t j = 0; j < head_len; ++j) {
    head_sum += mpq_class(hamming(m.block_at(j), other.block_at(j))) *
                pow10(-static_cast<long>(j + 1));
  }
  mpq_class cycle_sum = 0;
  for (std::size_t j = head_len; j < head_len + period; ++j) {
    cycle_sum += mpq_class(hamming(m.block_at(j), other.block_at(j))) *
                 pow10(-static_cast<long>(j + 1));
  }
  // Repeating the merged cycle forever multiplies its one-pass sum by
  // 1 / (1 - 10^-L) = 10^L / (10^L - 1).
  const mpq_class ten_l = pow10(static_cast<long>(period));
  mpq_class total = head_sum + cycle_sum * ten_l / (ten_l - 1);
  total *= mpq_class(9, m.width());
  total.canonicalize();
  return ExactDistance(total);
}

ExactDistance distance(const PhasePoint& x, const PhasePoint& y) {
  require_same_width(x.width(), y.width(), "distance");
  return state_distance(x.state, y.state) + message_distance(x.stream, y.stream);
}

std::vector<unsigned> block_digit_report(const MessageStream& m, const MessageStream& other,
                                         std::size_t k_max) {
  require_same_width(m.width(), other.width(), "block_digit_report");
  std::vector<unsigned> out;
  out.reserve(k_max + 1);
  for (std::size_t j = 0; j <= k_max; ++j) out.push_back(hamming(m.block_at(j), other.block_at(j)));
  return out;
}

}  // namespace cbcchaos
