#include <gtest/gtest.h>

#include <random>

#include "cbcchaos/error.hpp"
#include "cbcchaos/metric.hpp"
#include "oracles.hpp"

using namespace cbcchaos;

namespace {

mpq_class q(long p, long r) {
  mpq_class v(p, r);
  v.canonicalize();
  return v;
}

}  // namespace

TEST(ExactDistance, Formatting) {
  const ExactDistance d(q(49, 20));
  EXPECT_EQ(d.fraction(), "49/20");
  EXPECT_EQ(d.decimal(4), "2.4500");
  EXPECT_EQ(d.decimal(0), "2");
  EXPECT_EQ(ExactDistance(0).fraction(), "0/1");
  EXPECT_EQ(ExactDistance(q(1, 3)).decimal(5), "0.33333");
  EXPECT_EQ(ExactDistance(q(2, 3)).decimal(3), "0.666");
  EXPECT_EQ(ExactDistance(q(1, 1000)).decimal(2), "0.00");
  EXPECT_EQ(d.integer_part(), 2);
  EXPECT_EQ(d.fractional_part(), q(9, 20));
  EXPECT_THROW(ExactDistance(q(-1, 2)), InvalidArgument);
}

TEST(ParseRational, AcceptedForms) {
  EXPECT_EQ(parse_rational("0.05"), q(1, 20));
  EXPECT_EQ(parse_rational("1/20"), q(1, 20));
  EXPECT_EQ(parse_rational("2/40"), q(1, 20));
  EXPECT_EQ(parse_rational("1"), q(1, 1));
  EXPECT_EQ(parse_rational(".5"), q(1, 2));
  EXPECT_EQ(parse_rational("3."), q(3, 1));
  EXPECT_EQ(parse_rational("1e-3"), q(1, 1000));
  EXPECT_EQ(parse_rational("2.5E2"), q(250, 1));
  EXPECT_EQ(parse_rational("-0.25"), q(-1, 4));
  EXPECT_EQ(parse_rational(" 0 "), q(0, 1));
}

TEST(ParseRational, RejectedForms) {
  for (const char* bad : {"", "abc", "1/0", "1.2.3", "0x10", ".", "1/2/3", "1e", "--1", "1/-2"}) {
    EXPECT_THROW(parse_rational(bad), ParseError) << bad;
  }
}

TEST(Metric, StateDistance) {
  const BitBlock x(8, 0x5a);
  EXPECT_EQ(state_distance(x, x), ExactDistance(0));
  EXPECT_EQ(state_distance(x, negate(x)), ExactDistance(8));
  EXPECT_EQ(state_distance(BitBlock(4, 0b1010), BitBlock(4, 0b0110)), ExactDistance(2));
  EXPECT_THROW(state_distance(BitBlock(4, 0), BitBlock(5, 0)), WidthMismatch);
}

TEST(Metric, MessageDistanceExamples) {
  const MessageStream zeros = MessageStream::constant(BitBlock::zero(4));
  EXPECT_EQ(message_distance(zeros, zeros), ExactDistance(0));
  // Every block fully complementary: (9/N) * N * sum 10^-k = 1.
  for (unsigned n : {1u, 4u, 9u, 13u, 64u}) {
    const MessageStream z = MessageStream::constant(BitBlock::zero(n));
    EXPECT_EQ(message_distance(z, negate_stream(z)), ExactDistance(1)) << n;
  }
  // Only block 0 differs, in all four bits: (9/4) * 4 / 10.
  const MessageStream first = MessageStream(4, {BitBlock::ones(4)}, {BitBlock::zero(4)});
  EXPECT_EQ(message_distance(first, zeros), ExactDistance(q(9, 10)));
  EXPECT_THROW(message_distance(zeros, MessageStream::constant(BitBlock::zero(5))), WidthMismatch);
}

TEST(Metric, DistanceExamples) {
  // Non-expansivity pair at N = 4.
  const MessageStream zeros = MessageStream::constant(BitBlock::zero(4));
  const PhasePoint x(BitBlock(4, 0b1000), prepend(std::vector{BitBlock(4, 0b0100)}, zeros));
  const PhasePoint y(BitBlock(4, 0b0100), prepend(std::vector{BitBlock(4, 0b1000)}, zeros));
  EXPECT_EQ(distance(x, y), ExactDistance(q(49, 20)));
  EXPECT_EQ(distance(x, x), ExactDistance(0));

  const PhasePoint a(BitBlock(4, 3), zeros);
  const PhasePoint b(BitBlock(4, 3), negate_stream(zeros));
  EXPECT_EQ(distance(a, b), ExactDistance(1));
}

TEST(Metric, BlockDigitReport) {
  const MessageStream zeros = MessageStream::constant(BitBlock::zero(4));
  EXPECT_EQ(block_digit_report(zeros, zeros, 3), (std::vector<unsigned>{0, 0, 0, 0}));
  const MessageStream third = replace_block(zeros, 2, BitBlock(4, 0b0111));
  EXPECT_EQ(block_digit_report(zeros, third, 4), (std::vector<unsigned>{0, 0, 3, 0, 0}));
  EXPECT_EQ(block_digit_report(zeros, negate_stream(zeros), 2), (std::vector<unsigned>{4, 4, 4}));
}

// For N > 9 a one-bit difference in a block contributes less than one unit
// to that decimal digit, so the literal digit can be 0 while the blocks differ.
TEST(Metric, DigitReportIsNotTheLiteralDecimalDigit) {
  const MessageStream zeros = MessageStream::constant(BitBlock::zero(16));
  const MessageStream one_bit = replace_block(zeros, 0, BitBlock::unit(16, 3));
  const ExactDistance d = message_distance(zeros, one_bit);
  EXPECT_EQ(d, ExactDistance(q(9, 160)));
  EXPECT_EQ(d.decimal(1), "0.0");
  EXPECT_EQ(block_digit_report(zeros, one_bit, 0), (std::vector<unsigned>{1}));
}

TEST(MetricProperty, ClosedFormMatchesPartialSums) {
  std::mt19937_64 rng(21);
  constexpr std::size_t kTerms = 50;
  const mpq_class tail_bound = pow10(-static_cast<long>(kTerms));
  for (int trial = 0; trial < 400; ++trial) {
    const unsigned n = 1 + static_cast<unsigned>(rng() % 12);
    const MessageStream a = oracle::random_stream(n, rng, 6, 7);
    const MessageStream b = oracle::random_stream(n, rng, 6, 7);
    const mpq_class closed = message_distance(a, b).value();
    const mpq_class partial = oracle::truncated_message_distance(a, b, kTerms);
    EXPECT_LE(partial, closed);
    EXPECT_LE(mpq_class(closed - partial), tail_bound);
  }
}

TEST(MetricProperty, Axioms) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 2000; ++trial) {
    const unsigned n = 1 + static_cast<unsigned>(rng() % 8);
    const PhasePoint x = oracle::random_point(n, rng);
    // Mix in near neighbours so that d = 0 and tiny distances are exercised.
    const PhasePoint y = trial % 3 == 0 ? PhasePoint(x.state, replace_block(x.stream, rng() % 6, oracle::random_block(n, rng)))
                                        : oracle::random_point(n, rng);
    const PhasePoint z = oracle::random_point(n, rng);
    const ExactDistance xy = distance(x, y);
    EXPECT_EQ(xy, distance(y, x));
    EXPECT_EQ(xy == ExactDistance(0), x == y);
    EXPECT_LE(distance(x, z), xy + distance(y, z));
    EXPECT_LE(xy, ExactDistance(static_cast<long>(n + 1)));
  }
}

TEST(MetricProperty, IntegerPartIsHammingWhenMessagePartBelowOne) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 500; ++trial) {
    const unsigned n = 1 + static_cast<unsigned>(rng() % 8);
    const PhasePoint x = oracle::random_point(n, rng);
    const PhasePoint y = oracle::random_point(n, rng);
    const ExactDistance dm = message_distance(x.stream, y.stream);
    if (dm < ExactDistance(1)) {
      EXPECT_EQ(distance(x, y).integer_part(), hamming(x.state, y.state));
    } else {
      EXPECT_EQ(x.stream, negate_stream(y.stream));
    }
  }
}
