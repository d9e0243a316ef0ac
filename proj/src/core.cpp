#include "cbcchaos/core.hpp"

#include <bit>
#include <numeric>

#include "cbcchaos/error.hpp"

namespace cbcchaos {

void require_same_width(unsigned a, unsigned b, const char* what) {
  if (a != b) {
    throw WidthMismatch(std::string(what) + ": widths " + std::to_string(a) + " and " +
                        std::to_string(b) + " differ");
  }
}

BitBlock::BitBlock(unsigned width, std::uint64_t bits) : width_(width), bits_(bits) {
  if (width < 1 || width > kMaxWidth) {
    throw InvalidArgument("block width must lie in [1, 64], got " + std::to_string(width));
  }
  if ((bits & ~width_mask(width)) != 0) {
    throw InvalidArgument("block value does not fit in " + std::to_string(width) + " bits");
  }
}

BitBlock BitBlock::unit(unsigned width, unsigned j) { return zero(width).flip_bit(j); }

bool BitBlock::bit(unsigned j) const {
  if (j >= width_) throw InvalidArgument("bit index out of range");
  return (bits_ >> (width_ - 1 - j)) & 1u;
}

BitBlock BitBlock::flip_bit(unsigned j) const {
  if (j >= width_) throw InvalidArgument("bit index out of range");
  return {width_, bits_ ^ (std::uint64_t{1} << (width_ - 1 - j))};
}

std::string BitBlock::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const unsigned digits = (width_ + 3) / 4;
  std::string out(digits, '0');
  std::uint64_t v = bits_;
  for (unsigned i = 0; i < digits; ++i) {
    out[digits - 1 - i] = kDigits[v & 0xf];
    v >>= 4;
  }
  return out;
}

std::string BitBlock::binary() const {
  std::string out(width_, '0');
  for (unsigned j = 0; j < width_; ++j) {
    if (bit(j)) out[j] = '1';
  }
  return out;
}

BitBlock negate(const BitBlock& b) { return {b.width(), ~b.bits() & width_mask(b.width())}; }

BitBlock operator~(const BitBlock& b) { return negate(b); }

BitBlock operator^(const BitBlock& a, const BitBlock& b) {
  require_same_width(a.width(), b.width(), "xor");
  return {a.width(), a.bits() ^ b.bits()};
}

unsigned hamming(const BitBlock& a, const BitBlock& b) {
  require_same_width(a.width(), b.width(), "hamming");
  return static_cast<unsigned>(std::popcount(a.bits() ^ b.bits()));
}

MessageStream::MessageStream(unsigned width, std::vector<BitBlock> prefix,
                             std::vector<BitBlock> cycle)
    : width_(width), prefix_(std::move(prefix)), cycle_(std::move(cycle)) {
  if (cycle_.empty()) throw InvalidArgument("message stream cycle must not be empty");
  for (const auto& b : prefix_) require_same_width(width_, b.width(), "stream prefix");
  for (const auto& b : cycle_) require_same_width(width_, b.width(), "stream cycle");
}

const BitBlock& MessageStream::block_at(std::size_t j) const {
  if (j < prefix_.size()) return prefix_[j];
  return cycle_[(j - prefix_.size()) % cycle_.size()];
}

std::vector<BitBlock> MessageStream::take(std::size_t n) const {
  std::vector<BitBlock> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) out.push_back(block_at(j));
  return out;
}

BitBlock head(const MessageStream& s) { return s.block_at(0); }

MessageStream shift(const MessageStream& s) { return shift(s, 1); }

MessageStream shift(const MessageStream& s, std::size_t n) {
  const auto& prefix = s.prefix();
  const auto& cycle = s.cycle();
  if (n <= prefix.size()) {
    return {s.width(), {prefix.begin() + static_cast<std::ptrdiff_t>(n), prefix.end()}, cycle};
  }
  const std::size_t r = (n - prefix.size()) % cycle.size();
  std::vector<BitBlock> rotated;
  rotated.reserve(cycle.size());
  rotated.insert(rotated.end(), cycle.begin() + static_cast<std::ptrdiff_t>(r), cycle.end());
  rotated.insert(rotated.end(), cycle.begin(), cycle.begin() + static_cast<std::ptrdiff_t>(r));
  return {s.width(), {}, std::move(rotated)};
}

MessageStream negate_stream(const MessageStream& s) {
  std::vector<BitBlock> prefix;
  std::vector<BitBlock> cycle;
  prefix.reserve(s.prefix().size());
  cycle.reserve(s.cycle().size());
  for (const auto& b : s.prefix()) prefix.push_back(negate(b));
  for (const auto& b : s.cycle()) cycle.push_back(negate(b));
  return {s.width(), std::move(prefix), std::move(cycle)};
}

MessageStream prepend(std::span<const BitBlock> blocks, const MessageStream& tail) {
  std::vector<BitBlock> prefix(blocks.begin(), blocks.end());
  prefix.insert(prefix.end(), tail.prefix().begin(), tail.prefix().end());
  return {tail.width(), std::move(prefix), tail.cycle()};
}

MessageStream replace_block(const MessageStream& s, std::size_t j, const BitBlock& b) {
  require_same_width(s.width(), b.width(), "replace_block");
  std::vector<BitBlock> blocks = s.take(j);
  blocks.push_back(b);
  return prepend(blocks, shift(s, j + 1));
}

bool streams_equal_upto(const MessageStream& a, const MessageStream& b, std::size_t k) {
  require_same_width(a.width(), b.width(), "streams_equal_upto");
  for (std::size_t j = 0; j <= k; ++j) {
    if (a.block_at(j) != b.block_at(j)) return false;
  }
  return true;
}

std::size_t equality_horizon(const MessageStream& a, const MessageStream& b) {
  return a.prefix().size() + b.prefix().size() + std::lcm(a.cycle().size(), b.cycle().size());
}

bool operator==(const MessageStream& a, const MessageStream& b) {
  if (a.width() != b.width()) return false;
  const std::size_t n = equality_horizon(a, b);
  for (std::size_t j = 0; j < n; ++j) {
    if (a.block_at(j) != b.block_at(j)) return false;
  }
  return true;
}

PhasePoint::PhasePoint(BitBlock s, MessageStream m) : state(s), stream(std::move(m)) {
  require_same_width(state.width(), stream.width(), "phase point");
}

}  // namespace cbcchaos
