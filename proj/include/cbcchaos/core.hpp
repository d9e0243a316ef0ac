#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cbcchaos {

inline constexpr unsigned kMaxWidth = 64;

/// Mask with the low `width` bits set.
constexpr std::uint64_t width_mask(unsigned width) noexcept {
  return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

/// An N-bit word, 1 <= N <= 64.
///
/// Bit indexing counts from the left: bit 0 is the most significant bit of
/// the integer encoding and bit N-1 the least significant one. Every module
/// that talks about "bit j" of a block goes through `bit()` / `flip_bit()`.
class BitBlock {
 public:
  BitBlock(unsigned width, std::uint64_t bits);

  static BitBlock zero(unsigned width) { return {width, 0}; }
  static BitBlock ones(unsigned width) { return {width, width_mask(width)}; }
  /// Block with only bit `j` (counted from the left) set.
  static BitBlock unit(unsigned width, unsigned j);

  unsigned width() const noexcept { return width_; }
  std::uint64_t bits() const noexcept { return bits_; }

  bool bit(unsigned j) const;
  BitBlock flip_bit(unsigned j) const;

  /// Lowercase hex, zero-padded to ceil(N/4) digits.
  std::string hex() const;
  /// N characters of '0'/'1', leftmost bit first.
  std::string binary() const;

  friend bool operator==(const BitBlock&, const BitBlock&) = default;

 private:
  unsigned width_;
  std::uint64_t bits_;
};

BitBlock negate(const BitBlock& b);
BitBlock operator~(const BitBlock& b);
BitBlock operator^(const BitBlock& a, const BitBlock& b);
unsigned hamming(const BitBlock& a, const BitBlock& b);

/// Infinite block sequence stored as a finite prefix followed by a cycle that
/// repeats forever. The cycle is never empty.
class MessageStream {
 public:
  MessageStream(unsigned width, std::vector<BitBlock> prefix, std::vector<BitBlock> cycle);

  /// The stream b, b, b, ...
  static MessageStream constant(const BitBlock& b) { return {b.width(), {}, {b}}; }

  unsigned width() const noexcept { return width_; }
  const std::vector<BitBlock>& prefix() const noexcept { return prefix_; }
  const std::vector<BitBlock>& cycle() const noexcept { return cycle_; }

  const BitBlock& block_at(std::size_t j) const;
  /// Blocks 0..n-1.
  std::vector<BitBlock> take(std::size_t n) const;

 private:
  unsigned width_;
  std::vector<BitBlock> prefix_;
  std::vector<BitBlock> cycle_;
};

BitBlock head(const MessageStream& s);
MessageStream shift(const MessageStream& s);
/// shift applied n times.
MessageStream shift(const MessageStream& s, std::size_t n);
MessageStream negate_stream(const MessageStream& s);
/// The stream blocks[0], ..., blocks[k-1], tail[0], tail[1], ...
MessageStream prepend(std::span<const BitBlock> blocks, const MessageStream& tail);
/// Copy of s with block j replaced.
MessageStream replace_block(const MessageStream& s, std::size_t j, const BitBlock& b);

/// True iff blocks 0..k agree.
bool streams_equal_upto(const MessageStream& a, const MessageStream& b, std::size_t k);

/// Number of leading block positions that decide blockwise equality of a and b:
/// |prefix_a| + |prefix_b| + lcm(|cycle_a|, |cycle_b|).
std::size_t equality_horizon(const MessageStream& a, const MessageStream& b);

/// Blockwise equality of the infinite sequences (not of the representations).
bool operator==(const MessageStream& a, const MessageStream& b);

/// A point (state, stream) of the phase space.
struct PhasePoint {
  BitBlock state;
  MessageStream stream;

  PhasePoint(BitBlock state, MessageStream stream);

  unsigned width() const noexcept { return state.width(); }
  friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

void require_same_width(unsigned a, unsigned b, const char* what);

}  // namespace cbcchaos
