#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cbcchaos/core.hpp"

namespace cbcchaos {

enum class CipherKind { XorKey, BitPermutation, ToySpn, LookupTable };

std::string_view to_string(CipherKind kind);
CipherKind parse_cipher_kind(std::string_view name);

/// Lookup tables (and exhaustive round-trip checks) stop at 2^16 entries.
inline constexpr unsigned kMaxTableWidth = 16;

/// Declarative description of a keyed bijection.
///
/// Fields used per kind:
///  - xor-key:         key
///  - bit-permutation: perm (bit at left-index i moves to left-index perm[i])
///  - toy-spn:         sbox (2^s entries, s divides width), perm, rounds, and
///                     either round_keys (one per round) or key (every round)
///  - lookup-table:    table (2^width entries, width <= 16)
struct CipherSpec {
  CipherKind kind = CipherKind::XorKey;
  unsigned width = 0;
  std::uint64_t key = 0;
  std::vector<std::uint64_t> round_keys;
  std::vector<unsigned> perm;
  std::vector<std::uint64_t> sbox;
  unsigned rounds = 0;
  std::vector<std::uint64_t> table;

  friend bool operator==(const CipherSpec&, const CipherSpec&) = default;
};

namespace detail {

struct XorKeyImpl {
  std::uint64_t key;
};

struct BitPermutationImpl {
  unsigned width;
  std::vector<unsigned> forward;
  std::vector<unsigned> inverse;
};

struct ToySpnImpl {
  unsigned sbox_bits;
  std::vector<std::uint64_t> sbox;
  std::vector<std::uint64_t> inverse_sbox;
  BitPermutationImpl layer;
  std::vector<std::uint64_t> round_keys;
};

struct LookupTableImpl {
  std::vector<std::uint64_t> forward;
  std::vector<std::uint64_t> inverse;
};

}  // namespace detail

/// An (E_k, D_k) pair on N-bit words. Immutable once built.
class KeyedCipher {
 public:
  using Impl = std::variant<detail::XorKeyImpl, detail::BitPermutationImpl, detail::ToySpnImpl,
                            detail::LookupTableImpl>;

  unsigned width() const noexcept { return spec_.width; }
  const CipherSpec& spec() const noexcept { return spec_; }
  /// Short human-readable identifier, e.g. "xor-key(n=4,key=a)".
  std::string descriptor() const;

  BitBlock encrypt(const BitBlock& x) const;
  BitBlock decrypt(const BitBlock& y) const;

  // Raw paths for hot loops; inputs must already fit in width() bits.
  std::uint64_t encrypt_bits(std::uint64_t x) const;
  std::uint64_t decrypt_bits(std::uint64_t y) const;

 private:
  friend KeyedCipher build_cipher(const CipherSpec&);
  friend KeyedCipher build_cipher_unchecked(const CipherSpec&);

  KeyedCipher(CipherSpec spec, Impl impl) : spec_(std::move(spec)), impl_(std::move(impl)) {}

  CipherSpec spec_;
  Impl impl_;
};

/// Builds and validates a cipher; throws MalformedSpec when the parameters do
/// not describe a bijection of the declared width.
KeyedCipher build_cipher(const CipherSpec& spec);

/// Same shape checks as build_cipher, but accepts non-bijective tables,
/// S-boxes and permutations so they can be diagnosed with roundtrip_check.
KeyedCipher build_cipher_unchecked(const CipherSpec& spec);

struct RoundtripVerdict {
  bool ok = true;
  std::optional<BitBlock> counterexample;
  bool exhaustive = true;
  std::uint64_t checked = 0;
};

/// Checks D(E(x)) = x and E(D(x)) = x, exhaustively for width <= 16 and on
/// 10^5 seeded random inputs above that.
RoundtripVerdict roundtrip_check(const KeyedCipher& cipher);

// Spec generators used by the gallery, the tests and the CLI examples.
CipherSpec xor_key_spec(unsigned width, std::uint64_t key);
CipherSpec identity_table_spec(unsigned width);
CipherSpec reverse_bits_spec(unsigned width);
CipherSpec random_xor_key_spec(unsigned width, std::mt19937_64& rng);
CipherSpec random_bit_permutation_spec(unsigned width, std::mt19937_64& rng);
CipherSpec random_toy_spn_spec(unsigned width, unsigned rounds, std::mt19937_64& rng);
CipherSpec random_lookup_table_spec(unsigned width, std::mt19937_64& rng);

/// One spec of every kind available at this width (lookup-table only up to 16 bits).
std::vector<CipherSpec> gallery(unsigned width, std::uint64_t seed);

}  // namespace cbcchaos
