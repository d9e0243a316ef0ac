#include "cbcchaos/cipher.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

#include "cbcchaos/error.hpp"

namespace cbcchaos {

namespace {

using detail::BitPermutationImpl;
using detail::LookupTableImpl;
using detail::ToySpnImpl;
using detail::XorKeyImpl;

std::uint64_t permute_bits(std::uint64_t x, unsigned width, const std::vector<unsigned>& to) {
  std::uint64_t out = 0;
  for (unsigned i = 0; i < width; ++i) {
    const std::uint64_t b = (x >> (width - 1 - i)) & 1u;
    out |= b << (width - 1 - to[i]);
  }
  return out;
}

std::uint64_t substitute(std::uint64_t x, unsigned width, unsigned s,
                         const std::vector<std::uint64_t>& box) {
  const std::uint64_t nibble_mask = width_mask(s);
  std::uint64_t out = 0;
  for (unsigned off = 0; off < width; off += s) {
    out |= box[(x >> off) & nibble_mask] << off;
  }
  return out;
}

struct Encrypt {
  std::uint64_t x;
  std::uint64_t operator()(const XorKeyImpl& c) const { return x ^ c.key; }
  std::uint64_t operator()(const BitPermutationImpl& c) const {
    return permute_bits(x, c.width, c.forward);
  }
  std::uint64_t operator()(const ToySpnImpl& c) const {
    std::uint64_t v = x;
    for (std::uint64_t k : c.round_keys) {
      v = substitute(v, c.layer.width, c.sbox_bits, c.sbox);
      v = permute_bits(v, c.layer.width, c.layer.forward);
      v ^= k;
    }
    return v;
  }
  std::uint64_t operator()(const LookupTableImpl& c) const { return c.forward[x]; }
};

struct Decrypt {
  std::uint64_t y;
  std::uint64_t operator()(const XorKeyImpl& c) const { return y ^ c.key; }
  std::uint64_t operator()(const BitPermutationImpl& c) const {
    return permute_bits(y, c.width, c.inverse);
  }
  std::uint64_t operator()(const ToySpnImpl& c) const {
    std::uint64_t v = y;
    for (auto it = c.round_keys.rbegin(); it != c.round_keys.rend(); ++it) {
      v ^= *it;
      v = permute_bits(v, c.layer.width, c.layer.inverse);
      v = substitute(v, c.layer.width, c.sbox_bits, c.inverse_sbox);
    }
    return v;
  }
  std::uint64_t operator()(const LookupTableImpl& c) const { return c.inverse[y]; }
};

[[noreturn]] void malformed(const std::string& what) { throw MalformedSpec(what); }

void check_width(const CipherSpec& spec) {
  if (spec.width < 1 || spec.width > kMaxWidth) {
    malformed("cipher width must lie in [1, 64], got " + std::to_string(spec.width));
  }
}

void check_value(std::uint64_t v, unsigned width, const char* what) {
  if ((v & ~width_mask(width)) != 0) {
    malformed(std::string(what) + " does not fit in " + std::to_string(width) + " bits");
  }
}

// Builds the inverse of a map on [0, size). Returns false if the map is not a
// bijection; in that case the inverse keeps the first preimage of each value.
template <typename T>
bool invert(const std::vector<T>& forward, std::vector<T>& inverse) {
  inverse.assign(forward.size(), T{0});
  std::vector<bool> seen(forward.size(), false);
  bool bijective = true;
  for (std::size_t i = 0; i < forward.size(); ++i) {
    const auto v = static_cast<std::size_t>(forward[i]);
    if (seen[v]) {
      bijective = false;
      continue;
    }
    seen[v] = true;
    inverse[v] = static_cast<T>(i);
  }
  return bijective;
}

BitPermutationImpl make_permutation(const std::vector<unsigned>& perm, unsigned width,
                                    bool strict) {
  if (perm.size() != width) {
    malformed("perm must have " + std::to_string(width) + " entries, got " +
              std::to_string(perm.size()));
  }
  for (unsigned p : perm) {
    if (p >= width) malformed("perm entry " + std::to_string(p) + " out of range");
  }
  BitPermutationImpl impl{width, perm, {}};
  if (!invert(impl.forward, impl.inverse) && strict) malformed("perm is not a bijection");
  return impl;
}

KeyedCipher::Impl make_impl(const CipherSpec& spec, bool strict) {
  check_width(spec);
  const unsigned n = spec.width;
  switch (spec.kind) {
    case CipherKind::XorKey:
      check_value(spec.key, n, "key");
      return XorKeyImpl{spec.key};
    case CipherKind::BitPermutation:
      return make_permutation(spec.perm, n, strict);
    case CipherKind::ToySpn: {
      const std::size_t size = spec.sbox.size();
      if (size < 2 || !std::has_single_bit(size)) {
        malformed("sbox size must be a power of two >= 2, got " + std::to_string(size));
      }
      const auto s = static_cast<unsigned>(std::countr_zero(size));
      if (s > n || n % s != 0) {
        malformed("sbox width " + std::to_string(s) + " does not divide block width " +
                  std::to_string(n));
      }
      for (std::uint64_t v : spec.sbox) {
        if (v >= size) malformed("sbox entry " + std::to_string(v) + " out of range");
      }
      if (spec.rounds < 1) malformed("toy-spn needs at least one round");
      ToySpnImpl impl{s, spec.sbox, {}, make_permutation(spec.perm, n, strict), {}};
      if (!invert(impl.sbox, impl.inverse_sbox) && strict) malformed("sbox is not a bijection");
      if (spec.round_keys.empty()) {
        check_value(spec.key, n, "key");
        impl.round_keys.assign(spec.rounds, spec.key);
      } else {
        if (spec.round_keys.size() != spec.rounds) {
          malformed("round_keys must have one entry per round");
        }
        for (std::uint64_t k : spec.round_keys) check_value(k, n, "round key");
        impl.round_keys = spec.round_keys;
      }
      return impl;
    }
    case CipherKind::LookupTable: {
      if (n > kMaxTableWidth) {
        malformed("lookup-table ciphers are limited to width 16, got " + std::to_string(n));
      }
      const std::size_t size = std::size_t{1} << n;
      if (spec.table.size() != size) {
        malformed("table must have " + std::to_string(size) + " entries, got " +
                  std::to_string(spec.table.size()));
      }
      for (std::uint64_t v : spec.table) check_value(v, n, "table entry");
      LookupTableImpl impl{spec.table, {}};
      if (!invert(impl.forward, impl.inverse) && strict) malformed("table is not a bijection");
      return impl;
    }
  }
  malformed("unknown cipher kind");
}

}  // namespace

std::string_view to_string(CipherKind kind) {
  switch (kind) {
    case CipherKind::XorKey: return "xor-key";
    case CipherKind::BitPermutation: return "bit-permutation";
    case CipherKind::ToySpn: return "toy-spn";
    case CipherKind::LookupTable: return "lookup-table";
  }
  return "unknown";
}

CipherKind parse_cipher_kind(std::string_view name) {
  for (auto k : {CipherKind::XorKey, CipherKind::BitPermutation, CipherKind::ToySpn,
                 CipherKind::LookupTable}) {
    if (to_string(k) == name) return k;
  }
  throw MalformedSpec("unknown cipher kind '" + std::string(name) + "'");
}

std::string KeyedCipher::descriptor() const {
  std::ostringstream os;
  os << to_string(spec_.kind) << "(n=" << spec_.width;
  switch (spec_.kind) {
    case CipherKind::XorKey:
      os << ",key=" << BitBlock(spec_.width, spec_.key).hex();
      break;
    case CipherKind::ToySpn:
      os << ",rounds=" << spec_.rounds << ",sbox=" << spec_.sbox.size();
      break;
    default:
      break;
  }
  os << ")";
  return os.str();
}

std::uint64_t KeyedCipher::encrypt_bits(std::uint64_t x) const {
  return std::visit(Encrypt{x}, impl_);
}

std::uint64_t KeyedCipher::decrypt_bits(std::uint64_t y) const {
  return std::visit(Decrypt{y}, impl_);
}

BitBlock KeyedCipher::encrypt(const BitBlock& x) const {
  require_same_width(width(), x.width(), "encrypt");
  return {width(), encrypt_bits(x.bits())};
}

BitBlock KeyedCipher::decrypt(const BitBlock& y) const {
  require_same_width(width(), y.width(), "decrypt");
  return {width(), decrypt_bits(y.bits())};
}

KeyedCipher build_cipher(const CipherSpec& spec) { return {spec, make_impl(spec, true)}; }

KeyedCipher build_cipher_unchecked(const CipherSpec& spec) {
  return {spec, make_impl(spec, false)};
}

RoundtripVerdict roundtrip_check(const KeyedCipher& cipher) {
  RoundtripVerdict verdict;
  const unsigned n = cipher.width();
  auto check = [&](std::uint64_t x) {
    ++verdict.checked;
    if (cipher.decrypt_bits(cipher.encrypt_bits(x)) != x ||
        cipher.encrypt_bits(cipher.decrypt_bits(x)) != x) {
      verdict.ok = false;
      verdict.counterexample = BitBlock(n, x);
      return false;
    }
    return true;
  };
  if (n <= kMaxTableWidth) {
    const std::uint64_t size = std::uint64_t{1} << n;
    for (std::uint64_t x = 0; x < size; ++x) {
      if (!check(x)) break;
    }
    return verdict;
  }
  verdict.exhaustive = false;
  std::mt19937_64 rng(0x5eed'cbc0'0000'0001ULL);
  const std::uint64_t mask = width_mask(n);
  for (int i = 0; i < 100'000; ++i) {
    if (!check(rng() & mask)) break;
  }
  return verdict;
}

CipherSpec xor_key_spec(unsigned width, std::uint64_t key) {
  CipherSpec spec;
  spec.kind = CipherKind::XorKey;
  spec.width = width;
  spec.key = key;
  return spec;
}

CipherSpec identity_table_spec(unsigned width) {
  CipherSpec spec;
  spec.kind = CipherKind::LookupTable;
  spec.width = width;
  spec.table.resize(std::size_t{1} << width);
  std::iota(spec.table.begin(), spec.table.end(), std::uint64_t{0});
  return spec;
}

CipherSpec reverse_bits_spec(unsigned width) {
  CipherSpec spec;
  spec.kind = CipherKind::BitPermutation;
  spec.width = width;
  for (unsigned i = 0; i < width; ++i) spec.perm.push_back(width - 1 - i);
  return spec;
}

CipherSpec random_xor_key_spec(unsigned width, std::mt19937_64& rng) {
  return xor_key_spec(width, rng() & width_mask(width));
}

CipherSpec random_bit_permutation_spec(unsigned width, std::mt19937_64& rng) {
  CipherSpec spec;
  spec.kind = CipherKind::BitPermutation;
  spec.width = width;
  spec.perm.resize(width);
  std::iota(spec.perm.begin(), spec.perm.end(), 0u);
  std::shuffle(spec.perm.begin(), spec.perm.end(), rng);
  return spec;
}

CipherSpec random_toy_spn_spec(unsigned width, unsigned rounds, std::mt19937_64& rng) {
  unsigned s = 1;
  for (unsigned cand : {4u, 3u, 2u}) {
    if (cand <= width && width % cand == 0) {
      s = cand;
      break;
    }
  }
  CipherSpec spec = random_bit_permutation_spec(width, rng);
  spec.kind = CipherKind::ToySpn;
  spec.sbox.resize(std::size_t{1} << s);
  std::iota(spec.sbox.begin(), spec.sbox.end(), std::uint64_t{0});
  std::shuffle(spec.sbox.begin(), spec.sbox.end(), rng);
  spec.rounds = rounds;
  for (unsigned r = 0; r < rounds; ++r) spec.round_keys.push_back(rng() & width_mask(width));
  return spec;
}

CipherSpec random_lookup_table_spec(unsigned width, std::mt19937_64& rng) {
  CipherSpec spec = identity_table_spec(width);
  std::shuffle(spec.table.begin(), spec.table.end(), rng);
  return spec;
}

std::vector<CipherSpec> gallery(unsigned width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CipherSpec> out;
  out.push_back(random_xor_key_spec(width, rng));
  out.push_back(random_bit_permutation_spec(width, rng));
  out.push_back(random_toy_spn_spec(width, 3, rng));
  if (width <= kMaxTableWidth) out.push_back(random_lookup_table_spec(width, rng));
  return out;
}

}  // namespace cbcchaos
