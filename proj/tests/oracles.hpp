#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the dynamics, graph or metric modules.

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <vector>

#include "cbcchaos/cipher.hpp"
#include "cbcchaos/core.hpp"

namespace cbcchaos::oracle {

/// Textbook CBC encryption: c_0 = IV, c_{t+1} = E(c_t XOR p_t).
inline std::vector<std::uint64_t> cbc_encrypt(const KeyedCipher& cipher, std::uint64_t iv,
                                              const std::vector<std::uint64_t>& plaintext) {
  std::vector<std::uint64_t> out{iv};
  std::uint64_t chain = iv;
  for (std::uint64_t p : plaintext) {
    chain = cipher.encrypt_bits(chain ^ p);
    out.push_back(chain);
  }
  return out;
}

/// (9/N) * sum_{k=1}^{K} popcount(a_{k-1} XOR b_{k-1}) / 10^k, term by term.
inline mpq_class truncated_message_distance(const MessageStream& a, const MessageStream& b,
                                            std::size_t terms) {
  mpq_class sum = 0;
  mpz_class ten_k = 1;
  for (std::size_t k = 1; k <= terms; ++k) {
    ten_k *= 10;
    const auto diff = static_cast<unsigned long>(
        __builtin_popcountll(a.block_at(k - 1).bits() ^ b.block_at(k - 1).bits()));
    sum += mpq_class(mpz_class(diff), ten_k);
  }
  sum *= mpq_class(9, a.width());
  sum.canonicalize();
  return sum;
}

/// Reachability closure (Warshall) of x -> E(x XOR m) for m in `alphabet`.
/// Returns true iff every vertex reaches every vertex.
inline bool all_pairs_reachable(const KeyedCipher& cipher, const std::vector<std::uint64_t>& alphabet) {
  const std::size_t v = std::size_t{1} << cipher.width();
  std::vector<std::vector<bool>> reach(v, std::vector<bool>(v, false));
  for (std::size_t x = 0; x < v; ++x) {
    reach[x][x] = true;
    for (std::uint64_t m : alphabet) reach[x][cipher.encrypt_bits(x ^ m)] = true;
  }
  for (std::size_t k = 0; k < v; ++k) {
    for (std::size_t i = 0; i < v; ++i) {
      if (!reach[i][k]) continue;
      for (std::size_t j = 0; j < v; ++j) {
        if (reach[k][j]) reach[i][j] = true;
      }
    }
  }
  for (std::size_t i = 0; i < v; ++i) {
    for (std::size_t j = 0; j < v; ++j) {
      if (!reach[i][j]) return false;
    }
  }
  return true;
}

/// Reachability from one vertex by plain DFS on the same edge rule.
inline std::vector<bool> reachable_from(const KeyedCipher& cipher,
                                        const std::vector<std::uint64_t>& alphabet,
                                        std::uint64_t from) {
  const std::size_t v = std::size_t{1} << cipher.width();
  std::vector<bool> seen(v, false);
  std::vector<std::uint64_t> todo{from};
  seen[from] = true;
  while (!todo.empty()) {
    const std::uint64_t x = todo.back();
    todo.pop_back();
    for (std::uint64_t m : alphabet) {
      const std::uint64_t y = cipher.encrypt_bits(x ^ m);
      if (!seen[y]) {
        seen[y] = true;
        todo.push_back(y);
      }
    }
  }
  return seen;
}

inline BitBlock random_block(unsigned width, std::mt19937_64& rng) {
  return {width, rng() & width_mask(width)};
}

inline MessageStream random_stream(unsigned width, std::mt19937_64& rng, std::size_t max_prefix = 4,
                                   std::size_t max_cycle = 4) {
  std::uniform_int_distribution<std::size_t> prefix_len(0, max_prefix);
  std::uniform_int_distribution<std::size_t> cycle_len(1, max_cycle);
  std::vector<BitBlock> prefix, cycle;
  for (std::size_t i = prefix_len(rng); i > 0; --i) prefix.push_back(random_block(width, rng));
  for (std::size_t i = cycle_len(rng); i > 0; --i) cycle.push_back(random_block(width, rng));
  return {width, std::move(prefix), std::move(cycle)};
}

inline PhasePoint random_point(unsigned width, std::mt19937_64& rng) {
  return {random_block(width, rng), random_stream(width, rng)};
}

}  // namespace cbcchaos::oracle
