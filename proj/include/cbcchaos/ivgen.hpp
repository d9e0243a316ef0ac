#pragma once

#include <cstdint>
#include <random>

#include "cbcchaos/cipher.hpp"
#include "cbcchaos/core.hpp"

namespace cbcchaos {

enum class IvMode { EncryptedNonce, Random };

/// Source of initialization vectors.
///
/// EncryptedNonce returns E(counter) for counter = 0, 1, 2, ... and throws
/// CounterExhausted after 2^N values. Random draws from the OS entropy
/// source; it is not a certified generator.
///
/// Not thread-safe: next_iv mutates the policy.
class IvPolicy {
 public:
  explicit IvPolicy(IvMode mode) : mode_(mode) {}

  IvMode mode() const noexcept { return mode_; }
  std::uint64_t nonces_used() const noexcept { return counter_; }

  BitBlock next_iv(const KeyedCipher& cipher);

 private:
  IvMode mode_;
  std::uint64_t counter_ = 0;
  bool exhausted_ = false;
  std::random_device entropy_;
};

}  // namespace cbcchaos
