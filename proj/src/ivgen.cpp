#include "cbcchaos/ivgen.hpp"

#include "cbcchaos/error.hpp"

namespace cbcchaos {

BitBlock IvPolicy::next_iv(const KeyedCipher& cipher) {
  const unsigned n = cipher.width();
  if (mode_ == IvMode::Random) {
    const std::uint64_t hi = entropy_();
    const std::uint64_t lo = entropy_();
    return {n, ((hi << 32) ^ lo) & width_mask(n)};
  }
  if (exhausted_) {
    throw CounterExhausted("all 2^" + std::to_string(n) + " nonces have been used");
  }
  const BitBlock iv = cipher.encrypt(BitBlock(n, counter_));
  if (counter_ == width_mask(n)) {
    exhausted_ = true;
  }
  ++counter_;
  return iv;
}

}  // namespace cbcchaos
