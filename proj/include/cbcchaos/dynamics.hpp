#pragma once

#include <cstddef>
#include <ostream>
#include <string_view>
#include <vector>

#include "cbcchaos/cipher.hpp"
#include "cbcchaos/core.hpp"
#include "cbcchaos/metric.hpp"

namespace cbcchaos {

/// How a step mixes the current state x with the message block m before
/// encryption.
///  - Xor: x XOR m, the usual CBC chaining (canonical).
///  - NegatedSelector: the selector form with f = vectorial negation, which
///    keeps x_j where m_j = 1 and flips it where m_j = 0, i.e. x XOR ~m.
enum class Combiner { Xor, NegatedSelector };

std::string_view to_string(Combiner c);
Combiner parse_combiner(std::string_view name);

/// Componentwise selector: bit j is x_j when m_j = 1 and f(x)_j when m_j = 0.
template <typename F>
BitBlock combine_ff(F&& f, const BitBlock& x, const BitBlock& m) {
  require_same_width(x.width(), m.width(), "combine_ff");
  const BitBlock fx = f(x);
  require_same_width(x.width(), fx.width(), "combine_ff");
  return {x.width(), (x.bits() & m.bits()) | (fx.bits() & ~m.bits() & width_mask(x.width()))};
}

BitBlock combine(Combiner c, const BitBlock& x, const BitBlock& m);

/// The block m with combine(c, x, m) = target.
BitBlock solve_block(Combiner c, const BitBlock& x, const BitBlock& target);

struct DynamicalSystem {
  KeyedCipher cipher;
  Combiner combiner = Combiner::Xor;

  unsigned width() const noexcept { return cipher.width(); }
};

/// g(m, x) = E(combine(x, m)): the state reached from x under message block m.
BitBlock next_state(const DynamicalSystem& sys, const BitBlock& x, const BitBlock& m);

PhasePoint cbc_step(const DynamicalSystem& sys, const PhasePoint& x);
PhasePoint iterate(const DynamicalSystem& sys, const PhasePoint& x, std::size_t n);
/// States after 0..n iterates.
std::vector<BitBlock> trajectory(const DynamicalSystem& sys, const PhasePoint& x, std::size_t n);
/// d(G^t(X), G^t(Y)) for t = 0..n.
std::vector<ExactDistance> divergence_profile(const DynamicalSystem& sys, const PhasePoint& x,
                                              const PhasePoint& y, std::size_t n);

/// CSV with header `step,distance_fraction,distance_decimal`.
void write_divergence_csv(std::ostream& os, const std::vector<ExactDistance>& profile,
                          unsigned digits);

}  // namespace cbcchaos
