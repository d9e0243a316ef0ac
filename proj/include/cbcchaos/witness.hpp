#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cbcchaos/core.hpp"
#include "cbcchaos/dynamics.hpp"
#include "cbcchaos/metric.hpp"

namespace cbcchaos {

/// Outcome of re-checking a witness: ok iff `failures` is empty.
struct VerificationReport {
  std::vector<std::string> failures;

  bool ok() const noexcept { return failures.empty(); }
  bool mentions(const std::string& needle) const;
  void require(bool condition, std::string what);
};

/// ceil(-log10(delta)) + 1, computed with exact powers of ten and clamped at 0
/// (radii >= 10 already contain every point reachable by the construction).
std::size_t sensitivity_prefix_length(const mpq_class& delta);

/// A point X' inside the delta-ball around X whose orbit separates from X's by
/// more than N.
///
/// X' keeps X's state and blocks 0..k0, replaces block k0+1 by m_prime and
/// negates every later block. After k0+1 steps both orbits sit in state y;
/// the tampered block sends X' to ~z while X goes to z, and the remaining
/// message tails are complementary, so the distance at step k0+2 is N + 1.
struct SensitivityWitness {
  std::size_t k0 = 0;
  BitBlock y;
  BitBlock z;
  BitBlock m_prime;
  PhasePoint x_prime;
  ExactDistance initial_distance;
  std::size_t separation_step = 0;
  ExactDistance separation_distance;
};

/// Requires delta > 0 (InvalidArgument otherwise).
SensitivityWitness build_sensitivity_witness(const DynamicalSystem& sys, const PhasePoint& x,
                                             const mpq_class& delta);

/// Re-derives every field of `w` by running the dynamics and the metric.
/// Checks labelled "closeness", "separation" and "complement" cover the
/// witness's validity; the others cover consistency of the recorded fields.
VerificationReport verify_sensitivity_witness(const DynamicalSystem& sys, const PhasePoint& x,
                                              const mpq_class& delta,
                                              const SensitivityWitness& w);

/// Two distinct points whose orbits merge after one step, so no expansivity
/// constant can exist.
struct ExpansivityCounterexample {
  PhasePoint x;
  PhasePoint x_prime;
  std::size_t horizon = 0;
  ExactDistance initial_distance;
  /// d(G^n(X), G^n(X')) for n = 1..horizon.
  std::vector<ExactDistance> step_distances;
};

/// The canonical pair x = (1,0,...,0), x' = (0,1,0,...,0) with first blocks
/// m^0 = (0,1,0,...,0), m'^0 = (1,0,...,0) and zero blocks afterwards.
/// Throws WidthTooSmall for N < 2.
ExpansivityCounterexample build_expansivity_counterexample(const DynamicalSystem& sys,
                                                           std::size_t horizon);

/// Any x != x' collides after one step once m'^0 = m^0 XOR x XOR x'.
/// Throws DegenerateInput when x == x'.
ExpansivityCounterexample generalize_collision_pair(const DynamicalSystem& sys, const BitBlock& x,
                                                    const BitBlock& x_prime,
                                                    const MessageStream& tail,
                                                    std::size_t horizon = 16,
                                                    std::optional<BitBlock> first_block = {});

/// Distinctness, the recorded distances, and structural equality of the two
/// points after step 1 (which makes the zero distance hold for every n).
VerificationReport verify_expansivity_counterexample(const DynamicalSystem& sys,
                                                     const ExpansivityCounterexample& ce);

}  // namespace cbcchaos
