#include "cbcchaos/witness.hpp"

#include <algorithm>

#include "cbcchaos/error.hpp"

namespace cbcchaos {

bool VerificationReport::mentions(const std::string& needle) const {
  return std::any_of(failures.begin(), failures.end(),
                     [&](const std::string& f) { return f.find(needle) != std::string::npos; });
}

void VerificationReport::require(bool condition, std::string what) {
  if (!condition) failures.push_back(std::move(what));
}

std::size_t sensitivity_prefix_length(const mpq_class& delta) {
  if (sgn(delta) <= 0) throw InvalidArgument("delta must be positive");
  // c = ceil(-log10 delta) is the least integer with 10^-c <= delta.
  long c = 0;
  if (pow10(0) <= delta) {
    while (pow10(-(c - 1)) <= delta) --c;
  } else {
    while (pow10(-c) > delta) ++c;
  }
  return static_cast<std::size_t>(std::max(c + 1, 0L));
}

namespace {

PhasePoint perturbed_point(const PhasePoint& x, std::size_t k0, const BitBlock& m_prime) {
  std::vector<BitBlock> blocks = x.stream.take(k0 + 1);
  blocks.push_back(m_prime);
  return {x.state, prepend(blocks, negate_stream(shift(x.stream, k0 + 2)))};
}

}  // namespace

SensitivityWitness build_sensitivity_witness(const DynamicalSystem& sys, const PhasePoint& x,
                                             const mpq_class& delta) {
  require_same_width(sys.width(), x.width(), "build_sensitivity_witness");
  const std::size_t k0 = sensitivity_prefix_length(delta);
  const PhasePoint after_prefix = iterate(sys, x, k0 + 1);
  const BitBlock y = after_prefix.state;
  const BitBlock z = cbc_step(sys, after_prefix).state;
  // Choose m' so that the encrypted input is D(~z): X' then lands on ~z.
  const BitBlock m_prime = solve_block(sys.combiner, y, sys.cipher.decrypt(negate(z)));
  PhasePoint x_prime = perturbed_point(x, k0, m_prime);

  const std::size_t step = k0 + 2;
  ExactDistance initial = distance(x, x_prime);
  ExactDistance separation = distance(iterate(sys, x, step), iterate(sys, x_prime, step));
  return {k0, y, z, m_prime, std::move(x_prime), std::move(initial), step, std::move(separation)};
}

VerificationReport verify_sensitivity_witness(const DynamicalSystem& sys, const PhasePoint& x,
                                              const mpq_class& delta,
                                              const SensitivityWitness& w) {
  VerificationReport r;
  if (sgn(delta) <= 0) {
    r.failures.emplace_back("precondition: delta must be positive");
    return r;
  }
  if (x.width() != sys.width() || w.x_prime.width() != sys.width() || w.y.width() != sys.width() ||
      w.z.width() != sys.width() || w.m_prime.width() != sys.width()) {
    r.failures.emplace_back("precondition: width mismatch between system and witness");
    return r;
  }
  const std::size_t k0 = sensitivity_prefix_length(delta);
  r.require(w.k0 == k0, "k0: expected " + std::to_string(k0) + ", recorded " + std::to_string(w.k0));

  const PhasePoint after_prefix = iterate(sys, x, k0 + 1);
  const BitBlock z = cbc_step(sys, after_prefix).state;
  r.require(w.y == after_prefix.state, "y: does not match the state after k0+1 steps");
  r.require(w.z == z, "z: does not match the state after k0+2 steps");
  r.require(w.m_prime == solve_block(sys.combiner, after_prefix.state, sys.cipher.decrypt(negate(z))),
            "m_prime: not the block y XOR D(~z)");
  r.require(w.x_prime.stream.block_at(k0 + 1) == w.m_prime,
            "m_prime: block k0+1 of X' differs from the recorded m_prime");

  const PhasePoint x_prime_after_prefix = iterate(sys, w.x_prime, k0 + 1);
  r.require(x_prime_after_prefix.state == after_prefix.state,
            "closeness: X' does not share X's trajectory through step k0+1");
  r.require(next_state(sys, x_prime_after_prefix.state, head(x_prime_after_prefix.stream)) ==
                negate(z),
            "complement: E(y XOR m') is not the complement of z");

  const ExactDistance initial = distance(x, w.x_prime);
  r.require(initial == w.initial_distance,
            "initial_distance: recorded " + w.initial_distance.fraction() + ", computed " +
                initial.fraction());
  r.require(initial.value() < delta,
            "closeness: d(X, X') = " + initial.fraction() + " is not below delta " +
                format_fraction(delta));

  r.require(w.separation_step == k0 + 2, "separation_step: expected k0+2");
  const ExactDistance separation =
      distance(iterate(sys, x, w.separation_step), iterate(sys, w.x_prime, w.separation_step));
  r.require(separation == w.separation_distance,
            "separation_distance: recorded " + w.separation_distance.fraction() + ", computed " +
                separation.fraction());
  r.require(separation > ExactDistance(static_cast<long>(sys.width())),
            "separation: distance " + separation.fraction() + " does not exceed N = " +
                std::to_string(sys.width()));
  return r;
}

namespace {

ExpansivityCounterexample make_counterexample(const DynamicalSystem& sys, PhasePoint x,
                                              PhasePoint x_prime, std::size_t horizon) {
  if (horizon < 1) throw InvalidArgument("horizon must be at least 1");
  ExactDistance initial = distance(x, x_prime);
  std::vector<ExactDistance> steps;
  steps.reserve(horizon);
  PhasePoint a = cbc_step(sys, x);
  PhasePoint b = cbc_step(sys, x_prime);
  steps.push_back(distance(a, b));
  for (std::size_t n = 2; n <= horizon; ++n) {
    a = cbc_step(sys, a);
    b = cbc_step(sys, b);
    steps.push_back(distance(a, b));
  }
  return {std::move(x), std::move(x_prime), horizon, std::move(initial), std::move(steps)};
}

}  // namespace

ExpansivityCounterexample build_expansivity_counterexample(const DynamicalSystem& sys,
                                                           std::size_t horizon) {
  const unsigned n = sys.width();
  if (n < 2) throw WidthTooSmall("the canonical pair needs N >= 2");
  const BitBlock first = BitBlock::unit(n, 0);
  const BitBlock second = BitBlock::unit(n, 1);
  const MessageStream zeros = MessageStream::constant(BitBlock::zero(n));
  PhasePoint x(first, prepend(std::vector{second}, zeros));
  PhasePoint x_prime(second, prepend(std::vector{first}, zeros));
  return make_counterexample(sys, std::move(x), std::move(x_prime), horizon);
}

ExpansivityCounterexample generalize_collision_pair(const DynamicalSystem& sys, const BitBlock& x,
                                                    const BitBlock& x_prime,
                                                    const MessageStream& tail,
                                                    std::size_t horizon,
                                                    std::optional<BitBlock> first_block) {
  require_same_width(x.width(), x_prime.width(), "generalize_collision_pair");
  require_same_width(sys.width(), x.width(), "generalize_collision_pair");
  require_same_width(sys.width(), tail.width(), "generalize_collision_pair");
  if (x == x_prime) throw DegenerateInput("x and x' must differ");
  const BitBlock m0 = first_block.value_or(BitBlock::zero(sys.width()));
  const BitBlock m0_prime = m0 ^ x ^ x_prime;
  PhasePoint a(x, prepend(std::vector{m0}, tail));
  PhasePoint b(x_prime, prepend(std::vector{m0_prime}, tail));
  return make_counterexample(sys, std::move(a), std::move(b), horizon);
}

VerificationReport verify_expansivity_counterexample(const DynamicalSystem& sys,
                                                     const ExpansivityCounterexample& ce) {
  VerificationReport r;
  if (ce.x.width() != sys.width() || ce.x_prime.width() != sys.width()) {
    r.failures.emplace_back("precondition: width mismatch between system and counterexample");
    return r;
  }
  const ExactDistance initial = distance(ce.x, ce.x_prime);
  r.require(initial > ExactDistance(0), "distinct: the two points coincide");
  r.require(initial == ce.initial_distance, "initial_distance: recorded " +
                                                 ce.initial_distance.fraction() + ", computed " +
                                                 initial.fraction());
  r.require(ce.horizon >= 1, "horizon: must be at least 1");
  r.require(ce.step_distances.size() == ce.horizon, "step_distances: length differs from horizon");

  PhasePoint a = cbc_step(sys, ce.x);
  PhasePoint b = cbc_step(sys, ce.x_prime);
  // Equal points stay equal under a deterministic map, so this covers every n >= 1.
  r.require(a == b, "merge: points differ after step 1");
  for (std::size_t n = 1; n <= ce.horizon; ++n) {
    if (n > 1) {
      a = cbc_step(sys, a);
      b = cbc_step(sys, b);
    }
    const ExactDistance d = distance(a, b);
    if (d != ExactDistance(0)) {
      r.failures.push_back("zero: distance at step " + std::to_string(n) + " is " + d.fraction());
      break;
    }
    if (n <= ce.step_distances.size() && ce.step_distances[n - 1] != d) {
      r.failures.push_back("step_distances: entry " + std::to_string(n) + " does not match");
      break;
    }
  }
  return r;
}

}  // namespace cbcchaos
