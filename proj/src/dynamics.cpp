#include "cbcchaos/dynamics.hpp"

#include "cbcchaos/error.hpp"

namespace cbcchaos {

std::string_view to_string(Combiner c) {
  return c == Combiner::Xor ? "xor" : "negated-selector";
}

Combiner parse_combiner(std::string_view name) {
  if (name == "xor") return Combiner::Xor;
  if (name == "negated-selector") return Combiner::NegatedSelector;
  throw InvalidArgument("unknown combiner '" + std::string(name) + "'");
}

BitBlock combine(Combiner c, const BitBlock& x, const BitBlock& m) {
  if (c == Combiner::Xor) return x ^ m;
  return combine_ff([](const BitBlock& v) { return negate(v); }, x, m);
}

BitBlock solve_block(Combiner c, const BitBlock& x, const BitBlock& target) {
  // Both combiners are x XOR (m or ~m), so the solution is x XOR target up to negation.
  const BitBlock m = x ^ target;
  return c == Combiner::Xor ? m : negate(m);
}

BitBlock next_state(const DynamicalSystem& sys, const BitBlock& x, const BitBlock& m) {
  require_same_width(sys.width(), x.width(), "cbc_step");
  return sys.cipher.encrypt(combine(sys.combiner, x, m));
}

PhasePoint cbc_step(const DynamicalSystem& sys, const PhasePoint& x) {
  return {next_state(sys, x.state, head(x.stream)), shift(x.stream)};
}

PhasePoint iterate(const DynamicalSystem& sys, const PhasePoint& x, std::size_t n) {
  require_same_width(sys.width(), x.width(), "iterate");
  BitBlock state = x.state;
  for (std::size_t t = 0; t < n; ++t) state = next_state(sys, state, x.stream.block_at(t));
  return {state, shift(x.stream, n)};
}

std::vector<BitBlock> trajectory(const DynamicalSystem& sys, const PhasePoint& x, std::size_t n) {
  require_same_width(sys.width(), x.width(), "trajectory");
  std::vector<BitBlock> out;
  out.reserve(n + 1);
  out.push_back(x.state);
  for (std::size_t t = 0; t < n; ++t) out.push_back(next_state(sys, out.back(), x.stream.block_at(t)));
  return out;
}

std::vector<ExactDistance> divergence_profile(const DynamicalSystem& sys, const PhasePoint& x,
                                              const PhasePoint& y, std::size_t n) {
  require_same_width(x.width(), y.width(), "divergence_profile");
  std::vector<ExactDistance> out;
  out.reserve(n + 1);
  PhasePoint a = x;
  PhasePoint b = y;
  out.push_back(distance(a, b));
  for (std::size_t t = 0; t < n; ++t) {
    a = cbc_step(sys, a);
    b = cbc_step(sys, b);
    out.push_back(distance(a, b));
  }
  return out;
}

void write_divergence_csv(std::ostream& os, const std::vector<ExactDistance>& profile,
                          unsigned digits) {
  os << "step,distance_fraction,distance_decimal\n";
  for (std::size_t t = 0; t < profile.size(); ++t) {
    os << t << ',' << profile[t].fraction() << ',' << profile[t].decimal(digits) << '\n';
  }
}

}  // namespace cbcchaos
