// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cbcchaos/graph.hpp"
#include "cbcchaos/metric.hpp"
#include "cbcchaos/witness.hpp"
#include "oracles.hpp"

using namespace cbcchaos;

namespace {

struct Tally {
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first_failure;

  void expect(bool ok, const std::function<std::string()>& what) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) first_failure = what();
  }
};

mpq_class q(long p, long r) {
  mpq_class v(p, r);
  v.canonicalize();
  return v;
}

// 1 and 2 share the witnesses, so they are produced together.
void sensitivity_criteria(Tally& sep, Tally& algebra) {
  std::mt19937_64 rng(101);
  const unsigned points = 20;
  for (unsigned n : {2u, 4u, 8u}) {
    for (const auto& spec : gallery(n, 1000 + n)) {
      const DynamicalSystem sys{build_cipher(spec), Combiner::Xor};
      for (const mpq_class& delta : {q(1, 2), q(1, 20), q(1, 1000)}) {
        for (unsigned t = 0; t < points; ++t) {
          const PhasePoint x = oracle::random_point(n, rng);
          const SensitivityWitness w = build_sensitivity_witness(sys, x, delta);
          const std::size_t step = w.k0 + 2;
          const ExactDistance d0 = distance(x, w.x_prime);
          const ExactDistance ds = distance(iterate(sys, x, step), iterate(sys, w.x_prime, step));
          const auto where = [&] {
            std::ostringstream os;
            os << sys.cipher.descriptor() << " delta=" << delta.get_str() << " d0=" << d0.fraction()
               << " d_sep=" << ds.fraction();
            return os.str();
          };
          sep.expect(d0.value() < delta, where);
          sep.expect(ds == ExactDistance(static_cast<long>(n) + 1), where);
          sep.expect(ds > ExactDistance(static_cast<long>(n)), where);
          algebra.expect(sys.cipher.encrypt(w.y ^ w.m_prime) == negate(w.z), where);
          algebra.expect(w.z == iterate(sys, x, step).state, where);
        }
      }
    }
  }
}

void non_expansivity(Tally& t) {
  constexpr std::size_t kHorizon = 1000;
  for (unsigned n : {2u, 4u, 8u, 16u}) {
    for (const auto& spec : gallery(n, 2000 + n)) {
      const DynamicalSystem sys{build_cipher(spec), Combiner::Xor};
      const ExpansivityCounterexample ce = build_expansivity_counterexample(sys, kHorizon);
      const auto where = [&] { return sys.cipher.descriptor(); };
      t.expect(distance(ce.x, ce.x_prime) > ExactDistance(0), where);
      if (n == 4) t.expect(distance(ce.x, ce.x_prime) == ExactDistance(q(49, 20)), where);
      const PhasePoint a = cbc_step(sys, ce.x);
      const PhasePoint b = cbc_step(sys, ce.x_prime);
      t.expect(a == b, where);
      PhasePoint u = ce.x, v = ce.x_prime;
      for (std::size_t s = 1; s <= kHorizon; ++s) {
        u = cbc_step(sys, u);
        v = cbc_step(sys, v);
        t.expect(distance(u, v) == ExactDistance(0), where);
      }
      t.expect(verify_expansivity_counterexample(sys, ce).ok(), where);
    }
  }
}

void chaos_certificate(Tally& t) {
  for (unsigned n : {2u, 4u, 8u}) {
    for (const auto& spec : gallery(n, 3000 + n)) {
      const DynamicalSystem sys{build_cipher(spec), Combiner::Xor};
      const ChaosCertificate c = strongly_connected(build_graph(sys, full_alphabet(n)));
      t.expect(c.verdict == Verdict::Chaotic && c.scc_count == 1, [&] { return "(a) " + sys.cipher.descriptor(); });
    }
  }

  for (unsigned n : {1u, 2u, 4u, 8u}) {
    const DynamicalSystem id{build_cipher(identity_table_spec(n)), Combiner::Xor};
    const TransitionGraph g = build_graph(id, {BitBlock::zero(n)});
    const ChaosCertificate c = strongly_connected(g);
    const bool has_witness = c.witness.has_value();
    t.expect(c.verdict == Verdict::NotCertified && has_witness, [&] { return "(b) n=" + std::to_string(n); });
    if (has_witness && n > 1) {
      const auto [from, to] = *c.witness;
      t.expect(from != to && !oracle::reachable_from(id.cipher, {0}, from.bits())[to.bits()],
               [&] { return "(b) witness " + from.hex() + " -> " + to.hex() + " is reachable"; });
    }
  }

  std::mt19937_64 rng(303);
  std::size_t chaotic = 0;
  constexpr int kInstances = 60;
  for (int i = 0; i < kInstances; ++i) {
    const unsigned n = 1 + static_cast<unsigned>(rng() % 6);
    const DynamicalSystem sys{build_cipher(gallery(n, rng())[rng() % 4]), Combiner::Xor};
    std::vector<BitBlock> alphabet;
    std::vector<std::uint64_t> raw;
    const std::size_t size = 1 + rng() % 3;
    for (std::size_t k = 0; k < size; ++k) {
      const BitBlock b = oracle::random_block(n, rng);
      alphabet.push_back(b);
      raw.push_back(b.bits());
    }
    const ChaosCertificate c = strongly_connected(build_graph(sys, alphabet));
    const bool oracle_says = oracle::all_pairs_reachable(sys.cipher, raw);
    chaotic += oracle_says;
    t.expect((c.verdict == Verdict::Chaotic) == oracle_says,
             [&] { return "(c) " + sys.cipher.descriptor() + " disagrees with closure oracle"; });
  }
  std::fprintf(stderr, "  random instances: %d, of which chaotic: %zu\n", kInstances, chaotic);
}

void check_periodic_points(Tally& t, const DynamicalSystem& sys, const TransitionGraph& g,
                           std::mt19937_64& rng) {
  const unsigned n = sys.width();
  for (std::size_t prefix_len : {0u, 1u, 3u}) {
    for (int k = 0; k < 5; ++k) {
      // Keep the prefix inside the alphabet so the construction applies.
      std::vector<BitBlock> kept;
      for (std::size_t j = 0; j < prefix_len; ++j) kept.push_back(g.alphabet()[rng() % g.alphabet().size()]);
      const PhasePoint x(oracle::random_block(n, rng), prepend(kept, oracle::random_stream(n, rng)));
      const PeriodicPoint p = make_periodic_point(sys, g, x, prefix_len);
      const auto where = [&] {
        return sys.cipher.descriptor() + " prefix_len=" + std::to_string(prefix_len);
      };
      t.expect(p.period >= 1 && iterate(sys, p.point, p.period) == p.point, where);
      t.expect(distance(x, p.point).value() <= pow10(-static_cast<long>(prefix_len)), where);
    }
  }
}

void regularity(Tally& t) {
  std::mt19937_64 rng(404);
  std::size_t restricted = 0;
  while (restricted < 20) {
    const unsigned n = 2 + static_cast<unsigned>(rng() % 5);
    const DynamicalSystem sys{build_cipher(gallery(n, rng())[rng() % 4]), Combiner::Xor};
    std::vector<BitBlock> alphabet;
    for (int k = 0; k < 3; ++k) alphabet.push_back(oracle::random_block(n, rng));
    const TransitionGraph g = build_graph(sys, alphabet);
    if (strongly_connected(g).verdict != Verdict::Chaotic) continue;
    ++restricted;
    check_periodic_points(t, sys, g, rng);
  }
  for (unsigned n : {1u, 2u, 3u, 4u, 6u, 8u}) {
    for (const auto& spec : gallery(n, 4000 + n)) {
      const DynamicalSystem sys{build_cipher(spec), Combiner::Xor};
      const TransitionGraph g = build_graph(sys, full_alphabet(n));
      if (strongly_connected(g).verdict != Verdict::Chaotic) {
        t.expect(false, [&] { return sys.cipher.descriptor() + " not chaotic"; });
        continue;
      }
      check_periodic_points(t, sys, g, rng);
    }
  }
}

void model_fidelity(Tally& t) {
  std::mt19937_64 rng(505);
  for (unsigned n : {1u, 2u, 4u, 6u, 8u}) {
    for (const auto& spec : gallery(n, 5000 + n)) {
      const DynamicalSystem sys{build_cipher(spec), Combiner::Xor};
      for (int c = 0; c < 100; ++c) {
        const PhasePoint x = oracle::random_point(n, rng);
        const std::size_t steps = rng() % 40;
        std::vector<std::uint64_t> plain;
        for (std::size_t j = 0; j < steps; ++j) plain.push_back(x.stream.block_at(j).bits());
        const auto expected = oracle::cbc_encrypt(sys.cipher, x.state.bits(), plain);
        const auto states = trajectory(sys, x, steps);
        bool same = states.size() == expected.size();
        for (std::size_t j = 0; same && j < states.size(); ++j) same = states[j].bits() == expected[j];
        t.expect(same, [&] { return sys.cipher.descriptor() + " case " + std::to_string(c); });
      }
    }
  }
}

void metric_suite(Tally& t) {
  std::mt19937_64 rng(606);
  for (int i = 0; i < 10000; ++i) {
    const unsigned n = 1 + static_cast<unsigned>(rng() % 8);
    const PhasePoint x = oracle::random_point(n, rng);
    PhasePoint y = i % 4 == 0 ? PhasePoint(x.state, replace_block(x.stream, rng() % 5, oracle::random_block(n, rng)))
                              : oracle::random_point(n, rng);
    if (i % 97 == 0) y = x;
    const PhasePoint z = oracle::random_point(n, rng);
    const ExactDistance xy = distance(x, y), yx = distance(y, x);
    const auto where = [&] { return "triple " + std::to_string(i); };
    t.expect(distance(x, x) == ExactDistance(0), where);
    t.expect((xy == ExactDistance(0)) == (x == y), where);
    t.expect(xy == yx, where);
    t.expect(distance(x, z) <= xy + distance(y, z), where);
  }
  constexpr std::size_t kDepth = 50;
  const mpq_class bound = pow10(-static_cast<long>(kDepth));
  for (int i = 0; i < 1000; ++i) {
    const unsigned n = 1 + static_cast<unsigned>(rng() % 16);
    const MessageStream a = oracle::random_stream(n, rng, 8, 8);
    const MessageStream b = oracle::random_stream(n, rng, 8, 8);
    const mpq_class gap = message_distance(a, b).value() - oracle::truncated_message_distance(a, b, kDepth);
    t.expect(sgn(gap) >= 0 && gap <= bound, [&] { return "series pair " + std::to_string(i); });
  }
}

void continuity(Tally& t) {
  std::mt19937_64 rng(707);
  for (int i = 0; i < 1200; ++i) {
    const unsigned n = 1 + static_cast<unsigned>(rng() % 8);
    const DynamicalSystem sys{build_cipher(gallery(n, rng())[rng() % 4]), Combiner::Xor};
    const std::size_t j = 1 + static_cast<std::size_t>(i % 6);
    const PhasePoint x = oracle::random_point(n, rng);
    const PhasePoint y(x.state, prepend(x.stream.take(j), oracle::random_stream(n, rng)));
    const mpq_class lhs = distance(cbc_step(sys, x), cbc_step(sys, y)).value();
    const mpq_class rhs = 10 * distance(x, y).value();
    t.expect(lhs <= rhs, [&] { return "pair " + std::to_string(i) + " j=" + std::to_string(j); });
  }
}

bool report(int id, const char* name, const Tally& t) {
  const bool ok = t.failures == 0 && t.checks > 0;
  std::printf("%s  criterion %d  %-34s checks=%zu failures=%zu%s%s\n", ok ? "PASS" : "FAIL", id, name, t.checks,
              t.failures, t.failures ? "  first: " : "", t.first_failure.c_str());
  return ok;
}

}  // namespace

int main() {
  Tally c1, c2, c3, c4, c5, c6, c7, c8;
  sensitivity_criteria(c1, c2);
  non_expansivity(c3);
  chaos_certificate(c4);
  regularity(c5);
  model_fidelity(c6);
  metric_suite(c7);
  continuity(c8);

  bool all = true;
  all &= report(1, "sensitivity separation N+1", c1);
  all &= report(2, "complement identity E(y^m')=~z", c2);
  all &= report(3, "non-expansivity, 1000 steps", c3);
  all &= report(4, "chaos certificate vs closure", c4);
  all &= report(5, "periodic points near X", c5);
  all &= report(6, "trajectory equals CBC encryption", c6);
  all &= report(7, "metric axioms and series", c7);
  all &= report(8, "continuity modulus 10", c8);
  std::printf("%s\n", all ? "ALL ACCEPTANCE CRITERIA PASSED" : "ACCEPTANCE FAILED");
  return all ? 0 : 1;
}
