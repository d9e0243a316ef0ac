#include "cbcchaos/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cbcchaos/error.hpp"
#include "cbcchaos/graph.hpp"
#include "cbcchaos/io.hpp"
#include "cbcchaos/ivgen.hpp"
#include "cbcchaos/witness.hpp"

namespace cbcchaos {

namespace {

constexpr const char* kCipherHelp = R"(Cipher specs are JSON objects with "kind" and "n" plus, per kind:
  xor-key          "key": hex
  bit-permutation  "perm": [p0, ..., p(n-1)]   bit i (from the left) moves to position p_i
  toy-spn          "sbox": [2^s entries], "perm": [...], "rounds": r,
                   and either "key": hex (every round) or "round_keys": [hex, ...]
  lookup-table     "table": [2^n entries]   n <= 16
Fields not listed for a kind are rejected.

Stream files: a line N=<bits>, prefix blocks (hex, one per line), a line ---,
then cycle blocks. Inline streams: "p1,p2/c1,c2" or "c1,c2" (cycle only).

Exit status: 0 positive verdict, 2 negative verdict, 1 error.)";

struct Options {
  std::string cipher;
  std::optional<unsigned> n;
  std::string combiner = "xor";
  std::string iv = "counter";
  std::string message = "0";
  std::string alphabet = "full";
  std::string delta;
  std::size_t steps = 16;
  std::size_t horizon = 100;
  std::string dot;
  std::optional<std::size_t> periodic;
  unsigned digits = 12;
  std::string out;
  std::optional<unsigned> flip_iv_bit;
  std::optional<std::size_t> flip_block;
  std::optional<unsigned> flip_bit;
  std::string witness_path;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(what + " is not valid JSON: " + e.what());
  }
}

class Session {
 public:
  Session(const Options& opt, std::ostream& out, std::ostream& err) : opt_(opt), out_(out), err_(err) {}

  DynamicalSystem system() const {
    if (opt_.cipher.empty()) throw InvalidArgument("--cipher is required");
    const bool inline_spec = opt_.cipher.find('{') != std::string::npos;
    const std::string text = inline_spec ? opt_.cipher : read_file(opt_.cipher);
    CipherSpec spec = cipher_spec_from_json(parse_json_text(text, "cipher spec"));
    if (opt_.n && *opt_.n != spec.width) {
      throw WidthMismatch("--n " + std::to_string(*opt_.n) + " disagrees with the cipher width " +
                          std::to_string(spec.width));
    }
    return {build_cipher(spec), parse_combiner(opt_.combiner)};
  }

  BitBlock initial_vector(const DynamicalSystem& sys) {
    if (opt_.iv == "counter") return IvPolicy(IvMode::EncryptedNonce).next_iv(sys.cipher);
    if (opt_.iv == "random") {
      random_iv_ = true;
      err_ << "note: IV drawn from OS entropy; output is not reproducible\n";
      return IvPolicy(IvMode::Random).next_iv(sys.cipher);
    }
    return parse_hex_block(opt_.iv, sys.width());
  }

  MessageStream message(unsigned width) const {
    if (std::filesystem::is_regular_file(opt_.message)) {
      MessageStream s = parse_stream_text(read_file(opt_.message));
      require_same_width(width, s.width(), "--message");
      return s;
    }
    return parse_inline_stream(opt_.message, width);
  }

  PhasePoint initial_point(const DynamicalSystem& sys) {
    const BitBlock iv = initial_vector(sys);
    return {iv, message(sys.width())};
  }

  std::vector<BitBlock> alphabet(unsigned width) const {
    if (opt_.alphabet == "full") return full_alphabet(width);
    return parse_alphabet_text(read_file(opt_.alphabet), width);
  }

  void annotate(Json& j) const {
    j["iv_source"] = random_iv_ ? "random" : (opt_.iv == "counter" ? "counter" : "hex");
  }

  void emit(const std::string& text) const {
    if (opt_.out.empty()) {
      out_ << text;
      return;
    }
    std::ofstream f(opt_.out, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write '" + opt_.out + "'");
    f << text;
  }

  void emit(const Json& j) const { emit(j.dump(2) + "\n"); }

  int graph() {
    const DynamicalSystem sys = system();
    const TransitionGraph g = build_graph(sys, alphabet(sys.width()));
    const ChaosCertificate cert = strongly_connected(g);
    Json j = certificate_to_json(cert);
    if (opt_.periodic) {
      const PhasePoint x = initial_point(sys);
      try {
        const PeriodicPoint p = make_periodic_point(sys, g, x, *opt_.periodic);
        j["periodic_point"] = {{"point", point_to_json(p.point)},
                               {"period", p.period},
                               {"distance", distance(x, p.point).fraction()}};
      } catch (const Unreachable& e) {
        j["periodic_point"] = nullptr;
        err_ << "no periodic point: " << e.what() << "\n";
      }
      annotate(j);
    }
    if (!opt_.dot.empty()) {
      std::ofstream f(opt_.dot, std::ios::binary);
      if (!f) throw InvalidArgument("cannot write '" + opt_.dot + "'");
      f << export_dot(g);
    }
    emit(j);
    return cert.verdict == Verdict::Chaotic ? kExitOk : kExitNegative;
  }

  int sensitivity() {
    if (opt_.delta.empty()) throw InvalidArgument("--delta is required");
    const mpq_class delta = parse_rational(opt_.delta);
    if (sgn(delta) <= 0) throw InvalidArgument("--delta must be positive");
    DynamicalSystem sys = system();
    PhasePoint x = initial_point(sys);
    SensitivityWitness w = build_sensitivity_witness(sys, x, delta);
    const VerificationReport report = verify_sensitivity_witness(sys, x, delta, w);
    Json j = sensitivity_to_json({std::move(sys), std::move(x), delta, std::move(w)}, report,
                                 opt_.digits);
    annotate(j);
    emit(j);
    return report.ok() ? kExitOk : kExitNegative;
  }

  int expansivity() {
    DynamicalSystem sys = system();
    ExpansivityCounterexample ce = build_expansivity_counterexample(sys, opt_.horizon);
    const VerificationReport report = verify_expansivity_counterexample(sys, ce);
    emit(expansivity_to_json({std::move(sys), std::move(ce)}, report, opt_.digits));
    return report.ok() ? kExitOk : kExitNegative;
  }

  int trajectory() {
    const DynamicalSystem sys = system();
    const PhasePoint x = initial_point(sys);
    std::ostringstream os;
    os << "step,state\n";
    const auto states = cbcchaos::trajectory(sys, x, opt_.steps);
    for (std::size_t t = 0; t < states.size(); ++t) os << t << ',' << states[t].hex() << '\n';
    emit(os.str());
    return kExitOk;
  }

  int diverge() {
    const DynamicalSystem sys = system();
    const PhasePoint x = initial_point(sys);
    const unsigned n = sys.width();
    BitBlock state = x.state;
    MessageStream stream = x.stream;
    const auto check_bit = [n](unsigned i) {
      if (i >= n) throw InvalidArgument("bit index " + std::to_string(i) + " out of range for N = " + std::to_string(n));
    };
    if (opt_.flip_iv_bit) {
      check_bit(*opt_.flip_iv_bit);
      state = state.flip_bit(*opt_.flip_iv_bit);
    }
    if (opt_.flip_block.has_value() != opt_.flip_bit.has_value()) {
      throw InvalidArgument("--flip-block and --flip-bit must be given together");
    }
    if (opt_.flip_block) {
      check_bit(*opt_.flip_bit);
      stream = replace_block(stream, *opt_.flip_block, stream.block_at(*opt_.flip_block).flip_bit(*opt_.flip_bit));
    }
    const PhasePoint y(state, stream);
    std::ostringstream os;
    write_divergence_csv(os, divergence_profile(sys, x, y, opt_.steps), opt_.digits);
    emit(os.str());
    return kExitOk;
  }

  int verify() {
    const Json j = parse_json_text(read_file(opt_.witness_path), "witness file");
    if (!j.is_object() || !j.contains("type")) throw ParseError("witness file has no 'type'");
    VerificationReport report;
    Json result;
    const std::string type = j["type"].is_string() ? j["type"].get<std::string>() : "";
    if (type == "sensitivity") {
      const SensitivityDocument doc = sensitivity_from_json(j);
      report = verify_sensitivity_witness(doc.sys, doc.x, doc.delta, doc.witness);
    } else if (type == "expansivity") {
      const ExpansivityDocument doc = expansivity_from_json(j);
      report = verify_expansivity_counterexample(doc.sys, doc.counterexample);
    } else {
      throw ParseError("unknown witness type '" + type + "'");
    }
    result["type"] = type;
    result["verified"] = report.ok();
    result["failures"] = report.failures;
    emit(result);
    return report.ok() ? kExitOk : kExitNegative;
  }

 private:
  const Options& opt_;
  std::ostream& out_;
  std::ostream& err_;
  bool random_iv_ = false;
};

void add_system_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("--cipher", opt.cipher, "cipher spec JSON file, or inline JSON")->required();
  cmd->add_option("--n", opt.n, "block width; must match the cipher");
  cmd->add_option("--combiner", opt.combiner, "xor (default) or negated-selector");
  cmd->add_option("--digits", opt.digits, "decimal digits in printed distances")->capture_default_str();
  cmd->add_option("--out", opt.out, "write the main output here instead of stdout");
}

void add_point_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("--iv", opt.iv, "initial state: hex block, counter, or random")->capture_default_str();
  cmd->add_option("--message", opt.message, "message stream file or inline stream")->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Dynamical-systems analysis of the CBC mode of operation", "cbcchaos"};
  app.footer(kCipherHelp);
  app.require_subcommand(1);

  auto* graph = app.add_subcommand("graph", "chaos certificate from strong connectivity of the transition graph");
  add_system_options(graph, opt);
  add_point_options(graph, opt);
  graph->add_option("--alphabet", opt.alphabet, "admissible message blocks: file (hex per line) or full")->capture_default_str();
  graph->add_option("--dot", opt.dot, "write the graph as DOT (N <= 8)");
  graph->add_option("--periodic", opt.periodic, "also build a periodic point near (IV, message) keeping this many blocks");

  auto* sens = app.add_subcommand("sensitivity", "witness that the sensitivity constant exceeds N");
  add_system_options(sens, opt);
  add_point_options(sens, opt);
  sens->add_option("--delta", opt.delta, "neighbourhood radius, decimal or p/q")->required();

  auto* expa = app.add_subcommand("expansivity", "counterexample to expansivity");
  add_system_options(expa, opt);
  expa->add_option("--steps,--horizon", opt.horizon, "number of steps checked")->capture_default_str();

  auto* traj = app.add_subcommand("trajectory", "CSV of states, one per step");
  add_system_options(traj, opt);
  add_point_options(traj, opt);
  traj->add_option("--steps", opt.steps, "number of steps")->capture_default_str();

  auto* div = app.add_subcommand("diverge", "CSV of distances between an orbit and a one-bit perturbation");
  add_system_options(div, opt);
  add_point_options(div, opt);
  div->add_option("--steps", opt.steps, "number of steps")->capture_default_str();
  div->add_option("--flip-iv-bit", opt.flip_iv_bit, "flip this IV bit (0 = leftmost)");
  div->add_option("--flip-block", opt.flip_block, "message block to perturb");
  div->add_option("--flip-bit", opt.flip_bit, "bit of --flip-block to flip (0 = leftmost)");

  auto* ver = app.add_subcommand("verify", "re-verify a witness JSON file");
  ver->add_option("witness", opt.witness_path, "sensitivity or expansivity JSON")->required();
  ver->add_option("--out", opt.out, "write the verdict here instead of stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  Session session(opt, out, err);
  try {
    if (graph->parsed()) return session.graph();
    if (sens->parsed()) return session.sensitivity();
    if (expa->parsed()) return session.expansivity();
    if (traj->parsed()) return session.trajectory();
    if (div->parsed()) return session.diverge();
    if (ver->parsed()) return session.verify();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace cbcchaos
