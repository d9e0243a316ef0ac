#include "cbcchaos/io.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "cbcchaos/error.hpp"

namespace cbcchaos {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> content_lines(std::string_view text) {
  std::vector<std::string_view> out;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto p = s.find(sep);
    out.push_back(trim(s.substr(0, p)));
    if (p == std::string_view::npos) break;
    s = s.substr(p + 1);
  }
  return out;
}

unsigned parse_width(std::string_view s) {
  s = trim(s);
  if (s.empty() || s.size() > 3 ||
      !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw ParseError("bad width '" + std::string(s) + "'");
  }
  const int n = std::stoi(std::string(s));
  if (n < 1 || n > static_cast<int>(kMaxWidth)) throw ParseError("width must lie in [1, 64]");
  return static_cast<unsigned>(n);
}

std::vector<BitBlock> parse_blocks(const std::vector<std::string_view>& items, unsigned width) {
  std::vector<BitBlock> out;
  for (auto item : items) out.push_back(parse_hex_block(item, width));
  return out;
}

Json hex_array(const std::vector<BitBlock>& blocks) {
  Json a = Json::array();
  for (const auto& b : blocks) a.push_back(b.hex());
  return a;
}

std::uint64_t hex_value(const Json& j, unsigned width, const char* field) {
  if (!j.is_string()) throw MalformedSpec(std::string(field) + " must be a hex string");
  try {
    return parse_hex_block(j.get<std::string>(), width).bits();
  } catch (const ParseError& e) {
    throw MalformedSpec(std::string(field) + ": " + e.what());
  }
}

template <typename T>
std::vector<T> uint_array(const Json& j, const char* field) {
  if (!j.is_array()) throw MalformedSpec(std::string(field) + " must be an array");
  std::vector<T> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw MalformedSpec(std::string(field) + " entries must be non-negative integers");
    }
    out.push_back(v.get<T>());
  }
  return out;
}

Json distance_string(const ExactDistance& d) { return d.fraction(); }

ExactDistance distance_from(const Json& j, const char* field) {
  if (!j.is_string()) throw ParseError(std::string(field) + " must be a \"p/q\" string");
  return ExactDistance(parse_rational(j.get<std::string>()));
}

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw ParseError(std::string("missing field '") + name + "'");
  }
  return j.at(name);
}

template <typename T>
T get_field(const Json& j, const char* name) {
  try {
    return field(j, name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("field '") + name + "' has the wrong type");
  }
}

DynamicalSystem system_from(const Json& j) {
  Combiner combiner = Combiner::Xor;
  if (j.contains("combiner")) combiner = parse_combiner(get_field<std::string>(j, "combiner"));
  return {build_cipher(cipher_spec_from_json(field(j, "cipher"))), combiner};
}

Json system_json(const DynamicalSystem& sys) {
  return {{"cipher", cipher_spec_to_json(sys.cipher.spec())},
          {"combiner", std::string(to_string(sys.combiner))}};
}

}  // namespace

BitBlock parse_hex_block(std::string_view text, unsigned width) {
  std::string_view s = trim(text);
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s.remove_prefix(2);
  if (s.empty() || s.size() > 16 ||
      !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isxdigit(c); })) {
    throw ParseError("bad hex block '" + std::string(text) + "'");
  }
  const std::uint64_t v = std::stoull(std::string(s), nullptr, 16);
  if ((v & ~width_mask(width)) != 0) {
    throw ParseError("hex block '" + std::string(text) + "' does not fit in " +
                     std::to_string(width) + " bits");
  }
  return {width, v};
}

MessageStream parse_stream_text(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.empty() || lines[0].substr(0, 2) != "N=") {
    throw ParseError("stream text must start with a line N=<bits>");
  }
  const unsigned width = parse_width(lines[0].substr(2));
  std::vector<std::string_view> prefix, cycle;
  bool seen_separator = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i] == "---") {
      if (seen_separator) throw ParseError("stream text has more than one '---' line");
      seen_separator = true;
      continue;
    }
    (seen_separator ? cycle : prefix).push_back(lines[i]);
  }
  if (!seen_separator) std::swap(prefix, cycle);
  if (cycle.empty()) throw ParseError("stream cycle must contain at least one block");
  return {width, parse_blocks(prefix, width), parse_blocks(cycle, width)};
}

std::string format_stream_text(const MessageStream& s) {
  std::ostringstream os;
  os << "N=" << s.width() << '\n';
  for (const auto& b : s.prefix()) os << b.hex() << '\n';
  os << "---\n";
  for (const auto& b : s.cycle()) os << b.hex() << '\n';
  return os.str();
}

MessageStream parse_inline_stream(std::string_view text, unsigned width) {
  const auto slash = text.find('/');
  std::vector<std::string_view> prefix;
  std::string_view cycle_text = text;
  if (slash != std::string_view::npos) {
    const auto p = trim(text.substr(0, slash));
    if (!p.empty()) prefix = split(p, ',');
    cycle_text = text.substr(slash + 1);
  }
  if (trim(cycle_text).empty()) throw ParseError("inline stream needs at least one cycle block");
  return {width, parse_blocks(prefix, width), parse_blocks(split(trim(cycle_text), ','), width)};
}

std::vector<BitBlock> parse_alphabet_text(std::string_view text, unsigned width) {
  return parse_blocks(content_lines(text), width);
}

Json cipher_spec_to_json(const CipherSpec& spec) {
  Json j;
  j["kind"] = std::string(to_string(spec.kind));
  j["n"] = spec.width;
  const auto hex = [&](std::uint64_t v) { return BitBlock(spec.width, v).hex(); };
  switch (spec.kind) {
    case CipherKind::XorKey:
      j["key"] = hex(spec.key);
      break;
    case CipherKind::BitPermutation:
      j["perm"] = spec.perm;
      break;
    case CipherKind::ToySpn:
      j["sbox"] = spec.sbox;
      j["perm"] = spec.perm;
      j["rounds"] = spec.rounds;
      if (spec.round_keys.empty()) {
        j["key"] = hex(spec.key);
      } else {
        Json keys = Json::array();
        for (auto k : spec.round_keys) keys.push_back(hex(k));
        j["round_keys"] = keys;
      }
      break;
    case CipherKind::LookupTable:
      j["table"] = spec.table;
      break;
  }
  return j;
}

CipherSpec cipher_spec_from_json(const Json& j) {
  if (!j.is_object()) throw MalformedSpec("cipher spec must be a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string()) throw MalformedSpec("cipher spec needs a string 'kind'");
  if (!j.contains("n") || !j["n"].is_number_unsigned()) throw MalformedSpec("cipher spec needs a positive integer 'n'");

  CipherSpec spec;
  spec.kind = parse_cipher_kind(j["kind"].get<std::string>());
  const auto n = j["n"].get<unsigned long long>();
  if (n < 1 || n > kMaxWidth) throw MalformedSpec("'n' must lie in [1, 64]");
  spec.width = static_cast<unsigned>(n);

  std::set<std::string> required, optional;
  switch (spec.kind) {
    case CipherKind::XorKey: required = {"key"}; break;
    case CipherKind::BitPermutation: required = {"perm"}; break;
    case CipherKind::ToySpn:
      required = {"sbox", "perm", "rounds"};
      optional = {"key", "round_keys"};
      break;
    case CipherKind::LookupTable: required = {"table"}; break;
  }
  for (const auto& [name, value] : j.items()) {
    if (name == "kind" || name == "n" || required.count(name) || optional.count(name)) continue;
    throw MalformedSpec("field '" + name + "' is not used by kind " + std::string(to_string(spec.kind)));
  }
  for (const auto& name : required) {
    if (!j.contains(name)) throw MalformedSpec("kind " + std::string(to_string(spec.kind)) + " requires '" + name + "'");
  }

  if (j.contains("key")) spec.key = hex_value(j["key"], spec.width, "key");
  if (j.contains("perm")) spec.perm = uint_array<unsigned>(j["perm"], "perm");
  if (j.contains("sbox")) spec.sbox = uint_array<std::uint64_t>(j["sbox"], "sbox");
  if (j.contains("table")) spec.table = uint_array<std::uint64_t>(j["table"], "table");
  if (j.contains("rounds")) {
    if (!j["rounds"].is_number_unsigned()) throw MalformedSpec("'rounds' must be a positive integer");
    spec.rounds = j["rounds"].get<unsigned>();
  }
  if (j.contains("round_keys")) {
    if (!j["round_keys"].is_array()) throw MalformedSpec("'round_keys' must be an array of hex strings");
    for (const auto& k : j["round_keys"]) spec.round_keys.push_back(hex_value(k, spec.width, "round_keys"));
  }
  if (spec.kind == CipherKind::ToySpn && j.contains("key") == j.contains("round_keys")) {
    throw MalformedSpec("toy-spn takes exactly one of 'key' or 'round_keys'");
  }
  return spec;
}

Json point_to_json(const PhasePoint& p) {
  return {{"n", p.width()},
          {"state", p.state.hex()},
          {"prefix", hex_array(p.stream.prefix())},
          {"cycle", hex_array(p.stream.cycle())}};
}

PhasePoint point_from_json(const Json& j) {
  const auto n = get_field<unsigned>(j, "n");
  if (n < 1 || n > kMaxWidth) throw ParseError("point width must lie in [1, 64]");
  auto blocks = [&](const char* name) {
    std::vector<BitBlock> out;
    for (const auto& h : field(j, name)) {
      if (!h.is_string()) throw ParseError(std::string(name) + " entries must be hex strings");
      out.push_back(parse_hex_block(h.get<std::string>(), n));
    }
    return out;
  };
  auto cycle = blocks("cycle");
  if (cycle.empty()) throw ParseError("point cycle must not be empty");
  return {parse_hex_block(get_field<std::string>(j, "state"), n),
          MessageStream(n, blocks("prefix"), std::move(cycle))};
}

Json certificate_to_json(const ChaosCertificate& cert) {
  Json j;
  j["verdict"] = cert.verdict == Verdict::Chaotic ? "chaotic" : "not-certified";
  j["scc_count"] = cert.scc_count;
  if (cert.witness) {
    j["witness"] = {{"from", cert.witness->first.hex()}, {"to", cert.witness->second.hex()}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

Json sensitivity_to_json(const SensitivityDocument& doc, const VerificationReport& report,
                         unsigned digits) {
  const auto& w = doc.witness;
  Json j = system_json(doc.sys);
  j["type"] = "sensitivity";
  j["n"] = doc.sys.width();
  j["delta"] = format_fraction(doc.delta);
  j["x"] = point_to_json(doc.x);
  j["k0"] = w.k0;
  j["y"] = w.y.hex();
  j["z"] = w.z.hex();
  j["m_prime"] = w.m_prime.hex();
  j["x_prime"] = point_to_json(w.x_prime);
  j["initial_distance"] = distance_string(w.initial_distance);
  j["initial_distance_decimal"] = w.initial_distance.decimal(digits);
  j["separation_step"] = w.separation_step;
  j["separation_distance"] = distance_string(w.separation_distance);
  j["separation_distance_decimal"] = w.separation_distance.decimal(digits);
  j["verified"] = report.ok();
  j["failures"] = report.failures;
  return j;
}

SensitivityDocument sensitivity_from_json(const Json& j) {
  if (get_field<std::string>(j, "type") != "sensitivity") throw ParseError("not a sensitivity witness");
  DynamicalSystem sys = system_from(j);
  const unsigned n = sys.width();
  PhasePoint x = point_from_json(field(j, "x"));
  const mpq_class delta = parse_rational(get_field<std::string>(j, "delta"));
  SensitivityWitness w{get_field<std::size_t>(j, "k0"),
                       parse_hex_block(get_field<std::string>(j, "y"), n),
                       parse_hex_block(get_field<std::string>(j, "z"), n),
                       parse_hex_block(get_field<std::string>(j, "m_prime"), n),
                       point_from_json(field(j, "x_prime")),
                       distance_from(field(j, "initial_distance"), "initial_distance"),
                       get_field<std::size_t>(j, "separation_step"),
                       distance_from(field(j, "separation_distance"), "separation_distance")};
  return {std::move(sys), std::move(x), delta, std::move(w)};
}

Json expansivity_to_json(const ExpansivityDocument& doc, const VerificationReport& report,
                         unsigned digits) {
  const auto& ce = doc.counterexample;
  Json j = system_json(doc.sys);
  j["type"] = "expansivity";
  j["n"] = doc.sys.width();
  j["x"] = point_to_json(ce.x);
  j["x_prime"] = point_to_json(ce.x_prime);
  j["horizon"] = ce.horizon;
  j["initial_distance"] = distance_string(ce.initial_distance);
  j["initial_distance_decimal"] = ce.initial_distance.decimal(digits);
  Json steps = Json::array();
  for (const auto& d : ce.step_distances) steps.push_back(distance_string(d));
  j["step_distances"] = steps;
  j["verified"] = report.ok();
  j["failures"] = report.failures;
  return j;
}

ExpansivityDocument expansivity_from_json(const Json& j) {
  if (get_field<std::string>(j, "type") != "expansivity") throw ParseError("not an expansivity counterexample");
  DynamicalSystem sys = system_from(j);
  std::vector<ExactDistance> steps;
  for (const auto& d : field(j, "step_distances")) steps.push_back(distance_from(d, "step_distances"));
  ExpansivityCounterexample ce{point_from_json(field(j, "x")), point_from_json(field(j, "x_prime")),
                               get_field<std::size_t>(j, "horizon"),
                               distance_from(field(j, "initial_distance"), "initial_distance"),
                               std::move(steps)};
  return {std::move(sys), std::move(ce)};
}

}  // namespace cbcchaos
