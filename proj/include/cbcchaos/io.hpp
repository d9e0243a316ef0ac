#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cbcchaos/cipher.hpp"
#include "cbcchaos/core.hpp"
#include "cbcchaos/dynamics.hpp"
#include "cbcchaos/graph.hpp"
#include "cbcchaos/witness.hpp"
#include "json.hpp"

namespace cbcchaos {

using Json = nlohmann::json;

/// Hex block, optional "0x" prefix; the value must fit in `width` bits.
BitBlock parse_hex_block(std::string_view text, unsigned width);

// Stream text format:
//
//   N=<bits>
//   <hex block>        one per line, prefix blocks
//   ---
//   <hex block>        cycle blocks, repeating forever
//
// Blank lines and '#' comments are ignored. Without a `---` line every block
// belongs to the cycle.
MessageStream parse_stream_text(std::string_view text);
std::string format_stream_text(const MessageStream& s);

/// Compact form "p1,p2/c1,c2" (prefix/cycle) or "c1,c2" (cycle only).
MessageStream parse_inline_stream(std::string_view text, unsigned width);

/// One hex block per line, blank lines and '#' comments ignored.
std::vector<BitBlock> parse_alphabet_text(std::string_view text, unsigned width);

Json cipher_spec_to_json(const CipherSpec& spec);
/// Throws MalformedSpec on missing, extra or ill-typed fields.
CipherSpec cipher_spec_from_json(const Json& j);

Json point_to_json(const PhasePoint& p);
PhasePoint point_from_json(const Json& j);

Json certificate_to_json(const ChaosCertificate& cert);

struct SensitivityDocument {
  DynamicalSystem sys;
  PhasePoint x;
  mpq_class delta;
  SensitivityWitness witness;
};

struct ExpansivityDocument {
  DynamicalSystem sys;
  ExpansivityCounterexample counterexample;
};

Json sensitivity_to_json(const SensitivityDocument& doc, const VerificationReport& report,
                         unsigned digits);
SensitivityDocument sensitivity_from_json(const Json& j);

Json expansivity_to_json(const ExpansivityDocument& doc, const VerificationReport& report,
                         unsigned digits);
ExpansivityDocument expansivity_from_json(const Json& j);

}  // namespace cbcchaos
