// commitment.hpp
// Commitment to a qubit, realized as bit-string commitment on the state's
// classical description. A trusted simulator holds the joint entangled
// pairs; "sending" a subsystem transfers access rights, never copies. The
// scheme is concealing by construction, and the phase-flip cheat shows it
// is not binding: Z on an A half swaps Phi+ and Phi- without touching any
// B marginal.

#pragma once

#include "qmask/codec.hpp"
#include "qmask/linalg.hpp"
#include "qmask/mask.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qmask {

enum class protocol_phase { committed, opened, aborted };
enum class open_verdict { none, accept, reject };

inline const char* phase_name(protocol_phase p) {
  switch (p) {
    case protocol_phase::committed: return "committed";
    case protocol_phase::opened: return "opened";
    default: return "aborted";
  }
}

inline const char* verdict_name(open_verdict v) {
  switch (v) {
    case open_verdict::accept: return "accept";
    case open_verdict::reject: return "reject";
    default: return "none";
  }
}

struct protocol_message {
  std::string sender;
  std::string payload;
};

struct transcript {
  protocol_phase phase = protocol_phase::committed;
  std::vector<protocol_message> messages;
  open_verdict verdict = open_verdict::none;
};

struct commitment {
  bit_string committed;                   // ground truth, simulator only
  masked_register joint;                  // ground truth joint registers
  std::vector<std::size_t> alice_pairs;   // access rights to the A halves
  std::vector<cmat> bob_holdings;         // B-side marginals, one per pair
  protocol_phase phase = protocol_phase::committed;
  transcript record;
};

inline commitment commit(const bit_string& description) {
  if (description.empty()) {
    throw std::invalid_argument("commit: description must be non-empty");
  }
  commitment c;
  c.committed = description;
  c.joint = mask_string(description);
  const system_dims dims{2, 2};
  c.alice_pairs.resize(c.joint.size());
  c.bob_holdings.reserve(c.joint.size());
  for (std::size_t i = 0; i < c.joint.size(); ++i) {
    c.alice_pairs[i] = i;
    c.bob_holdings.push_back(
        partial_trace(density_of(c.joint.pairs[i]), subsystem::b, dims));
  }
  c.record.messages.push_back(
      {"alice", "commit: masked " + std::to_string(description.size()) +
                    "-bit description into entangled pairs"});
  c.record.messages.push_back(
      {"simulator", "deliver: B halves of " + std::to_string(description.size()) +
                        " pairs to bob"});
  c.record.phase = protocol_phase::committed;
  return c;
}

// Bob's per-pair marginals while the commitment stands.
inline const std::vector<cmat>& bob_view(const commitment& c) {
  if (c.phase != protocol_phase::committed) {
    throw std::logic_error("bob_view: commitment is no longer pending");
  }
  return c.bob_holdings;
}

// Tensor of Bob's marginals; only meaningful for small registers.
inline cmat bob_view_joint(const commitment& c) {
  const auto& margs = bob_view(c);
  if (margs.empty()) {
    throw std::logic_error("bob_view_joint: empty commitment");
  }
  cmat out = margs.front();
  for (std::size_t i = 1; i < margs.size(); ++i) {
    out = tensor(out, margs[i]);  // throws past the dimension cap
  }
  return out;
}

// Z on the A qubit of each listed pair, swapping Phi+ <-> Phi- there. The
// B marginals are untouched, so the cheat is invisible before the open.
inline commitment cheat_phase_flip(const commitment& c,
                                   const std::vector<std::size_t>& positions) {
  if (c.phase != protocol_phase::committed) {
    throw std::logic_error("cheat_phase_flip: commitment is no longer pending");
  }
  const cmat z_on_a = tensor(pauli_z(), cmat::Identity(2, 2));
  commitment out = c;
  for (const auto pos : positions) {
    if (pos >= out.joint.size()) {
      throw std::out_of_range("cheat_phase_flip: position " + std::to_string(pos) +
                              " out of range");
    }
    out.joint.pairs[pos] = z_on_a * out.joint.pairs[pos];
  }
  return out;
}

struct open_result {
  open_verdict verdict = open_verdict::none;
  std::optional<bit_string> decoded;
  bool tamper_detected = false;
  std::ptrdiff_t tamper_position = -1;
  std::array<double, 4> tamper_probs{};
};

// Alice releases her halves, the subsystems are brought together and Bob
// measures each pair in the Bell basis. Accept iff the decoded string is
// the claimed one. A claimed-length mismatch is protocol-level dishonesty
// and rejects immediately; an ambiguous pair aborts with a tamper flag.
inline open_result open(commitment& c, const bit_string& claimed,
                        double tol = 1e-9) {
  if (c.phase != protocol_phase::committed) {
    throw std::logic_error("open: commitment is no longer pending");
  }
  c.record.messages.push_back({"alice", "open: claim description \"" +
                                            claimed.to_string() + "\""});
  c.record.messages.push_back(
      {"simulator", "release: A halves to bob, subsystems brought together"});

  open_result result;
  if (claimed.size() != c.joint.size()) {
    c.phase = protocol_phase::opened;
    result.verdict = open_verdict::reject;
    c.record.messages.push_back({"bob", "verdict: reject (claim length mismatch)"});
  } else {
    try {
      result.decoded = unmask_string(c.joint, tol);
      c.phase = protocol_phase::opened;
      result.verdict =
          (*result.decoded == claimed) ? open_verdict::accept : open_verdict::reject;
      c.record.messages.push_back(
          {"bob", std::string("verdict: ") + verdict_name(result.verdict)});
    } catch (const ambiguous_state& e) {
      c.phase = protocol_phase::aborted;
      result.verdict = open_verdict::reject;
      result.tamper_detected = true;
      result.tamper_position = e.position;
      result.tamper_probs = e.bell_probs;
      c.record.messages.push_back(
          {"bob", "verdict: reject (tampering detected at position " +
                      std::to_string(e.position) + ")"});
    }
  }
  c.record.phase = c.phase;
  c.record.verdict = result.verdict;
  return result;
}

// How the description of the committed state was produced.
struct demo_source {
  enum class kind { params, index } which;
  qubit_params params;       // valid when which == params
  unsigned n_bits = 16;      // valid when which == params
  std::size_t index = 0;     // valid when which == index
  std::optional<alphabet> states;  // valid when which == index

  static demo_source from_params(const qubit_params& p, const codec_config& c) {
    demo_source s;
    s.which = kind::params;
    s.params = p;
    s.n_bits = c.n_bits;
    return s;
  }

  static demo_source from_index(std::size_t i, alphabet a) {
    if (i >= a.size()) {
      throw std::out_of_range("demo_source: index out of range for alphabet");
    }
    demo_source s;
    s.which = kind::index;
    s.index = i;
    s.states = std::move(a);
    return s;
  }
};

struct demo_report {
  std::string source_kind;
  bit_string committed;
  bit_string claimed;
  std::optional<bit_string> decoded;
  open_verdict verdict = open_verdict::none;
  bool binding_violated = false;
  double concealing_audit = 0.0;   // max marginal distance from I/2, pre-open
  double bob_view_shift = 0.0;     // max marginal change the cheat caused
  std::vector<std::size_t> cheat_positions;
  bool tamper_detected = false;
  std::ptrdiff_t tamper_position = -1;
  double fidelity = -1.0;                  // params source only
  std::optional<qubit_params> original_params;
  std::optional<qubit_params> unveiled_params;
  std::optional<std::size_t> unveiled_index;
  transcript record;
};

// Full commit -> (optional cheat) -> open flow with audit numbers. The
// claimed string is the committed one with the cheated positions flipped,
// which is exactly what a cheating Alice would unveil.
inline demo_report run_demo(const demo_source& source,
                            const std::vector<std::size_t>& cheat_positions = {},
                            double tol = 1e-9) {
  demo_report report;
  report.cheat_positions = cheat_positions;

  bit_string description;
  if (source.which == demo_source::kind::params) {
    report.source_kind = "params";
    report.original_params = source.params;
    description = encode_params(source.params, codec_config{source.n_bits});
  } else {
    report.source_kind = "index";
    description = encode_index(source.index, *source.states);
    if (description.empty()) {
      // single-state alphabet encodes to width zero; commit needs a bit
      throw std::invalid_argument("run_demo: alphabet index encodes to zero bits");
    }
  }

  commitment c = commit(description);
  report.committed = description;
  report.concealing_audit = marginal_audit(c.joint);

  bit_string claimed = description;
  if (!cheat_positions.empty()) {
    const auto before = c.bob_holdings;
    c = cheat_phase_flip(c, cheat_positions);
    for (std::size_t i = 0; i < c.joint.size(); ++i) {
      const system_dims dims{2, 2};
      const cmat after = partial_trace(density_of(c.joint.pairs[i]), subsystem::b, dims);
      report.bob_view_shift =
          std::max(report.bob_view_shift, trace_distance(before[i], after));
    }
    for (const auto pos : cheat_positions) {
      claimed.bits[pos] = static_cast<std::uint8_t>(1 - claimed.bits[pos]);
    }
  }
  report.claimed = claimed;

  const open_result opened = open(c, claimed, tol);
  report.verdict = opened.verdict;
  report.decoded = opened.decoded;
  report.tamper_detected = opened.tamper_detected;
  report.tamper_position = opened.tamper_position;
  report.binding_violated = !cheat_positions.empty() &&
                            opened.verdict == open_verdict::accept &&
                            !(claimed == description);

  if (opened.decoded.has_value()) {
    if (source.which == demo_source::kind::params) {
      const qubit_params unveiled =
          decode_params(*opened.decoded, codec_config{source.n_bits});
      report.unveiled_params = unveiled;
      report.fidelity = fidelity_pure(state_from_params(source.params),
                                      state_from_params(unveiled));
    } else {
      report.unveiled_index = decode_index(*opened.decoded, *source.states);
    }
  }

  report.record = c.record;
  return report;
}

}  // namespace qmask
