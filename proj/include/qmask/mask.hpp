// mask.hpp
// Masking classical bits in two-qubit entangled pairs: bit b is encoded as
// (1/sqrt2)(|00> + (-1)^b |11>), so every subsystem marginal is I/2 and the
// bit lives only in the correlations. Decoding is a projective comparison
// against the Bell basis.

#pragma once

#include "qmask/linalg.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qmask {

struct bit_string {
  std::vector<std::uint8_t> bits;

  bit_string() = default;
  explicit bit_string(std::vector<std::uint8_t> b) : bits(std::move(b)) {
    for (auto v : bits) {
      if (v > 1) throw std::invalid_argument("bit_string: entries must be 0 or 1");
    }
  }

  // Parses "0101..."; reports the position of the first bad character.
  static bit_string from_string(std::string_view s) {
    bit_string out;
    out.bits.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] != '0' && s[i] != '1') {
        throw std::invalid_argument("bit_string: invalid character at position " +
                                    std::to_string(i));
      }
      out.bits.push_back(static_cast<std::uint8_t>(s[i] - '0'));
    }
    return out;
  }

  std::string to_string() const {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
  }

  std::size_t size() const { return bits.size(); }
  bool empty() const { return bits.empty(); }
  std::uint8_t operator[](std::size_t i) const { return bits[i]; }
  void push_back(std::uint8_t b) {
    if (b > 1) throw std::invalid_argument("bit_string: entries must be 0 or 1");
    bits.push_back(b);
  }

  friend bool operator==(const bit_string&, const bit_string&) = default;
};

// One two-qubit joint state per masked bit.
struct masked_register {
  std::vector<cvec> pairs;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
};

// Decoding met a pair that projects onto neither Phi+ nor Phi- cleanly;
// signals tampering or noise. Carries the full probability vector.
struct ambiguous_state : std::runtime_error {
  std::array<double, 4> bell_probs;
  std::ptrdiff_t position;  // -1 when decoding a lone pair

  ambiguous_state(const std::array<double, 4>& probs, std::ptrdiff_t pos)
      : std::runtime_error(
            "ambiguous state" +
            (pos >= 0 ? " at position " + std::to_string(pos) : std::string{}) +
            ": bell probabilities (" + std::to_string(probs[0]) + ", " +
            std::to_string(probs[1]) + ", " + std::to_string(probs[2]) + ", " +
            std::to_string(probs[3]) + ")"),
        bell_probs(probs),
        position(pos) {}
};

// (1/sqrt2)(|00> + (-1)^b |11>), i.e. Phi+ for 0 and Phi- for 1.
inline cvec encode_bit(int b) {
  if (b != 0 && b != 1) {
    throw std::invalid_argument("encode_bit: bit must be 0 or 1");
  }
  const double s = 1.0 / std::sqrt(2.0);
  cvec pair(4);
  pair << s, 0, 0, (b == 0 ? s : -s);
  return pair;
}

inline masked_register mask_string(const bit_string& s) {
  masked_register r;
  r.pairs.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    r.pairs.push_back(encode_bit(s[i]));
  }
  return r;
}

// Deterministic projective decode: 0 if the Phi+ probability reaches 1-tol,
// 1 if Phi- does, ambiguous otherwise. No maximum-likelihood fallback.
inline int decode_bit(const cvec& pair, double tol = 1e-9) {
  const auto probs = bell_projection(pair);
  if (probs[0] >= 1.0 - tol) return 0;
  if (probs[1] >= 1.0 - tol) return 1;
  throw ambiguous_state(probs, -1);
}

inline bit_string unmask_string(const masked_register& r, double tol = 1e-9) {
  bit_string out;
  out.bits.reserve(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    try {
      out.push_back(static_cast<std::uint8_t>(decode_bit(r.pairs[i], tol)));
    } catch (const ambiguous_state& e) {
      throw ambiguous_state(e.bell_probs, static_cast<std::ptrdiff_t>(i));
    }
  }
  return out;
}

// Max over pairs and subsystems of trace_distance(marginal, I/2).
// Zero (to machine precision) for every honestly masked register.
inline double marginal_audit(const masked_register& r) {
  const system_dims dims{2, 2};
  const cmat mixed = 0.5 * cmat::Identity(2, 2);
  double worst = 0.0;
  for (const auto& pair : r.pairs) {
    const cmat rho = density_of(pair);
    for (auto side : {subsystem::a, subsystem::b}) {
      worst = std::max(worst, trace_distance(partial_trace(rho, side, dims), mixed));
    }
  }
  return worst;
}

}  // namespace qmask
