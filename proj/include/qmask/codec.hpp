// codec.hpp
// Classical descriptions of known qubit states. A qubit is written as
// cos(alpha)|0> + e^{i theta} sin(alpha)|1> with alpha in [0, pi/2] and
// theta in [0, 2pi); the pair serializes to a fixed-point bit-string with
// n_bits per parameter (uniform bins, midpoint decoding). States chosen
// from a finite alphabet serialize exactly through their index instead.

#pragma once

#include "qmask/linalg.hpp"
#include "qmask/mask.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmask {

inline constexpr double half_pi = std::numbers::pi / 2.0;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// (alpha, theta) in canonical ranges. theta is reduced mod 2pi; the phase is
// unphysical at alpha = 0 and alpha = pi/2, so it is gauged to 0 there.
struct qubit_params {
  double alpha = 0.0;
  double theta = 0.0;

  qubit_params() = default;

  qubit_params(double a, double t) {
    if (!(a >= 0.0 && a <= half_pi)) {
      throw std::invalid_argument("qubit_params: alpha must lie in [0, pi/2]");
    }
    if (!std::isfinite(t)) {
      throw std::invalid_argument("qubit_params: theta must be finite");
    }
    alpha = a;
    theta = std::fmod(t, two_pi);
    if (theta < 0.0) theta += two_pi;
    if (theta >= two_pi) theta = 0.0;
    if (alpha == 0.0 || alpha == half_pi) theta = 0.0;
  }

  friend bool operator==(const qubit_params&, const qubit_params&) = default;
};

// Fixed-point precision per parameter.
struct codec_config {
  unsigned n_bits;

  explicit codec_config(unsigned n) : n_bits(n) {
    if (n < 1 || n > 64) {
      throw std::invalid_argument("codec_config: n_bits must lie in [1, 64]");
    }
  }
};

inline cvec state_from_params(const qubit_params& p) {
  cvec psi(2);
  psi(0) = std::cos(p.alpha);
  psi(1) = std::polar(std::sin(p.alpha), p.theta);
  return psi;
}

// Inverse of state_from_params up to global phase: the |0> amplitude is made
// real and nonnegative, alpha is its arccos, theta the relative phase of the
// |1> amplitude.
inline qubit_params params_from_state(const cvec& psi) {
  if (psi.size() != 2) {
    throw std::invalid_argument("params_from_state: state must be 2-dimensional");
  }
  if (!is_normalized(psi)) {
    throw std::invalid_argument("params_from_state: state is not normalized");
  }
  const double a0 = std::abs(psi(0));
  const double alpha = std::min(std::acos(std::clamp(a0, 0.0, 1.0)), half_pi);
  if (alpha == 0.0 || alpha == half_pi) {
    return {alpha, 0.0};
  }
  const cxd rel = psi(1) * std::conj(psi(0) / a0);
  double theta = std::arg(rel);
  if (theta < 0.0) theta += two_pi;
  if (theta >= two_pi) theta = 0.0;
  return {alpha, theta};
}

namespace detail {

// floor(frac * 2^n) for frac in [0, 1); ldexp scales exactly, so the result
// stays below 2^n and converts safely.
inline std::uint64_t scaled_floor(double frac, unsigned n) {
  const double scaled = std::floor(std::ldexp(frac, static_cast<int>(n)));
  if (scaled <= 0.0) return 0;
  return static_cast<std::uint64_t>(scaled);
}

inline void append_big_endian(bit_string& out, std::uint64_t k, unsigned n) {
  for (unsigned j = n; j-- > 0;) {
    out.push_back(static_cast<std::uint8_t>((k >> j) & 1u));
  }
}

inline std::uint64_t read_big_endian(const bit_string& s, std::size_t offset,
                                     unsigned n) {
  std::uint64_t k = 0;
  for (unsigned j = 0; j < n; ++j) {
    k = (k << 1) | s[offset + j];
  }
  return k;
}

}  // namespace detail

// 2*n_bits bits: the alpha bin index (clamped into the top bin at the closed
// endpoint), then the theta bin index (wrapping), both big-endian.
inline bit_string encode_params(const qubit_params& p, const codec_config& c) {
  const unsigned n = c.n_bits;
  const std::uint64_t top = (n == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);

  const double frac_a = p.alpha / half_pi;
  const std::uint64_t ka = (frac_a >= 1.0) ? top : detail::scaled_floor(frac_a, n);

  const double frac_t = p.theta / two_pi;
  const std::uint64_t kt = (frac_t >= 1.0) ? 0 : detail::scaled_floor(frac_t, n);

  bit_string out;
  out.bits.reserve(2 * n);
  detail::append_big_endian(out, ka, n);
  detail::append_big_endian(out, kt, n);
  return out;
}

// Midpoint reconstruction of each bin.
inline qubit_params decode_params(const bit_string& s, const codec_config& c) {
  const unsigned n = c.n_bits;
  if (s.size() != 2 * static_cast<std::size_t>(n)) {
    throw std::invalid_argument("decode_params: expected " + std::to_string(2 * n) +
                                " bits, got " + std::to_string(s.size()));
  }
  const std::uint64_t ka = detail::read_big_endian(s, 0, n);
  const std::uint64_t kt = detail::read_big_endian(s, n, n);
  const double alpha =
      std::ldexp(static_cast<double>(ka) + 0.5, -static_cast<int>(n)) * half_pi;
  const double theta =
      std::ldexp(static_cast<double>(kt) + 0.5, -static_cast<int>(n)) * two_pi;
  return {std::min(alpha, half_pi), theta};
}

namespace detail {

// Round-trip fidelity between a state at angle a (theta offset at the worst
// half-bin extreme h) and the midpoint am of an alpha bin:
//   F = 1/2 + (1/2)[cos 2a cos 2am + sin 2a sin 2am cos h].
// Within a bin F(a) = 1/2 + (1/2) R cos(2a - phase), so the in-bin minimum
// sits at a bin corner; scanning corners of every bin gives the exact
// infimum of the round-trip fidelity over all states.
inline double fidelity_floor_binscan(unsigned n) {
  const double w = std::ldexp(half_pi, -static_cast<int>(n));
  const double cos_h = std::cos(std::ldexp(std::numbers::pi, -static_cast<int>(n)));
  double floor = 1.0;
  const std::uint64_t bins = std::uint64_t{1} << n;
  for (std::uint64_t k = 0; k < bins; ++k) {
    const double am = (static_cast<double>(k) + 0.5) * w;
    const double c2m = std::cos(2.0 * am);
    const double s2m = std::sin(2.0 * am);
    for (const double a : {static_cast<double>(k) * w, static_cast<double>(k + 1) * w}) {
      const double f =
          0.5 + 0.5 * (std::cos(2.0 * a) * c2m + std::sin(2.0 * a) * s2m * cos_h);
      floor = std::min(floor, f);
    }
  }
  return floor;
}

// Closed-form bound from relaxing the bin midpoint to a free point within
// half a bin width: min F = 1/2 + cos(w)/2 - (1 - cos h)(1 + cos w)/4.
// Slightly looser than the bin scan but valid for any n and monotone in n.
inline double fidelity_floor_relaxed(unsigned n) {
  const double w = std::ldexp(half_pi, -static_cast<int>(n));
  const double h = std::ldexp(std::numbers::pi, -static_cast<int>(n));
  return 0.5 + 0.5 * std::cos(w) - (1.0 - std::cos(h)) * (1.0 + std::cos(w)) / 4.0;
}

}  // namespace detail

// Certified lower bound on the fidelity of encode -> decode -> reconstruct
// over all qubit states at the given precision. Computed once per n_bits,
// then served from a read-only cache.
inline double reconstruction_fidelity_floor(const codec_config& c) {
  static std::map<unsigned, double> cache;
  static std::mutex cache_mutex;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(c.n_bits);
  if (it != cache.end()) return it->second;
  const double floor = (c.n_bits <= 24) ? detail::fidelity_floor_binscan(c.n_bits)
                                        : detail::fidelity_floor_relaxed(c.n_bits);
  cache.emplace(c.n_bits, floor);
  return floor;
}

// A finite, ordered set of normalized states; indices encode in
// ceil(log2(size)) bits.
struct alphabet {
  std::vector<cvec> states;
  std::string label;

  alphabet(std::vector<cvec> s, std::string lbl = {})
      : states(std::move(s)), label(std::move(lbl)) {
    if (states.empty()) {
      throw std::invalid_argument("alphabet: needs at least one state");
    }
    const Eigen::Index dim = states.front().size();
    for (const auto& st : states) {
      if (st.size() != dim) {
        throw std::invalid_argument("alphabet: states must share one dimension");
      }
      if (!is_normalized(st)) {
        throw std::invalid_argument("alphabet: states must be normalized");
      }
    }
  }

  std::size_t size() const { return states.size(); }

  unsigned width() const {
    return static_cast<unsigned>(std::bit_width(states.size() - 1));
  }
};

inline bit_string encode_index(std::size_t i, const alphabet& a) {
  if (i >= a.size()) {
    throw std::out_of_range("encode_index: index " + std::to_string(i) +
                            " out of range for alphabet of size " +
                            std::to_string(a.size()));
  }
  bit_string out;
  detail::append_big_endian(out, i, a.width());
  return out;
}

inline std::size_t decode_index(const bit_string& s, const alphabet& a) {
  if (s.size() != a.width()) {
    throw std::invalid_argument("decode_index: expected " + std::to_string(a.width()) +
                                " bits, got " + std::to_string(s.size()));
  }
  const std::uint64_t k = a.width() ? detail::read_big_endian(s, 0, a.width()) : 0;
  if (k >= a.size()) {
    throw std::out_of_range("decode_index: value " + std::to_string(k) +
                            " out of range for alphabet of size " +
                            std::to_string(a.size()));
  }
  return static_cast<std::size_t>(k);
}

}  // namespace qmask
