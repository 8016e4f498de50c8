#pragma once

// Synchronised BPSK superposition over the collision codebook.
//
// Each transmitting station sends amplitude 2s-1 per chip; the receiver sees
// the integer sum F(G,c) and a hard demodulator outputs 1 iff the sum is
// positive. A zero sum (tie) demodulates to 0.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bitstream.hpp"
#include "codebook.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace collision_code {

struct AmplitudeProfile {
  /// F(G,c) for c = 1..V, stored 0-based.
  std::vector<int> sums;
  /// |G|, kept so the parity/bound invariants are checkable.
  unsigned subset_size = 0;

  friend bool operator==(const AmplitudeProfile&, const AmplitudeProfile&) = default;
};

struct NoisyProfile {
  std::vector<double> samples;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

constexpr int modulate(bool bit) noexcept { return bit ? 1 : -1; }

namespace detail {

inline void check_subset(StationSet subset, unsigned limit, const char* what) {
  if (subset.max_member() > limit)
    throw std::out_of_range(std::string(what) + " " + std::to_string(subset.max_member()) + " outside 1.." +
                            std::to_string(limit));
}

/// Integer chip sums over an arbitrary set of matrix rows (including the
/// unassigned row of an even codebook).
inline AmplitudeProfile superpose_rows(const Codebook& cb, StationSet rows) {
  check_subset(rows, cb.n_rows(), "row");
  const std::size_t v = cb.v_length();
  AmplitudeProfile p{std::vector<int>(v, 0), rows.size()};
  // Count ones per column, then F = ones - (|G| - ones).
  for (unsigned r : rows.ids()) {
    const Bitstream& row = cb.row(r);
    for (std::size_t w = 0; w < row.num_words(); ++w) {
      for (std::uint64_t bits = row.word(w); bits != 0; bits &= bits - 1)
        ++p.sums[w * Bitstream::word_bits + static_cast<std::size_t>(std::countr_zero(bits))];
    }
  }
  const int k = static_cast<int>(rows.size());
  for (int& s : p.sums) s = 2 * s - k;
  return p;
}

/// Bit-sliced majority over packed rows: output bit is 1 iff more than half of
/// the selected rows carry a 1 in that chip. Equivalent to
/// demodulate(superpose_rows(...)) but works 64 chips at a time.
inline Bitstream majority_rows(const Codebook& cb, StationSet rows) {
  check_subset(rows, cb.n_rows(), "row");
  const std::size_t v = cb.v_length();
  Bitstream out(v);
  const unsigned k = rows.size();
  if (k == 0) return out;
  const unsigned threshold = k / 2 + 1;  // ones >= threshold  <=>  2*ones > k
  unsigned planes_needed = 1;
  while ((1U << planes_needed) <= k) ++planes_needed;

  std::vector<const Bitstream*> selected;
  selected.reserve(k);
  for (unsigned r : rows.ids()) selected.push_back(&cb.row(r));

  std::uint64_t planes[8];
  for (std::size_t w = 0; w < out.num_words(); ++w) {
    for (unsigned j = 0; j < planes_needed; ++j) planes[j] = 0;
    for (const Bitstream* row : selected) {
      std::uint64_t carry = row->word(w);
      for (unsigned j = 0; j < planes_needed && carry != 0; ++j) {
        const std::uint64_t t = planes[j] & carry;
        planes[j] ^= carry;
        carry = t;
      }
    }
    // Bitwise comparison count >= threshold, most significant plane first.
    std::uint64_t greater = 0, equal = ~std::uint64_t{0};
    for (unsigned j = planes_needed; j-- > 0;) {
      if ((threshold >> j) & 1U) {
        equal &= planes[j];
      } else {
        greater |= equal & planes[j];
        equal &= ~planes[j];
      }
    }
    out.set_word(w, greater | equal);
  }
  return out;
}

}  // namespace detail

/// Exact chip sums for a set of transmitting stations. The empty set is silence.
inline AmplitudeProfile superpose(const Codebook& cb, StationSet subset) {
  detail::check_subset(subset, cb.n_stations(), "station");
  return detail::superpose_rows(cb, subset);
}

/// Hard decision: bit c is 1 iff sums[c] >= 1.
inline Bitstream demodulate(const AmplitudeProfile& p) {
  Bitstream out(p.sums.size());
  for (std::size_t c = 0; c < p.sums.size(); ++c)
    if (p.sums[c] >= 1) out.set(c);
  return out;
}

/// demodulate(superpose(cb, subset)) computed on packed words.
inline Bitstream received_vector(const Codebook& cb, StationSet subset) {
  detail::check_subset(subset, cb.n_stations(), "station");
  return detail::majority_rows(cb, subset);
}

/// One chip of the majority principle: 1 iff ones outnumber zeros.
inline bool majority_demod_bit(std::span<const std::uint8_t> bits) {
  if (bits.empty()) throw precondition_error("majority_demod_bit: no transmitters");
  std::size_t ones = 0, zeros = 0;
  for (std::uint8_t b : bits) {
    if (b > 1) throw precondition_error("majority_demod_bit: input is not binary");
    (b ? ones : zeros) += 1;
  }
  return ones > zeros;
}

/// Two-transmitter PNC demodulation: strong energy (|sum| = 2) maps to 0, a
/// cancelled sum maps to 1, giving s1 XOR s3.
inline bool pnc_xor_map(int sum) {
  switch (sum) {
    case -2:
    case 2:
      return false;
    case 0:
      return true;
    default:
      throw precondition_error("pnc_xor_map: " + std::to_string(sum) + " is not a two-transmitter sum");
  }
}

/// superpose plus i.i.d. N(0, sigma^2) per chip, drawn in chip order from
/// SeededRng(seed).
inline NoisyProfile superpose_noisy(const Codebook& cb, StationSet subset, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw precondition_error("sigma must be finite and non-negative");
  const AmplitudeProfile exact = superpose(cb, subset);
  NoisyProfile out{std::vector<double>(exact.sums.begin(), exact.sums.end()), sigma, seed};
  if (sigma > 0.0) {
    SeededRng rng(seed);
    for (double& s : out.samples) s += rng.gaussian(0.0, sigma);
  }
  return out;
}

/// Real-valued hard decision at 0.5, midway between the tie level and the
/// smallest positive sum.
inline Bitstream threshold_noisy(const NoisyProfile& p) {
  Bitstream out(p.samples.size());
  for (std::size_t c = 0; c < p.samples.size(); ++c)
    if (p.samples[c] > 0.5) out.set(c);
  return out;
}

}  // namespace collision_code
