#pragma once

// Collision decoding: recover the set of stations whose superimposed codewords
// produced a demodulated bitstream.
//
// Two routes are provided. The free functions search the subset space directly
// using per-column row masks with early exit on the first mismatching chip;
// they need no precomputation and work up to the codebook size cap. Decoder
// materialises the full inverse table once and answers lookups in O(V).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bitstream.hpp"
#include "channel.hpp"
#include "codebook.hpp"
#include "errors.hpp"
#include "parallel.hpp"

namespace collision_code {

enum class DecodeKind { identified, silence, no_match };

constexpr std::string_view to_string(DecodeKind k) noexcept {
  switch (k) {
    case DecodeKind::identified:
      return "identified";
    case DecodeKind::silence:
      return "silence";
    case DecodeKind::no_match:
      return "nomatch";
  }
  return "nomatch";
}

struct DecodeOutcome {
  DecodeKind kind = DecodeKind::no_match;
  StationSet subset;  // meaningful only when identified
  /// Hamming distance to the chosen vector. Always set for identified and
  /// silence; for no_match set only when a nearest search found a tied minimum.
  std::optional<std::size_t> distance;

  static DecodeOutcome identified(StationSet s, std::size_t d) { return {DecodeKind::identified, s, d}; }
  static DecodeOutcome silence() { return {DecodeKind::silence, {}, 0}; }
  static DecodeOutcome no_match(std::optional<std::size_t> d = std::nullopt) {
    return {DecodeKind::no_match, {}, d};
  }

  friend bool operator==(const DecodeOutcome&, const DecodeOutcome&) = default;
};

enum class Presence { present, absent, undecodable };

constexpr std::string_view to_string(Presence p) noexcept {
  switch (p) {
    case Presence::present:
      return "present";
    case Presence::absent:
      return "absent";
    case Presence::undecodable:
      return "undecodable";
  }
  return "undecodable";
}

struct DecoderLimits {
  /// Largest station count for which the inverse table is materialised.
  /// At 15 stations the table holds 32,767 keys of 6,435 bits (about 26 MB).
  unsigned table_max_stations = 15;
  /// Largest station count accepted by the direct subset search.
  unsigned search_max_stations = 25;
};

namespace detail {

inline void check_length(const Codebook& cb, const Bitstream& received) {
  if (received.size() != cb.v_length())
    throw precondition_error("received vector has " + std::to_string(received.size()) + " bits, codebook V=" +
                             std::to_string(cb.v_length()));
}

/// For each column, the mask of rows holding a 1 (bit r-1 for row r).
inline std::vector<std::uint64_t> column_masks(const Codebook& cb) {
  std::vector<std::uint64_t> masks(cb.v_length(), 0);
  for (unsigned r = 1; r <= cb.n_rows(); ++r) {
    const Bitstream& row = cb.row(r);
    const std::uint64_t bit = std::uint64_t{1} << (r - 1);
    for (std::size_t w = 0; w < row.num_words(); ++w)
      for (std::uint64_t bits = row.word(w); bits != 0; bits &= bits - 1)
        masks[w * Bitstream::word_bits + static_cast<std::size_t>(std::countr_zero(bits))] |= bit;
  }
  return masks;
}

inline bool chip_bit(std::uint64_t column_mask, std::uint64_t subset_mask, unsigned subset_size) noexcept {
  return 2U * static_cast<unsigned>(std::popcount(column_mask & subset_mask)) > subset_size;
}

inline void check_search_size(const Codebook& cb, const DecoderLimits& limits) {
  if (cb.n_stations() > limits.search_max_stations)
    throw size_limit_error("subset search over " + std::to_string(cb.n_stations()) + " stations exceeds limit " +
                           std::to_string(limits.search_max_stations));
}

}  // namespace detail

/// Map from every reachable received vector to its unique station set.
class InverseTable {
 public:
  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  [[nodiscard]] unsigned n_stations() const noexcept { return n_stations_; }

  [[nodiscard]] std::optional<StationSet> find(const Bitstream& v) const {
    const auto it = entries_.find(v);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  [[nodiscard]] const std::unordered_map<Bitstream, StationSet, BitstreamHash>& entries() const noexcept {
    return entries_;
  }

  friend InverseTable build_inverse_table(const Codebook&, const DecoderLimits&, unsigned);

 private:
  unsigned n_stations_ = 0;
  std::unordered_map<Bitstream, StationSet, BitstreamHash> entries_;
};

/// Enumerates all 2^n - 1 non-empty station sets. Vectors are computed in
/// parallel chunks and inserted in increasing mask order, so the result does
/// not depend on `workers`. Throws internal_error on a key collision.
inline InverseTable build_inverse_table(const Codebook& cb, const DecoderLimits& limits = {}, unsigned workers = 1) {
  const unsigned n = cb.n_stations();
  if (n > limits.table_max_stations)
    throw size_limit_error("inverse table for " + std::to_string(n) + " stations exceeds limit " +
                           std::to_string(limits.table_max_stations));
  const std::uint64_t count = (std::uint64_t{1} << n) - 1;
  std::vector<Bitstream> vectors(count);
  detail::parallel_ranges(1, count + 1, workers, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t m = lo; m < hi; ++m) vectors[m - 1] = detail::majority_rows(cb, StationSet(m));
  });

  InverseTable table;
  table.n_stations_ = n;
  table.entries_.reserve(count);
  for (std::uint64_t m = 1; m <= count; ++m) {
    auto [it, inserted] = table.entries_.emplace(std::move(vectors[m - 1]), StationSet(m));
    if (!inserted)
      throw internal_error("inverse table collision between {" + it->second.to_string() + "} and {" +
                           StationSet(m).to_string() + "}");
  }
  return table;
}

/// Exact decoding by direct search: silence for the all-zero vector, otherwise
/// the station set whose superposition demodulates to `received`.
inline DecodeOutcome decode_exact(const Codebook& cb, const Bitstream& received, const DecoderLimits& limits = {}) {
  detail::check_length(cb, received);
  if (received.none()) return DecodeOutcome::silence();
  detail::check_search_size(cb, limits);
  const auto columns = detail::column_masks(cb);
  const std::uint64_t end = std::uint64_t{1} << cb.n_stations();
  for (std::uint64_t m = 1; m < end; ++m) {
    const auto k = static_cast<unsigned>(std::popcount(m));
    std::size_t c = 0;
    while (c < columns.size() && detail::chip_bit(columns[c], m, k) == received.test(c)) ++c;
    if (c == columns.size()) return DecodeOutcome::identified(StationSet(m), 0);
  }
  return DecodeOutcome::no_match();
}

/// Nearest reachable vector within max_dist; a tied minimum is reported as
/// no_match. The all-zero vector always decodes to silence.
inline DecodeOutcome decode_nearest(const Codebook& cb, const Bitstream& received, std::size_t max_dist,
                                    const DecoderLimits& limits = {}) {
  detail::check_length(cb, received);
  if (received.none()) return DecodeOutcome::silence();
  detail::check_search_size(cb, limits);
  const auto columns = detail::column_masks(cb);
  const std::uint64_t end = std::uint64_t{1} << cb.n_stations();
  std::size_t bound = max_dist;
  std::optional<std::size_t> best;
  std::uint64_t winner = 0;
  unsigned ties = 0;
  for (std::uint64_t m = 1; m < end; ++m) {
    const auto k = static_cast<unsigned>(std::popcount(m));
    std::size_t d = 0;
    bool within = true;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (detail::chip_bit(columns[c], m, k) != received.test(c) && ++d > bound) {
        within = false;
        break;
      }
    }
    if (!within) continue;
    if (!best || d < *best) {
      best = d;
      winner = m;
      ties = 1;
      bound = d;
    } else {
      ++ties;
    }
  }
  if (!best) return DecodeOutcome::no_match();
  if (ties > 1) return DecodeOutcome::no_match(best);
  return DecodeOutcome::identified(StationSet(winner), *best);
}

inline Presence presence_from(const DecodeOutcome& outcome, unsigned station) {
  switch (outcome.kind) {
    case DecodeKind::identified:
      return outcome.subset.contains(station) ? Presence::present : Presence::absent;
    case DecodeKind::silence:
      return Presence::absent;
    case DecodeKind::no_match:
      break;
  }
  return Presence::undecodable;
}

inline Presence contains_station(const Codebook& cb, const Bitstream& received, unsigned station,
                                 const DecoderLimits& limits = {}) {
  if (station < 1 || station > cb.n_stations())
    throw std::out_of_range("station " + std::to_string(station) + " outside 1.." + std::to_string(cb.n_stations()));
  return presence_from(decode_exact(cb, received, limits), station);
}

/// Reusable decoder bound to one codebook, which must outlive it. Uses the
/// inverse table when the station count allows, direct search otherwise.
class Decoder {
 public:
  explicit Decoder(const Codebook& cb, const DecoderLimits& limits = {}, unsigned workers = 1)
      : cb_(&cb), limits_(limits) {
    if (cb.n_stations() <= limits.table_max_stations) table_ = build_inverse_table(cb, limits, workers);
  }

  [[nodiscard]] const Codebook& codebook() const noexcept { return *cb_; }
  [[nodiscard]] bool has_table() const noexcept { return table_.has_value(); }
  [[nodiscard]] const InverseTable* table() const noexcept { return table_ ? &*table_ : nullptr; }

  [[nodiscard]] DecodeOutcome decode_exact(const Bitstream& received) const {
    if (!table_) return collision_code::decode_exact(*cb_, received, limits_);
    detail::check_length(*cb_, received);
    if (received.none()) return DecodeOutcome::silence();
    if (const auto s = table_->find(received)) return DecodeOutcome::identified(*s, 0);
    return DecodeOutcome::no_match();
  }

  [[nodiscard]] DecodeOutcome decode_nearest(const Bitstream& received, std::size_t max_dist) const {
    if (!table_) return collision_code::decode_nearest(*cb_, received, max_dist, limits_);
    detail::check_length(*cb_, received);
    if (received.none()) return DecodeOutcome::silence();
    std::optional<std::size_t> best;
    StationSet winner;
    unsigned ties = 0;
    for (const auto& [vec, subset] : table_->entries()) {
      const std::size_t d = hamming_distance(vec, received);
      if (d > max_dist) continue;
      if (!best || d < *best) {
        best = d;
        winner = subset;
        ties = 1;
      } else if (d == *best) {
        ++ties;
      }
    }
    if (!best) return DecodeOutcome::no_match();
    if (ties > 1) return DecodeOutcome::no_match(best);
    return DecodeOutcome::identified(winner, *best);
  }

  [[nodiscard]] Presence contains_station(const Bitstream& received, unsigned station) const {
    if (station < 1 || station > cb_->n_stations())
      throw std::out_of_range("station " + std::to_string(station) + " outside 1.." +
                              std::to_string(cb_->n_stations()));
    return presence_from(decode_exact(received), station);
  }

 private:
  const Codebook* cb_;
  DecoderLimits limits_;
  std::optional<InverseTable> table_;
};

}  // namespace collision_code
