#pragma once

// Exhaustive checks of the uniqueness argument for the collision code.
//
// All enumerations run over subsets of matrix rows G = {1..n_rows} in
// increasing characteristic-mask order. Parallel runs split the mask range
// into contiguous chunks and merge in mask order, so reports are identical for
// any worker count.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bitstream.hpp"
#include "channel.hpp"
#include "codebook.hpp"
#include "decoder.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace collision_code {

struct VerifierLimits {
  unsigned uniqueness_max_rows = 15;
  unsigned lemma_max_rows = 11;
};

struct OmegaCounts {
  unsigned plus = 0;
  unsigned minus = 0;
  friend bool operator==(const OmegaCounts&, const OmegaCounts&) = default;
};

struct WitnessReport {
  StationSet subset;
  std::size_t column = 0;  // 1-based
  int f_value = 0;
};

struct Collision {
  StationSet first;
  StationSet second;
  Bitstream vector;
};

struct UniquenessReport {
  unsigned n = 0;
  std::uint64_t subsets_checked = 0;
  std::uint64_t distinct_vectors = 0;
  std::vector<Collision> collisions;
  std::chrono::milliseconds elapsed{0};

  [[nodiscard]] bool passed() const noexcept { return collisions.empty(); }
};

struct ZeroVectorReport {
  unsigned n = 0;
  std::uint64_t subsets_checked = 0;
  std::optional<StationSet> offending;  // first subset that demodulated to all-zero

  [[nodiscard]] bool passed() const noexcept { return !offending.has_value(); }
};

struct LemmaSweepReport {
  unsigned n = 0;
  std::uint64_t subsets_checked = 0;
  std::uint64_t odd_witnessed = 0;
  std::uint64_t even_witnessed = 0;
  std::vector<StationSet> failures;

  [[nodiscard]] bool passed() const noexcept { return failures.empty(); }
};

struct AdditivityCounterexample {
  int claim = 0;  // 1: disjoint union, 2: nested difference
  StationSet g1;
  StationSet g2;
  std::size_t column = 0;  // 1-based
};

struct AdditivityReport {
  unsigned n = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::optional<AdditivityCounterexample> counterexample;

  [[nodiscard]] bool passed() const noexcept { return !counterexample.has_value(); }
};

namespace detail {

inline void check_column(const Codebook& cb, std::size_t col) {
  if (col < 1 || col > cb.v_length())
    throw std::out_of_range("column " + std::to_string(col) + " outside 1.." + std::to_string(cb.v_length()));
}

inline void check_budget(const Codebook& cb, unsigned max_rows, const char* what) {
  if (cb.n_rows() > max_rows)
    throw size_limit_error(std::string(what) + " over " + std::to_string(cb.n_rows()) + " rows exceeds budget of " +
                           std::to_string(max_rows));
}

inline std::uint64_t all_rows_mask(const Codebook& cb) { return StationSet::all(cb.n_rows()).mask(); }

/// Smallest 1-based column whose F over `subset` equals `target`.
inline std::optional<std::size_t> first_column_with(const std::vector<std::uint64_t>& columns, StationSet subset,
                                                    int target) {
  const auto k = static_cast<int>(subset.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const int f = 2 * std::popcount(columns[c] & subset.mask()) - k;
    if (f == target) return c + 1;
  }
  return std::nullopt;
}

inline WitnessReport find_witness(const Codebook& cb, StationSet subset, bool odd) {
  detail::check_subset(subset, cb.n_rows(), "row");
  const unsigned k = subset.size();
  if (k == 0 || k >= cb.n_rows())
    throw precondition_error("witness search needs a proper non-empty subset, got {" + subset.to_string() + "}");
  if ((k % 2 == 1) != odd)
    throw precondition_error(std::string("witness search for ") + (odd ? "odd" : "even") +
                             " cardinality got |S|=" + std::to_string(k));
  const int target = odd ? 1 : 0;
  const auto col = first_column_with(column_masks(cb), subset, target);
  if (!col)
    throw internal_error("no column with F=" + std::to_string(target) + " for {" + subset.to_string() + "}");
  return {subset, *col, target};
}

/// vectors[m-1] is the received vector of subset mask m. Collisions are listed
/// in increasing mask order of the later subset, paired with the first subset
/// that produced the same vector.
inline UniquenessReport tally_vectors(unsigned n, const std::vector<Bitstream>& vectors) {
  UniquenessReport report;
  report.n = n;
  report.subsets_checked = vectors.size();
  std::unordered_map<Bitstream, StationSet, BitstreamHash> seen;
  seen.reserve(vectors.size());
  for (std::uint64_t m = 1; m <= vectors.size(); ++m) {
    auto [it, inserted] = seen.emplace(vectors[m - 1], StationSet(m));
    if (!inserted) report.collisions.push_back({it->second, StationSet(m), vectors[m - 1]});
  }
  report.distinct_vectors = seen.size();
  return report;
}

}  // namespace detail

/// F(G,c) = sum over rows r in G of (2 M(r,c) - 1).
inline int f_value(const Codebook& cb, StationSet subset, std::size_t col) {
  detail::check_subset(subset, cb.n_rows(), "row");
  detail::check_column(cb, col);
  int f = 0;
  for (unsigned r : subset.ids()) f += modulate(cb.bit(r, col));
  return f;
}

inline OmegaCounts omega_counts(const Codebook& cb, StationSet subset, std::size_t col) {
  detail::check_subset(subset, cb.n_rows(), "row");
  detail::check_column(cb, col);
  OmegaCounts out;
  for (unsigned r : subset.ids()) (cb.bit(r, col) ? out.plus : out.minus) += 1;
  return out;
}

/// Odd proper subset: smallest column with F = 1.
inline WitnessReport find_lemma1_witness(const Codebook& cb, StationSet subset) {
  return detail::find_witness(cb, subset, true);
}

/// Even non-empty proper subset: smallest column with F = 0.
inline WitnessReport find_lemma2_witness(const Codebook& cb, StationSet subset) {
  return detail::find_witness(cb, subset, false);
}

/// Looks for a witness column for every proper non-empty subset of rows.
inline LemmaSweepReport sweep_lemmas(const Codebook& cb, const VerifierLimits& limits = {}, unsigned workers = 1) {
  detail::check_budget(cb, limits.lemma_max_rows, "lemma sweep");
  const auto columns = detail::column_masks(cb);
  const std::uint64_t full = detail::all_rows_mask(cb);
  // Proper non-empty subsets are masks 1 .. full-1.
  std::vector<std::uint8_t> found(full > 0 ? full - 1 : 0, 0);
  detail::parallel_ranges(1, full, workers, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t m = lo; m < hi; ++m) {
      const StationSet s(m);
      const int target = s.size() % 2 == 1 ? 1 : 0;
      found[m - 1] = detail::first_column_with(columns, s, target).has_value() ? 1 : 0;
    }
  });
  LemmaSweepReport report;
  report.n = cb.n_rows();
  report.subsets_checked = found.size();
  for (std::uint64_t m = 1; m < full; ++m) {
    const StationSet s(m);
    if (!found[m - 1]) {
      report.failures.push_back(s);
    } else if (s.size() % 2 == 1) {
      ++report.odd_witnessed;
    } else {
      ++report.even_witnessed;
    }
  }
  return report;
}

/// Random disjoint pairs (union additivity) and nested pairs (difference
/// subtractivity), checked at every column. Both sides go through
/// superpose_rows independently.
inline AdditivityReport check_additivity(const Codebook& cb, std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1) throw precondition_error("trials must be at least 1");
  AdditivityReport report{cb.n_rows(), trials, seed, std::nullopt};
  SeededRng rng(seed);
  const auto mismatch = [](const AmplitudeProfile& whole, const AmplitudeProfile& a, const AmplitudeProfile& b,
                           int sign) -> std::optional<std::size_t> {
    for (std::size_t c = 0; c < whole.sums.size(); ++c)
      if (whole.sums[c] != a.sums[c] + sign * b.sums[c]) return c + 1;
    return std::nullopt;
  };
  for (std::uint64_t t = 0; t < trials; ++t) {
    StationSet g1, g2;
    for (unsigned r = 1; r <= cb.n_rows(); ++r) {
      const auto pick = rng.below(3);
      if (pick == 1) g1.insert(r);
      if (pick == 2) g2.insert(r);
    }
    if (auto c = mismatch(detail::superpose_rows(cb, g1 | g2), detail::superpose_rows(cb, g1),
                          detail::superpose_rows(cb, g2), +1)) {
      report.counterexample = AdditivityCounterexample{1, g1, g2, *c};
      return report;
    }

    StationSet inner, outer;
    for (unsigned r = 1; r <= cb.n_rows(); ++r) {
      const auto pick = rng.below(3);
      if (pick >= 1) outer.insert(r);
      if (pick == 2) inner.insert(r);
    }
    if (auto c = mismatch(detail::superpose_rows(cb, outer - inner), detail::superpose_rows(cb, outer),
                          detail::superpose_rows(cb, inner), -1)) {
      report.counterexample = AdditivityCounterexample{2, inner, outer, *c};
      return report;
    }
  }
  return report;
}

/// Demodulates every non-empty subset of rows and records any two subsets
/// that share a received vector.
inline UniquenessReport verify_uniqueness(const Codebook& cb, const VerifierLimits& limits = {},
                                          unsigned workers = 1) {
  detail::check_budget(cb, limits.uniqueness_max_rows, "uniqueness check");
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t full = detail::all_rows_mask(cb);
  std::vector<Bitstream> vectors(full);
  detail::parallel_ranges(1, full + 1, workers, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t m = lo; m < hi; ++m) vectors[m - 1] = detail::majority_rows(cb, StationSet(m));
  });

  UniquenessReport report = detail::tally_vectors(cb.n_rows(), vectors);
  report.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  return report;
}

/// Confirms that no non-empty subset of rows demodulates to the all-zero vector.
inline ZeroVectorReport verify_no_zero_vector(const Codebook& cb, const VerifierLimits& limits = {},
                                              unsigned workers = 1) {
  detail::check_budget(cb, limits.uniqueness_max_rows, "zero-vector check");
  const std::uint64_t full = detail::all_rows_mask(cb);
  std::vector<std::uint8_t> zero(full, 0);
  detail::parallel_ranges(1, full + 1, workers, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t m = lo; m < hi; ++m) zero[m - 1] = detail::majority_rows(cb, StationSet(m)).none() ? 1 : 0;
  });
  ZeroVectorReport report{cb.n_rows(), full, std::nullopt};
  for (std::uint64_t m = 1; m <= full; ++m) {
    if (zero[m - 1]) {
      report.offending = StationSet(m);
      break;
    }
  }
  return report;
}

}  // namespace collision_code
