#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace collision_code {

/// Packed binary vector of fixed length. Bit 0 is chip (column) 1.
///
/// Storage is little-endian within 64-bit words; bits past size() in the
/// last word are always zero so that word-wise equality, hashing and popcount
/// need no masking.
class Bitstream {
 public:
  using word_type = std::uint64_t;
  static constexpr std::size_t word_bits = 64;

  Bitstream() = default;
  explicit Bitstream(std::size_t n_bits)
      : size_(n_bits), words_(word_count(n_bits), 0) {}

  /// Parses a string of '0'/'1' characters; character j is bit j.
  static Bitstream from_string(std::string_view bits) {
    Bitstream out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] == '1') {
        out.set(i);
      } else if (bits[i] != '0') {
        throw parse_error("bit string contains '" + std::string(1, bits[i]) +
                          "' at position " + std::to_string(i + 1));
      }
    }
    return out;
  }

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] std::size_t num_words() const noexcept { return words_.size(); }
  [[nodiscard]] const std::vector<word_type>& words() const noexcept { return words_; }
  [[nodiscard]] word_type word(std::size_t i) const noexcept { return words_[i]; }

  [[nodiscard]] bool test(std::size_t i) const noexcept {
    return (words_[i / word_bits] >> (i % word_bits)) & 1U;
  }
  void set(std::size_t i) noexcept { words_[i / word_bits] |= word_type{1} << (i % word_bits); }
  void reset(std::size_t i) noexcept { words_[i / word_bits] &= ~(word_type{1} << (i % word_bits)); }
  void assign(std::size_t i, bool value) noexcept { value ? set(i) : reset(i); }
  void flip(std::size_t i) noexcept { words_[i / word_bits] ^= word_type{1} << (i % word_bits); }

  /// Overwrites word i; high bits past size() are cleared.
  void set_word(std::size_t i, word_type w) noexcept {
    words_[i] = w;
    if (i + 1 == words_.size()) clear_tail();
  }

  [[nodiscard]] std::size_t count() const noexcept {
    std::size_t n = 0;
    for (word_type w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  [[nodiscard]] bool none() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](word_type w) { return w == 0; });
  }

  [[nodiscard]] std::string to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
      if (test(i)) s[i] = '1';
    return s;
  }

  friend bool operator==(const Bitstream&, const Bitstream&) = default;

  /// Lexicographic order on the bit string (bit 0 first, '0' < '1').
  friend bool lex_less(const Bitstream& a, const Bitstream& b) noexcept {
    const std::size_t n = std::min(a.size_, b.size_);
    for (std::size_t i = 0; i < n; ++i) {
      const bool x = a.test(i), y = b.test(i);
      if (x != y) return !x;
    }
    return a.size_ < b.size_;
  }

 private:
  static std::size_t word_count(std::size_t n_bits) noexcept {
    return (n_bits + word_bits - 1) / word_bits;
  }
  void clear_tail() noexcept {
    const std::size_t tail = size_ % word_bits;
    if (tail != 0 && !words_.empty()) words_.back() &= (word_type{1} << tail) - 1;
  }

  std::size_t size_ = 0;
  std::vector<word_type> words_;
};

/// Number of positions where a and b differ. Lengths must match.
inline std::size_t hamming_distance(const Bitstream& a, const Bitstream& b) {
  if (a.size() != b.size())
    throw precondition_error("hamming_distance: length mismatch (" + std::to_string(a.size()) +
                             " vs " + std::to_string(b.size()) + ")");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.num_words(); ++i)
    d += static_cast<std::size_t>(std::popcount(a.word(i) ^ b.word(i)));
  return d;
}

struct BitstreamHash {
  std::size_t operator()(const Bitstream& b) const noexcept {
    // FNV-1a over words, finished with a splitmix-style avalanche.
    std::uint64_t h = 0xcbf29ce484222325ULL ^ b.size();
    for (std::uint64_t w : b.words()) {
      h ^= w;
      h *= 0x100000001b3ULL;
      h ^= h >> 29;
    }
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return static_cast<std::size_t>(h);
  }
};

/// Set of 1-based station (row) identifiers, at most 64 of them.
///
/// The characteristic mask has bit (i-1) set for station i, which makes
/// "increasing mask value" the canonical subset enumeration order.
class StationSet {
 public:
  using mask_type = std::uint64_t;
  static constexpr unsigned max_id = 64;

  constexpr StationSet() = default;
  constexpr explicit StationSet(mask_type mask) : mask_(mask) {}
  StationSet(std::initializer_list<unsigned> ids) {
    for (unsigned id : ids) insert(id);
  }

  static StationSet from_ids(const std::vector<unsigned>& ids) {
    StationSet s;
    for (unsigned id : ids) s.insert(id);
    return s;
  }
  /// {1..n}
  static constexpr StationSet all(unsigned n) {
    return StationSet(n >= 64 ? ~mask_type{0} : (mask_type{1} << n) - 1);
  }

  /// Parses "1,2,3". The empty string is the empty set.
  static StationSet parse(std::string_view text) {
    StationSet s;
    std::size_t pos = 0;
    while (pos < text.size()) {
      const std::size_t comma = std::min(text.find(',', pos), text.size());
      const std::string_view tok = text.substr(pos, comma - pos);
      if (tok.empty() || tok.size() > 3 ||
          !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw parse_error("invalid station id '" + std::string(tok) + "'");
      s.insert(static_cast<unsigned>(std::stoul(std::string(tok))));
      pos = comma + 1;
      if (comma + 1 == text.size()) throw parse_error("trailing comma in station list");
    }
    return s;
  }

  void insert(unsigned id) {
    check_id(id);
    mask_ |= bit(id);
  }
  void erase(unsigned id) {
    check_id(id);
    mask_ &= ~bit(id);
  }
  [[nodiscard]] bool contains(unsigned id) const noexcept {
    return id >= 1 && id <= max_id && (mask_ & bit(id)) != 0;
  }

  [[nodiscard]] constexpr mask_type mask() const noexcept { return mask_; }
  [[nodiscard]] constexpr bool empty() const noexcept { return mask_ == 0; }
  [[nodiscard]] constexpr unsigned size() const noexcept {
    return static_cast<unsigned>(std::popcount(mask_));
  }
  /// Largest member id, 0 when empty.
  [[nodiscard]] constexpr unsigned max_member() const noexcept {
    return static_cast<unsigned>(64 - std::countl_zero(mask_));
  }

  [[nodiscard]] std::vector<unsigned> ids() const {
    std::vector<unsigned> out;
    out.reserve(size());
    for (mask_type m = mask_; m != 0; m &= m - 1)
      out.push_back(static_cast<unsigned>(std::countr_zero(m)) + 1);
    return out;
  }

  [[nodiscard]] std::string to_string() const {
    std::string s;
    for (unsigned id : ids()) {
      if (!s.empty()) s += ',';
      s += std::to_string(id);
    }
    return s;
  }

  [[nodiscard]] constexpr bool is_subset_of(StationSet other) const noexcept {
    return (mask_ & ~other.mask_) == 0;
  }
  [[nodiscard]] constexpr bool disjoint_with(StationSet other) const noexcept {
    return (mask_ & other.mask_) == 0;
  }

  friend constexpr StationSet operator|(StationSet a, StationSet b) noexcept { return StationSet(a.mask_ | b.mask_); }
  friend constexpr StationSet operator&(StationSet a, StationSet b) noexcept { return StationSet(a.mask_ & b.mask_); }
  friend constexpr StationSet operator-(StationSet a, StationSet b) noexcept { return StationSet(a.mask_ & ~b.mask_); }
  friend constexpr bool operator==(StationSet, StationSet) = default;
  friend constexpr auto operator<=>(StationSet, StationSet) = default;

 private:
  static constexpr mask_type bit(unsigned id) noexcept { return mask_type{1} << (id - 1); }
  static void check_id(unsigned id) {
    if (id < 1 || id > max_id)
      throw std::out_of_range("station id " + std::to_string(id) + " outside 1.." + std::to_string(max_id));
  }

  mask_type mask_ = 0;
};

}  // namespace collision_code

template <>
struct std::hash<collision_code::Bitstream> {
  std::size_t operator()(const collision_code::Bitstream& b) const noexcept {
    return collision_code::BitstreamHash{}(b);
  }
};
