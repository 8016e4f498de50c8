#pragma once

// Constant-weight collision codebook.
//
// For an odd row count n the matrix has one column per weight-(n+1)/2 binary
// pattern of length n, so every column holds exactly one more 1 than 0. Row i
// is the codeword transmitted by station i. An even station count is served
// by the next odd matrix with its last row left unassigned.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <iterator>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "bitstream.hpp"
#include "errors.hpp"

namespace collision_code {

/// Binomial coefficient; nullopt if the result does not fit in 64 bits.
constexpr std::optional<std::uint64_t> binomial(unsigned n, unsigned k) noexcept {
  if (k > n) return std::uint64_t{0};
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (unsigned i = 1; i <= k; ++i) {
    // result * num is divisible by i; cancel the gcd first to delay overflow
    const std::uint64_t num = n - k + i;
    const std::uint64_t g = std::gcd(result, std::uint64_t{i});
    const std::uint64_t r = result / g, d = i / g;
    if (num / d > std::numeric_limits<std::uint64_t>::max() / r) return std::nullopt;
    result = r * (num / d);
  }
  return result;
}

struct CodebookLimits {
  /// Largest accepted station count. 25 stations give V = C(25,13) = 5,200,300.
  unsigned max_stations = 25;
};

class Codebook {
 public:
  /// Rows used for n stations: n if odd, n+1 if even.
  static constexpr unsigned rows_for(unsigned n_stations) noexcept {
    return n_stations % 2 == 1 ? n_stations : n_stations + 1;
  }

  [[nodiscard]] unsigned n_stations() const noexcept { return n_stations_; }
  [[nodiscard]] unsigned n_rows() const noexcept { return static_cast<unsigned>(rows_.size()); }
  [[nodiscard]] unsigned r_weight() const noexcept { return (n_rows() + 1) / 2; }
  [[nodiscard]] std::size_t v_length() const noexcept { return rows_.empty() ? 0 : rows_.front().size(); }

  /// Row by 1-based index; includes the unassigned row of an even codebook.
  [[nodiscard]] const Bitstream& row(unsigned r) const {
    if (r < 1 || r > n_rows())
      throw std::out_of_range("row " + std::to_string(r) + " outside 1.." + std::to_string(n_rows()));
    return rows_[r - 1];
  }
  [[nodiscard]] const std::vector<Bitstream>& rows() const noexcept { return rows_; }

  /// M(r, c) with 1-based row and column.
  [[nodiscard]] bool bit(unsigned r, std::size_t c) const { return row(r).test(c - 1); }

  /// Column c (1-based) as an integer with row 1 as the most significant bit.
  [[nodiscard]] std::uint64_t column_pattern(std::size_t c) const {
    std::uint64_t p = 0;
    for (const Bitstream& r : rows_) p = (p << 1) | (r.test(c - 1) ? 1U : 0U);
    return p;
  }

  friend bool operator==(const Codebook&, const Codebook&) = default;

  friend Codebook build_codebook(unsigned n_stations, const CodebookLimits& limits);
  friend Codebook codebook_from_rows(unsigned n_stations, std::vector<Bitstream> rows);

 private:
  Codebook(unsigned n_stations, std::vector<Bitstream> rows)
      : n_stations_(n_stations), rows_(std::move(rows)) {}

  unsigned n_stations_ = 0;
  std::vector<Bitstream> rows_;
};

namespace detail {

inline std::uint64_t expected_v(unsigned n_rows) {
  const auto v = binomial(n_rows, (n_rows + 1) / 2);
  if (!v) throw size_limit_error("C(" + std::to_string(n_rows) + ", R) overflows 64 bits");
  return *v;
}

/// Checks every structural invariant; throws invariant_error on the first violation.
inline void validate(const Codebook& cb) {
  const unsigned rows = cb.n_rows();
  if (cb.n_stations() < 1) throw invariant_error("codebook needs at least one station");
  if (rows != Codebook::rows_for(cb.n_stations()))
    throw invariant_error("row count " + std::to_string(rows) + " does not match " +
                          std::to_string(cb.n_stations()) + " stations");
  if (rows > 63) throw size_limit_error("more than 63 rows");
  const std::uint64_t v = expected_v(rows);
  for (const Bitstream& r : cb.rows())
    if (r.size() != v)
      throw invariant_error("V=" + std::to_string(r.size()) + " but C(" + std::to_string(rows) + "," +
                            std::to_string(cb.r_weight()) + ")=" + std::to_string(v));

  const unsigned weight = cb.r_weight();
  std::vector<std::uint64_t> columns;
  columns.reserve(v);
  for (std::size_t c = 1; c <= v; ++c) {
    const std::uint64_t p = cb.column_pattern(c);
    if (static_cast<unsigned>(std::popcount(p)) != weight)
      throw invariant_error("column " + std::to_string(c) + " has weight " +
                            std::to_string(std::popcount(p)) + ", expected " + std::to_string(weight));
    columns.push_back(p);
  }
  std::sort(columns.begin(), columns.end());
  if (std::adjacent_find(columns.begin(), columns.end()) != columns.end())
    throw invariant_error("duplicate column");

  std::unordered_set<Bitstream, BitstreamHash> seen(cb.rows().begin(), cb.rows().end());
  if (seen.size() != rows) throw invariant_error("duplicate row");
}

}  // namespace detail

/// Builds M for n_stations; columns in descending order of their pattern value
/// (row 1 is the most significant bit), which reproduces M_3 = [110;101;011].
inline Codebook build_codebook(unsigned n_stations, const CodebookLimits& limits = {}) {
  if (n_stations < 1) throw precondition_error("n_stations must be at least 1");
  if (n_stations > limits.max_stations)
    throw size_limit_error("n_stations=" + std::to_string(n_stations) + " exceeds maximum " +
                           std::to_string(limits.max_stations));
  const unsigned n = Codebook::rows_for(n_stations);
  if (n > 63) throw size_limit_error("more than 63 rows");
  const unsigned weight = (n + 1) / 2;
  const std::uint64_t v = detail::expected_v(n);

  std::vector<Bitstream> rows(n, Bitstream(v));
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  // Descending weight-R patterns are the complements of ascending weight-(n-R)
  // patterns; walk the latter with Gosper's hack.
  const unsigned zeros = n - weight;
  std::uint64_t q = (std::uint64_t{1} << zeros) - 1;
  for (std::uint64_t col = 0; col < v; ++col) {
    const std::uint64_t p = full ^ q;
    for (unsigned r = 0; r < n; ++r)
      if ((p >> (n - 1 - r)) & 1U) rows[r].set(col);
    if (q == 0) break;  // n == 1: single all-ones column
    const std::uint64_t lowest = q & (~q + 1);
    const std::uint64_t ripple = q + lowest;
    q = (((ripple ^ q) >> 2) / lowest) | ripple;
  }
  return Codebook(n_stations, std::move(rows));
}

/// Wraps raw rows as a codebook after full invariant validation.
inline Codebook codebook_from_rows(unsigned n_stations, std::vector<Bitstream> rows) {
  Codebook cb(n_stations, std::move(rows));
  detail::validate(cb);
  return cb;
}

/// Codeword s_i of station i (1-based). The unassigned row of an even codebook
/// is not reachable through this call.
inline const Bitstream& codeword_for(const Codebook& cb, unsigned station) {
  if (station < 1 || station > cb.n_stations())
    throw std::out_of_range("station " + std::to_string(station) + " outside 1.." +
                            std::to_string(cb.n_stations()));
  return cb.row(station);
}

inline constexpr std::string_view codebook_magic = "COLLISIONCODE v1";

inline void write_codebook(std::ostream& out, const Codebook& cb) {
  out << codebook_magic << " N=" << cb.n_stations() << " ROWS=" << cb.n_rows() << " R=" << cb.r_weight()
      << " V=" << cb.v_length() << '\n';
  for (const Bitstream& r : cb.rows()) out << r.to_string() << '\n';
}

inline std::string serialize_codebook(const Codebook& cb) {
  std::ostringstream os;
  write_codebook(os, cb);
  return os.str();
}

namespace detail {

inline unsigned parse_header_field(std::string_view& rest, std::string_view key) {
  if (rest.substr(0, 1) != " " || rest.substr(1, key.size()) != key || rest.substr(1 + key.size(), 1) != "=")
    throw parse_error("codebook header: expected ' " + std::string(key) + "='");
  rest.remove_prefix(key.size() + 2);
  std::size_t len = 0;
  while (len < rest.size() && rest[len] >= '0' && rest[len] <= '9') ++len;
  if (len == 0 || len > 18) throw parse_error("codebook header: bad value for " + std::string(key));
  if (len > 1 && rest[0] == '0') throw parse_error("codebook header: leading zero in " + std::string(key));
  const unsigned long long value = std::stoull(std::string(rest.substr(0, len)));
  rest.remove_prefix(len);
  if (value > std::numeric_limits<unsigned>::max())
    throw parse_error("codebook header: " + std::string(key) + " too large");
  return static_cast<unsigned>(value);
}

}  // namespace detail

/// Parses the text format written by serialize_codebook and re-validates every
/// invariant. Rejects CRLF, trailing whitespace and a missing final newline.
inline Codebook parse_codebook(std::string_view doc, const CodebookLimits& limits = {}) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < doc.size()) {
    const std::size_t nl = doc.find('\n', pos);
    if (nl == std::string_view::npos) throw parse_error("final line does not end with LF");
    lines.push_back(doc.substr(pos, nl - pos));
    pos = nl + 1;
  }
  if (lines.empty()) throw parse_error("empty codebook document");

  std::string_view header = lines.front();
  if (header.substr(0, codebook_magic.size()) != codebook_magic)
    throw parse_error("codebook header must start with '" + std::string(codebook_magic) + "'");
  header.remove_prefix(codebook_magic.size());
  const unsigned n = detail::parse_header_field(header, "N");
  const unsigned rows = detail::parse_header_field(header, "ROWS");
  const unsigned r = detail::parse_header_field(header, "R");
  const unsigned v = detail::parse_header_field(header, "V");
  if (!header.empty()) throw parse_error("codebook header: trailing characters");

  if (n < 1) throw invariant_error("N must be at least 1");
  if (n > limits.max_stations)
    throw size_limit_error("N=" + std::to_string(n) + " exceeds maximum " + std::to_string(limits.max_stations));
  if (rows != Codebook::rows_for(n))
    throw invariant_error("ROWS=" + std::to_string(rows) + " inconsistent with N=" + std::to_string(n));
  if (r != (rows + 1) / 2)
    throw invariant_error("R=" + std::to_string(r) + " but (ROWS+1)/2=" + std::to_string((rows + 1) / 2));
  if (v != detail::expected_v(rows))
    throw invariant_error("V=" + std::to_string(v) + " but C(" + std::to_string(rows) + "," + std::to_string(r) +
                          ")=" + std::to_string(detail::expected_v(rows)));
  if (lines.size() != std::size_t{rows} + 1)
    throw parse_error("expected " + std::to_string(rows) + " rows, found " + std::to_string(lines.size() - 1));

  std::vector<Bitstream> bits;
  bits.reserve(rows);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].size() != v)
      throw parse_error("row " + std::to_string(i) + " has " + std::to_string(lines[i].size()) +
                        " characters, expected " + std::to_string(v));
    try {
      bits.push_back(Bitstream::from_string(lines[i]));
    } catch (const parse_error& e) {
      throw parse_error("row " + std::to_string(i) + ": " + e.what());
    }
  }
  return codebook_from_rows(n, std::move(bits));
}

inline Codebook read_codebook(std::istream& in, const CodebookLimits& limits = {}) {
  const std::string doc{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_codebook(doc, limits);
}

}  // namespace collision_code
