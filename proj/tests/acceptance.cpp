// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "collision_code/collision_code.hpp"
#include "collision_code/report_json.hpp"

using namespace collision_code;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// 1. Decoded bitstreams of all receiver combinations for three stations.
Check decoding_table_n3() {
  Check c;
  const auto start = Clock::now();
  const Codebook cb = build_codebook(3);
  const std::vector<std::pair<StationSet, std::string>> rows{
      {{1}, "110"}, {{2}, "101"}, {{3}, "011"}, {{1, 2}, "100"}, {{1, 3}, "010"}, {{2, 3}, "001"}, {{1, 2, 3}, "111"}};
  for (const auto& [subset, expected] : rows) {
    const std::string got = demodulate(superpose(cb, subset)).to_string();
    c.expect(got == expected, "{" + subset.to_string() + "} -> " + got + ", expected " + expected);
    c.expect(decode_exact(cb, Bitstream::from_string(expected)) == DecodeOutcome::identified(subset, 0),
             "decode of " + expected);
  }
  const double elapsed = seconds_since(start);
  c.expect(elapsed < 1.0, "runtime " + std::to_string(elapsed) + " s >= 1 s");
  return c;
}

// 2. Two-node PNC mapping: (s1, s3, a1, a3, a1+a3, s2).
Check pnc_xor_table() {
  Check c;
  constexpr std::array<std::array<int, 6>, 4> rows{{{1, 1, 1, 1, 2, 0}, {0, 1, -1, 1, 0, 1}, {1, 0, 1, -1, 0, 1},
                                                    {0, 0, -1, -1, -2, 0}}};
  for (const auto& r : rows) {
    const int a1 = modulate(r[0] == 1), a3 = modulate(r[1] == 1);
    c.expect(a1 == r[2] && a3 == r[3], "modulation row");
    c.expect(a1 + a3 == r[4], "sum row");
    const bool s2 = pnc_xor_map(a1 + a3);
    c.expect(s2 == (r[5] == 1), "demodulation row");
    c.expect(s2 == ((r[0] ^ r[1]) == 1), "XOR relation");
  }
  return c;
}

// 3. Majority demodulation for three transmitters, all 8 input columns.
Check majority_table() {
  Check c;
  constexpr std::array<std::array<std::uint8_t, 4>, 8> cols{{{0, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 1, 1, 1},
                                                             {1, 0, 0, 0}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 1}}};
  for (const auto& col : cols) {
    const std::array<std::uint8_t, 3> in{col[0], col[1], col[2]};
    c.expect(majority_demod_bit(in) == (col[3] == 1), "column " + std::to_string(col[0]) + std::to_string(col[1]) +
                                                          std::to_string(col[2]));
  }
  return c;
}

// 4. Exhaustive uniqueness for odd N up to 15, plus N=15 timing.
Check uniqueness(std::string& timing) {
  Check c;
  for (unsigned n = 1; n <= 15; n += 2) {
    const UniquenessReport r = verify_uniqueness(build_codebook(n), {}, 1);
    const std::uint64_t expected = (std::uint64_t{1} << n) - 1;
    c.expect(r.subsets_checked == expected && r.distinct_vectors == expected && r.collisions.empty(),
             "N=" + std::to_string(n) + ": " + std::to_string(r.distinct_vectors) + " distinct of " +
                 std::to_string(r.subsets_checked));
  }
  const Codebook cb15 = build_codebook(15);
  auto start = Clock::now();
  const UniquenessReport single = verify_uniqueness(cb15, {}, 1);
  const double t1 = seconds_since(start);
  start = Clock::now();
  const UniquenessReport eight = verify_uniqueness(cb15, {}, 8);
  const double t8 = seconds_since(start);
  c.expect(single.distinct_vectors == 32767 && eight.distinct_vectors == 32767, "N=15 distinct count");
  c.expect(t1 < 120.0, "N=15 single worker took " + std::to_string(t1) + " s");
  c.expect(t8 < 30.0, "N=15 eight workers took " + std::to_string(t8) + " s");
  char buf[96];
  std::snprintf(buf, sizeof buf, "N=15: %.2f s single worker, %.2f s with 8 workers", t1, t8);
  timing = buf;
  return c;
}

// 5. Codeword length.
Check codeword_length() {
  Check c;
  for (unsigned n = 1; n <= 15; n += 2)
    c.expect(build_codebook(n).v_length() == *binomial(n, (n + 1) / 2), "V formula at N=" + std::to_string(n));
  const std::size_t v15 = build_codebook(15).v_length();
  c.expect(v15 == 6435, "V(15) = " + std::to_string(v15));
  c.expect(v15 < 8000, "V(15) not below 8000");
  return c;
}

// 6. Witness columns for every proper non-empty subset, n_rows <= 11.
Check lemma_sweeps() {
  Check c;
  for (unsigned n = 1; n <= 11; n += 2) {
    const Codebook cb = build_codebook(n);
    const LemmaSweepReport r = sweep_lemmas(cb);
    c.expect(r.passed(), "N=" + std::to_string(n) + ": " + std::to_string(r.failures.size()) + " failures");
    c.expect(r.subsets_checked == (std::uint64_t{1} << n) - 2, "N=" + std::to_string(n) + " subset count");
    // Spot-check the per-subset API against the sweep on every subset.
    for (std::uint64_t m = 1; m + 1 < (std::uint64_t{1} << n); ++m) {
      const StationSet s(m);
      const WitnessReport w = s.size() % 2 ? find_lemma1_witness(cb, s) : find_lemma2_witness(cb, s);
      c.expect(f_value(cb, s, w.column) == w.f_value, "witness value for {" + s.to_string() + "}");
    }
  }
  return c;
}

// 7. Additivity and subtractivity on 1000 seeded pairs per N.
Check claims() {
  Check c;
  for (unsigned n = 3; n <= 15; ++n) {
    const AdditivityReport r = check_additivity(build_codebook(n), 1000, 1000 + n);
    c.expect(r.passed(), "N=" + std::to_string(n) + " counterexample");
  }
  return c;
}

// 8. No non-empty subset demodulates to all zeros.
Check zero_unreachable() {
  Check c;
  for (unsigned n = 1; n <= 13; ++n) {
    const ZeroVectorReport r = verify_no_zero_vector(build_codebook(n));
    c.expect(r.passed(), "N=" + std::to_string(n) + " offending {" + (r.offending ? r.offending->to_string() : "") + "}");
  }
  return c;
}

// 9. Four stations reuse the five-row matrix and decode uniquely.
Check even_n() {
  Check c;
  const Codebook four = build_codebook(4), five = build_codebook(5);
  c.expect(four.rows() == five.rows(), "matrix differs from N=5");
  std::set<std::string> seen;
  for (std::uint64_t m = 1; m < 16; ++m) {
    const StationSet s(m);
    const Bitstream rx = demodulate(superpose(four, s));
    seen.insert(rx.to_string());
    c.expect(decode_exact(four, rx) == DecodeOutcome::identified(s, 0), "decode {" + s.to_string() + "}");
  }
  c.expect(seen.size() == 15, "only " + std::to_string(seen.size()) + " distinct vectors");
  return c;
}

// 10. decode_exact(demodulate(superpose(S))) == S for every non-empty S, N <= 15.
Check round_trip() {
  Check c;
  for (unsigned n = 1; n <= 15; ++n) {
    const Codebook cb = build_codebook(n);
    const Decoder decoder(cb);
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
      const StationSet s(m);
      const DecodeOutcome o = decoder.decode_exact(demodulate(superpose(cb, s)));
      if (o != DecodeOutcome::identified(s, 0)) {
        c.expect(false, "N=" + std::to_string(n) + " {" + s.to_string() + "}");
        break;
      }
    }
  }
  return c;
}

// 11. Ideal-channel sessions confirm exactly the receivers; seeds reproduce.
Check protocol() {
  Check c;
  for (unsigned n : {1U, 3U, 4U, 7U, 10U, 15U})
    for (double loss : {0.0, 0.1, 0.3, 0.5, 0.8, 1.0})
      for (std::uint64_t seed : {1ULL, 7ULL, 42ULL}) {
        const SessionConfig cfg{n, loss, 20, seed, 0.0};
        const SessionStats s = run_session(cfg);
        for (const RoundResult& r : s.per_round)
          c.expect(r.newly_confirmed == r.actually_received,
                   "N=" + std::to_string(n) + " round " + std::to_string(r.round_index));
        c.expect(to_json(s).dump() == to_json(run_session(cfg)).dump(), "session JSON not reproducible");
      }
  return c;
}

}  // namespace

int main() {
  std::string timing;
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
      {"AC1  decoded bitstreams for N=3", decoding_table_n3},
      {"AC2  two-node PNC XOR mapping", pnc_xor_table},
      {"AC3  three-transmitter majority", majority_table},
      {"AC4  uniqueness exhaustive for N in {1..15 odd}", [&] { return uniqueness(timing); }},
      {"AC5  V = C(N,(N+1)/2), V(15) = 6435 < 8000", codeword_length},
      {"AC6  lemma witness sweeps, n_rows <= 11", lemma_sweeps},
      {"AC7  additivity/subtractivity, 1000 pairs per N in 3..15", claims},
      {"AC8  all-zero vector unreachable, N <= 13", zero_unreachable},
      {"AC9  even N=4 uses N=5 matrix, 15 subsets unique", even_n},
      {"AC10 decode round trip exhaustive, N <= 15", round_trip},
      {"AC11 protocol exactness and seed reproducibility", protocol},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = Clock::now();
    Check result;
    try {
      result = fn();
    } catch (const std::exception& e) {
      result = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %-58s %8.2f s%s%s\n", result.ok ? "PASS" : "FAIL", name.c_str(), seconds_since(start),
                result.ok ? "" : "  -- ", result.detail.c_str());
    failed += result.ok ? 0 : 1;
  }
  if (!timing.empty()) std::printf("       %s\n", timing.c_str());
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
