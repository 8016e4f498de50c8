#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "collision_code/channel.hpp"
#include "collision_code/rng.hpp"
#include "test_support.hpp"

using namespace collision_code;

TEST(Modulate, MapsBitsToAmplitudes) {
  EXPECT_EQ(modulate(true), 1);
  EXPECT_EQ(modulate(false), -1);
  EXPECT_NE(modulate(true), modulate(false));
}

TEST(Superpose, ThreeStationExamples) {
  const Codebook cb = build_codebook(3);
  EXPECT_EQ(superpose(cb, {1, 2}).sums, (std::vector<int>{2, 0, 0}));
  EXPECT_EQ(superpose(cb, {}).sums, (std::vector<int>{0, 0, 0}));
  EXPECT_EQ(superpose(cb, {1, 2, 3}).sums, (std::vector<int>{1, 1, 1}));
  EXPECT_EQ(superpose(cb, {1, 2}).subset_size, 2U);
}

TEST(Superpose, RejectsUnknownStation) {
  const Codebook cb = build_codebook(3);
  EXPECT_THROW((void)superpose(cb, {4}), std::out_of_range);
  // The spare row of an even codebook is not a station.
  EXPECT_THROW((void)superpose(build_codebook(4), {5}), std::out_of_range);
}

TEST(Superpose, MatchesBruteForceSums) {
  for (unsigned n : {5U, 7U, 9U}) {
    const Codebook cb = build_codebook(n);
    const auto m = oracle::matrix(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask)
      ASSERT_EQ(superpose(cb, StationSet(mask)).sums, oracle::sums(m, mask)) << "n=" << n << " mask=" << mask;
  }
}

TEST(Demodulate, Examples) {
  EXPECT_EQ(demodulate({{2, 0, 0}, 2}).to_string(), "100");
  EXPECT_EQ(demodulate({{1, 1, 1}, 3}).to_string(), "111");
  EXPECT_EQ(demodulate({{0, 0, 0}, 0}).to_string(), "000");
  EXPECT_EQ(demodulate({{-1, 3, -3, 0}, 3}).to_string(), "0100");
}

TEST(MajorityDemodBit, AllThreeTransmitterInputs) {
  // Inputs in the order N1,N2,N3 = 000,001,...,111 and the demodulated N0.
  constexpr std::array<int, 8> expected{0, 0, 0, 1, 0, 1, 1, 1};
  for (unsigned x = 0; x < 8; ++x) {
    const std::array<std::uint8_t, 3> bits{static_cast<std::uint8_t>((x >> 2) & 1U),
                                           static_cast<std::uint8_t>((x >> 1) & 1U),
                                           static_cast<std::uint8_t>(x & 1U)};
    EXPECT_EQ(majority_demod_bit(bits), expected[x] == 1) << "input " << x;
  }
}

TEST(MajorityDemodBit, TieAndErrors) {
  const std::array<std::uint8_t, 2> tie{0, 1};
  EXPECT_FALSE(majority_demod_bit(tie));
  const std::array<std::uint8_t, 3> a{0, 1, 1}, b{1, 0, 0};
  EXPECT_TRUE(majority_demod_bit(a));
  EXPECT_FALSE(majority_demod_bit(b));
  EXPECT_THROW((void)majority_demod_bit(std::span<const std::uint8_t>{}), precondition_error);
  const std::array<std::uint8_t, 1> bad{2};
  EXPECT_THROW((void)majority_demod_bit(bad), precondition_error);
}

TEST(MajorityDemodBit, AgreesWithDemodulatedSum) {
  for (unsigned k = 1; k <= 9; ++k) {
    for (unsigned x = 0; x < (1U << k); ++x) {
      std::vector<std::uint8_t> bits;
      int sum = 0;
      for (unsigned i = 0; i < k; ++i) {
        bits.push_back(static_cast<std::uint8_t>((x >> i) & 1U));
        sum += modulate(bits.back() == 1);
      }
      ASSERT_EQ(majority_demod_bit(bits), demodulate({{sum}, k}).test(0));
    }
  }
}

TEST(PncXorMap, TwoNodeMapping) {
  EXPECT_FALSE(pnc_xor_map(2));
  EXPECT_TRUE(pnc_xor_map(0));
  EXPECT_FALSE(pnc_xor_map(-2));
  for (int bad : {-3, -1, 1, 3}) EXPECT_THROW((void)pnc_xor_map(bad), precondition_error);
}

TEST(PncXorMap, RealisesXorOnEveryCodebookRowPair) {
  const Codebook cb = build_codebook(3);
  for (unsigned a = 1; a <= 3; ++a)
    for (unsigned b = a + 1; b <= 3; ++b)
      for (std::size_t c = 1; c <= cb.v_length(); ++c) {
        const bool s1 = cb.bit(a, c), s3 = cb.bit(b, c);
        EXPECT_EQ(pnc_xor_map(modulate(s1) + modulate(s3)), s1 != s3);
        EXPECT_EQ(pnc_xor_map(superpose(cb, {a, b}).sums[c - 1]), s1 != s3);
      }
}

TEST(ChannelProperties, ParityBoundFullSetSingleton) {
  for (unsigned n : {1U, 3U, 5U, 7U, 9U}) {
    const Codebook cb = build_codebook(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      const StationSet s(mask);
      const AmplitudeProfile p = superpose(cb, s);
      const int k = static_cast<int>(s.size());
      for (int f : p.sums) {
        ASSERT_LE(std::abs(f), k);
        ASSERT_EQ(((f % 2) + 2) % 2, k % 2);
      }
    }
    for (int f : superpose(cb, StationSet::all(n)).sums) ASSERT_EQ(f, 1) << "n=" << n;
    for (unsigned i = 1; i <= n; ++i) ASSERT_EQ(demodulate(superpose(cb, {i})), codeword_for(cb, i));
  }
}

TEST(ChannelProperties, AdditivityAndSubtractivity) {
  const Codebook cb = build_codebook(7);
  const std::uint64_t full = (1U << 7) - 1;
  for (std::uint64_t g1 = 0; g1 <= full; ++g1) {
    // Every disjoint partner of g1, and every superset.
    for (std::uint64_t g2 = full & ~g1;; g2 = (g2 - 1) & (full & ~g1)) {
      const auto a = superpose(cb, StationSet(g1)).sums, b = superpose(cb, StationSet(g2)).sums;
      const auto u = superpose(cb, StationSet(g1 | g2)).sums;
      for (std::size_t c = 0; c < u.size(); ++c) {
        ASSERT_EQ(u[c], a[c] + b[c]);
        // g1 is nested in g1|g2 and (g1|g2) \ g1 == g2.
        ASSERT_EQ(b[c], u[c] - a[c]);
      }
      if (g2 == 0) break;
    }
  }
}

TEST(ReceivedVector, EqualsDemodulatedSuperposition) {
  SeededRng rng(99);
  for (unsigned n = 1; n <= 17; ++n) {
    const Codebook cb = build_codebook(n);
    for (int t = 0; t < 40; ++t) {
      const StationSet s(rng.next_u64() & StationSet::all(n).mask());
      ASSERT_EQ(received_vector(cb, s), demodulate(superpose(cb, s))) << "n=" << n << " s=" << s.to_string();
    }
  }
}

TEST(SuperposeNoisy, ZeroSigmaIsExact) {
  const Codebook cb = build_codebook(3);
  const NoisyProfile p = superpose_noisy(cb, {1, 2, 3}, 0.0, 123);
  EXPECT_EQ(p.samples, (std::vector<double>{1.0, 1.0, 1.0}));
  EXPECT_EQ(threshold_noisy(superpose_noisy(cb, {1, 2}, 0.0, 5)).to_string(), "100");
}

TEST(SuperposeNoisy, SameSeedSameSamples) {
  const Codebook cb = build_codebook(9);
  const auto a = superpose_noisy(cb, {1, 4, 9}, 0.7, 2024);
  const auto b = superpose_noisy(cb, {1, 4, 9}, 0.7, 2024);
  const auto c = superpose_noisy(cb, {1, 4, 9}, 0.7, 2025);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_NE(a.samples, c.samples);
}

TEST(SuperposeNoisy, RejectsBadSigma) {
  const Codebook cb = build_codebook(3);
  EXPECT_THROW((void)superpose_noisy(cb, {1}, -0.1, 0), precondition_error);
  EXPECT_THROW((void)superpose_noisy(cb, {1}, std::nan(""), 0), precondition_error);
  EXPECT_THROW((void)superpose_noisy(cb, {4}, 0.1, 0), std::out_of_range);
}

TEST(SuperposeNoisy, GoldenSeed42) {
  const Codebook cb = build_codebook(3);
  const NoisyProfile p = superpose_noisy(cb, {1}, 0.1, 42);
  const std::array<double, 3> clean{1, 1, -1};
  for (std::size_t c = 0; c < 3; ++c) EXPECT_LT(std::abs(p.samples[c] - clean[c]), 1.0);
  golden::check("noisy_n3_station1_sigma0.1_seed42.json", nlohmann::json{{"samples", p.samples}});
}

TEST(ThresholdNoisy, HalfThreshold) {
  EXPECT_EQ(threshold_noisy({{0.49, 0.51, -3.0}, 0.1, 0}).to_string(), "010");
  EXPECT_EQ(threshold_noisy({{0.5}, 0.1, 0}).to_string(), "0");
}

TEST(ThresholdNoisy, MonteCarloAgreementAtLowNoise) {
  const Codebook cb = build_codebook(3);
  int agree = 0;
  for (std::uint64_t seed = 1; seed <= 10000; ++seed) {
    const StationSet s(seed % 7 + 1);
    agree += threshold_noisy(superpose_noisy(cb, s, 0.1, seed)) == demodulate(superpose(cb, s));
  }
  EXPECT_GE(agree, 9900);
}

TEST(SeededRng, PortableStream) {
  // First outputs of mt19937_64 with the default seed are fixed by the standard.
  SeededRng rng(5489);
  EXPECT_EQ(rng.next_u64(), 14514284786278117030ULL);
  SeededRng u(1);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 1.0);
  }
}
