#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "innerclt/rng.hpp"

using namespace innerclt::rng;

// Known-answer vectors of Philox4x32-10 (Salmon et al., Random123 kat_vectors).
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}),
            (Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                       {0xffffffffu, 0xffffffffu}),
            (Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                       {0xa4093822u, 0x299f31d0u}),
            (Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Philox, StreamsAreDistinct) {
  std::set<double> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    seen.insert(uniform(1, i));
    seen.insert(uniform(2, i));
    seen.insert(uniform(1, i, 1));
  }
  EXPECT_EQ(seen.size(), 3000u);
}

TEST(Philox, UniformRange) {
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = uniform(5, static_cast<std::uint64_t>(i));
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(Philox, NormalMoments) {
  double s = 0, s2 = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto g = normal_pair(8, static_cast<std::uint64_t>(i));
    s += g[0] + g[1];
    s2 += g[0] * g[0] + g[1] * g[1];
  }
  EXPECT_NEAR(s / (2 * n), 0.0, 0.01);
  EXPECT_NEAR(s2 / (2 * n), 1.0, 0.02);
}
