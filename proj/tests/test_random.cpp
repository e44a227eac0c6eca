#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "h1s2s/random.hpp"

using namespace h1s2s;

// Known-answer vectors of the reference Philox4x32-10 implementation.
TEST(Philox, KnownAnswers) {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  EXPECT_EQ(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0}),
            (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32::generate(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                                 K{0xffffffff, 0xffffffff}),
            (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32::generate(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                                 K{0xa4093822, 0x299f31d0}),
            (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RandomStream, SameAddressSameSequence) {
  RandomStream a(42, StreamDomain::kTest, 7, 3);
  RandomStream b(42, StreamDomain::kTest, 7, 3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u32(), b.next_u32());
}

TEST(RandomStream, DistinctAddressesDiffer) {
  std::set<std::uint32_t> first;
  for (std::uint64_t idx = 0; idx < 50; ++idx) {
    for (std::uint32_t sub = 0; sub < 4; ++sub) {
      first.insert(RandomStream(42, StreamDomain::kTest, idx, sub).next_u32());
    }
  }
  first.insert(RandomStream(42, StreamDomain::kTrajectory, 0).next_u32());
  first.insert(RandomStream(43, StreamDomain::kTest, 0).next_u32());
  EXPECT_EQ(first.size(), 202u);
}

TEST(RandomStream, UniformMoments) {
  RandomStream s(1, StreamDomain::kTest, 0);
  const int n = 200000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sum2 += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 3e-3);
  EXPECT_NEAR(sum2 / n - 0.25, 1.0 / 12.0, 2e-3);
}

TEST(RandomStream, NormalMoments) {
  RandomStream s(2, StreamDomain::kTest, 0);
  const int n = 200000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    sum += z;
    sum2 += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 1e-2);
  EXPECT_NEAR(sum2 / n, 1.0, 1e-2);
}

TEST(RandomStream, DeriveSeedIsStable) {
  EXPECT_EQ(derive_seed(5, 1, 2), derive_seed(5, 1, 2));
  EXPECT_NE(derive_seed(5, 1, 2), derive_seed(5, 2, 1));
  EXPECT_NE(derive_seed(5, 1, 2), derive_seed(6, 1, 2));
}
