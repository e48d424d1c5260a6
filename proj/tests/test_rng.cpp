#include <gtest/gtest.h>

#include <set>

#include "wulff/rng.hpp"

using namespace wulff;

TEST(CounterRng, SameKeySameSequence)
{
    CounterRng a(RngSeed{42, 7});
    CounterRng b(RngSeed{42, 7});
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(CounterRng, StreamsDiffer)
{
    CounterRng a(RngSeed{42, 0});
    CounterRng b(RngSeed{42, 1});
    int same = 0;
    for (int i = 0; i < 1000; ++i) same += a() == b();
    EXPECT_EQ(same, 0);
}

TEST(CounterRng, RandomAccessMatchesSequential)
{
    CounterRng a(RngSeed{3, 9});
    std::vector<std::uint64_t> seq;
    for (int i = 0; i < 50; ++i) seq.push_back(a());
    for (int i = 0; i < 50; ++i) EXPECT_EQ(a.at(static_cast<std::uint64_t>(i)), seq[static_cast<std::size_t>(i)]);
}

TEST(CounterRng, UniformMoments)
{
    CounterRng r(RngSeed{1, 2});
    const int N = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < N; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        s += u;
        s2 += u * u;
    }
    EXPECT_NEAR(s / N, 0.5, 0.005);
    EXPECT_NEAR(s2 / N - 0.25, 1.0 / 12.0, 0.003);
}

TEST(CounterRng, NormalMoments)
{
    CounterRng r(RngSeed{5, 5});
    const int N = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < N; ++i) {
        const double g = r.normal();
        s += g;
        s2 += g * g;
    }
    EXPECT_NEAR(s / N, 0.0, 0.01);
    EXPECT_NEAR(s2 / N, 1.0, 0.02);
}

TEST(RngSeed, DeriveIsDeterministicAndDistinct)
{
    const RngSeed base{11, 0};
    EXPECT_EQ(base.derive(3), base.derive(3));
    std::set<std::uint64_t> streams;
    for (std::uint64_t i = 0; i < 1000; ++i) streams.insert(base.derive(i).stream);
    EXPECT_EQ(streams.size(), 1000u);
}

TEST(ShiftedHalton, LowDiscrepancyMean)
{
    ShiftedHalton h(3, RngSeed{1, 1});
    Eigen::Vector3d p, acc = Eigen::Vector3d::Zero();
    const int N = 4096;
    for (int i = 0; i < N; ++i) {
        h.next(p);
        ASSERT_TRUE((p.array() >= 0.0).all() && (p.array() < 1.0).all());
        acc += p;
    }
    // Much tighter than the 1/sqrt(N) ~ 0.0045 of i.i.d. sampling.
    EXPECT_NEAR(acc(0) / N, 0.5, 1e-3);
    EXPECT_NEAR(acc(1) / N, 0.5, 1e-3);
    EXPECT_NEAR(acc(2) / N, 0.5, 2e-3);
}
