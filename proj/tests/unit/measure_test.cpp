#include <cmath>

#include <gtest/gtest.h>

#include "betanorm/error.hpp"
#include "betanorm/measure.hpp"
#include "betanorm/rng.hpp"
#include "fixtures.hpp"

using namespace betanorm;

namespace {

std::uint64_t fnv(const EmpiricalMeasure& m) {
    std::uint64_t h = 1469598103934665603ull;
    for (auto c : m.counts) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Largest per-cell deviation from expected masses, in binomial standard deviations.
double max_z(const EmpiricalMeasure& m, const std::vector<double>& p) {
    double z = 0;
    const double n = static_cast<double>(m.total);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double sd = std::sqrt(n * p[i] * (1 - p[i]));
        z = std::max(z, std::fabs(static_cast<double>(m.counts[i]) - n * p[i]) / sd);
    }
    return z;
}

}  // namespace

// Known-answer vectors of Philox4x32-10.
TEST(Philox, KnownAnswers) {
    using B = Philox::Block;
    EXPECT_EQ(Philox::block({0, 0, 0, 0}, {0, 0}), (B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(Philox::block({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}), (B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(Philox::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, SubstreamsDiffer) {
    Philox a(7, 0), b(7, 1), c(7, 0);
    EXPECT_NE(a(), b());
    Philox d(7, 0);
    EXPECT_EQ(c(), d());
}

TEST(Histogram, CoarsenKeepsTotals) {
    EmpiricalMeasure m(4);
    for (int i = 0; i < 16; ++i) m.add((i + 0.5L) / 16);
    m.add(1.0L);  // clamped into the last cell
    const auto c = m.coarsen(1);
    EXPECT_EQ(c.counts, (std::vector<std::uint64_t>{8, 9}));
    EXPECT_EQ(c.total, 17u);
    EXPECT_THROW(m.coarsen(5), Error);
    EXPECT_DOUBLE_EQ(total_variation(m, m), 0.0);
}

TEST(Erdos, ZeroSamples) {
    const auto m = sample_erdos(RealBase::of(*fixtures::golden()), 0, 30, 6, 1);
    EXPECT_EQ(m.total, 0u);
    for (auto c : m.counts) EXPECT_EQ(c, 0u);
}

TEST(Erdos, TruncationChecked) {
    const auto real = RealBase::of(*fixtures::golden());
    EXPECT_EQ(min_truncation(real, 8), 17);
    try {
        sample_erdos(real, 10, 16, 8, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TruncationTooCoarse);
    }
}

TEST(Erdos, LebesgueSanityIsUniform) {
    const auto m = sample_erdos(RealBase::lebesgue_sanity(), 200000, 40, 6, 11);
    EXPECT_LT(max_z(m, std::vector<double>(64, 1.0 / 64)), 4.0);
}

TEST(Erdos, ReferenceHistogramIsFrozen) {
    const auto real = RealBase::of(*fixtures::golden());
    const auto m = sample_erdos(real, 1000000, 17, 8, 1);
    EXPECT_EQ(m.total, 1000000u);
    EXPECT_EQ(m.counts[0], 500u);
    EXPECT_EQ(m.counts[128], 6537u);
    EXPECT_EQ(m.counts[255], 432u);
    EXPECT_EQ(fnv(m), 8069425290254883305ull);
    EXPECT_EQ(sample_erdos(real, 1000000, 17, 8, 1, 3).counts, m.counts);
}

TEST(Erdos, SupportFillsInterval) {
    for (auto base : {fixtures::golden(), fixtures::golden(3), fixtures::tribonacci()}) {
        const auto real = RealBase::of(*base);
        const auto m = sample_erdos(real, 100000, min_truncation(real, 6), 6, 2);
        for (auto c : m.counts) EXPECT_GT(c, 0u);
    }
}

TEST(Erdos, AffineChange) {
    const auto golden = RealBase::of(*fixtures::golden());
    EXPECT_NEAR(static_cast<double>(bc_to_erdos(golden, 0)), 0.5, 1e-18);
    EXPECT_NEAR(static_cast<double>(bc_to_erdos(golden, 1)), 0.8090169943749474241, 1e-15);
    EXPECT_NEAR(static_cast<double>(bc_to_erdos(golden, -1)), 0.1909830056250525759, 1e-15);
    try {
        bc_to_erdos(RealBase::of(*fixtures::golden(3)), 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::WrongAlphabet);
    }
}

TEST(Parry, Golden) {
    const auto p = parry_density(*fixtures::golden());
    ASSERT_EQ(p.values.size(), 2u);
    EXPECT_NEAR(static_cast<double>(p.values[0]), (5 + 3 * std::sqrt(5.0)) / 10, 1e-14);
    EXPECT_NEAR(static_cast<double>(p.values[1]), (5 + std::sqrt(5.0)) / 10, 1e-14);
    EXPECT_NEAR(static_cast<double>(p.breaks[1]), 0.6180339887498948482, 1e-15);
    EXPECT_NEAR(static_cast<double>(p.integral()), 1.0, 1e-12);
}

TEST(Parry, Tribonacci) {
    const auto p = parry_density(*fixtures::tribonacci());
    ASSERT_EQ(p.values.size(), 3u);
    EXPECT_NEAR(static_cast<double>(p.values[0]), 1.1374515722826291096, 1e-14);
    EXPECT_NEAR(static_cast<double>(p.values[1]), 0.95464803931433364517, 1e-14);
    EXPECT_NEAR(static_cast<double>(p.values[2]), 0.61841992231939255095, 1e-14);
    EXPECT_NEAR(static_cast<double>(p.breaks[1]), 0.54368901269207636157, 1e-15);
    EXPECT_NEAR(static_cast<double>(p.breaks[2]), 0.83928675521416113255, 1e-15);
    EXPECT_NEAR(static_cast<double>(p.integral()), 1.0, 1e-12);
}

TEST(Parry, PeriodicOrbitOfOne) {
    // The orbit of 1 ends in a fixed point; weights sum geometrically.
    const auto p = parry_density(*fixtures::square_golden());
    EXPECT_NEAR(static_cast<double>(p.integral()), 1.0, 1e-12);
    EXPECT_THROW(parry_density(*fixtures::square_golden(), 1), Error);
}

TEST(Parry, InvariantUnderShift) {
    const auto base = fixtures::golden();
    const auto real = RealBase::of(*base);
    const auto p = parry_density(*base);
    EmpiricalMeasure pushed(6);
    Philox rng(4);
    for (int i = 0; i < 1000000; ++i) pushed.add(real.shift(p.inverse_cdf(rng.uniform())));
    EXPECT_LT(max_z(pushed, p.cell_masses(6)), 4.0);
}

TEST(Singularity, IdenticalAndControl) {
    const auto p = parry_density(*fixtures::golden());
    const auto small = sample_density(p, 10000, 7, 1);
    const auto large = sample_density(p, 400000, 7, 1);
    const auto a = singularity_diagnostic(small, p, 1);
    const auto b = singularity_diagnostic(large, p, 1);
    EXPECT_LT(b.rows[0].tv, a.rows[0].tv);
    EXPECT_LT(b.rows[0].tv, 3 * b.rows[0].noise);
    EXPECT_FALSE(b.bounded_away);
    EXPECT_DOUBLE_EQ(total_variation(large, large), 0.0);
    EXPECT_THROW(singularity_diagnostic(small, p, 8), Error);
}

TEST(Singularity, RefinementNeverLowersTv) {
    const auto base = fixtures::golden();
    const auto real = RealBase::of(*base);
    const auto mu = sample_erdos(real, 50000, 20, 8, 5);
    const auto r = singularity_diagnostic(mu, parry_density(*base), 3);
    ASSERT_EQ(r.rows.size(), 4u);
    EXPECT_TRUE(r.non_decreasing);
    EXPECT_TRUE(r.bounded_away);
}

TEST(Invariant, BirkhoffLebesgue) {
    InvariantParams p;
    p.method = InvariantMethod::Birkhoff;
    p.samples = 20000;
    p.N = 40;
    p.bits = 6;
    const auto m = invariant_estimate(nullptr, RealBase::lebesgue_sanity(), p);
    EXPECT_EQ(m.total, 20000u * 30u);
    // Orbit points are correlated; allow a loose per-cell band.
    EXPECT_LT(max_z(m, std::vector<double>(64, 1.0 / 64)), 8.0);
}

TEST(Invariant, BirkhoffRejectsLongOrbits) {
    InvariantParams p;
    p.method = InvariantMethod::Birkhoff;
    p.N = 200;
    EXPECT_THROW(invariant_estimate(nullptr, RealBase::of(*fixtures::golden()), p), Error);
}

TEST(Invariant, TwoSidedNeedsExactBase) {
    EXPECT_THROW(invariant_estimate(nullptr, RealBase::of(*fixtures::golden()), InvariantParams{}), Error);
}

TEST(Invariant, EstimatorsAgree) {
    const auto base = fixtures::golden();
    const auto real = RealBase::of(*base);
    InvariantParams p;
    p.samples = 40000;
    p.bits = 6;
    const auto two = invariant_estimate(base.get(), real, p);
    p.method = InvariantMethod::Birkhoff;
    p.N = 60;
    const auto birk = invariant_estimate(base.get(), real, p);
    EXPECT_LT(total_variation(two, birk), 0.03);
    // Both differ from the Erdos measure itself.
    const auto mu = sample_erdos(real, 40000, 20, 6, 1);
    EXPECT_GT(total_variation(two, mu), 0.08);
}

TEST(Invariant, ThreadCountDoesNotMatter) {
    const auto base = fixtures::golden();
    InvariantParams p;
    p.samples = 3000;
    p.bits = 5;
    const auto a = invariant_estimate(base.get(), RealBase::of(*base), p);
    p.threads = 3;
    const auto b = invariant_estimate(base.get(), RealBase::of(*base), p);
    EXPECT_EQ(a.counts, b.counts);
}

TEST(QuasiInvariance, LebesgueHasNoViolations) {
    const auto real = RealBase::lebesgue_sanity();
    const auto mu = sample_erdos(real, 100000, 40, 6, 1);
    EXPECT_TRUE(quasi_invariance_check(real, mu, 2).violations.empty());
}

TEST(QuasiInvariance, GoldenHasNoViolations) {
    const auto real = RealBase::of(*fixtures::golden());
    const auto mu = sample_erdos(real, 200000, 20, 6, 1);
    const auto r = quasi_invariance_check(real, mu, 2);
    EXPECT_EQ(r.pushed.total, 200000u);
    EXPECT_TRUE(r.violations.empty());
}

TEST(QuasiInvariance, HalfSupportedControlIsCaught) {
    const auto real = RealBase::of(*fixtures::golden());
    const auto mu = sample_erdos(real, 100000, 20, 6, 1);
    EmpiricalMeasure half(6);
    Philox rng(3);
    for (int i = 0; i < 100000; ++i) half.add(rng.uniform() / 2);
    EXPECT_EQ(support_violations(mu, half, 5).size(), 32u);
}
