#include <functional>

#include <gtest/gtest.h>

#include "betanorm/error.hpp"
#include "betanorm/expansion.hpp"
#include "betanorm/normalization.hpp"
#include "betanorm/wf.hpp"
#include "fixtures.hpp"

using namespace betanorm;

namespace {

FieldElement beta_pow(const PisotBase& base, long e) { return FieldElement::beta(base.context()).pow(e); }

// A rational in (beta^-(k+1), beta^-k]; exact for the killer depth.
Rational just_below_beta_pow(const PisotBase& base, long k) {
    const FieldElement t = beta_pow(base, -k);
    Rational r(static_cast<double>(t.approx()));
    while (compare(t, r) == std::strong_ordering::less) r *= Rational(999999, 1000000);
    return r;
}

}  // namespace

TEST(Killer, GoldenDepth) {
    auto base = fixtures::golden();
    // delta just below beta^-5: killers start after six zeros.
    const Rational delta = just_below_beta_pow(*base, 5);
    for (const char* y : {"0", "-1,1", "2,-1"}) {
        const FieldElement yv = parse_element(base->context(), y);
        const auto cert = find_period_killer(*base, yv, delta, 12);
        ASSERT_TRUE(cert) << y;
        if (yv.is_zero()) {
            EXPECT_EQ(cert->f, (DigitWord{0, 0, 0, 0, 0, 0, 1}));
        }
        EXPECT_TRUE(verify(*base, *cert));
    }
}

TEST(Killer, ZeroGetsSingleDigit) {
    auto base = fixtures::golden();
    const auto cert = find_period_killer(*base, FieldElement(base->context()), Rational(1, 10), 10);
    ASSERT_TRUE(cert);
    // beta^-5 ~ 0.090 is the first power below 1/10, so f = 0^5 1.
    EXPECT_EQ(cert->f, (DigitWord{0, 0, 0, 0, 0, 1}));
    EXPECT_EQ(cert->proof, PeriodicWord({0, 0, 0, 0, 0, 1}, {}));
}

TEST(Killer, SquareGoldenPeriodIsFrozen) {
    auto base = fixtures::square_golden();
    // y = value(1^inf) = beta - 2; delta = 2/(beta-1) beta^-2 rounded down.
    const FieldElement y = parse_element(base->context(), "-2,1");
    const FieldElement beta = FieldElement::beta(base->context());
    const FieldElement exact = FieldElement(base->context(), Rational(2)) / (beta - Rational(1)) * beta.pow(-2);
    Rational delta(static_cast<double>(exact.approx()) * 0.999999);
    ASSERT_TRUE(compare(exact, delta) == std::strong_ordering::greater);
    EXPECT_FALSE(greedy_expand(*base, y).is_finite());
    const auto cert = find_period_killer(*base, y, delta, 12);
    ASSERT_TRUE(cert);
    EXPECT_EQ(cert->f, (DigitWord{0, 0, 1}));
    EXPECT_EQ(cert->proof, PeriodicWord({1, 2}, {}));
    EXPECT_TRUE(verify(*base, *cert));
}

TEST(Killer, TamperedCertificateFails) {
    auto base = fixtures::square_golden();
    const FieldElement y = parse_element(base->context(), "-2,1");
    auto cert = find_period_killer(*base, y, Rational(1, 5), 12);
    ASSERT_TRUE(cert);
    auto bad = *cert;
    bad.delta = Rational(1, 1000);
    EXPECT_FALSE(verify(*base, bad));
    bad = *cert;
    bad.f.push_back(2);
    EXPECT_FALSE(verify(*base, bad));
    bad = *cert;
    bad.proof = PeriodicWord({1}, {});
    EXPECT_FALSE(verify(*base, bad));
}

TEST(Killer, RejectsBadArguments) {
    auto base = fixtures::golden();
    EXPECT_THROW(find_period_killer(*base, FieldElement(base->context(), Rational(1, 2)), Rational(1, 10), 8),
                 Error);
    EXPECT_THROW(find_period_killer(*base, FieldElement(base->context()), Rational(0), 8), Error);
    EXPECT_FALSE(find_period_killer(*base, FieldElement(base->context()), Rational(1, 1000000), 5));
}

TEST(WfCheck, FinitaryBases) {
    for (auto base : {fixtures::golden(), fixtures::tribonacci()}) {
        const auto r = wf_check(*base);
        EXPECT_EQ(r.status, WfStatus::ProvenForAttractor);
        EXPECT_TRUE(r.killers.empty());
        EXPECT_EQ(r.L2, 0);
        EXPECT_EQ(r.p, 0);
        EXPECT_EQ(r.L, r.L1);
    }
    EXPECT_EQ(wf_check(*fixtures::tribonacci()).L1, 4);
}

TEST(WfCheck, GoldenThreeDigitsUsesNormalizationPeriods) {
    const auto r = wf_check(*fixtures::golden(3));
    EXPECT_EQ(r.status, WfStatus::ProvenForAttractor);
    EXPECT_EQ(r.p_integer, 0);
    EXPECT_GT(r.p_normalization, 0);
    EXPECT_EQ(r.L, r.L1 + r.p_normalization);
}

TEST(WfCheck, SquareGolden) {
    const auto r = wf_check(*fixtures::square_golden());
    ASSERT_EQ(r.killers.size(), 1u);
    EXPECT_EQ(r.killers[0].period, DigitWord{1});
    ASSERT_TRUE(r.killers[0].killer);
    EXPECT_EQ(r.killers[0].killer->f, (DigitWord{0, 0, 1}));
    EXPECT_EQ(r.status, WfStatus::ProvenForAttractor);
    EXPECT_EQ(r.L1, 1);
    EXPECT_EQ(r.L2, 1);
    EXPECT_EQ(r.p_integer, 1);
    EXPECT_EQ(r.p_normalization, 3);
    EXPECT_EQ(r.L, 5);
}

TEST(WfCheck, ShortSearchIsInconclusive) {
    WfBounds bounds;
    bounds.max_killer_len = 2;
    const auto r = wf_check(*fixtures::square_golden(), bounds);
    EXPECT_EQ(r.status, WfStatus::Inconclusive);
    EXPECT_FALSE(r.killers[0].killer);
}

TEST(Completion, FiniteWordsNeedNothing) {
    auto base = fixtures::golden();
    EXPECT_EQ(complete_to_finite(*base, {1, 0, 1, 1}, 3), DigitWord{});
}

TEST(Completion, ShortestSuffix) {
    auto base = fixtures::golden(3);
    // "1" has an infinite normalization; appending is searched shortest first.
    const auto s = complete_to_finite(*base, {1}, 6);
    ASSERT_TRUE(s);
    DigitWord w{1};
    w.insert(w.end(), s->begin(), s->end());
    EXPECT_TRUE(normalize_finite(*base, w).finite());
    for (std::size_t len = 0; len < s->size(); ++len) {
        EXPECT_FALSE(complete_to_finite(*base, {1}, len)) << len;
    }
}

// Every word over the alphabet normalizes finitely when the attractor is {empty}.
TEST(Completion, ExhaustiveFinitenessToLengthTen) {
    for (auto base : {fixtures::golden(), fixtures::tribonacci()}) {
        PrefixNormalizer pn(*base);
        std::size_t checked = 0;
        // Depth-first over all binary words up to length 10.
        std::function<void(int)> walk = [&](int depth) {
            ASSERT_TRUE(pn.finite());
            ++checked;
            if (depth == 10) return;
            for (int x = 0; x < 2; ++x) {
                pn.push(x);
                walk(depth + 1);
                pn.pop();
            }
        };
        walk(0);
        EXPECT_EQ(checked, 2047u);
    }
}

TEST(Completion, KillerLengthBoundsEveryPrefix) {
    for (auto base : {fixtures::golden(), fixtures::golden(3), fixtures::tribonacci()}) {
        const auto r = wf_check(*base);
        RandomSource src(base->d(), 7);
        for (int i = 0; i < 200; ++i) {
            DigitWord w(1 + static_cast<std::size_t>(i % 40));
            for (auto& x : w) x = *src.next();
            const auto s = complete_to_finite(*base, w, static_cast<std::size_t>(r.L));
            ASSERT_TRUE(s) << i;
            w.insert(w.end(), s->begin(), s->end());
            EXPECT_TRUE(normalize_finite(*base, w).finite());
        }
    }
}

// With c = (beta - 1)/2 outside Z[beta] no nonzero word reaches Fin(beta)
// here, so the Z[beta] killer does not give a digit suffix.
TEST(Completion, SquareGoldenHasNoFiniteWords) {
    auto base = fixtures::square_golden();
    PrefixNormalizer pn(*base);
    std::size_t finite = 0;
    std::function<void(int, bool)> walk = [&](int depth, bool nonzero) {
        if (nonzero && pn.finite()) ++finite;
        if (depth == 9) return;
        for (int x = 0; x < 3; ++x) {
            pn.push(x);
            walk(depth + 1, nonzero || x != 0);
            pn.pop();
        }
    };
    walk(0, false);
    EXPECT_EQ(finite, 0u);
    EXPECT_FALSE(complete_to_finite(*base, {1}, 8));
}

TEST(Gamma, RowsAndBound) {
    auto base = fixtures::golden(3);
    const auto rows = gamma_experiment(*base, 4, 30, 5000, 1);
    ASSERT_EQ(rows.size(), 31u);
    EXPECT_EQ(rows[0].observed, 1.0);
    EXPECT_EQ(rows[0].bound, 1.0);
    for (std::size_t n = 1; n < rows.size(); ++n) {
        EXPECT_LE(rows[n].observed, rows[n - 1].observed);
        EXPECT_LE(rows[n].observed, rows[n].bound + 3 * rows[n].sigma + 1e-12);
    }
}

TEST(Gamma, FinitaryBaseDiesImmediately) {
    const auto rows = gamma_experiment(*fixtures::golden(), 1, 5, 1000, 3);
    EXPECT_EQ(rows[1].observed, 0.0);
}

TEST(Gamma, ThreadCountDoesNotMatter) {
    auto base = fixtures::golden(3);
    const auto a = gamma_experiment(*base, 4, 20, 10000, 5, 1);
    const auto b = gamma_experiment(*base, 4, 20, 10000, 5, 3);
    for (std::size_t n = 0; n < a.size(); ++n) EXPECT_EQ(a[n].observed, b[n].observed);
}

TEST(Gamma, RejectsBadL) { EXPECT_THROW(gamma_experiment(*fixtures::golden(), 0, 5, 10, 1), Error); }
