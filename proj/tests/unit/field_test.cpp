#include <gtest/gtest.h>

#include <random>

#include "betanorm/error.hpp"
#include "betanorm/field.hpp"

using namespace betanorm;

namespace {

ContextPtr golden() { return FieldContext::create(MinimalPolynomial({-1, -1, 1})); }
ContextPtr tribonacci() { return FieldContext::create(MinimalPolynomial({-1, -1, -1, 1})); }

FieldElement random_element(const ContextPtr& ctx, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-40, 40), den(1, 9);
    std::vector<Rational> c;
    for (int i = 0; i < ctx->degree(); ++i) c.emplace_back(num(rng), den(rng));
    return FieldElement(ctx, c);
}

ErrorCode code_of(const std::vector<Integer>& poly) {
    try {
        FieldContext::create(MinimalPolynomial(poly));
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error";
    return ErrorCode::InvalidArgument;
}

// High-precision value under the real embedding, for cross-checking compare.
mpf_class high_precision(const FieldElement& a) {
    const auto [lo, hi] = a.context()->beta_interval(720);
    mpf_class beta((lo + hi) / 2, 720), acc(0, 720), p(1, 720);
    for (const auto& q : a.coeffs()) {
        acc += mpf_class(q, 720) * p;
        p *= beta;
    }
    return acc;
}

}  // namespace

TEST(Field, ValidatesBases) {
    auto g = golden();
    EXPECT_NEAR(static_cast<double>(g->beta_approx()), 1.6180339887498948482, 1e-15);
    ASSERT_EQ(g->conjugates().size(), 1u);
    EXPECT_NEAR(static_cast<double>(std::abs(g->conjugates()[0].center)), 0.6180339887498948482, 1e-15);

    auto t = tribonacci();
    EXPECT_NEAR(static_cast<double>(t->beta_approx()), 1.8392867552141611326, 1e-15);
    for (const auto& disk : t->conjugates()) {
        EXPECT_NEAR(static_cast<double>(std::abs(disk.center)), 0.7373527057603276752, 1e-15);
        EXPECT_LT(disk.modulus_bound(), 1);
    }
    auto s = FieldContext::create(MinimalPolynomial({1, -3, 1}));
    EXPECT_NEAR(static_cast<double>(s->beta_approx()), 2.6180339887498948482, 1e-15);
    EXPECT_NEAR(static_cast<double>(std::abs(s->conjugates()[0].center)), 0.3819660112501051518, 1e-15);
}

TEST(Field, RejectsBadPolynomials) {
    EXPECT_EQ(code_of({0, -2, 1}), ErrorCode::Reducible);
    EXPECT_EQ(code_of({-4, 0, 1}), ErrorCode::Reducible);
    EXPECT_EQ(code_of({1, 0, 1}), ErrorCode::NoDominantRealRoot);
    EXPECT_EQ(code_of({-1, -1, 2}), ErrorCode::NotMonic);
    EXPECT_EQ(code_of({1}), ErrorCode::InvalidArgument);
    // x^2 - 3x - 1: conjugate -0.30, Pisot; x^2 - x - 3: conjugate -1.30, not Pisot.
    EXPECT_NO_THROW(FieldContext::create(MinimalPolynomial({-1, -3, 1})));
    EXPECT_EQ(code_of({-3, -1, 1}), ErrorCode::NotPisot);
}

TEST(Field, DefiningRelation) {
    auto g = golden();
    const auto b = FieldElement::beta(g);
    EXPECT_EQ(b * b, b + Rational(1));
    EXPECT_EQ((b - Rational(1)) * b, FieldElement(g, Rational(1)));
    EXPECT_EQ(b + FieldElement(g), b);
    EXPECT_EQ(FieldElement(g, Rational(1)).mul_beta_inv(), b - Rational(1));
    EXPECT_EQ(b.mul_beta_inv().mul_beta(), b);
    EXPECT_EQ(b.pow(-2) * b.pow(2), FieldElement(g, Rational(1)));
    EXPECT_THROW(b + FieldElement::beta(tribonacci()), Error);
}

TEST(Field, CompareAndFloor) {
    auto g = golden();
    const auto b = FieldElement::beta(g);
    EXPECT_EQ(compare(b, Rational(2)), std::strong_ordering::less);
    EXPECT_EQ(compare(b * b, b + Rational(1)), std::strong_ordering::equal);
    EXPECT_EQ(compare(FieldElement(g, Rational(3)) - b, b), std::strong_ordering::less);
    EXPECT_EQ(floor(b), 1);
    EXPECT_EQ(floor(b * b), 2);
    EXPECT_EQ(floor(FieldElement(g)), 0);
    EXPECT_EQ(floor(-b), -2);
}

TEST(Field, CompareNearlyEqualValues) {
    // beta^-80 has large coefficients that cancel; the double fast path cannot decide it.
    auto g = golden();
    const auto b = FieldElement::beta(g);
    const FieldElement tiny = b.pow(-80);
    EXPECT_EQ(sign(tiny), 1);
    EXPECT_EQ(sign(-tiny), -1);
    EXPECT_EQ(floor(tiny + Rational(1)), 1);
    EXPECT_EQ(floor(FieldElement(g, Rational(1)) - tiny), 0);
}

TEST(Field, ConjugateBound) {
    auto g = golden();
    const auto b = FieldElement::beta(g);
    auto one = conjugate_bound(FieldElement(g, Rational(1)));
    EXPECT_LE(one[0], Rational(1000001, 1000000));
    EXPECT_NEAR(conjugate_bound(b)[0].get_d(), 0.6180339887498948, 1e-9);
    EXPECT_NEAR(conjugate_bound(b - Rational(1))[0].get_d(), 1.6180339887498948, 1e-9);
    EXPECT_GE(conjugate_bound(b)[0].get_d(), 0.6180339887498948);
}

TEST(Field, Parsing) {
    auto g = golden();
    EXPECT_EQ(parse_element(g, "1/2"), FieldElement(g, Rational(1, 2)));
    EXPECT_EQ(parse_element(g, "-1, 1"), FieldElement::beta(g) - Rational(1));
    EXPECT_EQ(parse_rational(" -6/4 "), Rational(-3, 2));
    EXPECT_THROW(parse_rational("1/0"), Error);
    EXPECT_THROW(parse_rational("x"), Error);
    EXPECT_THROW(parse_element(g, "1,2,3"), Error);
}

TEST(FieldProperty, RingAxioms) {
    std::mt19937_64 rng(11);
    for (auto ctx : {golden(), tribonacci()}) {
        for (int i = 0; i < 1000; ++i) {
            auto a = random_element(ctx, rng), b = random_element(ctx, rng), c = random_element(ctx, rng);
            ASSERT_EQ((a * b) * c, a * (b * c));
            ASSERT_EQ(a * (b + c), a * b + a * c);
            ASSERT_EQ(a + b, b + a);
            ASSERT_EQ(parse_element(ctx, a.to_string()), a);
            if (!a.is_zero()) ASSERT_EQ(a * a.inverse(), FieldElement(ctx, Rational(1)));
        }
    }
}

TEST(FieldProperty, CompareMatchesHighPrecision) {
    std::mt19937_64 rng(12);
    for (auto ctx : {golden(), tribonacci()}) {
        for (int i = 0; i < 1000; ++i) {
            auto a = random_element(ctx, rng), b = random_element(ctx, rng);
            const int expected = sgn(high_precision(a) - high_precision(b));
            const auto got = compare(a, b);
            ASSERT_EQ(expected, got < 0 ? -1 : got > 0 ? 1 : 0);
        }
    }
}

TEST(FieldProperty, FloorBrackets) {
    std::mt19937_64 rng(13);
    for (auto ctx : {golden(), tribonacci()}) {
        for (int i = 0; i < 1000; ++i) {
            auto a = random_element(ctx, rng);
            const Integer k = floor(a);
            ASSERT_NE(compare(a, Rational(k)), std::strong_ordering::less);
            ASSERT_EQ(compare(a, Rational(k + 1)), std::strong_ordering::less);
        }
    }
}
