#include "bkmod/series.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace bkmod;

namespace {

std::vector<std::vector<int>> window(const LaurentSeries& s, int lo, int hi) {
    std::vector<std::vector<int>> out;
    for (int e = lo; e < hi; ++e) out.push_back(s.field()->coeffs(s.coeff(e)));
    return out;
}

} // namespace

TEST(FieldSpec, RejectsBadInput) {
    EXPECT_THROW(FieldSpec::make(4, {1, 1}), InvalidArgument);
    EXPECT_THROW(FieldSpec::make(3, {1, 0, 1, 2}), InvalidArgument); // not monic
    EXPECT_THROW(FieldSpec::make(2, {1, 0, 1}), InvalidArgument);    // (x + 1)^2
    EXPECT_THROW(FieldSpec::make(3, {2, 0, 1}), InvalidArgument);    // x^2 - 1
    EXPECT_NO_THROW(FieldSpec::make(3, {1, 0, 1}));
    EXPECT_THROW(FieldSpec::standard(6, 1), InvalidArgument);
}

TEST(FieldSpec, MultiplicationMatchesPolynomialOracle) {
    for (auto [p, m] : {std::pair{2, 3}, {3, 2}, {2, 4}, {5, 2}, {3, 3}}) {
        FieldPtr f = FieldSpec::standard(p, m);
        const auto& F = *f;
        for (Fq a = 0; a < F.q(); ++a)
            for (Fq b = 0; b < F.q(); ++b) {
                auto want = oracle::field_mul(F.coeffs(a), F.coeffs(b), F.modulus(), p);
                ASSERT_EQ(F.coeffs(F.mul(a, b)), want) << "p=" << p << " m=" << m;
                ASSERT_EQ(F.coeffs(F.add(a, b)), oracle::field_add(F.coeffs(a), F.coeffs(b), p));
            }
        for (Fq a = 1; a < F.q(); ++a) EXPECT_EQ(F.mul(a, F.inv(a)), 1u);
    }
}

TEST(FieldSpec, UserModulusIsHonoured) {
    // F_9 = F_3[x]/(x^2 + 1): x * x = -1
    FieldPtr f = FieldSpec::make(3, {1, 0, 1});
    Fq x = f->from_coeffs({0, 1});
    EXPECT_EQ(f->coeffs(f->mul(x, x)), (std::vector<int>{2, 0}));
    // generator really generates
    Fq g = f->generator(), y = 1;
    int order = 0;
    do {
        y = f->mul(y, g);
        ++order;
    } while (y != 1);
    EXPECT_EQ(order, 8);
}

TEST(Frobenius, Binomial) {
    for (int p : {2, 3, 5}) {
        FieldPtr f = FieldSpec::standard(p, 1);
        LaurentSeries s = LaurentSeries::polynomial(f, {1, 1});
        LaurentSeries t = frobenius_substitute(s);
        std::vector<Fq> want(static_cast<std::size_t>(p + 1), 0);
        want[0] = want[p] = 1;
        EXPECT_TRUE(t.agrees_with(LaurentSeries::polynomial(f, want)));
        EXPECT_TRUE(t.is_exact());
    }
}

TEST(Frobenius, ZeroStaysZero) {
    FieldPtr f = FieldSpec::standard(3, 2);
    EXPECT_TRUE(frobenius_substitute(LaurentSeries::zero(f)).is_certified_zero());
    LaurentSeries z = frobenius_substitute(LaurentSeries::zero_to(f, 5));
    EXPECT_TRUE(z.is_zero_to_precision());
    EXPECT_EQ(z.prec(), 15);
}

TEST(Frobenius, PrecisionAndCoefficients) {
    FieldPtr f = FieldSpec::standard(3, 2);
    std::mt19937_64 rng(7);
    LaurentSeries s = oracle::random_series(f, rng, -2, 2, 6);
    LaurentSeries t = frobenius_substitute(s);
    EXPECT_EQ(t.prec(), 3 * s.prec());
    for (int e = 3 * s.val(); e < t.prec(); ++e) EXPECT_EQ(t.coeff(e), e % 3 == 0 ? s.coeff(e / 3) : 0u);
}

TEST(Frobenius, ProductOfBinomialsP3) {
    FieldPtr f = FieldSpec::standard(3, 1);
    LaurentSeries a = LaurentSeries::polynomial(f, {1, 1}).truncated(30);
    LaurentSeries b = LaurentSeries::polynomial(f, {1, 0, 1}).truncated(30);
    LaurentSeries lhs = frobenius_substitute(a * b);
    LaurentSeries pa = frobenius_substitute(a), pb = frobenius_substitute(b);
    ASSERT_EQ(lhs.prec(), 90);
    EXPECT_EQ(window(lhs, 0, 90), oracle::schoolbook(pa, pb, 0, 90));
}

TEST(Frobenius, RingHomomorphismOnRandomPairs) {
    std::mt19937_64 rng(11);
    for (int p : {2, 3, 5}) {
        FieldPtr f = FieldSpec::standard(p, 2);
        for (int t = 0; t < 70; ++t) {
            LaurentSeries a = oracle::random_series(f, rng, -3, 3, 8), b = oracle::random_series(f, rng, -3, 3, 8);
            EXPECT_TRUE(frobenius_substitute(a * b).agrees_with(frobenius_substitute(a) * frobenius_substitute(b)));
            EXPECT_TRUE(frobenius_substitute(a + b).agrees_with(frobenius_substitute(a) + frobenius_substitute(b)));
            EXPECT_EQ(frobenius_substitute(a * b).prec(), (frobenius_substitute(a) * frobenius_substitute(b)).prec());
        }
    }
}

TEST(Series, ProductMatchesSchoolbook) {
    std::mt19937_64 rng(3);
    for (int p : {2, 3, 5}) {
        FieldPtr f = FieldSpec::standard(p, 2);
        for (int t = 0; t < 100; ++t) {
            LaurentSeries a = oracle::random_series(f, rng, -4, 4, 1 + static_cast<int>(rng() % 10));
            LaurentSeries b = oracle::random_series(f, rng, -4, 4, 1 + static_cast<int>(rng() % 10));
            LaurentSeries c = a * b;
            int lo = a.val() + b.val();
            int hi = std::min(a.val() + b.prec(), b.val() + a.prec());
            ASSERT_EQ(c.prec(), hi);
            ASSERT_EQ(window(c, lo, hi), oracle::schoolbook(a, b, lo, hi));
        }
    }
}

TEST(Series, RingAxiomsOnOverlap) {
    std::mt19937_64 rng(5);
    for (int p : {2, 3}) {
        FieldPtr f = FieldSpec::standard(p, 3);
        for (int t = 0; t < 200; ++t) {
            auto a = oracle::random_series(f, rng, -2, 2, 9, false);
            auto b = oracle::random_series(f, rng, -2, 2, 9, false);
            auto c = oracle::random_series(f, rng, -2, 2, 9, false);
            EXPECT_TRUE(((a * b) * c).agrees_with(a * (b * c)));
            EXPECT_TRUE((a * (b + c)).agrees_with(a * b + a * c));
            EXPECT_TRUE((a + b).agrees_with(b + a));
            EXPECT_TRUE((a - a).known_zero());
        }
    }
}

TEST(Series, ZeroStatesAreDistinct) {
    FieldPtr f = FieldSpec::standard(3, 1);
    LaurentSeries z = LaurentSeries::zero(f), zp = LaurentSeries::zero_to(f, 4);
    EXPECT_TRUE(z.is_certified_zero());
    EXPECT_FALSE(zp.is_certified_zero());
    EXPECT_TRUE(zp.is_zero_to_precision());
    EXPECT_THROW(zp.valuation(), ZeroLeadingCoefficient);
    EXPECT_THROW(z.valuation(), ZeroLeadingCoefficient);
    EXPECT_EQ(zp.coeff(3), 0u);
    EXPECT_THROW(zp.coeff(4), InsufficientPrecision);
    // leading zeros are absorbed into the valuation
    LaurentSeries s = LaurentSeries::from_coeffs(f, 0, {0, 0, 2, 1}, 4);
    EXPECT_EQ(s.valuation(), 2);
    EXPECT_THROW(s.coeff(4), InsufficientPrecision);
}

TEST(Invert, Monomial) {
    FieldPtr f = FieldSpec::standard(3, 1);
    LaurentSeries s = invert(LaurentSeries::monomial(f, 1, 2));
    EXPECT_TRUE(s.is_monomial());
    EXPECT_EQ(s.val(), -2);
    EXPECT_EQ(s.leading(), 1u);
}

TEST(Invert, GeometricSeries) {
    FieldPtr f = FieldSpec::standard(3, 1);
    LaurentSeries s = LaurentSeries::polynomial(f, {1, 1}).truncated(20);
    LaurentSeries t = invert(s);
    EXPECT_EQ(t.val(), 0);
    for (int e = 0; e < t.prec(); ++e) EXPECT_EQ(t.coeff(e), e % 2 == 0 ? 1u : 2u);
    std::vector<std::vector<int>> one(static_cast<std::size_t>(t.prec()), std::vector<int>{0});
    one[0] = {1};
    EXPECT_EQ(oracle::schoolbook(s, t, 0, t.prec()), one);
}

TEST(Invert, NoVisibleTermFails) {
    FieldPtr f = FieldSpec::standard(3, 1);
    EXPECT_THROW(invert(LaurentSeries::zero_to(f, 10)), ZeroLeadingCoefficient);
    EXPECT_THROW(invert(LaurentSeries::from_coeffs(f, 0, {0, 0, 0}, 3)), ZeroLeadingCoefficient);
}

TEST(Invert, RandomUnitsMultiplyBackToOne) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 200; ++t) {
        int p = t % 2 ? 3 : 2;
        FieldPtr f = FieldSpec::standard(p, 2);
        LaurentSeries s = oracle::random_series(f, rng, -5, 5, 12);
        LaurentSeries inv = invert(s);
        EXPECT_EQ(inv.val(), -s.val());
        LaurentSeries prod = s * inv;
        ASSERT_GE(prod.prec(), 1);
        for (int e = 0; e < prod.prec(); ++e) EXPECT_EQ(prod.coeff(e), e == 0 ? 1u : 0u);
    }
}

TEST(UnitTwist, Identity) {
    FieldPtr f = FieldSpec::standard(3, 1);
    UnitTwist tw = solve_unit_twist(LaurentSeries::constant(f, 1).truncated(20), 1);
    EXPECT_EQ(tw.x.code(), 1u);
    for (int e = 0; e < 20; ++e) EXPECT_EQ(tw.z.coeff(e), e == 0 ? 1u : 0u);
}

TEST(UnitTwist, ConstantTermGivesInverse) {
    FieldPtr f = FieldSpec::standard(5, 1);
    Fq c = 3;
    LaurentSeries g = LaurentSeries::polynomial(f, {c, 1, 4}).truncated(40);
    UnitTwist tw = solve_unit_twist(g, 1);
    EXPECT_EQ(tw.x.code(), f->inv(c));
    EXPECT_TRUE(frobenius_substitute(tw.z).agrees_with((g * tw.z).scaled(tw.x.code())));
}

TEST(UnitTwist, OnePlusUOverF2) {
    FieldPtr f = FieldSpec::standard(2, 1);
    LaurentSeries g = LaurentSeries::polynomial(f, {1, 1}).truncated(64);
    UnitTwist tw = solve_unit_twist(g, 1);
    LaurentSeries lhs = frobenius_substitute(tw.z), rhs = (g * tw.z).scaled(tw.x.code());
    int hi = std::min(lhs.prec(), rhs.prec());
    EXPECT_EQ(hi, 64);
    for (int e = 0; e < hi; ++e) EXPECT_EQ(lhs.coeff(e), rhs.coeff(e)) << e;
}

TEST(UnitTwist, RandomUnits) {
    std::mt19937_64 rng(23);
    for (int p : {2, 3, 5}) {
        FieldPtr f = FieldSpec::standard(p, 2);
        for (int t = 0; t < 100; ++t) {
            int n = 1 + t % 2;
            LaurentSeries g = oracle::random_series(f, rng, 0, 0, 15);
            Fq target = f->inv(g.leading());
            if (f->roots(target, n).empty()) {
                EXPECT_THROW(solve_unit_twist(g, n), RootNotInField);
                continue;
            }
            UnitTwist tw = solve_unit_twist(g, n);
            EXPECT_EQ(tw.z.valuation(), 0);
            LaurentSeries lhs = frobenius_substitute(tw.z, n);
            LaurentSeries rhs = (g * tw.z).scaled(f->pow(tw.x.code(), n));
            EXPECT_TRUE(lhs.agrees_with(rhs));
        }
    }
}

TEST(UnitTwist, MissingRootIsReported) {
    // over F_3, x^2 = 2 has no solution
    FieldPtr f = FieldSpec::standard(3, 1);
    EXPECT_THROW(solve_unit_twist(LaurentSeries::constant(f, 2).truncated(8), 2), RootNotInField);
}
