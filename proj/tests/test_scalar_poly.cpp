#include <gtest/gtest.h>

#include <quadbundle/poly_gcd.hpp>
#include <quadbundle/random.hpp>

#include <array>
#include <map>

using namespace quadbundle;

namespace {

const char* kF = "x^2+y^2+z^2-2*x*y-2*x*z-2*y*z";

RingPtr qq() {
    static RingPtr r = make_ring(FieldSpec::rational());
    return r;
}
RingPtr f101() {
    static RingPtr r = make_ring(FieldSpec::prime(101));
    return r;
}
QPoly q(const std::string& s) { return parse_poly<Rational>(s, qq()); }
FpPoly fpp(const std::string& s) { return parse_poly<ModP>(s, f101()); }

std::vector<Rational> qpt(long long a, long long b, long long c) {
    return {Rational::from_int(a), Rational::from_int(b), Rational::from_int(c)};
}

}  // namespace

TEST(Field, RejectsBadModuli) {
    EXPECT_THROW(FieldSpec::prime(2), Error);
    EXPECT_THROW(FieldSpec::prime(9), Error);
    EXPECT_THROW(FieldSpec::prime(1ull << 31), Error);
    EXPECT_EQ(FieldSpec::prime(32003).p, 32003u);
    EXPECT_EQ(FieldSpec::prime(2147483647).p, 2147483647u);
}

TEST(Field, ModPArithmetic) {
    const auto f = FieldSpec::prime(101);
    const ModP a = ModP::from_int(-3, f);
    EXPECT_EQ(a.value(), 98u);
    EXPECT_EQ(a.centered(), -3);
    EXPECT_TRUE((a * a.inverse()).is_one());
    EXPECT_EQ(ModP::from_decimal("1", "2", f).value(), 51u);
    EXPECT_THROW(ModP::from_decimal("1", "202", f), Error);
    EXPECT_EQ(fp::sqrt(4, 101) * fp::sqrt(4, 101) % 101, 4u);
    for (std::uint64_t p : {101u, 113u, 32003u}) {
        for (std::uint64_t a = 1; a < 50; ++a) {
            if (fp::euler(a, p) != 1) continue;
            const auto r = fp::sqrt(a, p);
            EXPECT_EQ(r * r % p, a);
        }
    }
}

TEST(Parse, Examples) {
    const QPoly p = q("x^2+2*x*y");
    ASSERT_EQ(p.size(), 2u);
    EXPECT_EQ(p.terms()[0].mono.exponents()[0], 2);
    EXPECT_TRUE(p.terms()[0].coeff.is_one());
    EXPECT_EQ(p.terms()[1].coeff, Rational::from_int(2));
    EXPECT_EQ(p.terms()[1].mono[0], 1);
    EXPECT_EQ(p.terms()[1].mono[1], 1);

    EXPECT_TRUE(q("0").is_zero());
    EXPECT_EQ(q(kF).size(), 6u);
    EXPECT_EQ(to_string(q(kF)), "x^2 - 2*x*y - 2*x*z + y^2 - 2*y*z + z^2");
}

TEST(Parse, Grammar) {
    EXPECT_EQ(q(" - x * y ^ 2 + 3 / 6 "), q("1/2 - x*y^2"));
    EXPECT_EQ(q("x*x*y"), q("x^2*y"));
    EXPECT_EQ(q("2*x - x - x"), q("0"));
    EXPECT_EQ(to_string(q("-1/2*x^3 + 7")), "-1/2*x^3 + 7");
    EXPECT_EQ(to_string(fpp("100*x + 50")), "-x + 50");
}

TEST(Parse, Errors) {
    try {
        q("x^2 + w");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 6u);
        EXPECT_NE(std::string(e.what()).find("unknown variable"), std::string::npos);
    }
    try {
        q("x^2 +* y");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 5u);
    }
    EXPECT_THROW(q("x^"), ParseError);
    EXPECT_THROW(q("x y"), ParseError);
    EXPECT_THROW(q(""), ParseError);
    EXPECT_THROW(q("1/0"), ParseError);
    EXPECT_THROW(fpp("1/2*x"), ParseError);
}

TEST(Arith, Examples) {
    EXPECT_EQ(q("x+y") * q("x-y"), q("x^2-y^2"));
    EXPECT_TRUE((q("x+y") * q("0")).is_zero());
    EXPECT_EQ(q("x+y").pow(0), q("1"));
    EXPECT_THROW(q("x") + parse_poly<Rational>("u", make_ring(FieldSpec::rational(), {"u", "v", "w"})), Error);
}

// Independent expansion of (x+y+z)^2 by enumerating ordered pairs of summands.
TEST(Arith, SquareOfLinearMatchesExpansionOracle) {
    std::map<std::array<int, 3>, long long> oracle;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            std::array<int, 3> e{0, 0, 0};
            ++e[i];
            ++e[j];
            ++oracle[e];
        }
    }
    const QPoly sq = q("x+y+z").pow(2);
    ASSERT_EQ(sq.size(), oracle.size());
    for (const auto& t : sq.terms()) {
        const std::array<int, 3> e{t.mono[0], t.mono[1], t.mono[2]};
        EXPECT_EQ(t.coeff, Rational::from_int(oracle.at(e)));
    }
}

TEST(Eval, Examples) {
    EXPECT_EQ(q(kF).eval(qpt(1, 0, 0)), Rational::from_int(1));
    // 3 - 2*3 by hand
    EXPECT_EQ(q(kF).eval(qpt(1, 1, 1)), Rational::from_int(-3));
    EXPECT_TRUE(q("x*y*z").eval(qpt(5, -7, 0)).is_zero());
    EXPECT_THROW(q("x").eval(std::vector<Rational>{Rational::from_int(1)}), Error);
}

TEST(Calculus, Examples) {
    EXPECT_EQ(q("x^2*y").derivative(0), q("2*x*y"));
    EXPECT_EQ(q(kF).degree(), 2);
    EXPECT_EQ(q("0").degree(), kMinusInfinity);
    EXPECT_FALSE(q("x^2+y").is_homogeneous());
    EXPECT_TRUE(q(kF).is_homogeneous());
}

TEST(Chart, Examples) {
    EXPECT_EQ(q("x^2*z + y*z^2").dehomogenize(2), q("x^2+y"));
    EXPECT_EQ(q("x^2+y").homogenize(2, 2), q("x^2+y*z"));
    EXPECT_EQ(q(kF).dehomogenize(2), q("x^2+y^2+1-2*x*y-2*x-2*y"));
    EXPECT_THROW(q("x^3").homogenize(2, 2), Error);
    EXPECT_EQ(q(kF).dehomogenize(2).homogenize(2, 2), q(kF));
}

TEST(Squarefree, Examples) {
    EXPECT_EQ(squarefree_part(q("x^4*y^2")), q("x*y"));
    EXPECT_EQ(squarefree_part(q("x^5*y")), q("x*y"));
    EXPECT_TRUE(is_square_in_ratfield(q("x^4*y^2"), 2));
    EXPECT_FALSE(is_square_in_ratfield(q("x^5*y"), 2));
    EXPECT_TRUE(is_square_in_ratfield(q("x^5*y") * q("x*y"), 2));
    EXPECT_TRUE(is_square_in_ratfield(q(kF) * q(kF), 2));
    EXPECT_FALSE(is_square_in_ratfield(q(kF), 2));
}

// Oracle: build the input from known coprime factors and compare with their product.
TEST(Squarefree, FactorReassembleOracle) {
    const QPoly a = q("x+y"), b = q("x-y");
    EXPECT_EQ(squarefree_part(a.pow(3) * b.pow(2)), (a * b).monic());
    const auto dec = squarefree_decomposition(a.pow(3) * b.pow(2));
    ASSERT_EQ(dec.factors.size(), 2u);
    EXPECT_EQ(dec.factors[0].first, b.monic());
    EXPECT_EQ(dec.factors[0].second, 2u);
    EXPECT_EQ(dec.factors[1].first, a.monic());
    EXPECT_EQ(dec.factors[1].second, 3u);

    Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const QPoly f1 = rng.form<Rational>(qq(), 1), f2 = rng.form<Rational>(qq(), 2), f3 = rng.form<Rational>(qq(), 1);
        if (f1.is_zero() || f2.is_zero() || f3.is_zero()) continue;
        if (!gcd(f1, f3).is_constant() || !gcd(f1, f2).is_constant() || !gcd(f2, f3).is_constant()) continue;
        if (squarefree_part(f2).degree() != 2) continue;
        const QPoly p = Rational::from_int(3) * f1 * f2.pow(2) * f3.pow(5);
        EXPECT_EQ(odd_multiplicity_part(p), (f1 * f3).monic());
        EXPECT_EQ(squarefree_part(p), (f1 * f2 * f3).monic());
    }
}

TEST(Squarefree, CharacteristicTooSmall) {
    const auto r7 = make_ring(FieldSpec::prime(7));
    EXPECT_THROW(squarefree_part(parse_poly<ModP>("x^7 + y^7", r7)), Error);
    EXPECT_NO_THROW(squarefree_part(parse_poly<ModP>("x^6 + y^6", r7)));
}

TEST(Gcd, Basics) {
    const QPoly g = q("x^2 + y*z - 3*z^2");
    const QPoly a = g * q("x - y"), b = g * q("x + 2*z") * q("y");
    EXPECT_EQ(gcd(a, b), g.monic());
    EXPECT_EQ(gcd(q("x^3*z"), q("x*z^2")), q("x*z"));
    EXPECT_EQ(gcd(q("x^2-1"), q("x^2-2*x+1")), q("x-1"));
    EXPECT_EQ(gcd(q("0"), q("2*x")), q("x"));
    EXPECT_EQ(gcd(q("x + y^2"), q("x*y + 1")), q("1"));
    const FpPoly h = fpp("x*y + z^2");
    EXPECT_EQ(gcd(h * fpp("x+y+z"), h * h), h);
}

template <class K>
class RingProperties : public ::testing::Test {};

struct QQTag {
    using K = Rational;
    static RingPtr ring() { return qq(); }
};
struct FpTag {
    using K = ModP;
    static RingPtr ring() { return f101(); }
};
using FieldTags = ::testing::Types<QQTag, FpTag>;
TYPED_TEST_SUITE(RingProperties, FieldTags);

TYPED_TEST(RingProperties, RingAxioms) {
    using K = typename TypeParam::K;
    Rng rng(1);
    const auto ring = TypeParam::ring();
    for (int i = 0; i < 1000; ++i) {
        const auto a = rng.sparse_poly<K>(ring, 3), b = rng.sparse_poly<K>(ring, 2), c = rng.sparse_poly<K>(ring, 2);
        ASSERT_EQ((a * b) * c, a * (b * c));
        ASSERT_EQ(a * (b + c), a * b + a * c);
        ASSERT_EQ(a + b, b + a);
        ASSERT_EQ(a * b, b * a);
        ASSERT_TRUE((a - a).is_zero());
    }
}

TYPED_TEST(RingProperties, ParsePrintRoundTrip) {
    using K = typename TypeParam::K;
    Rng rng(2);
    const auto ring = TypeParam::ring();
    for (int i = 0; i < 1000; ++i) {
        auto p = rng.sparse_poly<K>(ring, 4);
        if (ring->field.is_rational() && i % 2) p = K::from_decimal("1", std::to_string(1 + i % 7), ring->field) * p;
        ASSERT_EQ(parse_poly<K>(to_string(p), ring), p) << to_string(p);
    }
}

TYPED_TEST(RingProperties, EvalIsHomomorphism) {
    using K = typename TypeParam::K;
    Rng rng(3);
    const auto ring = TypeParam::ring();
    for (int i = 0; i < 200; ++i) {
        const auto a = rng.sparse_poly<K>(ring, 3), b = rng.sparse_poly<K>(ring, 3);
        std::vector<K> pt{rng.scalar<K>(ring->field), rng.scalar<K>(ring->field), rng.scalar<K>(ring->field)};
        ASSERT_EQ((a * b).eval(pt), a.eval(pt) * b.eval(pt));
        ASSERT_EQ((a + b).eval(pt), a.eval(pt) + b.eval(pt));
    }
}

TYPED_TEST(RingProperties, HomogeneousScaling) {
    using K = typename TypeParam::K;
    Rng rng(4);
    const auto ring = TypeParam::ring();
    const auto& f = ring->field;
    for (int i = 0; i < 200; ++i) {
        const int d = static_cast<int>(rng.uniform(0, 5));
        const auto p = rng.form<K>(ring, d);
        const K lambda = rng.scalar<K>(f);
        std::vector<K> v{rng.scalar<K>(f), rng.scalar<K>(f), rng.scalar<K>(f)};
        std::vector<K> lv{lambda * v[0], lambda * v[1], lambda * v[2]};
        ASSERT_EQ(p.eval(lv), power(lambda, static_cast<unsigned>(d), f) * p.eval(v));
    }
}

TYPED_TEST(RingProperties, EulerRelation) {
    using K = typename TypeParam::K;
    Rng rng(5);
    const auto ring = TypeParam::ring();
    for (int i = 0; i < 200; ++i) {
        const int d = static_cast<int>(rng.uniform(0, 6));
        const auto p = rng.form<K>(ring, d);
        auto lhs = Poly<K>::zero(ring);
        for (std::size_t v = 0; v < 3; ++v) lhs += Poly<K>::variable(ring, v) * p.derivative(v);
        ASSERT_EQ(lhs, K::from_int(d, ring->field) * p);
    }
}
