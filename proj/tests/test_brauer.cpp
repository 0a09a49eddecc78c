#include <gtest/gtest.h>

#include <quadbundle/gallery.hpp>

#include "test_support.hpp"

using namespace quadbundle;
using namespace qb_test;

namespace {

QPoly q(const std::string& s) { return parse_poly<Rational>(s, ring_qq()); }

// Nonsquare check by listing all squares mod p.
bool is_nonsquare_mod(std::uint32_t v, std::uint32_t p) {
    for (std::uint64_t y = 0; y < p; ++y) {
        if (y * y % p == v) return false;
    }
    return true;
}

template <Coefficient K>
SquareClass<K> twisted(SquareClass<K> s, const Poly<K>& by) {
    s.g = s.g * by;
    return s;
}

GradedSymMatrix<Rational> sextic_model(std::uint64_t seed) { return halfperiod_pattern<Rational>(ring_qq(), 3, 0, seed); }

void expect_sound_witness(const SquareClass<Rational>& a, const SquareClass<Rational>& b, const ClassComparison& c) {
    ASSERT_EQ(c.verdict, ClassVerdict::NotEqual);
    const auto r = ring_fp(c.witness_prime);
    const auto f = reduce_mod(a.curve.f, r), h = reduce_mod(a.g * b.g, r);
    EXPECT_TRUE(f.eval(c.witness).is_zero());
    const auto v = h.eval(c.witness);
    ASSERT_FALSE(v.is_zero());
    EXPECT_TRUE(is_nonsquare_mod(v.value(), c.witness_prime));
}

}  // namespace

TEST(SquareTest, RatfieldExamples) {
    EXPECT_TRUE(is_square_in_ratfield(q("x^4*y^2"), 2));
    EXPECT_FALSE(is_square_in_ratfield(q("x^5*y"), 2));
    EXPECT_TRUE(is_square_in_ratfield(q("x^5*y") * q("x*y"), 2));
    const auto F = hpt_conic<Rational>(ring_qq());
    EXPECT_TRUE(is_square_in_ratfield(F * F, 2));
    EXPECT_FALSE(is_square_in_ratfield(F, 2));
}

TEST(CurvePoints, Examples) {
    const auto r = ring_fp(101);
    const auto conic = PlaneCurve<ModP>::of(parse_poly<ModP>("x^2+y^2-z^2", r));
    EXPECT_EQ(curve_points(conic, 101, SIZE_MAX).size(), 102u);
    // exhaustive oracle agrees
    std::size_t n = 0;
    for (const auto& pt : projective_plane(101)) n += conic.f.eval(pt).is_zero();
    EXPECT_EQ(n, 102u);

    const auto fermat = PlaneCurve<Rational>::of(q("x^6+y^6+z^6"));
    const auto pts = curve_points(fermat, 101, 50);
    ASSERT_FALSE(pts.empty());
    const auto fr = reduce_mod(fermat.f, ring_fp(101));
    for (const auto& pt : pts) EXPECT_TRUE(fr.eval(pt).is_zero());
}

TEST(Residue, Examples) {
    const auto r = ring_qq();
    const auto line = q("x+2*y+3*z");
    const auto unit = GradedSymMatrix<Rational>::chart(PolyMatrix<Rational>::diagonal(r, {q("1"), q("x^2+y^2-z^2")}));
    const auto s1 = residue_along_curve(unit, line, 1);
    EXPECT_EQ(s1.g, q("1"));

    const auto F = hpt_conic<Rational>(r);
    const auto split = GradedSymMatrix<Rational>::chart(PolyMatrix<Rational>::diagonal(r, {q("x"), F}));
    const auto s2 = residue_along_curve(split, line, 1);
    EXPECT_EQ(s2.g, q("x") * line);
    EXPECT_EQ(s2.g.degree() % 2, 0);

    EXPECT_THROW(residue_along_curve(hpt_form<Rational>(r), line, 1), Error);  // x^2 y^2 F
    EXPECT_THROW(residue_along_curve(split, q("x"), 1), Error);                // line is a component
}

TEST(ClassEqual, SelfAndSquareTwist) {
    Rng rng(31);
    const auto m = sextic_model(1);
    const auto s = residue_along_curve(m, q("x-y+5*z"), 2);
    const auto self = square_class_equal(s, s);
    EXPECT_EQ(self.verdict, ClassVerdict::ProbablyEqual);
    EXPECT_GE(self.confidence, 1.0 - std::ldexp(1.0, -32));
    EXPECT_GE(self.primes_used.size(), 2u);

    const auto qd = rng.form<Rational>(ring_qq(), 2);
    EXPECT_EQ(square_class_equal(s, twisted(s, qd * qd)).verdict, ClassVerdict::ProbablyEqual);
}

TEST(ClassEqual, LinearTwistIsDetected) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto m = sextic_model(seed);
        const auto line = q("x+y+z");
        const auto s = residue_along_curve(m, line, seed);
        const auto other = twisted(s, q("x") * line);
        const auto c = square_class_equal(s, other, 20, {101, 211}, seed);
        expect_sound_witness(s, other, c);
    }
}

TEST(ClassEqual, CurveMismatchAndOddDegree) {
    const auto a = residue_along_curve(sextic_model(1), q("x+y+z"), 1);
    const auto b = residue_along_curve(sextic_model(2), q("x+y+z"), 1);
    EXPECT_THROW(square_class_equal(a, b), Error);
    EXPECT_THROW(square_class_equal(a, twisted(a, q("x"))), Error);
}

TEST(ResidueProperty, CongruenceInvariance) {
    Rng rng(32);
    const auto m = sextic_model(3);
    const auto line = q("2*x-y+z");
    const auto s = residue_along_curve(m, line, 1);
    for (int i = 0; i < 20; ++i) {
        const auto p = random_constant_invertible<Rational>(ring_qq(), 3, rng);
        const auto m2 = GradedSymMatrix<Rational>::validate({-1, -1, -1}, 0, congruence(m.matrix(), p));
        const auto c = square_class_equal(s, residue_along_curve(m2, line, rng.next()), 32, default_class_primes(), i);
        EXPECT_EQ(c.verdict, ClassVerdict::ProbablyEqual) << "run " << i;
    }
}

TEST(ResidueProperty, HyperbolicStability) {
    const auto r = ring_qq();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto m = sextic_model(seed);
        PolyMatrix<Rational> big(r, 5, 5);
        big.set_block(0, 0, m.matrix());
        big(3, 4) = big(4, 3) = q("1");
        const auto ext = GradedSymMatrix<Rational>::validate({-1, -1, -1, 0, 0}, 0, big);
        const auto line = q("x+3*y-z");
        const auto c = square_class_equal(residue_along_curve(m, line, seed), residue_along_curve(ext, line, seed + 1));
        EXPECT_EQ(c.verdict, ClassVerdict::ProbablyEqual);
    }
}

TEST(ResidueProperty, LineIndependence) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto m = sextic_model(seed + 10);
        const auto a = residue_along_curve(m, q("x+y+z"), seed);
        const auto b = residue_along_curve(m, q("x-2*y+7*z"), seed);
        EXPECT_EQ(square_class_equal(a, b).verdict, ClassVerdict::ProbablyEqual);
    }
}

TEST(ResidueProperty, NonsquareConstantDensity) {
    // 2 is a nonsquare modulo 101
    const auto r = ring_fp(101);
    int detected = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto m = halfperiod_pattern<ModP>(r, 3, 0, seed);
        if (squarefree_part(m.determinant()).degree() != 6) continue;
        const auto line = parse_poly<ModP>("x+y+z", r);
        if (divides(line, m.determinant())) continue;
        const auto s = residue_along_curve(m, line, seed);
        const auto c = square_class_equal(s, twisted(s, parse_poly<ModP>("2*x^2", r)), 32, {}, seed);
        if (c.verdict == ClassVerdict::NotEqual) {
            ++detected;
            EXPECT_TRUE(m.determinant().eval(c.witness).is_zero());
        }
    }
    EXPECT_GE(detected, 95);
}
