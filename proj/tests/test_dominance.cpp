#include <gtest/gtest.h>

#include <quadbundle/dominance.hpp>

#include "test_support.hpp"

#include <set>

using namespace quadbundle;
using namespace qb_test;

namespace {

/// Jacobian by symbolic differentiation: K and N carry one variable per coefficient,
/// eta is expanded in the big ring, differentiated and evaluated at the base point.
template <Coefficient K>
ScalarMatrix<K> symbolic_jacobian(const DominanceInstance& in, const DominancePoint<K>& pt) {
    const std::size_t r = in.r, l = in.l, rk = in.r + in.k;
    const std::size_t nk = l * r, nn = rk * r * 3, nv = nk + nn;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < nv; ++i) names.push_back("c" + std::to_string(i));
    for (const char* v : {"x", "y", "z"}) names.push_back(v);
    const auto big = make_ring(pt.n0.field(), names);
    std::vector<Poly<K>> xyz;
    for (std::size_t v = 0; v < 3; ++v) xyz.push_back(Poly<K>::variable(big, nv + v));
    auto lift = [&](const PolyMatrix<K>& a) {
        PolyMatrix<K> out(big, a.rows(), a.cols());
        for (std::size_t i = 0; i < a.rows(); ++i) {
            for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j).substitute(xyz);
        }
        return out;
    };
    DominancePoint<K> sym{lift(pt.m), lift(pt.z), PolyMatrix<K>(big, l, r), PolyMatrix<K>(big, rk, r)};
    for (std::size_t a = 0; a < l; ++a) {
        for (std::size_t b = 0; b < r; ++b) sym.k0(a, b) = Poly<K>::variable(big, a * r + b);
    }
    for (std::size_t c = 0; c < rk; ++c) {
        for (std::size_t b = 0; b < r; ++b) {
            for (std::size_t v = 0; v < 3; ++v) {
                sym.n0(c, b) = sym.n0(c, b) + Poly<K>::variable(big, nk + (c * r + b) * 3 + v) * xyz[v];
            }
        }
    }
    const auto eta = eta_map(sym, sym.k0, sym.n0);
    // base point values of the coefficient variables; x, y, z stay symbolic
    std::vector<Poly<K>> at;
    for (std::size_t a = 0; a < l; ++a) {
        for (std::size_t b = 0; b < r; ++b) at.push_back(pt.k0(a, b).substitute(xyz));
    }
    const auto lin = [&](const Poly<K>& f, std::size_t v) {
        return Poly<K>::constant(big, f.derivative(v).eval(std::vector<K>(3, K::from_int(0, f.field()))));
    };
    for (std::size_t c = 0; c < rk; ++c) {
        for (std::size_t b = 0; b < r; ++b) {
            for (std::size_t v = 0; v < 3; ++v) at.push_back(lin(pt.n0(c, b), v));
        }
    }
    at.insert(at.end(), xyz.begin(), xyz.end());
    std::vector<Monomial> quads;
    Rng::for_each_monomial(3, 2, [&](const Monomial& m) { quads.push_back(m); });
    const std::size_t rows = r * (r + 1) / 2 * 6;
    ScalarMatrix<K> jac{rows, nv, std::vector<K>(rows * nv, K::from_int(0, pt.n0.field()))};
    for (std::size_t c = 0; c < nv; ++c) {
        std::size_t row = 0;
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = i; j < r; ++j) {
                const auto d = eta(i, j).derivative(c).substitute(at);
                for (const auto& t : d.terms()) {
                    Monomial::Storage e{t.mono[nv], t.mono[nv + 1], t.mono[nv + 2]};
                    const auto idx = std::find(quads.begin(), quads.end(), Monomial(e)) - quads.begin();
                    jac(row + idx, c) = t.coeff;
                }
                row += 6;
            }
        }
    }
    return jac;
}

}  // namespace

TEST(Dominance, KnownDominantCasesAcrossSeeds) {
    for (const auto& [r, l] : default_dominance_grid()) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto res = dominance_check(DominanceInstance{r, l, 4 - l, 3, 32003, seed, false});
            EXPECT_TRUE(res.hypothesis);
            EXPECT_TRUE(res.dominant) << r << "," << l << " seed " << seed << " rank " << res.rank;
            EXPECT_EQ(res.rank, res.target_dim);
        }
    }
    const auto big = dominance_check(DominanceInstance{9, 0, 4, 3, 32003, 1, false});
    EXPECT_EQ(big.rank, 270);
    EXPECT_EQ(big.target_dim, 270);
    EXPECT_EQ(big.unknowns, 351);
    EXPECT_EQ(big.points_tried, 1);
}

TEST(Dominance, SmallCases) {
    const auto zero = dominance_check(DominanceInstance{0, 0, 4, 3, 32003, 0, false});
    EXPECT_TRUE(zero.dominant);
    EXPECT_EQ(zero.target_dim, 0);
    const auto one = dominance_check(DominanceInstance{1, 0, 4, 3, 101, 0, false});
    EXPECT_EQ(one.rank, 6);
    EXPECT_TRUE(one.dominant);
    const auto off = dominance_check(DominanceInstance{2, 0, 0, 3, 101, 0, false});
    EXPECT_FALSE(off.hypothesis);
    EXPECT_FALSE(off.notes.empty());
    EXPECT_THROW(dominance_check(DominanceInstance{1, 0, 4, 3, 3, 0, false}), Error);
    EXPECT_THROW(dominance_check(DominanceInstance{-1, 0, 4, 3, 101, 0, false}), Error);
}

TEST(Dominance, RationalMode) {
    const auto res = dominance_check(DominanceInstance{3, 3, 1, 3, 0, 2, true});
    EXPECT_EQ(res.field, "QQ");
    EXPECT_TRUE(res.dominant);
    EXPECT_EQ(res.rank, 36);
}

TEST(Dominance, BruteForceOverF3) {
    // r = 1, l = 0, k = 4: the image of N -> N^T N over F_3 is every ternary quadric
    const std::uint32_t p = 3;
    std::set<std::vector<int>> image;
    std::vector<int> n(15, 0);
    // quadric coefficient order x^2, xy, xz, y^2, yz, z^2
    for (std::uint32_t code = 0; code < 14348907u; ++code) {
        std::uint32_t c = code;
        for (auto& v : n) {
            v = static_cast<int>(c % p);
            c /= p;
        }
        std::vector<int> q(6, 0);
        for (int row = 0; row < 5; ++row) {
            const int a = n[3 * row], b = n[3 * row + 1], d = n[3 * row + 2];
            q[0] += a * a;
            q[1] += 2 * a * b;
            q[2] += 2 * a * d;
            q[3] += b * b;
            q[4] += 2 * b * d;
            q[5] += d * d;
        }
        for (auto& v : q) v %= static_cast<int>(p);
        image.insert(q);
        if (image.size() == 729) break;
    }
    EXPECT_EQ(image.size(), 729u);
    EXPECT_EQ(dominance_check(DominanceInstance{1, 0, 4, 3, 32003, 0, false}).rank, 6);
}

TEST(DominanceProperty, AnalyticMatchesSymbolic) {
    const std::vector<std::array<int, 3>> cases{{1, 0, 4}, {1, 2, 2}, {2, 1, 3}, {2, 3, 1}, {3, 3, 1}, {3, 0, 4}};
    for (const auto& [r, l, k] : cases) {
        const DominanceInstance in{r, l, k, 3, 101, 5, false};
        const auto ring = dominance_ring(in);
        Rng rng(static_cast<std::uint64_t>(r * 10 + l));
        const auto pt = sample_dominance_point<ModP>(ring, in, rng);
        const auto a = dominance_jacobian(in, pt);
        const auto s = symbolic_jacobian(in, pt);
        ASSERT_EQ(a.rows, s.rows);
        ASSERT_EQ(a.cols, s.cols);
        EXPECT_TRUE(a.a == s.a) << r << "," << l << "," << k;
    }
}

TEST(DominanceProperty, RankInvariantUnderCoordinatePermutation) {
    Rng rng(12);
    for (int t = 0; t < 5; ++t) {
        const DominanceInstance in{static_cast<int>(rng.uniform(1, 4)), static_cast<int>(rng.uniform(0, 3)), 1, 3,
                                   211, rng.next(), false};
        const auto ring = dominance_ring(in);
        Rng prng(in.seed);
        const auto j = dominance_jacobian(in, sample_dominance_point<ModP>(ring, in, prng));
        std::vector<std::size_t> rp(j.rows), cp(j.cols);
        std::iota(rp.begin(), rp.end(), 0);
        std::iota(cp.begin(), cp.end(), 0);
        std::shuffle(rp.begin(), rp.end(), rng.engine());
        std::shuffle(cp.begin(), cp.end(), rng.engine());
        ScalarMatrix<ModP> q{j.rows, j.cols, j.a};
        for (std::size_t a = 0; a < j.rows; ++a) {
            for (std::size_t b = 0; b < j.cols; ++b) q(a, b) = j(rp[a], cp[b]);
        }
        EXPECT_EQ(rank(q), rank(j));
    }
}

TEST(DominanceProperty, OverLargeCaseIsEvidenceOnly) {
    const auto res = dominance_check(DominanceInstance{12, 0, 4, 3, 32003, 0, false});
    EXPECT_EQ(res.target_dim, 468);
    EXPECT_EQ(res.unknowns, 576);
    EXPECT_FALSE(res.hypothesis);
    EXPECT_LE(res.rank, 468);
    if (!res.dominant) {
        EXPECT_FALSE(res.notes.empty());
    }
}
