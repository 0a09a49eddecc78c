#pragma once

// Plane curves: smoothness certificates via resultants, F_p-point enumeration.

#include "polymat.hpp"
#include "random.hpp"
#include "upoly_fp.hpp"

#include <optional>

namespace quadbundle {

enum class Smoothness { Unchecked, Proven, RefutedAt, Unknown };

inline const char* to_string(Smoothness s) {
    switch (s) {
        case Smoothness::Unchecked: return "Unchecked";
        case Smoothness::Proven: return "Proven";
        case Smoothness::RefutedAt: return "RefutedAt";
        case Smoothness::Unknown: return "Unknown";
    }
    return "?";
}

template <Coefficient K>
struct PlaneCurve {
    Poly<K> f;
    int degree = 0;
    Smoothness smooth = Smoothness::Unchecked;
    std::vector<K> singular_point;  // set when smooth == RefutedAt
    std::string diagnostic;

    static PlaneCurve of(Poly<K> f) {
        if (f.is_zero() || !f.is_homogeneous() || f.nvars() != 3) {
            throw Error("not_a_curve", "a plane curve needs a nonzero form in three variables");
        }
        PlaneCurve c;
        c.degree = f.degree();
        c.f = std::move(f);
        return c;
    }
};

template <Coefficient K>
std::string point_to_string(const std::vector<K>& pt) {
    std::string s = "(";
    for (std::size_t i = 0; i < pt.size(); ++i) s += (i ? "," : "") + pt[i].to_string();
    return s + ")";
}

/// Resultant of a and b with respect to `var` (Sylvester determinant).
template <Coefficient K>
Poly<K> resultant(const Poly<K>& a, const Poly<K>& b, std::size_t var) {
    const int m = a.degree_in(var), n = b.degree_in(var);
    if (a.is_zero() || b.is_zero()) return Poly<K>::zero(a.ring());
    if (m == 0) return a.pow(static_cast<unsigned>(n));
    if (n == 0) return b.pow(static_cast<unsigned>(m));
    const auto ca = a.coefficients_in(var), cb = b.coefficients_in(var);
    const std::size_t size = static_cast<std::size_t>(m + n);
    PolyMatrix<K> s(a.ring(), size, size);
    for (int i = 0; i < n; ++i) {
        for (const auto& [e, c] : ca) s(static_cast<std::size_t>(i), static_cast<std::size_t>(i + m - static_cast<int>(e))) = c;
    }
    for (int i = 0; i < m; ++i) {
        for (const auto& [e, c] : cb) s(static_cast<std::size_t>(n + i), static_cast<std::size_t>(i + n - static_cast<int>(e))) = c;
    }
    return det_bareiss(s);
}

/// Dense univariate polynomial in `var` obtained by fixing the other coordinates to `at`.
inline upoly::Dense restrict_to_line(const FpPoly& f, std::size_t var, const std::vector<ModP>& at) {
    const std::uint64_t p = f.field().p;
    upoly::Dense out(static_cast<std::size_t>(std::max(0, f.degree_in(var))) + 1, 0);
    for (const auto& t : f.terms()) {
        ModP c = t.coeff;
        for (std::size_t i = 0; i < f.nvars(); ++i) {
            if (i == var || t.mono[i] == 0) continue;
            c *= power(at[i], t.mono[i], f.field());
        }
        out[t.mono[var]] = (out[t.mono[var]] + c.value()) % p;
    }
    upoly::trim(out);
    return out;
}

template <Coefficient K>
bool is_singular_at(const Poly<K>& f, const std::vector<K>& pt) {
    if (!f.eval(pt).is_zero()) return false;
    for (std::size_t v = 0; v < 3; ++v) {
        if (!f.derivative(v).eval(pt).is_zero()) return false;
    }
    return true;
}

/// All F_p-points of V(f) in P^2. Lines x = c are visited in a seeded random
/// order after the points with z = 0; enumeration stops once `budget` points are found.
inline std::vector<std::vector<ModP>> curve_points_fp(const FpPoly& f, std::uint64_t seed,
                                                      std::size_t budget = SIZE_MAX) {
    const std::uint32_t p = f.field().p;
    std::vector<std::vector<ModP>> pts;
    const auto zero = ModP(0, p), one = ModP(1, p);
    auto push = [&](std::vector<ModP> pt) {
        if (pts.size() < budget) pts.push_back(std::move(pt));
    };
    if (f.eval(std::vector<ModP>{one, zero, zero}).is_zero()) push({one, zero, zero});
    {
        const auto line = restrict_to_line(f, 0, {zero, one, zero});
        if (line.empty()) {
            for (std::uint32_t a = 0; a < p; ++a) push({ModP(a, p), one, zero});
        } else {
            for (auto r : upoly::roots(line, p, seed)) push({ModP(r, p), one, zero});
        }
    }
    std::vector<std::uint32_t> order(p);
    std::iota(order.begin(), order.end(), 0u);
    Rng rng(seed);
    std::shuffle(order.begin(), order.end(), rng.engine());
    for (std::uint32_t c : order) {
        if (pts.size() >= budget) break;
        const auto line = restrict_to_line(f, 1, {ModP(c, p), zero, one});
        if (line.empty()) {
            for (std::uint32_t b = 0; b < p; ++b) push({ModP(c, p), ModP(b, p), one});
        } else {
            for (auto r : upoly::roots(line, p, seed + c)) push({ModP(c, p), ModP(r, p), one});
        }
    }
    return pts;
}

namespace detail {

/// Searches small integer points for a singular point of f.
template <Coefficient K>
std::optional<std::vector<K>> small_height_singular_point(const Poly<K>& f, int height) {
    const auto& fs = f.field();
    const std::vector<Poly<K>> grad{f.derivative(0), f.derivative(1), f.derivative(2)};
    const auto singular = [&](const std::vector<K>& pt) {
        if (!f.eval(pt).is_zero()) return false;
        return std::all_of(grad.begin(), grad.end(), [&](const Poly<K>& d) { return d.eval(pt).is_zero(); });
    };
    for (int h = 0; h <= height; ++h) {
        for (int a = -h; a <= h; ++a) {
            for (int b = -h; b <= h; ++b) {
                for (int c = -h; c <= h; ++c) {
                    if (std::max({std::abs(a), std::abs(b), std::abs(c)}) != h) continue;
                    // first nonzero coordinate positive
                    const int lead = a != 0 ? a : (b != 0 ? b : c);
                    if (lead <= 0) continue;
                    std::vector<K> pt{K::from_int(a, fs), K::from_int(b, fs), K::from_int(c, fs)};
                    if (pt[0].is_zero() && pt[1].is_zero() && pt[2].is_zero()) continue;
                    if (singular(pt)) return pt;
                }
            }
        }
    }
    return std::nullopt;
}

/// Singular points over F_p of g found from the eliminant G(x) (affine part) and the line z = 0.
inline std::optional<std::vector<ModP>> fp_singular_point(const FpPoly& g, const std::vector<FpPoly>& grad,
                                                          const FpPoly& eliminant, std::uint64_t seed) {
    const std::uint32_t p = g.field().p;
    const ModP zero(0, p), one(1, p);
    const auto check = [&](const std::vector<ModP>& pt) { return is_singular_at(g, pt); };
    if (check({one, zero, zero})) return std::vector<ModP>{one, zero, zero};
    {
        upoly::Dense acc;
        for (const auto& d : grad) acc = upoly::gcd(acc, restrict_to_line(d, 0, {zero, one, zero}), p);
        for (auto r : upoly::roots(acc, p, seed)) {
            std::vector<ModP> pt{ModP(r, p), one, zero};
            if (check(pt)) return pt;
        }
    }
    const auto xs = upoly::roots(restrict_to_line(eliminant, 0, {zero, zero, one}), p, seed);
    for (auto x0 : xs) {
        upoly::Dense acc;
        for (const auto& d : grad) acc = upoly::gcd(acc, restrict_to_line(d, 1, {ModP(x0, p), zero, one}), p);
        for (auto y0 : upoly::roots(acc, p, seed)) {
            std::vector<ModP> pt{ModP(x0, p), ModP(y0, p), one};
            if (check(pt)) return pt;
        }
    }
    return std::nullopt;
}

template <Coefficient K>
std::vector<K> apply(const PolyMatrix<K>& t, const std::vector<K>& v) {
    std::vector<K> out;
    for (std::size_t i = 0; i < 3; ++i) {
        K acc = K::from_int(0, t.field());
        for (std::size_t j = 0; j < 3; ++j) acc += t(i, j).constant_value() * v[j];
        out.push_back(acc);
    }
    return out;
}

}  // namespace detail

/// Decides smoothness of C. Proven comes with an elimination certificate:
/// after a random linear change of coordinates the partials have no common zero
/// on z = 0 (binary gcd) and the pairwise y-resultants of the affine partials are coprime.
template <Coefficient K>
PlaneCurve<K> check_smoothness(PlaneCurve<K> c, std::uint64_t seed = 0) {
    const auto& ring = c.f.ring();
    const auto& fs = ring->field;
    if (fs.is_prime() && c.degree % static_cast<int>(fs.p) == 0) {
        throw Error("characteristic_divides_degree", "smoothness test needs p not dividing deg f");
    }
    if (c.degree <= 1) {
        c.smooth = Smoothness::Proven;
        c.diagnostic = "line";
        return c;
    }
    Rng rng(seed);
    std::string why;
    bool singular_locus_nonempty = false;
    for (int attempt = 0; attempt < 5; ++attempt) {
        PolyMatrix<K> t(ring, 3, 3);
        while (true) {
            for (std::size_t i = 0; i < 3; ++i) {
                for (std::size_t j = 0; j < 3; ++j) t(i, j) = Poly<K>::constant(ring, rng.scalar<K>(fs));
            }
            if (det_cofactor(t).constant_value().is_zero()) continue;
            break;
        }
        std::vector<Poly<K>> images;
        for (std::size_t i = 0; i < 3; ++i) {
            Poly<K> l(ring);
            for (std::size_t j = 0; j < 3; ++j) l += t(i, j) * Poly<K>::variable(ring, j);
            images.push_back(l);
        }
        const Poly<K> g = c.f.substitute(images);
        std::vector<Poly<K>> grad{g.derivative(0), g.derivative(1), g.derivative(2)};
        bool leading_ok = true;
        for (const auto& d : grad) {
            const auto coeffs = d.coefficients_in(1);
            leading_ok = leading_ok && !coeffs.empty() && coeffs.rbegin()->first == static_cast<unsigned>(c.degree - 1);
        }
        if (!leading_ok) {
            why = "leading coefficients vanish";
            continue;
        }
        // Points with z = 0.
        Poly<K> at_infinity = Poly<K>::zero(ring);
        const auto zvar = Poly<K>::variable(ring, 2);
        for (const auto& d : grad) {
            std::vector<Poly<K>> sub{Poly<K>::variable(ring, 0), Poly<K>::variable(ring, 1), Poly<K>::zero(ring)};
            at_infinity = gcd(at_infinity, d.substitute(sub));
        }
        // Affine part z = 1.
        std::vector<Poly<K>> aff;
        for (const auto& d : grad) aff.push_back(d.dehomogenize(2));
        const Poly<K> r1 = resultant(aff[0], aff[1], 1);
        const Poly<K> r2 = resultant(aff[0], aff[2], 1);
        const Poly<K> r3 = resultant(aff[1], aff[2], 1);
        if (r1.is_zero() || r2.is_zero() || r3.is_zero()) {
            why = "resultant vanished identically";
            singular_locus_nonempty = true;
            continue;
        }
        const Poly<K> elim = gcd(gcd(r1, r2), r3);
        if (at_infinity.is_constant() && elim.is_constant()) {
            c.smooth = Smoothness::Proven;
            c.diagnostic = "resultant certificate";
            return c;
        }
        singular_locus_nonempty = true;
        if constexpr (std::is_same_v<K, ModP>) {
            if (auto pt = detail::fp_singular_point(g, grad, elim, seed + attempt)) {
                c.singular_point = detail::apply(t, *pt);
                c.smooth = Smoothness::RefutedAt;
                return c;
            }
        }
        if (auto pt = detail::small_height_singular_point(c.f, 5)) {
            c.singular_point = *pt;
            c.smooth = Smoothness::RefutedAt;
            return c;
        }
        why = "eliminant has roots but no singular point was located";
    }
    if (auto pt = detail::small_height_singular_point(c.f, 5)) {
        c.singular_point = *pt;
        c.smooth = Smoothness::RefutedAt;
        return c;
    }
    c.smooth = Smoothness::Unknown;
    c.diagnostic = singular_locus_nonempty ? "singular locus appears nonempty: " + why : why;
    return c;
}

}  // namespace quadbundle
