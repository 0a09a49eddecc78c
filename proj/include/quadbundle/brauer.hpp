#pragma once

// Residue of the even Clifford algebra along the discriminant curve, and a
// one-sided probabilistic test for equality of square classes in k(C).

#include "gradedform.hpp"
#include "poly_gcd.hpp"

#include <cmath>

namespace quadbundle {

template <Coefficient K>
struct SquareClass {
    Poly<K> g;           // homogeneous of even degree
    Poly<K> line;        // normalization line
    PlaneCurve<K> curve;
    int tries = 0;       // congruences drawn before the minor was nonzero on C
};

template <Coefficient K>
void check_normalization_line(const Poly<K>& line, const Poly<K>& f) {
    if (!line.is_homogeneous() || line.degree() != 1) throw Error("bad_line", "normalization line must be a linear form");
    if (divides(line, f)) throw Error("bad_line", "normalization line is a component of the curve");
}

namespace detail {

template <Coefficient K>
SquareClass<K> signed_minor_class(const GradedSymMatrix<K>& q, const Poly<K>& line, const PlaneCurve<K>& curve,
                                  std::uint64_t seed) {
    const auto& f = curve.f;
    const std::size_t m = q.size();
    Rng rng(seed);
    for (int t = 0; t < 50; ++t) {
        const auto mt = t == 0 ? q.matrix() : congruence(q.matrix(), random_congruence(q, rng));
        auto minor = principal_minor(mt, m - 1);
        if (minor.is_zero() || divides(f, minor)) continue;
        if (!minor.is_homogeneous()) throw Error("inhomogeneous", "principal minor is not a form; pass a graded model");
        if (((m - 1) * (m - 2) / 2) % 2 == 1) minor = -minor;
        if (minor.degree() % 2 == 1) minor = minor * line;
        return SquareClass<K>{std::move(minor), line, curve, t + 1};
    }
    throw Error("corank_two_along_curve", "every tried congruence leaves the (m-1)-minor divisible by the discriminant");
}

}  // namespace detail

/// Signed leading (m-1)-minor of a random congruence, times the line when needed
/// for even degree. The sign (-1)^((m-1)(m-2)/2) makes the class stable under
/// adding hyperbolic planes.
template <Coefficient K>
SquareClass<K> residue_along_curve(const GradedSymMatrix<K>& q, const Poly<K>& line, std::uint64_t seed) {
    const auto& f = q.determinant();
    check_normalization_line(line, f);
    if (squarefree_part(f).degree() != f.degree()) {
        throw Error("not_squarefree", "discriminant has a repeated component; the residue is not defined");
    }
    return detail::signed_minor_class(q, line, PlaneCurve<K>::of(f), seed);
}

/// Residue along a given squarefree curve C for models whose determinant is
/// C times a factor coprime to C (reduced models carry such square factors).
template <Coefficient K>
SquareClass<K> residue_along_curve(const GradedSymMatrix<K>& q, const Poly<K>& line, const PlaneCurve<K>& curve,
                                   std::uint64_t seed) {
    const auto& f = curve.f;
    check_normalization_line(line, f);
    if (squarefree_part(f).degree() != f.degree()) throw Error("not_squarefree", "the curve has a repeated component");
    const auto rest = divide_exact(q.determinant(), f);
    if (!rest) throw Error("curve_mismatch", "the determinant does not vanish along the curve");
    if (gcd(*rest, f).degree() > 0) {
        throw Error("not_squarefree", "the determinant vanishes to higher order along a component of the curve");
    }
    return detail::signed_minor_class(q, line, curve, seed);
}

enum class ClassVerdict { NotEqual, ProbablyEqual, Inconclusive };

inline const char* to_string(ClassVerdict v) {
    switch (v) {
        case ClassVerdict::NotEqual: return "NotEqual";
        case ClassVerdict::ProbablyEqual: return "ProbablyEqual";
        case ClassVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct ClassComparison {
    ClassVerdict verdict = ClassVerdict::Inconclusive;
    std::vector<ModP> witness;  // F_p-point with h nonsquare, when NotEqual
    std::uint32_t witness_prime = 0;
    double confidence = 0;
    std::size_t valid_samples = 0;
    std::vector<std::uint32_t> primes_used;
    std::vector<std::string> notes;
};

/// Smooth F_p-points of V(f) in enumeration order.
inline std::vector<std::vector<ModP>> smooth_curve_points_fp(const FpPoly& f, std::uint64_t seed,
                                                             std::size_t budget = SIZE_MAX) {
    std::vector<std::vector<ModP>> out;
    const std::size_t over = budget == SIZE_MAX ? SIZE_MAX : 2 * budget + 8;  // room for singular points
    for (auto& pt : curve_points_fp(f, seed, over)) {
        if (out.size() >= budget) break;
        if (!is_singular_at(f, pt)) out.push_back(std::move(pt));
    }
    return out;
}

/// Smooth points of C modulo p; empty on bad reduction.
template <Coefficient K>
std::vector<std::vector<ModP>> curve_points(const PlaneCurve<K>& c, std::uint32_t p, std::size_t budget,
                                            std::uint64_t seed = 0) {
    const auto ring = make_ring(FieldSpec::prime(p), c.f.ring()->vars);
    FpPoly fp;
    if constexpr (std::is_same_v<K, ModP>) {
        if (c.f.field().p != p) throw Error("field_mismatch", "curve is defined over another prime field");
        fp = c.f;
    } else {
        try {
            fp = reduce_mod(c.f, ring);
        } catch (const Error&) {
            return {};
        }
    }
    if (fp.degree() != c.degree) return {};
    try {
        if (squarefree_part(fp).degree() != fp.degree()) return {};
    } catch (const Error&) {
        return {};
    }
    return smooth_curve_points_fp(fp, seed, budget);
}

inline const std::vector<std::uint32_t>& default_class_primes() {
    static const std::vector<std::uint32_t> primes{101, 211, 32003};
    return primes;
}

/// Evaluates h = g1 g2 at smooth points of C over each prime (Euler criterion).
/// Any nonsquare value certifies NotEqual. Over QQ ProbablyEqual needs `trials`
/// valid samples spread over at least two primes; over F_p the field's own prime suffices.
template <Coefficient K>
ClassComparison square_class_equal(const SquareClass<K>& s1, const SquareClass<K>& s2, std::size_t trials = 32,
                                   const std::vector<std::uint32_t>& primes = default_class_primes(),
                                   std::uint64_t seed = 0) {
    const auto& f1 = s1.curve.f;
    const auto& f2 = s2.curve.f;
    if (!same_ring(f1.ring(), f2.ring()) || !(f2.leading_coeff() * f1 == f1.leading_coeff() * f2)) {
        throw Error("curve_mismatch", "square classes live on different curves");
    }
    if (s1.g.degree() % 2 != 0 || s2.g.degree() % 2 != 0) {
        throw Error("odd_degree", "square class representatives must have even degree");
    }
    const auto h = s1.g * s2.g;
    ClassComparison out;
    std::vector<std::uint32_t> use;
    if constexpr (std::is_same_v<K, ModP>) {
        use.push_back(f1.field().p);
    } else {
        use = primes;
    }
    for (auto p : use) {
        const auto ring = make_ring(FieldSpec::prime(p), f1.ring()->vars);
        FpPoly hp, lp;
        if constexpr (std::is_same_v<K, ModP>) {
            hp = h;
            lp = s1.line;
        } else {
            try {
                hp = reduce_mod(h, ring);
                lp = reduce_mod(s1.line, ring);
            } catch (const Error&) {
                out.notes.push_back("skipped prime " + std::to_string(p) + ": bad reduction of the representatives");
                continue;
            }
        }
        const auto pts = curve_points(s1.curve, p, 8 * trials + 32, seed + p);
        if (pts.empty()) {
            out.notes.push_back("no usable points modulo " + std::to_string(p));
            continue;
        }
        std::size_t here = 0;
        for (const auto& pt : pts) {
            if (here >= trials) break;
            if (lp.eval(pt).is_zero()) continue;
            const auto v = hp.eval(pt);
            if (v.is_zero()) continue;
            ++here;
            if (fp::euler(v.value(), p) != 1) {
                out.verdict = ClassVerdict::NotEqual;
                out.witness = pt;
                out.witness_prime = p;
                out.valid_samples += here;
                out.primes_used.push_back(p);
                out.confidence = 1.0;
                return out;
            }
        }
        out.valid_samples += here;
        if (here > 0) out.primes_used.push_back(p);
    }
    const std::size_t need_primes = std::is_same_v<K, ModP> ? 1 : 2;
    if (out.valid_samples >= trials && out.primes_used.size() >= need_primes) {
        out.verdict = ClassVerdict::ProbablyEqual;
        out.confidence = 1.0 - std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(out.valid_samples, 1000)));
    } else {
        out.notes.push_back("only " + std::to_string(out.valid_samples) + " valid samples");
    }
    return out;
}

}  // namespace quadbundle
