#pragma once

// Explicit models: normal-form patterns, the degenerate diagonal form, the
// diagonal ansatz tuples, the bordered sextic chain and reduced-model descriptors.

#include "brauer.hpp"
#include "coker.hpp"

namespace quadbundle {

struct GalleryRecipe {
    std::string name;
    std::string description;
};

inline const std::vector<GalleryRecipe>& gallery_recipes() {
    static const std::vector<GalleryRecipe> r{
        {"halfperiod", "d quadric block, k identity block, linear coupling; degrees (-1)^d 0^k, twist 0"},
        {"even_theta", "2d linear block plus k hyperbolic pairs; degrees (-1)^2d (0,-1)^k, twist -1"},
        {"odd_theta", "degrees (-1)^(2d-3) (-2) (0,-1)^k, twist -1"},
        {"hpt", "diag(x, y, xy, F) with F = x^2+y^2+z^2-2xy-2xz-2yz, chart level"},
        {"ansatz", "four diagonal tuples with their divisibility conditions and similarity targets"},
        {"nodal_gm", "3x3 quadric matrix and its bordering by a unit"},
        {"cor12", "degree patterns of reduced rank-4 models"},
    };
    return r;
}

namespace detail {

constexpr int kMaxResample = 20;

template <Coefficient K>
GradedSymMatrix<K> fill_until_nondegenerate(const RingPtr& ring, const Grading& g, std::uint64_t seed,
                                            const std::function<void(PolyMatrix<K>&)>& adjust, int* resamples) {
    Rng rng(seed);
    for (int t = 0; t < kMaxResample; ++t) {
        auto m = random_graded_fill<K>(ring, g, rng);
        adjust(m);
        try {
            auto q = GradedSymMatrix<K>::validate(g.degrees, g.twist, std::move(m));
            if (resamples) *resamples = t;
            return q;
        } catch (const Error& e) {
            if (e.kind() != "degenerate") throw;
        }
    }
    throw Error("resample_exhausted", "every random fill was degenerate");
}

}  // namespace detail

/// Degrees (-1)^d 0^k, twist 0: random quadrics in the d-block, identity in the
/// k-block, random linear coupling (or zero).
template <Coefficient K>
GradedSymMatrix<K> halfperiod_pattern(const RingPtr& ring, int d, int k, std::uint64_t seed,
                                      bool zero_coupling = false, int* resamples = nullptr) {
    if (d < 1 || k < 0) throw Error("bad_parameters", "need d >= 1 and k >= 0");
    Grading g;
    g.degrees.assign(d, -1);
    g.degrees.insert(g.degrees.end(), k, 0);
    g.twist = 0;
    return detail::fill_until_nondegenerate<K>(ring, g, seed, [&](PolyMatrix<K>& m) {
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) m(d + i, d + j) = i == j ? Poly<K>::one(ring) : Poly<K>::zero(ring);
            if (zero_coupling) {
                for (int a = 0; a < d; ++a) m(a, d + i) = m(d + i, a) = Poly<K>::zero(ring);
            }
        }
    }, resamples);
}

namespace detail {

/// Appends k pairs (0, -1) and sets their constant coupling to the identity.
inline void append_pairs(Grading& g, int k) {
    for (int i = 0; i < k; ++i) {
        g.degrees.push_back(0);
        g.degrees.push_back(-1);
    }
}

template <Coefficient K>
void identity_pairs(PolyMatrix<K>& m, std::size_t first, int k) {
    const auto& ring = m.ring();
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const auto a = first + 2 * i, b = first + 2 * j + 1;
            m(a, b) = m(b, a) = i == j ? Poly<K>::one(ring) : Poly<K>::zero(ring);
        }
    }
}

}  // namespace detail

/// Degrees (-1)^(2d) (0,-1)^k, twist -1; discriminant degree 2d.
template <Coefficient K>
GradedSymMatrix<K> even_theta_pattern(const RingPtr& ring, int d, int k, std::uint64_t seed,
                                      int* resamples = nullptr) {
    if (d < 2 || k < 0) throw Error("bad_parameters", "need d >= 2 and k >= 0");
    Grading g;
    g.degrees.assign(2 * d, -1);
    detail::append_pairs(g, k);
    g.twist = -1;
    return detail::fill_until_nondegenerate<K>(
        ring, g, seed, [&](PolyMatrix<K>& m) { detail::identity_pairs(m, 2 * d, k); }, resamples);
}

/// Degrees (-1)^(2d-3) (-2) (0,-1)^k, twist -1; discriminant degree 2d.
template <Coefficient K>
GradedSymMatrix<K> odd_theta_pattern(const RingPtr& ring, int d, int k, std::uint64_t seed,
                                     int* resamples = nullptr) {
    if (d < 3 || k < 0) throw Error("bad_parameters", "need d >= 3 and k >= 0");
    Grading g;
    g.degrees.assign(2 * d - 3, -1);
    g.degrees.push_back(-2);
    detail::append_pairs(g, k);
    g.twist = -1;
    return detail::fill_until_nondegenerate<K>(
        ring, g, seed, [&](PolyMatrix<K>& m) { detail::identity_pairs(m, 2 * d - 2, k); }, resamples);
}

template <Coefficient K>
Poly<K> hpt_conic(const RingPtr& ring) {
    return parse_poly<K>("x^2+y^2+z^2-2*x*y-2*x*z-2*y*z", ring);
}

/// diag(x, y, xy, F). Entry degrees 1, 1, 2, 2 admit no grading, so this is chart level.
template <Coefficient K>
GradedSymMatrix<K> hpt_form(const RingPtr& ring) {
    const auto x = Poly<K>::variable(ring, 0), y = Poly<K>::variable(ring, 1);
    return GradedSymMatrix<K>::chart(PolyMatrix<K>::diagonal(ring, {x, y, x * y, hpt_conic<K>(ring)}));
}

struct DivisibilityCondition {
    std::string text;              // e.g. "x^2 | f1,f2"
    std::vector<std::size_t> indices;
    bool holds = false;
};

/// Diagonal ansatz <f1..f4> with its claimed similarity target <t1..t4>.
template <Coefficient K>
struct AnsatzRecord {
    std::string name;
    int curve_degree = 0;
    std::string kind;
    std::vector<Poly<K>> tuple;
    std::vector<Poly<K>> target;
    std::vector<int> degrees;         // as stated with the tuple
    std::vector<int> actual_degrees;
    bool degrees_consistent = false;
    std::vector<DivisibilityCondition> conditions;
    bool ambiguous = false;
    std::vector<bool> similar;  // f_i t_i is a square times a constant after z = 1
    bool similar_all = false;
};

namespace detail {

template <Coefficient K>
AnsatzRecord<K> make_ansatz(const RingPtr& ring, std::string name, int deg, std::string kind,
                            const std::vector<std::string>& tuple, const std::vector<std::string>& target,
                            std::vector<int> degrees,
                            const std::vector<std::pair<std::string, std::vector<std::size_t>>>& conds,
                            bool ambiguous) {
    const auto F = hpt_conic<K>(ring);
    auto parse = [&](const std::string& s) {
        // "F" stands for the conic; products are written as "<monomial>*F"
        if (s == "F") return F;
        const auto pos = s.find("*F");
        if (pos != std::string::npos) return parse_poly<K>(s.substr(0, pos), ring) * F;
        return parse_poly<K>(s, ring);
    };
    AnsatzRecord<K> r;
    r.name = std::move(name);
    r.curve_degree = deg;
    r.kind = std::move(kind);
    r.degrees = std::move(degrees);
    r.ambiguous = ambiguous;
    for (const auto& s : tuple) r.tuple.push_back(parse(s));
    for (const auto& s : target) r.target.push_back(parse(s));
    r.degrees_consistent = true;
    for (std::size_t i = 0; i < r.tuple.size(); ++i) {
        r.actual_degrees.push_back(r.tuple[i].degree());
        r.degrees_consistent = r.degrees_consistent && r.actual_degrees[i] == r.degrees[i];
    }
    for (const auto& [divisor, idx] : conds) {
        DivisibilityCondition c;
        const auto dv = parse_poly<K>(divisor, ring);
        c.text = divisor + " | ";
        c.indices = idx;
        c.holds = true;
        for (std::size_t n = 0; n < idx.size(); ++n) {
            c.text += (n ? ",f" : "f") + std::to_string(idx[n] + 1);
            c.holds = c.holds && divides(dv, r.tuple[idx[n]]);
        }
        if (!c.holds) throw Error("ansatz_invalid", r.name + ": condition " + c.text + " fails");
        r.conditions.push_back(std::move(c));
    }
    r.similar_all = true;
    for (std::size_t i = 0; i < r.tuple.size(); ++i) {
        r.similar.push_back(is_square_in_ratfield(r.tuple[i] * r.target[i], 2));
        r.similar_all = r.similar_all && r.similar.back();
    }
    return r;
}

}  // namespace detail

template <Coefficient K>
std::vector<AnsatzRecord<K>> ansatz_solutions(const RingPtr& ring) {
    using detail::make_ansatz;
    return {
        make_ansatz<K>(ring, "degree-18 half-period", 18, "HalfPeriod", {"x^5*y", "x^2*z*F", "x*z^5", "z^5*y"},
                       {"x*y", "F", "x", "y"}, {6, 6, 6, 6}, {{"x^2", {0, 1}}, {"z^4", {2, 3}}}, false),
        make_ansatz<K>(ring, "degree-12 odd theta", 12, "OddTheta", {"x^4*z", "x^2*y", "x*F", "y*z^2"},
                       {"x", "y", "F", "x*y"}, {5, 3, 3, 3}, {{"x^2", {0, 1}}}, false),
        make_ansatz<K>(ring, "degree-14 even theta", 14, "EvenTheta", {"x^5", "x^3*y*z", "z^3*F", "z^2*y"},
                       {"x", "x*y", "F", "y"}, {5, 5, 5, 3}, {{"x^2", {0, 1}}, {"z^2", {2, 3}}}, false),
        make_ansatz<K>(ring, "degree-10", 10, "Undetermined", {"x^2*F", "x^3*y", "x*z", "y*z"},
                       {"F", "x*y", "x", "y"}, {4, 4, 2, 2}, {{"x^2", {0, 1}}}, true),
    };
}

template <Coefficient K>
struct NodalChain {
    GradedSymMatrix<K> n3;
    GradedSymMatrix<K> n4;
    int smooth_tries = 0;
    bool discriminants_equal = false;
    CokernelProfile profile3, profile4;
    bool profile_match = false;
    ClassComparison residues;
};

/// N3: random 3x3 quadric matrix with smooth sextic discriminant. N4: P^T diag(N3, 1) P
/// with P unipotent carrying linear forms in its last row, so the pattern becomes
/// (-1,-1,-1,0) and the determinant is unchanged.
template <Coefficient K>
NodalChain<K> nodal_gm_chain(const RingPtr& ring, std::uint64_t seed) {
    Rng rng(seed);
    const Grading g3{{-1, -1, -1}, 0};
    for (int t = 0; t < detail::kMaxResample; ++t) {
        auto m3 = random_graded_fill<K>(ring, g3, rng);
        if (det(m3).is_zero()) continue;
        auto n3 = GradedSymMatrix<K>::validate(g3.degrees, g3.twist, m3);
        auto curve = check_smoothness(discriminant(n3), rng.next());
        if (curve.smooth != Smoothness::Proven) continue;

        auto block = PolyMatrix<K>(ring, 4, 4);
        block.set_block(0, 0, m3);
        block(3, 3) = Poly<K>::one(ring);
        auto p = PolyMatrix<K>::identity(ring, 4);
        for (std::size_t j = 0; j < 3; ++j) p(3, j) = rng.form<K>(ring, 1);
        auto n4 = GradedSymMatrix<K>::validate({-1, -1, -1, 0}, 0, congruence(block, p));

        NodalChain<K> out{n3, n4, 0, false, {}, {}, false, {}};
        out.smooth_tries = t + 1;
        out.discriminants_equal = n3.determinant() == n4.determinant();
        out.profile3 = classify(n3);
        out.profile4 = classify(n4);
        out.profile_match = profiles_equal(out.profile3, out.profile4);
        Poly<K> line;
        do {
            line = rng.form<K>(ring, 1);
        } while (line.is_zero() || divides(line, n3.determinant()));
        const auto r3 = residue_along_curve(n3, line, rng.next());
        const auto r4 = residue_along_curve(n4, line, rng.next());
        out.residues = square_class_equal(r3, r4, 32, default_class_primes(), rng.next());
        return out;
    }
    throw Error("resample_exhausted", "no smooth discriminant within " + std::to_string(detail::kMaxResample) + " fills");
}

/// Degree data of a reduction target. Divisor classes are written as
/// (xi, h) coefficients on P(E); bidegrees on P^2 x P^N are given when E is uniform.
struct PatternDescriptor {
    std::string family;
    int d = 0, k = 0;
    Grading source;                         // pattern of the unreduced model
    std::vector<int> isotropic;             // degrees of the split isotropic subbundle
    std::vector<int> bundle;                // E with 0 -> U -> E -> G^v -> 0
    std::string sequence;
    std::vector<std::pair<int, int>> divisors;     // (xi, h)
    std::vector<std::pair<int, int>> bidegrees;    // (P^2, fibre), uniform E only
    int fibre_dim = 0;                      // N in P^2 x P^N when uniform
    std::string model;
};

namespace detail {

inline std::string split_sum(const std::vector<int>& degs) {
    std::map<int, int, std::greater<>> count;
    for (int a : degs) ++count[a];
    if (count.empty()) return "0";
    std::string s;
    for (const auto& [a, n] : count) {
        if (!s.empty()) s += " + ";
        s += (n > 1 ? std::to_string(n) : "") + "O(" + std::to_string(a) + ")";
    }
    return s;
}

}  // namespace detail

/// Target patterns for reductions to rank 4. type is "halfperiod", "even_theta" or "odd_theta".
inline PatternDescriptor cor12_patterns(int d, const std::string& type, int k = 0) {
    if (d < 2 || d > 6) throw Error("bad_parameters", "need 2 <= d <= 6");
    PatternDescriptor out;
    out.family = type;
    out.d = d;
    out.k = k;
    if (type == "halfperiod") {
        if (k < 0 || (d + k) % 2 != 0) throw Error("bad_parameters", "half-period targets need d + k even");
        const int r = (d + k) / 2 - 2, l = (d - k) / 2 + 2;
        if (r < 0 || l < 0) throw Error("bad_parameters", "no rank-4 target for these d, k");
        out.source.degrees.assign(d, -1);
        out.source.degrees.insert(out.source.degrees.end(), k, 0);
        out.source.twist = 0;
        out.isotropic.assign(r, -1);
        out.bundle.assign(l, 1);
        out.bundle.insert(out.bundle.end(), k, 0);
        out.divisors.assign(r, {1, 1});
        out.divisors.push_back({2, 0});
        out.model = "complete intersection of " + std::to_string(r) + " divisors xi+h and one 2xi";
    } else if (type == "even_theta") {
        if (k != 0) throw Error("bad_parameters", "even theta targets take k = 0");
        out.source.degrees.assign(2 * d, -1);
        out.source.twist = -1;
        out.isotropic.assign(d - 2, -1);
        out.bundle.assign(d + 2, 0);
        out.divisors.assign(d - 2, {1, 1});
        out.divisors.push_back({2, 1});
        out.model = "complete intersection of " + std::to_string(d - 2) + " divisors xi+h and one 2xi+h";
    } else if (type == "odd_theta") {
        if (d < 3 || (k != 0 && k != 1)) throw Error("bad_parameters", "odd theta targets need d >= 3, k in {0,1}");
        out.source.degrees.assign(2 * d - 3, -1);
        out.source.degrees.push_back(-2);
        detail::append_pairs(out.source, k);
        out.source.twist = -1;
        out.isotropic.assign(d - 3, -1);
        out.isotropic.insert(out.isotropic.end(), k, -2);
        out.bundle.assign(d + k, 0);
        out.bundle.insert(out.bundle.end(), 1 - k, 1);
        out.bundle.insert(out.bundle.end(), k, -1);
        out.divisors.assign(d - 3, {1, 1});
        out.divisors.insert(out.divisors.end(), k, {1, 2});
        out.divisors.push_back({2, 1});
        out.model = "complete intersection of " + std::to_string(d - 3) + " divisors xi+h, " + std::to_string(k) +
                    " divisors xi+2h and one 2xi+h";
        if (k == 0) {
            out.model += "; birational to the residual component of " + std::to_string(d - 3) +
                         " quadrics and a cubic containing a P^" + std::to_string(d - 1) + " in P^" +
                         std::to_string(d + 2);
        }
    } else {
        throw Error("bad_parameters", "unknown family " + type);
    }
    if (static_cast<int>(out.bundle.size()) - static_cast<int>(out.isotropic.size()) != 4) {
        throw Error("internal", "descriptor does not have rank 4");
    }
    out.sequence = "0 -> " + detail::split_sum(out.isotropic) + " -> " + detail::split_sum(out.bundle) + " -> G^v -> 0";
    const bool uniform = std::all_of(out.bundle.begin(), out.bundle.end(), [&](int a) { return a == out.bundle[0]; });
    if (uniform && !out.bundle.empty()) {
        const int a = out.bundle[0];
        out.fibre_dim = static_cast<int>(out.bundle.size()) - 1;
        for (auto [cx, ch] : out.divisors) out.bidegrees.push_back({ch + a * cx, cx});
        out.model += " in P^2 x P^" + std::to_string(out.fibre_dim);
    }
    return out;
}

}  // namespace quadbundle
