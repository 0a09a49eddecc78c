#pragma once

// Multivariate gcd (recursive primitive PRS) and squarefree decomposition.

#include "poly.hpp"

#include <utility>
#include <vector>

namespace quadbundle {

namespace detail {

template <Coefficient K>
Poly<K> leading_coeff_in(const Poly<K>& p, std::size_t var) {
    const int d = p.degree_in(var);
    std::vector<Term<K>> out;
    for (const auto& t : p.terms()) {
        if (t.mono[var] != d) continue;
        Monomial m = t.mono;
        m.set(var, 0);
        out.push_back({std::move(m), t.coeff});
    }
    return Poly<K>::from_terms(p.ring(), std::move(out));
}

template <Coefficient K>
Poly<K> var_power(const RingPtr& ring, std::size_t var, unsigned e) {
    Monomial m(ring->vars.size());
    m.set(var, static_cast<std::uint16_t>(e));
    return Poly<K>::monomial(ring, m, K::from_int(1, ring->field));
}

/// Pseudo-remainder of a by b with respect to `var`, up to a factor free of `var`.
template <Coefficient K>
Poly<K> prem(Poly<K> a, const Poly<K>& b, std::size_t var) {
    const int n = b.degree_in(var);
    const Poly<K> lb = leading_coeff_in(b, var);
    while (!a.is_zero() && a.degree_in(var) >= n) {
        const int s = a.degree_in(var) - n;
        const Poly<K> la = leading_coeff_in(a, var);
        a = lb * a - la * var_power<K>(a.ring(), var, static_cast<unsigned>(s)) * b;
    }
    return a;
}

template <Coefficient K>
std::optional<std::size_t> last_involved(const Poly<K>& a, const Poly<K>& b) {
    for (std::size_t v = a.nvars(); v-- > 0;) {
        if (a.involves(v) || b.involves(v)) return v;
    }
    return std::nullopt;
}

template <Coefficient K>
unsigned valuation(const Poly<K>& p, std::size_t var) {
    unsigned v = UINT16_MAX;
    for (const auto& t : p.terms()) v = std::min<unsigned>(v, t.mono[var]);
    return p.is_zero() ? 0 : v;
}

template <Coefficient K>
Poly<K> gcd_general(const Poly<K>& a, const Poly<K>& b);

template <Coefficient K>
Poly<K> content_in(const Poly<K>& p, std::size_t var) {
    Poly<K> g = Poly<K>::zero(p.ring());
    for (const auto& [e, c] : p.coefficients_in(var)) {
        g = gcd_general(g, c);
        if (g.is_constant()) break;
    }
    return g;
}

template <Coefficient K>
Poly<K> gcd_general(const Poly<K>& a, const Poly<K>& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    const auto var = last_involved(a, b);
    if (!var) return Poly<K>::one(a.ring());
    const std::size_t v = *var;
    const Poly<K> ca = content_in(a, v), cb = content_in(b, v);
    const Poly<K> c = gcd_general(ca, cb);
    Poly<K> pa = *divide_exact(a, ca), pb = *divide_exact(b, cb);
    if (!pa.involves(v) || !pb.involves(v)) return c;
    if (pa.degree_in(v) < pb.degree_in(v)) std::swap(pa, pb);
    while (true) {
        Poly<K> r = prem(pa, pb, v);
        if (r.is_zero()) break;
        if (!r.involves(v)) return c;
        pa = std::move(pb);
        pb = *divide_exact(r, content_in(r, v));
        pb = pb.monic();
    }
    Poly<K> g = *divide_exact(pb, content_in(pb, v));
    return (c * g).monic();
}

}  // namespace detail

/// Monic greatest common divisor (gcd(0,0) = 0).
template <Coefficient K>
Poly<K> gcd(const Poly<K>& a, const Poly<K>& b) {
    if (a.is_zero() || b.is_zero()) return detail::gcd_general(a, b);
    if (a.is_constant() || b.is_constant()) return Poly<K>::one(a.ring());
    const std::size_t n = a.nvars();
    if (n >= 2 && a.is_homogeneous() && b.is_homogeneous()) {
        // gcd of forms: split off powers of the last variable and work in the chart.
        const std::size_t z = n - 1;
        const unsigned va = detail::valuation(a, z), vb = detail::valuation(b, z);
        const auto zpow = [&](unsigned e) { return detail::var_power<K>(a.ring(), z, e); };
        const Poly<K> da = divide_exact(a, zpow(va))->dehomogenize(z);
        const Poly<K> db = divide_exact(b, zpow(vb))->dehomogenize(z);
        Poly<K> g = detail::gcd_general(da, db);
        g = g.homogenize(z, g.degree());
        return (zpow(std::min(va, vb)) * g).monic();
    }
    return detail::gcd_general(a, b);
}

template <Coefficient K>
Poly<K> gcd(const std::vector<Poly<K>>& ps, const RingPtr& ring) {
    Poly<K> g = Poly<K>::zero(ring);
    for (const auto& p : ps) {
        g = gcd(g, p);
        if (g.is_constant() && !g.is_zero()) break;
    }
    return g;
}

template <Coefficient K>
Poly<K> lcm(const Poly<K>& a, const Poly<K>& b) {
    if (a.is_zero() || b.is_zero()) return Poly<K>::zero(a.ring());
    return (*divide_exact(a * b, gcd(a, b))).monic();
}

/// (factor, multiplicity) pairs with pairwise coprime monic factors, multiplicities distinct.
template <Coefficient K>
struct SquarefreeDecomposition {
    K unit;
    std::vector<std::pair<Poly<K>, unsigned>> factors;
};

namespace detail {

template <Coefficient K>
void check_characteristic(const Poly<K>& p) {
    const auto ch = p.field().characteristic();
    if (ch != 0 && !p.is_zero() && static_cast<std::uint64_t>(p.degree()) >= ch) {
        throw Error("characteristic_too_small",
                    "squarefree decomposition needs p > degree (degree " + std::to_string(p.degree()) + " over " +
                        p.field().to_string() + ")");
    }
}

/// Yun's algorithm on a polynomial primitive with respect to `v`; accumulates into `mult`.
template <Coefficient K>
void yun(const Poly<K>& a, std::size_t v, std::map<unsigned, Poly<K>>& mult) {
    const Poly<K> da = a.derivative(v);
    const Poly<K> c = gcd(a, da);
    Poly<K> w = *divide_exact(a, c);
    Poly<K> y = *divide_exact(da, c);
    Poly<K> z = y - w.derivative(v);
    for (unsigned i = 1; w.involves(v); ++i) {
        const Poly<K> g = gcd(w, z);
        if (g.involves(v)) {
            auto [it, fresh] = mult.try_emplace(i, Poly<K>::one(a.ring()));
            it->second *= g;
        }
        w = *divide_exact(w, g);
        y = *divide_exact(z, g);
        z = y - w.derivative(v);
    }
}

template <Coefficient K>
void squarefree_rec(const Poly<K>& p, std::map<unsigned, Poly<K>>& mult) {
    if (p.is_constant()) return;
    std::size_t v = p.nvars();
    while (v-- > 0) {
        if (p.involves(v)) break;
    }
    const Poly<K> c = content_in(p, v);
    const Poly<K> pp = *divide_exact(p, c);
    yun(pp, v, mult);
    squarefree_rec(c, mult);
}

}  // namespace detail

template <Coefficient K>
SquarefreeDecomposition<K> squarefree_decomposition(const Poly<K>& p) {
    if (p.is_zero()) throw Error("zero_polynomial", "squarefree decomposition of zero");
    detail::check_characteristic(p);
    std::map<unsigned, Poly<K>> mult;
    detail::squarefree_rec(p.monic(), mult);
    SquarefreeDecomposition<K> out{p.leading_coeff(), {}};
    for (auto& [i, f] : mult) out.factors.emplace_back(f.monic(), i);
    return out;
}

/// Product of the distinct irreducible factors (monic).
template <Coefficient K>
Poly<K> squarefree_part(const Poly<K>& p) {
    Poly<K> r = Poly<K>::one(p.ring());
    for (const auto& [f, i] : squarefree_decomposition(p).factors) r *= f;
    return r;
}

/// Product of the factors of odd multiplicity: p equals this times a unit times a square.
template <Coefficient K>
Poly<K> odd_multiplicity_part(const Poly<K>& p) {
    Poly<K> r = Poly<K>::one(p.ring());
    for (const auto& [f, i] : squarefree_decomposition(p).factors) {
        if (i % 2 == 1) r *= f;
    }
    return r;
}

/// Whether p is a constant times a square in k(vars), read in the chart where `chart_var` = 1.
template <Coefficient K>
bool is_square_in_ratfield(const Poly<K>& p, std::size_t chart_var) {
    if (p.is_zero()) return false;
    return odd_multiplicity_part(p.dehomogenize(chart_var)).is_constant();
}

}  // namespace quadbundle
