#pragma once

// Dense univariate polynomials over F_p, used for root finding on lines.

#include "field.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace quadbundle::upoly {

/// Coefficients, lowest degree first; trimmed so the top coefficient is nonzero.
using Dense = std::vector<std::uint64_t>;

inline void trim(Dense& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int deg(const Dense& a) { return static_cast<int>(a.size()) - 1; }

inline Dense sub(Dense a, const Dense& b, std::uint64_t p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
    trim(a);
    return a;
}

inline Dense mul(const Dense& a, const Dense& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Dense r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    trim(r);
    return r;
}

/// Remainder of a modulo nonzero b.
inline Dense mod(Dense a, const Dense& b, std::uint64_t p) {
    trim(a);
    const std::uint64_t inv = fp::inv(b.back(), p);
    while (a.size() >= b.size()) {
        const std::uint64_t c = fp::mul(a.back(), inv, p);
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = (a[shift + i] + p - fp::mul(c, b[i], p)) % p;
        trim(a);
    }
    return a;
}

inline Dense div(Dense a, const Dense& b, std::uint64_t p) {
    trim(a);
    if (a.size() < b.size()) return {};
    Dense q(a.size() - b.size() + 1, 0);
    const std::uint64_t inv = fp::inv(b.back(), p);
    while (a.size() >= b.size()) {
        const std::uint64_t c = fp::mul(a.back(), inv, p);
        const std::size_t shift = a.size() - b.size();
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = (a[shift + i] + p - fp::mul(c, b[i], p)) % p;
        trim(a);
    }
    return q;
}

inline Dense make_monic(Dense a, std::uint64_t p) {
    trim(a);
    if (a.empty()) return a;
    const std::uint64_t inv = fp::inv(a.back(), p);
    for (auto& c : a) c = fp::mul(c, inv, p);
    return a;
}

inline Dense gcd(Dense a, Dense b, std::uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Dense r = mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a, p);
}

/// base^e mod m.
inline Dense powmod(Dense base, std::uint64_t e, const Dense& m, std::uint64_t p) {
    Dense r{1};
    base = mod(base, m, p);
    while (e) {
        if (e & 1) r = mod(mul(r, base, p), m, p);
        e >>= 1;
        if (e) base = mod(mul(base, base, p), m, p);
    }
    return r;
}

inline std::uint64_t eval(const Dense& a, std::uint64_t x, std::uint64_t p) {
    std::uint64_t acc = 0;
    for (std::size_t i = a.size(); i-- > 0;) acc = (fp::mul(acc, x, p) + a[i]) % p;
    return acc;
}

namespace detail {

inline void split(const Dense& g, std::uint64_t p, std::mt19937_64& rng, std::vector<std::uint64_t>& out) {
    if (deg(g) <= 0) return;
    if (deg(g) == 1) {
        out.push_back(fp::mul(p - g[0], fp::inv(g[1], p), p));
        return;
    }
    std::uniform_int_distribution<std::uint64_t> dist(0, p - 1);
    while (true) {
        const Dense h = powmod(Dense{dist(rng), 1}, (p - 1) / 2, g, p);
        const Dense d = gcd(g, sub(h, Dense{1}, p), p);
        if (deg(d) > 0 && deg(d) < deg(g)) {
            split(d, p, rng, out);
            split(div(g, d, p), p, rng, out);
            return;
        }
    }
}

}  // namespace detail

/// Distinct roots of a in F_p, ascending.
inline std::vector<std::uint64_t> roots(Dense a, std::uint64_t p, std::uint64_t seed = 0) {
    trim(a);
    std::vector<std::uint64_t> out;
    if (deg(a) <= 0) return out;
    a = make_monic(a, p);
    // Product of the distinct linear factors: gcd(a, X^p - X).
    const Dense xp = powmod(Dense{0, 1}, p, a, p);
    Dense g = gcd(a, sub(xp, Dense{0, 1}, p), p);
    if (deg(g) <= 0) return out;
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    if (g[0] == 0) {
        out.push_back(0);
        g = div(g, Dense{0, 1}, p);
    }
    detail::split(g, p, rng, out);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace quadbundle::upoly
