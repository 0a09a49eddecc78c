#pragma once

// Seeded random sources for fills, congruences and sampling.

#include "poly.hpp"

#include <random>

namespace quadbundle {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    long long uniform(long long lo, long long hi) { return std::uniform_int_distribution<long long>(lo, hi)(gen_); }
    bool coin() { return uniform(0, 1) == 1; }

    /// Over QQ: integers in [-9, 9]; over F_p: uniform.
    template <Coefficient K>
    K scalar(const FieldSpec& f) {
        if (f.is_rational()) return K::from_int(uniform(-9, 9), f);
        return K::from_int(uniform(0, static_cast<long long>(f.p) - 1), f);
    }

    template <Coefficient K>
    K nonzero_scalar(const FieldSpec& f) {
        while (true) {
            K c = scalar<K>(f);
            if (!c.is_zero()) return c;
        }
    }

    /// Dense random form of degree d (zero when d < 0).
    template <Coefficient K>
    Poly<K> form(const RingPtr& ring, int d) {
        std::vector<Term<K>> terms;
        if (d >= 0) {
            for_each_monomial(ring->vars.size(), static_cast<unsigned>(d), [&](const Monomial& m) {
                terms.push_back({m, scalar<K>(ring->field)});
            });
        }
        return Poly<K>::from_terms(ring, std::move(terms));
    }

    /// Random polynomial with all monomials of degree <= d, each present with probability 1/2.
    template <Coefficient K>
    Poly<K> sparse_poly(const RingPtr& ring, int d) {
        std::vector<Term<K>> terms;
        for (int e = 0; e <= d; ++e) {
            for_each_monomial(ring->vars.size(), static_cast<unsigned>(e), [&](const Monomial& m) {
                if (coin()) terms.push_back({m, scalar<K>(ring->field)});
            });
        }
        return Poly<K>::from_terms(ring, std::move(terms));
    }

    std::uint64_t next() { return gen_(); }
    std::mt19937_64& engine() { return gen_; }

    /// Calls f on every monomial of exactly degree d in n variables (grlex descending).
    template <class F>
    static void for_each_monomial(std::size_t n, unsigned d, F&& f) {
        Monomial::Storage e(n, 0);
        rec(e, 0, d, f);
    }

private:
    template <class F>
    static void rec(Monomial::Storage& e, std::size_t i, unsigned left, F& f) {
        if (i + 1 == e.size()) {
            e[i] = static_cast<std::uint16_t>(left);
            f(Monomial(e));
            return;
        }
        if (e.empty()) {
            if (left == 0) f(Monomial(e));
            return;
        }
        for (unsigned k = left + 1; k-- > 0;) {
            e[i] = static_cast<std::uint16_t>(k);
            rec(e, i + 1, left - k, f);
        }
        e[i] = 0;
    }

    std::mt19937_64 gen_;
};

}  // namespace quadbundle
