#pragma once

// Shared fixtures and independent oracles for the test suites.

#include <quadbundle/polymat.hpp>
#include <quadbundle/random.hpp>

#include <algorithm>
#include <numeric>

namespace qb_test {

using namespace quadbundle;

inline RingPtr ring_qq() {
    static RingPtr r = make_ring(FieldSpec::rational());
    return r;
}

inline RingPtr ring_fp(std::uint32_t p) { return make_ring(FieldSpec::prime(p)); }

template <Coefficient K>
PolyMatrix<K> random_matrix(Rng& rng, const RingPtr& ring, std::size_t rows, std::size_t cols, int deg) {
    PolyMatrix<K> m(ring, rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.form<K>(ring, deg);
    }
    return m;
}

template <Coefficient K>
PolyMatrix<K> random_symmetric(Rng& rng, const RingPtr& ring, std::size_t n, int deg) {
    PolyMatrix<K> m(ring, n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = rng.form<K>(ring, deg);
    }
    return m;
}

/// Random invertible constant matrix.
template <Coefficient K>
PolyMatrix<K> random_invertible(Rng& rng, const RingPtr& ring, std::size_t n) {
    while (true) {
        auto m = random_matrix<K>(rng, ring, n, n, 0);
        if (rank(m.evaluate(std::vector<K>(ring->vars.size(), K::from_int(0, ring->field)))) == n) return m;
    }
}

/// Leibniz formula: sum over all permutations.
template <Coefficient K>
Poly<K> det_leibniz(const PolyMatrix<K>& m) {
    const std::size_t n = m.rows();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Poly<K> acc = Poly<K>::zero(m.ring());
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
        }
        Poly<K> t = Poly<K>::one(m.ring());
        for (std::size_t i = 0; i < n && !t.is_zero(); ++i) t *= m(i, perm[i]);
        if (inversions % 2) {
            acc -= t;
        } else {
            acc += t;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

template <Coefficient K>
std::vector<K> point(const RingPtr& ring, std::initializer_list<long long> xs) {
    std::vector<K> v;
    for (auto x : xs) v.push_back(K::from_int(x, ring->field));
    return v;
}

/// Exhaustive list of representatives of P^2(F_p).
inline std::vector<std::vector<ModP>> projective_plane(std::uint32_t p) {
    std::vector<std::vector<ModP>> pts;
    for (std::uint32_t a = 0; a < p; ++a) {
        for (std::uint32_t b = 0; b < p; ++b) pts.push_back({ModP(a, p), ModP(b, p), ModP(1, p)});
    }
    for (std::uint32_t a = 0; a < p; ++a) pts.push_back({ModP(a, p), ModP(1, p), ModP(0, p)});
    pts.push_back({ModP(1, p), ModP(0, p), ModP(0, p)});
    return pts;
}

}  // namespace qb_test
