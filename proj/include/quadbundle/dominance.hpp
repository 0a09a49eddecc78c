#pragma once

// Rank certificate for the isotropy obstruction map
//   eta(K, N) = K^T M^T + M K + K^T Z K + N^T N
// with K an l x r constant matrix, N an (r+k) x r matrix of linear forms, M an r x l
// matrix of quadrics and Z a symmetric l x l matrix of quadrics.

#include "polymat.hpp"
#include "random.hpp"

#include <chrono>
#include <map>

namespace quadbundle {

struct DominanceInstance {
    int r = 0, l = 0, k = 0;
    int n = 3;  // number of variables
    std::uint32_t p = 32003;
    std::uint64_t seed = 0;
    bool rational = false;  // exact QQ instead of F_p
};

struct DominanceResult {
    int rank = 0;
    int target_dim = 0;
    int unknowns = 0;
    bool dominant = false;    // full rank at some sampled point
    int points_tried = 0;
    bool hypothesis = false;  // k = 4 - l and (r, l) in the expected dominant range
    std::string field;
    double seconds = 0;
    std::vector<std::string> notes;
};

/// Base point and the fixed general data M, Z.
template <Coefficient K>
struct DominancePoint {
    PolyMatrix<K> m, z, k0, n0;
};

/// Range of (r, l) expected to be dominant when k = 4 - l.
inline bool dominance_hypothesis(int r, int l, int k) {
    if (k != 4 - l || r < 0 || l < 0) return false;
    return r <= 3 || (r <= 5 && l <= 3) || (r <= 6 && l <= 2) || (r <= 8 && l <= 1) || (r == 9 && l == 0);
}

inline int dominance_target_dim(int r, int n) { return r * (r + 1) / 2 * (n * (n + 1) / 2); }

namespace detail {

inline void check_instance(const DominanceInstance& in) {
    if (in.r < 0 || in.l < 0 || in.k < 0 || in.n < 1) throw Error("bad_parameters", "r, l, k must be >= 0 and n >= 1");
    if (!in.rational && (in.p <= 3 || !fp::is_prime(in.p))) throw Error("bad_parameters", "p must be a prime > 3");
}

/// Position of each degree-d monomial in grlex order.
inline std::map<Monomial, std::size_t> monomial_positions(int n, unsigned d) {
    std::map<Monomial, std::size_t> pos;
    Rng::for_each_monomial(static_cast<std::size_t>(n), d, [&](const Monomial& m) { pos.emplace(m, pos.size()); });
    return pos;
}

inline std::vector<std::string> variable_names(int n) {
    if (n == 3) return {"x", "y", "z"};
    std::vector<std::string> v;
    for (int i = 0; i < n; ++i) v.push_back("t" + std::to_string(i + 1));
    return v;
}

}  // namespace detail

inline RingPtr dominance_ring(const DominanceInstance& in) {
    return make_ring(in.rational ? FieldSpec::rational() : FieldSpec::prime(in.p), detail::variable_names(in.n));
}

template <Coefficient K>
DominancePoint<K> sample_dominance_point(const RingPtr& ring, const DominanceInstance& in, Rng& rng) {
    const auto r = static_cast<std::size_t>(in.r), l = static_cast<std::size_t>(in.l),
               rk = static_cast<std::size_t>(in.r + in.k);
    DominancePoint<K> pt{PolyMatrix<K>(ring, r, l), PolyMatrix<K>(ring, l, l), PolyMatrix<K>(ring, l, r),
                         PolyMatrix<K>(ring, rk, r)};
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < l; ++j) pt.m(i, j) = rng.form<K>(ring, 2);
    }
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = i; j < l; ++j) pt.z(i, j) = pt.z(j, i) = rng.form<K>(ring, 2);
    }
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = 0; j < r; ++j) pt.k0(i, j) = rng.form<K>(ring, 0);
    }
    for (std::size_t i = 0; i < rk; ++i) {
        for (std::size_t j = 0; j < r; ++j) pt.n0(i, j) = rng.form<K>(ring, 1);
    }
    return pt;
}

/// eta at (K, N) for the data M, Z of the point.
template <Coefficient K>
PolyMatrix<K> eta_map(const DominancePoint<K>& pt, const PolyMatrix<K>& kmat, const PolyMatrix<K>& nmat) {
    auto out = nmat.transpose() * nmat;
    if (pt.m.cols() > 0) {
        const auto mk = pt.m * kmat;
        out = out + mk + mk.transpose() + kmat.transpose() * pt.z * kmat;
    }
    return out;
}

/// Jacobian of eta at (K0, N0). Rows: pairs i <= j in row-major order, then the
/// quadric monomials in grlex order. Columns: entries of K (row-major), then
/// entries of N (row-major) times the variables. Each direction E has image
/// D(i, j) = [j = b] w_i + [i = b] w_j for a column b and quadrics w.
template <Coefficient K>
ScalarMatrix<K> dominance_jacobian(const DominanceInstance& in, const DominancePoint<K>& pt) {
    const auto& ring = pt.n0.ring();
    const auto r = static_cast<std::size_t>(in.r), l = static_cast<std::size_t>(in.l),
               rk = static_cast<std::size_t>(in.r + in.k), n = static_cast<std::size_t>(in.n);
    const auto quad = detail::monomial_positions(in.n, 2);
    const std::size_t nq = quad.size();
    std::vector<std::vector<std::size_t>> pair_row(r, std::vector<std::size_t>(r));
    std::size_t rows = 0;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = i; j < r; ++j) pair_row[i][j] = pair_row[j][i] = nq * rows++;
    }
    rows *= nq;
    const std::size_t cols = l * r + rk * r * n;
    const K zero = K::from_int(0, ring->field);
    ScalarMatrix<K> jac{rows, cols, std::vector<K>(rows * cols, zero)};
    auto add = [&](std::size_t base, const Poly<K>& w, std::size_t col) {
        for (const auto& t : w.terms()) {
            auto& cell = jac(base + quad.at(t.mono), col);
            cell = cell + t.coeff;
        }
    };
    auto place = [&](std::size_t b, const std::vector<Poly<K>>& w, std::size_t col) {
        for (std::size_t i = 0; i < r; ++i) {
            // D(i, b) = w_i + [i = b] w_b, counted once per unordered pair
            add(pair_row[i][b], w[i], col);
            if (i == b) add(pair_row[b][b], w[b], col);
        }
    };
    std::size_t col = 0;
    if (l > 0) {
        const auto zk = pt.z * pt.k0;  // l x r
        for (std::size_t a = 0; a < l; ++a) {
            for (std::size_t b = 0; b < r; ++b, ++col) {
                std::vector<Poly<K>> w;
                for (std::size_t i = 0; i < r; ++i) w.push_back(pt.m(i, a) + zk(a, i));
                place(b, w, col);
            }
        }
    }
    for (std::size_t c = 0; c < rk; ++c) {
        for (std::size_t b = 0; b < r; ++b) {
            for (std::size_t v = 0; v < n; ++v, ++col) {
                const auto xv = Poly<K>::variable(ring, v);
                std::vector<Poly<K>> u;
                for (std::size_t j = 0; j < r; ++j) u.push_back(xv * pt.n0(c, j));
                place(b, u, col);
            }
        }
    }
    return jac;
}

/// Full rank of the Jacobian at any of up to four random points certifies
/// dominance; rank deficiency at all of them is reported as evidence only.
template <Coefficient K>
DominanceResult dominance_check(const DominanceInstance& in) {
    detail::check_instance(in);
    const auto start = std::chrono::steady_clock::now();
    DominanceResult res;
    res.target_dim = dominance_target_dim(in.r, in.n);
    res.unknowns = in.l * in.r + (in.r + in.k) * in.r * in.n;
    res.hypothesis = dominance_hypothesis(in.r, in.l, in.k);
    res.field = in.rational ? "QQ" : "F_" + std::to_string(in.p);
    if (in.k != 4 - in.l) res.notes.push_back("k differs from 4 - l; outside the expected dominant range");
    if (res.target_dim == 0) {
        res.dominant = true;
        res.notes.push_back("target space is zero; vacuously dominant");
    } else {
        const auto ring = dominance_ring(in);
        Rng rng(in.seed);
        for (int t = 0; t < 4 && !res.dominant; ++t) {
            const auto pt = sample_dominance_point<K>(ring, in, rng);
            res.rank = std::max(res.rank, static_cast<int>(rank(dominance_jacobian(in, pt))));
            res.points_tried = t + 1;
            res.dominant = res.rank == res.target_dim;
        }
        if (!res.dominant) res.notes.push_back("no certificate found; rank deficiency is evidence only");
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

inline DominanceResult dominance_check(const DominanceInstance& in) {
    return in.rational ? dominance_check<Rational>(in) : dominance_check<ModP>(in);
}

struct DominanceRow {
    DominanceInstance instance;
    DominanceResult result;
    bool discrepancy = false;  // hypothesis holds but no certificate was found
};

/// (r, l) cells with k = 4 - l.
inline std::vector<std::pair<int, int>> default_dominance_grid() { return {{3, 3}, {3, 4}, {5, 3}, {6, 2}, {8, 1}, {9, 0}}; }

inline std::vector<DominanceRow> dominance_table(const std::vector<std::pair<int, int>>& cells, std::uint32_t p,
                                                 std::uint64_t seed) {
    std::vector<DominanceRow> rows;
    for (const auto& [r, l] : cells) {
        DominanceInstance in{r, l, 4 - l, 3, p, seed, false};
        if (in.k < 0) in.k = 0;
        auto res = dominance_check(in);
        const bool bad = res.hypothesis && !res.dominant;
        rows.push_back({in, std::move(res), bad});
    }
    return rows;
}

}  // namespace quadbundle
