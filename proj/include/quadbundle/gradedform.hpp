#pragma once

// Graded symmetric matrices q: G -> G^v(delta) for split G = sum O(a_i).

#include "curve.hpp"

#include <numeric>

namespace quadbundle {

struct Grading {
    std::vector<int> degrees;
    int twist = 0;

    friend bool operator==(const Grading&, const Grading&) = default;

    int entry_degree(std::size_t i, std::size_t j) const { return twist - degrees[i] - degrees[j]; }

    /// -2 sum a_i + m delta.
    int discriminant_degree() const {
        return -2 * std::accumulate(degrees.begin(), degrees.end(), 0) + static_cast<int>(degrees.size()) * twist;
    }
};

/// Symmetric matrix with nonzero determinant; graded when it presents a map of
/// split bundles, otherwise a chart-level model known only up to congruence over k(P^2).
template <Coefficient K>
class GradedSymMatrix {
public:
    /// Checks symmetry, entry degrees and nondegeneracy; throws Error with kind
    /// "asymmetric", "wrong_degree", "degenerate" or "dimension_mismatch".
    static GradedSymMatrix validate(std::vector<int> degrees, int twist, PolyMatrix<K> mat) {
        if (!mat.is_square() || mat.rows() != degrees.size()) {
            throw Error("dimension_mismatch", "degree vector length " + std::to_string(degrees.size()) +
                                                  " does not match a " + std::to_string(mat.rows()) + "x" +
                                                  std::to_string(mat.cols()) + " matrix");
        }
        check_symmetric(mat);
        Grading g{std::move(degrees), twist};
        for (std::size_t i = 0; i < mat.rows(); ++i) {
            for (std::size_t j = i; j < mat.cols(); ++j) {
                const auto& e = mat(i, j);
                if (e.is_zero()) continue;
                const int want = g.entry_degree(i, j);
                if (want < 0 || !e.is_homogeneous() || e.degree() != want) {
                    throw Error("wrong_degree", "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                                    ") must be zero or homogeneous of degree " + std::to_string(want) +
                                                    ", got " + to_string(e));
                }
            }
        }
        GradedSymMatrix q(std::move(mat), std::move(g));
        q.compute_det();
        if (q.det_.degree() != q.grading_->discriminant_degree()) {
            throw Error("internal", "determinant degree disagrees with the grading");
        }
        return q;
    }

    /// Ungraded symmetric matrix with nonzero determinant.
    static GradedSymMatrix chart(PolyMatrix<K> mat) {
        if (!mat.is_square()) throw Error("dimension_mismatch", "symmetric form must be square");
        check_symmetric(mat);
        GradedSymMatrix q(std::move(mat), std::nullopt);
        q.compute_det();
        return q;
    }

    const PolyMatrix<K>& matrix() const { return mat_; }
    const RingPtr& ring() const { return mat_.ring(); }
    const FieldSpec& field() const { return mat_.field(); }
    std::size_t size() const { return mat_.rows(); }
    bool graded() const { return grading_.has_value(); }
    const Grading& grading() const {
        if (!grading_) throw Error("ungraded", "chart-level model carries no grading");
        return *grading_;
    }
    const std::optional<Grading>& maybe_grading() const { return grading_; }
    const Poly<K>& determinant() const { return det_; }

private:
    GradedSymMatrix(PolyMatrix<K> m, std::optional<Grading> g) : mat_(std::move(m)), grading_(std::move(g)) {}

    static void check_symmetric(const PolyMatrix<K>& m) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (std::size_t j = i + 1; j < m.cols(); ++j) {
                if (!(m(i, j) == m(j, i))) {
                    throw Error("asymmetric", "entries (" + std::to_string(i) + "," + std::to_string(j) + ") and (" +
                                                  std::to_string(j) + "," + std::to_string(i) + ") differ");
                }
            }
        }
    }

    void compute_det() {
        det_ = det(mat_);
        if (det_.is_zero()) throw Error("degenerate", "the determinant vanishes identically");
    }

    PolyMatrix<K> mat_;
    std::optional<Grading> grading_;
    Poly<K> det_;
};

/// Random symmetric fill of a degree pattern (entries of negative degree are zero).
template <Coefficient K>
PolyMatrix<K> random_graded_fill(const RingPtr& ring, const Grading& g, Rng& rng) {
    const std::size_t m = g.degrees.size();
    PolyMatrix<K> mat(ring, m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) mat(i, j) = mat(j, i) = rng.form<K>(ring, g.entry_degree(i, j));
    }
    return mat;
}

/// Random invertible constant matrix, for congruences that preserve every grading
/// with equal degrees. Small-height entries over QQ.
template <Coefficient K>
PolyMatrix<K> random_constant_invertible(const RingPtr& ring, std::size_t n, Rng& rng) {
    while (true) {
        ScalarMatrix<K> s{n, n, {}};
        for (std::size_t i = 0; i < n * n; ++i) s.a.push_back(rng.scalar<K>(ring->field));
        if (rank(s) != n) continue;
        PolyMatrix<K> m(ring, n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) m(i, j) = Poly<K>::constant(ring, s(i, j));
        }
        return m;
    }
}

/// Random automorphism P of G = sum O(a_i): constants between equal degrees,
/// forms of degree a_i - a_j from O(a_j) to O(a_i) when a_i > a_j, zero otherwise.
/// P^T q P stays graded with the same pattern.
template <Coefficient K>
PolyMatrix<K> random_graded_automorphism(const RingPtr& ring, const Grading& g, Rng& rng) {
    const std::size_t m = g.degrees.size();
    PolyMatrix<K> p(ring, m, m);
    std::map<int, std::vector<std::size_t>> blocks;
    for (std::size_t i = 0; i < m; ++i) blocks[g.degrees[i]].push_back(i);
    for (const auto& [deg, idx] : blocks) {
        const auto c = random_constant_invertible<K>(ring, idx.size(), rng);
        for (std::size_t a = 0; a < idx.size(); ++a) {
            for (std::size_t b = 0; b < idx.size(); ++b) p(idx[a], idx[b]) = c(a, b);
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (g.degrees[i] > g.degrees[j]) p(i, j) = rng.form<K>(ring, g.degrees[i] - g.degrees[j]);
        }
    }
    return p;
}

/// Graded automorphism when q carries a grading, a constant one otherwise.
template <Coefficient K>
PolyMatrix<K> random_congruence(const GradedSymMatrix<K>& q, Rng& rng) {
    return q.graded() ? random_graded_automorphism<K>(q.ring(), q.grading(), rng)
                      : random_constant_invertible<K>(q.ring(), q.size(), rng);
}

template <Coefficient K>
PlaneCurve<K> discriminant(const GradedSymMatrix<K>& q) {
    auto c = PlaneCurve<K>::of(q.determinant());
    if (q.graded() && c.degree != q.grading().discriminant_degree()) {
        throw Error("internal", "discriminant degree disagrees with the grading");
    }
    return c;
}

template <Coefficient K>
std::size_t corank_at(const GradedSymMatrix<K>& q, const std::vector<K>& pt) {
    if (std::all_of(pt.begin(), pt.end(), [](const K& v) { return v.is_zero(); })) {
        throw Error("bad_point", "the origin is not a projective point");
    }
    return q.size() - q.matrix().rank_at_point(pt);
}

template <Coefficient K>
struct Corank2Verdict {
    bool nonempty = false;
    std::vector<K> point;                    // witness when nonempty
    std::vector<std::uint32_t> primes_scanned;
    std::vector<std::string> notes;          // skipped primes, spurious lifts
};

inline const std::vector<std::uint32_t>& default_scan_primes() {
    static const std::vector<std::uint32_t> primes{101, 211, 32003};
    return primes;
}

namespace detail {

/// First point of V(f) over F_p where the matrix has corank >= 2, visiting all points.
inline void scan_corank2(const PolyMatrix<ModP>& m, const FpPoly& f, std::uint64_t seed,
                         const std::function<bool(const std::vector<ModP>&)>& on_hit) {
    for (const auto& pt : curve_points_fp(f, seed)) {
        if (m.rows() - m.rank_at_point(pt) >= 2 && on_hit(pt)) return;
    }
}

}  // namespace detail

/// One-sided test: every point of corank >= 2 lies on C, so the scan visits all
/// F_p-points of C. Over QQ, hits are lifted by centered representatives and rechecked exactly.
template <Coefficient K>
Corank2Verdict<K> corank2_empty(const GradedSymMatrix<K>& q, const std::vector<std::uint32_t>& primes,
                                std::uint64_t seed) {
    Corank2Verdict<K> out;
    if constexpr (std::is_same_v<K, ModP>) {
        const auto p = q.field().p;
        if (!primes.empty() && std::find(primes.begin(), primes.end(), p) == primes.end()) {
            out.notes.push_back("matrix is defined over F_" + std::to_string(p) + "; scanned that field only");
        }
        detail::scan_corank2(q.matrix(), q.determinant(), seed, [&](const std::vector<ModP>& pt) {
            out.nonempty = true;
            out.point = pt;
            return true;
        });
        out.primes_scanned.push_back(p);
    } else {
        for (auto p : primes) {
            const auto ring = make_ring(FieldSpec::prime(p), q.ring()->vars);
            PolyMatrix<ModP> mp(ring, q.size(), q.size());
            FpPoly fp_det;
            try {
                for (std::size_t i = 0; i < q.size(); ++i) {
                    for (std::size_t j = 0; j < q.size(); ++j) mp(i, j) = reduce_mod(q.matrix()(i, j), ring);
                }
                fp_det = reduce_mod(q.determinant(), ring);
            } catch (const Error&) {
                out.notes.push_back("skipped prime " + std::to_string(p) + ": it divides a denominator");
                continue;
            }
            if (fp_det.is_zero()) {
                out.notes.push_back("skipped prime " + std::to_string(p) + ": determinant vanishes mod p");
                continue;
            }
            detail::scan_corank2(mp, fp_det, seed, [&](const std::vector<ModP>& pt) {
                std::vector<K> lift;
                for (const auto& v : pt) lift.push_back(K::from_int(v.centered(), q.field()));
                if (corank_at(q, lift) >= 2) {
                    out.nonempty = true;
                    out.point = lift;
                    return true;
                }
                out.notes.push_back("corank-2 point mod " + std::to_string(p) + " at " + point_to_string(pt) +
                                    " does not lift");
                return false;
            });
            out.primes_scanned.push_back(p);
            if (out.nonempty) break;
        }
    }
    return out;
}

}  // namespace quadbundle
