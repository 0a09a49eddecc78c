#pragma once

// Quadric reduction by an isotropic subbundle, hyperbolic extension (the inverse
// direction), the degeneration family Psi_t and a best-effort isotropic search.

#include "gradedform.hpp"
#include "poly_gcd.hpp"

#include <array>
#include <variant>

namespace quadbundle {

enum class RegularityKind { ProvenAt, RefutedAt, Unknown };

inline const char* to_string(RegularityKind k) {
    switch (k) {
        case RegularityKind::ProvenAt: return "ProvenAt";
        case RegularityKind::RefutedAt: return "RefutedAt";
        case RegularityKind::Unknown: return "Unknown";
    }
    return "?";
}

template <Coefficient K>
struct Regularity {
    RegularityKind kind = RegularityKind::Unknown;
    std::vector<std::uint32_t> primes;  // fields scanned without a rank drop
    std::vector<K> point;               // exact witness when refuted
    std::vector<std::string> notes;
};

/// Columns of n embed a rank-r subbundle U = sum O(u_j) into G.
template <Coefficient K>
struct IsotropicEmbedding {
    PolyMatrix<K> n;
    std::vector<int> u_degrees;  // empty for chart-level input
    bool isotropy_ok = false;
    bool generic_full_rank = false;  // N and M N of rank r over k(P^2)
    Regularity<K> regularity;
};

/// Largest p for which verify_isotropic scans all of P^2(F_p).
constexpr std::uint32_t kExhaustiveScanLimit = 1009;

namespace detail {

inline PolyMatrix<ModP> matrix_mod(const PolyMatrix<Rational>& m, const RingPtr& ring) {
    PolyMatrix<ModP> out(ring, m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = reduce_mod(m(i, j), ring);
    }
    return out;
}

/// First point where n or mn drops below rank r; all of P^2(F_p) when p is small,
/// otherwise `samples` random points.
inline std::optional<std::vector<ModP>> rank_drop_fp(const PolyMatrix<ModP>& n, const PolyMatrix<ModP>& mn,
                                                     std::size_t r, std::uint64_t seed, std::size_t samples,
                                                     const std::function<bool(const std::vector<ModP>&)>& accept) {
    const std::uint32_t p = n.field().p;
    auto test = [&](const std::vector<ModP>& pt) {
        return (n.rank_at_point(pt) < r || mn.rank_at_point(pt) < r) && accept(pt);
    };
    if (p <= kExhaustiveScanLimit) {
        const ModP zero(0, p), one(1, p);
        if (test({one, zero, zero})) return std::vector<ModP>{one, zero, zero};
        for (std::uint32_t a = 0; a < p; ++a) {
            if (test({ModP(a, p), one, zero})) return std::vector<ModP>{ModP(a, p), one, zero};
        }
        for (std::uint32_t a = 0; a < p; ++a) {
            for (std::uint32_t b = 0; b < p; ++b) {
                std::vector<ModP> pt{ModP(a, p), ModP(b, p), one};
                if (test(pt)) return pt;
            }
        }
        return std::nullopt;
    }
    Rng rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        std::vector<ModP> pt{ModP(rng.uniform(0, p - 1), p), ModP(rng.uniform(0, p - 1), p), ModP(1, p)};
        if (test(pt)) return pt;
    }
    return std::nullopt;
}

/// Degrees u_j with n(i, j) of degree a_i - u_j; throws when a column is inconsistent.
template <Coefficient K>
std::vector<int> column_degrees(const PolyMatrix<K>& n, const Grading& g) {
    std::vector<int> u;
    for (std::size_t j = 0; j < n.cols(); ++j) {
        std::optional<int> uj;
        for (std::size_t i = 0; i < n.rows(); ++i) {
            const auto& e = n(i, j);
            if (e.is_zero()) continue;
            if (!e.is_homogeneous()) throw Error("non_graded", "column " + std::to_string(j) + " has an inhomogeneous entry");
            const int want = g.degrees[i] - e.degree();
            if (uj && *uj != want) throw Error("non_graded", "column " + std::to_string(j) + " mixes degrees");
            uj = want;
        }
        if (!uj) throw Error("non_graded", "column " + std::to_string(j) + " is zero");
        u.push_back(*uj);
    }
    return u;
}

}  // namespace detail

/// Exact isotropy N^T M N = 0, generic rank of N and M N, and a rank scan over
/// F_p-points for each prime (one-sided evidence of regularity).
template <Coefficient K>
IsotropicEmbedding<K> verify_isotropic(const PolyMatrix<K>& m, const PolyMatrix<K>& n,
                                       const std::vector<std::uint32_t>& primes, std::uint64_t seed,
                                       std::size_t samples = 4096) {
    if (!m.is_square() || n.rows() != m.rows() || n.cols() == 0) {
        throw Error("dimension_mismatch", "embedding must have as many rows as the form and at least one column");
    }
    IsotropicEmbedding<K> out{n, {}, false, false, {}};
    const std::size_t r = n.cols();
    const auto mn = m * n;
    out.isotropy_ok = (n.transpose() * mn).is_zero();
    out.generic_full_rank = generic_rank(n) == r && generic_rank(mn) == r;
    auto& reg = out.regularity;
    if (!out.generic_full_rank) {
        reg.notes.push_back("N or M N drops rank generically");
    }
    std::vector<std::uint32_t> use = primes;
    if constexpr (std::is_same_v<K, ModP>) use = {m.field().p};
    for (auto p : use) {
        PolyMatrix<ModP> np, mnp;
        if constexpr (std::is_same_v<K, ModP>) {
            np = n;
            mnp = mn;
        } else {
            try {
                const auto ring = make_ring(FieldSpec::prime(p), m.ring()->vars);
                np = detail::matrix_mod(n, ring);
                mnp = detail::matrix_mod(mn, ring);
            } catch (const Error&) {
                reg.notes.push_back("skipped prime " + std::to_string(p) + ": bad reduction");
                continue;
            }
        }
        bool spurious = false;
        const auto hit = detail::rank_drop_fp(np, mnp, r, seed + p, samples, [&](const std::vector<ModP>& pt) {
            if constexpr (std::is_same_v<K, ModP>) {
                return true;
            } else {
                std::vector<K> lift;
                for (const auto& v : pt) lift.push_back(K::from_int(v.centered(), m.field()));
                if (n.rank_at_point(lift) < r || mn.rank_at_point(lift) < r) return true;
                spurious = true;
                return false;
            }
        });
        if (hit) {
            reg.kind = RegularityKind::RefutedAt;
            if constexpr (std::is_same_v<K, ModP>) {
                reg.point = *hit;
            } else {
                for (const auto& v : *hit) reg.point.push_back(K::from_int(v.centered(), m.field()));
            }
            reg.primes.clear();
            return out;
        }
        if (spurious) reg.notes.push_back("rank drops modulo " + std::to_string(p) + " that do not lift were ignored");
        if (p <= kExhaustiveScanLimit && !spurious) {
            reg.primes.push_back(p);
        } else if (p > kExhaustiveScanLimit) {
            reg.notes.push_back("F_" + std::to_string(p) + " sampled at " + std::to_string(samples) + " points only");
        }
    }
    if (!reg.primes.empty() && out.generic_full_rank) reg.kind = RegularityKind::ProvenAt;
    return out;
}

/// Graded variant: also checks that every column has a consistent degree.
template <Coefficient K>
IsotropicEmbedding<K> verify_isotropic(const GradedSymMatrix<K>& q, const PolyMatrix<K>& n,
                                       const std::vector<std::uint32_t>& primes, std::uint64_t seed,
                                       std::size_t samples = 4096) {
    std::vector<int> u;
    if (q.graded()) {
        if (n.rows() != q.size()) throw Error("dimension_mismatch", "embedding has the wrong number of rows");
        u = detail::column_degrees(n, q.grading());
    }
    auto out = verify_isotropic(q.matrix(), n, primes, seed, samples);
    out.u_degrees = std::move(u);
    return out;
}

inline std::vector<std::uint32_t> default_regularity_primes() { return {101}; }

namespace detail {

/// Largest s with s^2 dividing every entry (over F_p skipped when the gcd is too large).
template <Coefficient K>
Poly<K> global_square_factor(const PolyMatrix<K>& m) {
    const auto g = gcd(m.entries(), m.ring());
    auto s = Poly<K>::one(m.ring());
    if (g.is_zero() || g.degree() < 2) return s;
    try {
        for (const auto& [f, e] : squarefree_decomposition(g).factors) s = s * f.pow(e / 2);
    } catch (const Error&) {
    }
    return s;
}

template <Coefficient K>
int column_degree(const PolyMatrix<K>& m, std::size_t j) {
    int d = kMinusInfinity;
    for (std::size_t i = 0; i < m.rows(); ++i) d = std::max(d, m(i, j).degree());
    return d;
}

}  // namespace detail

/// Form induced on U^perp / U. U^perp is the kernel of N^T M over k(P^2); a complement
/// of N inside it is chosen greedily by lowest column degree. The result is chart
/// level, with square factors common to all entries removed.
template <Coefficient K>
GradedSymMatrix<K> reduce(const GradedSymMatrix<K>& q, const IsotropicEmbedding<K>& iso) {
    if (!iso.isotropy_ok) throw Error("not_isotropic", "isotropy is not certified");
    if (!iso.generic_full_rank) throw Error("not_regular", "N or M N drops rank generically");
    const std::size_t m = q.size(), r = iso.n.cols();
    if (m < 2 * r + 1) throw Error("bad_rank", "reduction needs m - 2r >= 1");
    const auto& ring = q.ring();
    const auto perp = kernel_over_fraction_field(iso.n.transpose() * q.matrix());
    if (perp.cols != m - r) {
        throw Error("non_generic", "kernel of N^T M has dimension " + std::to_string(perp.cols) + ", expected " +
                                       std::to_string(m - r));
    }
    const auto kc = perp.cleared(ring);
    std::vector<std::size_t> order(kc.cols());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return detail::column_degree(kc, a) < detail::column_degree(kc, b);
    });
    auto span = iso.n;
    PolyMatrix<K> w(ring, m, 0);
    for (auto j : order) {
        if (w.cols() == m - 2 * r) break;
        const auto c = kc.column(j);
        auto trial = PolyMatrix<K>::hstack(span, c);
        if (generic_rank(trial) == trial.cols()) {
            span = std::move(trial);
            w = PolyMatrix<K>::hstack(w, c);
        }
    }
    if (w.cols() != m - 2 * r) throw Error("internal", "no complement of U inside its orthogonal");
    auto red = congruence(q.matrix(), w);
    const auto s = detail::global_square_factor(red);
    if (s.degree() > 0) {
        const auto s2 = s * s;
        red = red.map([&](const Poly<K>& e) { return e.is_zero() ? e : *divide_exact(e, s2); });
    }
    return GradedSymMatrix<K>::chart(std::move(red));
}

template <Coefficient K>
struct HyperbolicExtension {
    GradedSymMatrix<K> q;
    PolyMatrix<K> planted;      // B as the last b coordinates; isotropic by construction
    bool h2_condition = false;  // b_i + b_j - twist > -3 for all pairs
    std::vector<std::size_t> lift_rows;  // rows of A carrying Q_T
};

/// Given 0 -> B -> A -> T^v -> 0 (rho: B -> A) and a form Q_T on T, builds
/// psi = [[S, rho], [rho^T, 0]] on A^v(twist) + B, with S = Q_T placed on rows of A
/// whose minor of ker(rho^T) is nonsingular. B is then regular isotropic and the
/// reduction by B is congruent to Q_T over k(P^2). Graded when the degrees allow it.
template <Coefficient K>
HyperbolicExtension<K> extend_hyperbolic(const GradedSymMatrix<K>& qt, const std::vector<int>& a_degrees,
                                         const std::vector<int>& b_degrees, const PolyMatrix<K>& rho, int twist) {
    const std::size_t a = a_degrees.size(), b = b_degrees.size();
    if (rho.rows() != a || rho.cols() != b || a < b || qt.size() != a - b) {
        throw Error("dimension_mismatch", "need rho of size |A| x |B| and Q_T of size |A| - |B|");
    }
    const auto& ring = qt.ring();
    for (std::size_t i = 0; i < a; ++i) {
        for (std::size_t j = 0; j < b; ++j) {
            const auto& e = rho(i, j);
            if (!e.is_zero() && (!e.is_homogeneous() || e.degree() != a_degrees[i] - b_degrees[j])) {
                throw Error("wrong_degree", "rho entry (" + std::to_string(i) + "," + std::to_string(j) +
                                                ") must have degree a_i - b_j");
            }
        }
    }
    HyperbolicExtension<K> out{qt, PolyMatrix<K>(ring, a + b, b), true, {}};
    for (std::size_t i = 0; i < b; ++i) {
        for (std::size_t j = i + 1; j < b; ++j) out.h2_condition &= b_degrees[i] + b_degrees[j] - twist > -3;
    }
    PolyMatrix<K> kc = PolyMatrix<K>::identity(ring, a);
    if (b > 0) {
        if (generic_rank(rho) != b) throw Error("rank_drop", "rho drops rank generically");
        kc = kernel_over_fraction_field(rho.transpose()).cleared(ring);
    }
    // rows of ker(rho^T) with a nonsingular minor
    std::vector<std::size_t> rows, all_cols(a - b);
    std::iota(all_cols.begin(), all_cols.end(), 0);
    PolyMatrix<K> picked(ring, 0, a - b);
    for (std::size_t i = 0; i < a && rows.size() < a - b; ++i) {
        auto trial = PolyMatrix<K>::vstack(picked, kc.submatrix({i}, all_cols));
        if (generic_rank(trial) == trial.rows()) {
            picked = std::move(trial);
            rows.push_back(i);
        }
    }
    if (rows.size() != a - b) throw Error("internal", "kernel of rho^T has no nonsingular maximal minor");
    PolyMatrix<K> psi(ring, a + b, a + b);
    for (std::size_t s = 0; s < rows.size(); ++s) {
        for (std::size_t t = 0; t < rows.size(); ++t) psi(rows[s], rows[t]) = qt.matrix()(s, t);
    }
    for (std::size_t i = 0; i < a; ++i) {
        for (std::size_t j = 0; j < b; ++j) psi(i, a + j) = psi(a + j, i) = rho(i, j);
    }
    for (std::size_t j = 0; j < b; ++j) out.planted(a + j, j) = Poly<K>::one(ring);
    std::vector<int> degrees;
    for (int ai : a_degrees) degrees.push_back(twist - ai);
    degrees.insert(degrees.end(), b_degrees.begin(), b_degrees.end());
    try {
        out.q = GradedSymMatrix<K>::validate(degrees, twist, psi);
    } catch (const Error& e) {
        if (e.kind() != "wrong_degree") throw;
        out.q = GradedSymMatrix<K>::chart(psi);
    }
    out.lift_rows = std::move(rows);
    return out;
}

/// Psi_t on G + E with blocks
///   [ t^3 A + t^2 M + eta J eta^T    t^2 A theta^T + t M theta^T ]
///   [ transpose                      phi + t theta A theta^T     ]
/// where eta is g x h, theta is 4 x g (rows span E^v) and theta M theta^T = phi.
/// (theta, -t Id) annihilates Psi_t, so det Psi_t = 0 for every t; for t != 0 the
/// form induced on G_t = ker(theta, -t Id) is the leading g x g block. The result is
/// a plain matrix, and Psi_0 = diag(eta J eta^T, phi).
template <Coefficient K>
PolyMatrix<K> degeneration_family(const PolyMatrix<K>& a, const PolyMatrix<K>& m, const PolyMatrix<K>& eta,
                                  const PolyMatrix<K>& theta, const PolyMatrix<K>& j, const PolyMatrix<K>& phi,
                                  const K& t) {
    const std::size_t g = a.rows(), h = eta.cols(), e = theta.rows();
    if (!a.is_square() || !m.is_square() || m.rows() != g || eta.rows() != g || theta.cols() != g ||
        !j.is_square() || j.rows() != h || !phi.is_square() || phi.rows() != e) {
        throw Error("dimension_mismatch", "need A, M of size g, eta g x h, theta e x g, J h x h and phi e x e");
    }
    if (!(a == a.transpose()) || !(m == m.transpose()) || !(j == j.transpose()) || !(phi == phi.transpose())) {
        throw Error("asymmetric", "A, M, J and phi must be symmetric");
    }
    if (!(congruence(m, theta.transpose()) == phi)) throw Error("phi_mismatch", "theta M theta^T differs from phi");
    const auto& ring = a.ring();
    auto scale = [&](const PolyMatrix<K>& x, const K& c) {
        return x.map([&](const Poly<K>& p) { return Poly<K>::constant(ring, c) * p; });
    };
    const K t2 = t * t, t3 = t2 * t;
    const auto top = scale(a, t3) + scale(m, t2) + congruence(j, eta.transpose());
    const auto corner = scale(a * theta.transpose(), t2) + scale(m * theta.transpose(), t);
    const auto bottom = phi + scale(congruence(a, theta.transpose()), t);
    PolyMatrix<K> psi(ring, g + e, g + e);
    psi.set_block(0, 0, top);
    psi.set_block(0, g, corner);
    psi.set_block(g, 0, corner.transpose());
    psi.set_block(g, g, bottom);
    return psi;
}

template <Coefficient K>
struct DegenerationData {
    PolyMatrix<K> a, m, eta, theta, j, phi;

    PolyMatrix<K> at(const K& t) const { return degeneration_family(a, m, eta, theta, j, phi, t); }
};

/// Random inputs with g = h + 4: A, M symmetric quadric, eta constant g x h,
/// theta spanning the left kernel of eta, J symmetric constant, phi = theta M theta^T.
template <Coefficient K>
DegenerationData<K> random_degeneration_data(const RingPtr& ring, std::size_t h, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t g = h + 4;
    auto sym = [&](std::size_t n, unsigned d) {
        PolyMatrix<K> s(ring, n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = i; k < n; ++k) s(i, k) = s(k, i) = rng.form<K>(ring, d);
        }
        return s;
    };
    DegenerationData<K> out{sym(g, 2), sym(g, 2), PolyMatrix<K>(ring, g, h), {}, sym(h, 0), {}};
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t k = 0; k < h; ++k) out.eta(i, k) = rng.form<K>(ring, 0);
    }
    out.theta = kernel_over_fraction_field(out.eta.transpose()).cleared(ring).transpose();
    if (out.theta.rows() != 4) throw Error("internal", "eta dropped rank; resample with another seed");
    out.phi = congruence(out.m, out.theta.transpose());
    return out;
}

/// Exponents of a delta-shaped column set: one column (z^a1, y^a2, 0, 0 | x^b1)
/// when b has one entry, two columns with (0, 0, y^a3, x^a4 | 0, z^b2) added when it has two.
struct DeltaShape {
    std::array<int, 4> a{1, 1, 1, 1};
    std::vector<int> b{1};

    std::size_t rows() const { return 4 + b.size(); }
};

namespace detail {

inline void check_shape(const DeltaShape& s) {
    if (s.b.empty() || s.b.size() > 2) throw Error("bad_shape", "delta shape has one or two columns");
    for (int v : s.a) {
        if (v <= 0) throw Error("bad_shape", "exponents a_i must be positive");
    }
    for (int v : s.b) {
        if (v < 0) throw Error("bad_shape", "exponents b_i must be nonnegative");
    }
}

template <Coefficient K>
Poly<K> power(const RingPtr& ring, std::size_t var, int e) {
    return Poly<K>::variable(ring, var).pow(static_cast<unsigned>(e));
}

}  // namespace detail

template <Coefficient K>
PolyMatrix<K> delta_shape_column(const RingPtr& ring, const DeltaShape& s) {
    detail::check_shape(s);
    using detail::power;
    PolyMatrix<K> d(ring, s.rows(), s.b.size());
    d(0, 0) = power<K>(ring, 2, s.a[0]);
    d(1, 0) = power<K>(ring, 1, s.a[1]);
    d(4, 0) = power<K>(ring, 0, s.b[0]);
    if (s.b.size() == 2) {
        d(2, 1) = power<K>(ring, 1, s.a[2]);
        d(3, 1) = power<K>(ring, 0, s.a[3]);
        d(5, 1) = power<K>(ring, 2, s.b[1]);
    }
    return d;
}

/// Symmetric M with diagonal corner diag(f) and M delta = 0. Needs x^(2 b1) | f1, f2
/// and, for two columns, z^(2 b2) | f3, f4; throws "not_divisible" otherwise.
/// Entries of the second border row outside g23, g24, q22 are zero.
template <Coefficient K>
PolyMatrix<K> delta_shape_companion(const std::vector<Poly<K>>& f, const DeltaShape& s) {
    detail::check_shape(s);
    if (f.size() != 4) throw Error("dimension_mismatch", "the diagonal corner has four entries");
    const auto& ring = f[0].ring();
    using detail::power;
    auto div = [](const Poly<K>& num, const Poly<K>& den, const char* what) {
        auto q = divide_exact(num, den);
        if (!q) throw Error("not_divisible", std::string("divisibility fails for ") + what);
        return *q;
    };
    PolyMatrix<K> m(ring, s.rows(), s.rows());
    for (std::size_t i = 0; i < 4; ++i) m(i, i) = f[i];
    const auto x1 = power<K>(ring, 0, s.b[0]);
    const auto z1 = power<K>(ring, 2, s.a[0]), y2 = power<K>(ring, 1, s.a[1]);
    const auto g11 = -div(f[0] * z1, x1, "f1");
    const auto g12 = -div(f[1] * y2, x1, "f2");
    const auto q11 = -div(g11 * z1 + g12 * y2, x1, "q11");
    m(0, 4) = m(4, 0) = g11;
    m(1, 4) = m(4, 1) = g12;
    m(4, 4) = q11;
    if (s.b.size() == 2) {
        const auto z2 = power<K>(ring, 2, s.b[1]);
        const auto y3 = power<K>(ring, 1, s.a[2]), x4 = power<K>(ring, 0, s.a[3]);
        const auto g23 = -div(f[2] * y3, z2, "f3");
        const auto g24 = -div(f[3] * x4, z2, "f4");
        const auto q22 = -div(g23 * y3 + g24 * x4, z2, "q22");
        m(2, 5) = m(5, 2) = g23;
        m(3, 5) = m(5, 3) = g24;
        m(5, 5) = q22;
    }
    return m;
}

struct IdentityBlock {};

using IsotropicAnsatz = std::variant<IdentityBlock, DeltaShape>;

namespace detail {

/// Solves a x = b over F_p; free variables are drawn at random.
inline std::optional<std::vector<ModP>> solve_fp(ScalarMatrix<ModP> a, std::vector<ModP> b, std::uint32_t p,
                                                 Rng& rng) {
    const std::size_t n = a.rows, m = a.cols;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m && r < n; ++c) {
        std::size_t piv = r;
        while (piv < n && a(piv, c).is_zero()) ++piv;
        if (piv == n) continue;
        for (std::size_t k = 0; k < m; ++k) std::swap(a(r, k), a(piv, k));
        std::swap(b[r], b[piv]);
        const auto inv = a(r, c).inverse();
        for (std::size_t k = 0; k < m; ++k) a(r, k) = a(r, k) * inv;
        b[r] = b[r] * inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == r || a(i, c).is_zero()) continue;
            const auto f = a(i, c);
            for (std::size_t k = 0; k < m; ++k) a(i, k) = a(i, k) - f * a(r, k);
            b[i] = b[i] - f * b[r];
        }
        pivots.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < n; ++i) {
        if (!b[i].is_zero()) return std::nullopt;
    }
    std::vector<ModP> x(m, ModP(0, p));
    std::vector<bool> is_pivot(m, false);
    for (auto c : pivots) is_pivot[c] = true;
    for (std::size_t c = 0; c < m; ++c) {
        if (!is_pivot[c]) x[c] = ModP(rng.uniform(0, p - 1), p);
    }
    for (std::size_t i = 0; i < r; ++i) {
        auto v = b[i];
        for (std::size_t c = 0; c < m; ++c) {
            if (!is_pivot[c] && !a(i, c).is_zero()) v = v - a(i, c) * x[c];
        }
        x[pivots[i]] = v;
    }
    return x;
}

struct Unknown {
    std::size_t row, col;  // position in X
    Monomial mono;
};

/// One round: X_new with M12 X_new + (M12 X_new)^T = rhs, where rhs is r x r symmetric.
inline std::optional<PolyMatrix<ModP>> linear_step(const PolyMatrix<ModP>& m12, const PolyMatrix<ModP>& rhs,
                                                   const std::vector<Unknown>& unknowns, std::size_t xrows,
                                                   Rng& rng) {
    const auto& ring = m12.ring();
    const std::uint32_t p = ring->field.p;
    const std::size_t r = m12.rows();
    std::map<std::tuple<std::size_t, std::size_t, Monomial>, std::size_t> eq;
    auto row_of = [&](std::size_t s, std::size_t t, const Monomial& mono) {
        const auto key = std::make_tuple(std::min(s, t), std::max(s, t), mono);
        return eq.try_emplace(key, eq.size()).first->second;
    };
    // images of the unknowns as sparse columns
    std::vector<std::vector<std::pair<std::size_t, ModP>>> cols(unknowns.size());
    for (std::size_t k = 0; k < unknowns.size(); ++k) {
        const auto& u = unknowns[k];
        const auto mono = Poly<ModP>::from_terms(ring, {{u.mono, ModP(1, p)}});
        for (std::size_t s = 0; s < r; ++s) {
            const auto img = m12(s, u.row) * mono;  // entry (s, u.col) and its mirror
            const ModP two(s == u.col ? 2 : 1, p);
            for (const auto& term : img.terms()) cols[k].push_back({row_of(s, u.col, term.mono), two * term.coeff});
        }
    }
    std::vector<std::pair<std::size_t, ModP>> b;
    for (std::size_t s = 0; s < r; ++s) {
        for (std::size_t t = s; t < r; ++t) {
            for (const auto& term : rhs(s, t).terms()) b.push_back({row_of(s, t, term.mono), term.coeff});
        }
    }
    ScalarMatrix<ModP> a{eq.size(), unknowns.size(), std::vector<ModP>(eq.size() * unknowns.size(), ModP(0, p))};
    std::vector<ModP> bv(eq.size(), ModP(0, p));
    for (std::size_t k = 0; k < cols.size(); ++k) {
        for (const auto& [i, v] : cols[k]) a(i, k) = a(i, k) + v;
    }
    for (const auto& [i, v] : b) bv[i] = bv[i] + v;
    const auto sol = solve_fp(std::move(a), std::move(bv), p, rng);
    if (!sol) return std::nullopt;
    PolyMatrix<ModP> x(ring, xrows, r);
    for (std::size_t k = 0; k < unknowns.size(); ++k) {
        const auto& u = unknowns[k];
        x(u.row, u.col) = x(u.row, u.col) + Poly<ModP>::from_terms(ring, {{u.mono, (*sol)[k]}});
    }
    return x;
}

}  // namespace detail

/// Best-effort search over F_p. IdentityBlock: N = [I_r; X] with X graded by the
/// pattern; X starts random and each round solves the part of N^T M N linear in X
/// with the quadratic part frozen at the previous iterate (at most 20 rounds, accepted
/// only on an exact zero residual). DeltaShape: tests the delta-shaped columns.
/// Returns nullopt when nothing certified was found.
inline std::optional<IsotropicEmbedding<ModP>> find_isotropic(const GradedSymMatrix<ModP>& q,
                                                              std::size_t target_rank,
                                                              const IsotropicAnsatz& ansatz, int max_tries,
                                                              std::uint64_t seed) {
    const std::size_t m = q.size(), r = target_rank;
    if (r == 0 || m < 2 * r + 1) throw Error("bad_rank", "need r >= 1 and m - 2r >= 1");
    const auto& ring = q.ring();
    const auto& mat = q.matrix();
    const std::vector<std::uint32_t> primes{q.field().p};
    auto certified = [&](const PolyMatrix<ModP>& n) -> std::optional<IsotropicEmbedding<ModP>> {
        auto iso = verify_isotropic(q, n, primes, seed);
        if (iso.isotropy_ok && iso.generic_full_rank) return iso;
        return std::nullopt;
    };
    if (const auto* shape = std::get_if<DeltaShape>(&ansatz)) {
        if (shape->rows() != m || shape->b.size() != r) return std::nullopt;
        return certified(delta_shape_column<ModP>(ring, *shape));
    }
    std::vector<std::size_t> head(r), tail(m - r);
    std::iota(head.begin(), head.end(), 0);
    std::iota(tail.begin(), tail.end(), r);
    auto embed = [&](const PolyMatrix<ModP>& x) {
        return PolyMatrix<ModP>::vstack(PolyMatrix<ModP>::identity(ring, r), x);
    };
    if (mat.leading_block(r).is_zero()) {
        if (auto iso = certified(embed(PolyMatrix<ModP>(ring, m - r, r)))) return iso;
    }
    std::vector<detail::Unknown> unknowns;
    for (std::size_t i = 0; i < m - r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            const int e = q.graded() ? q.grading().degrees[r + i] - q.grading().degrees[j] : 0;
            if (e < 0) continue;
            Rng::for_each_monomial(ring->vars.size(), static_cast<unsigned>(e),
                                   [&](const Monomial& mono) { unknowns.push_back({i, j, mono}); });
        }
    }
    if (unknowns.empty()) return std::nullopt;
    const auto m11 = mat.submatrix(head, head), m12 = mat.submatrix(head, tail), m22 = mat.submatrix(tail, tail);
    Rng rng(seed);
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        PolyMatrix<ModP> x(ring, m - r, r);
        for (const auto& u : unknowns) {
            x(u.row, u.col) = x(u.row, u.col) +
                              Poly<ModP>::from_terms(ring, {{u.mono, rng.scalar<ModP>(ring->field)}});
        }
        for (int round = 0; round < 20; ++round) {
            const auto n = embed(x);
            if (congruence(mat, n).is_zero()) {
                if (auto iso = certified(n)) return iso;
                break;
            }
            const auto rhs = (m11 + congruence(m22, x)).map([](const FpPoly& e) { return -e; });
            auto next = detail::linear_step(m12, rhs, unknowns, m - r, rng);
            if (!next) break;
            x = std::move(*next);
        }
    }
    return std::nullopt;
}

template <Coefficient K>
struct PlantedIsotropic {
    GradedSymMatrix<K> q;
    PolyMatrix<K> n;
};

/// Half-period pattern (-1)^d 0^k with zero coupling and an isotropic
/// N = [I_r; X1; X2] of rank r = (d+k)/2 - 2 (X1 constants, X2 linear forms).
/// The leading r x r quadric block is solved from the other blocks.
template <Coefficient K>
PlantedIsotropic<K> planted_halfperiod(const RingPtr& ring, int d, int k, std::uint64_t seed) {
    if (d < 1 || k < 0 || (d + k) % 2 != 0 || d + k < 6) {
        throw Error("bad_parameters", "need d + k even and at least 6 for a rank-4 target");
    }
    const std::size_t r = static_cast<std::size_t>((d + k) / 2 - 2);
    if (r > static_cast<std::size_t>(d)) throw Error("bad_parameters", "need r <= d");
    const std::size_t m = static_cast<std::size_t>(d + k);
    Grading g;
    g.degrees.assign(static_cast<std::size_t>(d), -1);
    g.degrees.insert(g.degrees.end(), static_cast<std::size_t>(k), 0);
    Rng rng(seed);
    for (int t = 0; t < 20; ++t) {
        PolyMatrix<K> mat(ring, m, m);
        for (std::size_t i = 0; i < static_cast<std::size_t>(d); ++i) {
            for (std::size_t j = i; j < static_cast<std::size_t>(d); ++j) {
                if (i >= r || j >= r) mat(i, j) = mat(j, i) = rng.form<K>(ring, 2);
            }
        }
        for (std::size_t i = static_cast<std::size_t>(d); i < m; ++i) mat(i, i) = Poly<K>::one(ring);
        PolyMatrix<K> n(ring, m, r);
        for (std::size_t j = 0; j < r; ++j) n(j, j) = Poly<K>::one(ring);
        for (std::size_t i = r; i < m; ++i) {
            for (std::size_t j = 0; j < r; ++j) n(i, j) = rng.form<K>(ring, i < static_cast<std::size_t>(d) ? 0 : 1);
        }
        // with A'' = 0 the product N^T M N equals the terms A'' must cancel
        const auto rest = congruence(mat, n);
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < r; ++j) mat(i, j) = -rest(i, j);
        }
        if (det(mat).is_zero()) continue;
        return PlantedIsotropic<K>{GradedSymMatrix<K>::validate(g.degrees, 0, mat), n};
    }
    throw Error("degenerate", "no nondegenerate planted model after 20 draws");
}

}  // namespace quadbundle
