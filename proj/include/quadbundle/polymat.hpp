#pragma once

// Matrices over k[x,y,z] and over the fraction field k(x,y,z).

#include "poly_gcd.hpp"

#include <functional>
#include <numeric>

namespace quadbundle {

inline constexpr std::size_t kMaxMatrixDim = 64;

/// Dense matrix of field elements, row-major.
template <Coefficient K>
struct ScalarMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<K> a;

    K& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const K& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

/// Rank by Gaussian elimination (destroys the input).
template <Coefficient K>
std::size_t rank(ScalarMatrix<K> m) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t piv = r;
        while (piv < m.rows && m(piv, c).is_zero()) ++piv;
        if (piv == m.rows) continue;
        if (piv != r) {
            for (std::size_t j = c; j < m.cols; ++j) std::swap(m(piv, j), m(r, j));
        }
        const K inv = m(r, c).inverse();
        for (std::size_t i = r + 1; i < m.rows; ++i) {
            if (m(i, c).is_zero()) continue;
            const K f = m(i, c) * inv;
            for (std::size_t j = c; j < m.cols; ++j) m(i, j) -= f * m(r, j);
        }
        ++r;
    }
    return r;
}

template <Coefficient K>
class PolyMatrix {
public:
    using P = Poly<K>;

    PolyMatrix() = default;
    PolyMatrix(RingPtr ring, std::size_t rows, std::size_t cols)
        : ring_(std::move(ring)), rows_(rows), cols_(cols), e_(rows * cols, P(ring_)) {
        if (rows > kMaxMatrixDim || cols > kMaxMatrixDim) {
            throw Error("dimension_too_large", "matrix dimensions are capped at " + std::to_string(kMaxMatrixDim));
        }
    }

    static PolyMatrix identity(const RingPtr& ring, std::size_t n) {
        PolyMatrix m(ring, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = P::one(ring);
        return m;
    }

    static PolyMatrix from_rows(const RingPtr& ring, const std::vector<std::vector<P>>& rows) {
        const std::size_t c = rows.empty() ? 0 : rows[0].size();
        PolyMatrix m(ring, rows.size(), c);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != c) throw Error("dimension_mismatch", "ragged matrix rows");
            for (std::size_t j = 0; j < c; ++j) {
                if (!same_ring(rows[i][j].ring(), ring)) throw Error("ring_mismatch", "matrix entry from another ring");
                m(i, j) = rows[i][j];
            }
        }
        return m;
    }

    static PolyMatrix parse(const RingPtr& ring, const std::vector<std::vector<std::string>>& rows) {
        std::vector<std::vector<P>> ps;
        for (const auto& r : rows) {
            auto& out = ps.emplace_back();
            for (const auto& s : r) out.push_back(parse_poly<K>(s, ring));
        }
        return from_rows(ring, ps);
    }

    static PolyMatrix diagonal(const RingPtr& ring, const std::vector<P>& d) {
        PolyMatrix m(ring, d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    const RingPtr& ring() const { return ring_; }
    const FieldSpec& field() const { return ring_->field; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    P& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const P& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

    bool is_zero() const {
        return std::all_of(e_.begin(), e_.end(), [](const P& p) { return p.is_zero(); });
    }

    bool is_symmetric() const {
        if (!is_square()) return false;
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = i + 1; j < cols_; ++j) {
                if (!((*this)(i, j) == (*this)(j, i))) return false;
            }
        }
        return true;
    }

    PolyMatrix transpose() const {
        PolyMatrix t(ring_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        }
        return t;
    }

    friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
        if (a.cols_ != b.rows_) throw Error("dimension_mismatch", "matrix product with incompatible shapes");
        PolyMatrix c(a.ring_, a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const P& aik = a(i, k);
                if (aik.is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    if (!b(k, j).is_zero()) c(i, j) += aik * b(k, j);
                }
            }
        }
        return c;
    }

    friend PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b) { return a.zip(b, std::plus<>{}); }
    friend PolyMatrix operator-(const PolyMatrix& a, const PolyMatrix& b) { return a.zip(b, std::minus<>{}); }

    friend PolyMatrix operator*(const P& s, const PolyMatrix& m) {
        return m.map([&](const P& e) { return s * e; });
    }

    friend bool operator==(const PolyMatrix& a, const PolyMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
    }

    template <class F>
    PolyMatrix map(F&& f) const {
        PolyMatrix r(*this);
        for (auto& e : r.e_) e = f(e);
        return r;
    }

    PolyMatrix submatrix(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const {
        PolyMatrix s(ring_, rs.size(), cs.size());
        for (std::size_t i = 0; i < rs.size(); ++i) {
            for (std::size_t j = 0; j < cs.size(); ++j) s(i, j) = (*this)(rs.at(i), cs.at(j));
        }
        return s;
    }

    PolyMatrix leading_block(std::size_t k) const {
        std::vector<std::size_t> idx(k);
        std::iota(idx.begin(), idx.end(), 0);
        return submatrix(idx, idx);
    }

    PolyMatrix column(std::size_t j) const {
        std::vector<std::size_t> rs(rows_);
        std::iota(rs.begin(), rs.end(), 0);
        return submatrix(rs, {j});
    }

    /// Writes `b` with its top-left corner at (r, c).
    void set_block(std::size_t r, std::size_t c, const PolyMatrix& b) {
        if (r + b.rows_ > rows_ || c + b.cols_ > cols_) throw Error("dimension_mismatch", "block does not fit");
        for (std::size_t i = 0; i < b.rows_; ++i) {
            for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r + i, c + j) = b(i, j);
        }
    }

    static PolyMatrix hstack(const PolyMatrix& a, const PolyMatrix& b) {
        if (a.rows_ != b.rows_) throw Error("dimension_mismatch", "hstack with different row counts");
        PolyMatrix m(a.ring_, a.rows_, a.cols_ + b.cols_);
        m.set_block(0, 0, a);
        m.set_block(0, a.cols_, b);
        return m;
    }

    static PolyMatrix vstack(const PolyMatrix& a, const PolyMatrix& b) {
        if (a.cols_ != b.cols_) throw Error("dimension_mismatch", "vstack with different column counts");
        PolyMatrix m(a.ring_, a.rows_ + b.rows_, a.cols_);
        m.set_block(0, 0, a);
        m.set_block(a.rows_, 0, b);
        return m;
    }

    ScalarMatrix<K> evaluate(const std::vector<K>& point) const {
        ScalarMatrix<K> s{rows_, cols_, {}};
        s.a.reserve(e_.size());
        for (const auto& e : e_) s.a.push_back(e.eval(point));
        return s;
    }

    std::size_t rank_at_point(const std::vector<K>& point) const { return rank(evaluate(point)); }

    const std::vector<P>& entries() const { return e_; }

private:
    template <class F>
    PolyMatrix zip(const PolyMatrix& b, F&& f) const {
        if (rows_ != b.rows_ || cols_ != b.cols_) throw Error("dimension_mismatch", "entrywise operation on different shapes");
        PolyMatrix r(ring_, rows_, cols_);
        for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = f(e_[i], b.e_[i]);
        return r;
    }

    RingPtr ring_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<P> e_;
};

template <Coefficient K>
PolyMatrix<K> congruence(const PolyMatrix<K>& m, const PolyMatrix<K>& p) {
    return p.transpose() * m * p;
}

/// Laplace expansion along the first row.
template <Coefficient K>
Poly<K> det_cofactor(const PolyMatrix<K>& m) {
    if (!m.is_square()) throw Error("dimension_mismatch", "determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return Poly<K>::one(m.ring());
    if (n == 1) return m(0, 0);
    if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    Poly<K> acc(m.ring());
    std::vector<std::size_t> rs(n - 1);
    std::iota(rs.begin(), rs.end(), 1);
    for (std::size_t j = 0; j < n; ++j) {
        if (m(0, j).is_zero()) continue;
        std::vector<std::size_t> cs;
        for (std::size_t c = 0; c < n; ++c) {
            if (c != j) cs.push_back(c);
        }
        const Poly<K> term = m(0, j) * det_cofactor(m.submatrix(rs, cs));
        if (j % 2 == 0) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    return acc;
}

namespace detail {

template <Coefficient K>
bool lighter(const Poly<K>& a, const Poly<K>& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a.size() < b.size();
}

}  // namespace detail

/// Fraction-free elimination with full pivoting on the lowest-degree entry.
template <Coefficient K>
Poly<K> det_bareiss(PolyMatrix<K> m) {
    if (!m.is_square()) throw Error("dimension_mismatch", "determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return Poly<K>::one(m.ring());
    bool negate = false;
    Poly<K> prev = Poly<K>::one(m.ring());
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pi = n, pj = n;
        for (std::size_t i = k; i < n; ++i) {
            for (std::size_t j = k; j < n; ++j) {
                if (m(i, j).is_zero()) continue;
                if (pi == n || detail::lighter(m(i, j), m(pi, pj))) {
                    pi = i;
                    pj = j;
                }
            }
        }
        if (pi == n) return Poly<K>::zero(m.ring());
        if (pi != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(pi, j), m(k, j));
            negate = !negate;
        }
        if (pj != k) {
            for (std::size_t i = 0; i < n; ++i) std::swap(m(i, pj), m(i, k));
            negate = !negate;
        }
        const Poly<K> piv = m(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Poly<K> v = piv * m(i, j) - m(i, k) * m(k, j);
                m(i, j) = k == 0 ? std::move(v) : *divide_exact(v, prev);
            }
            m(i, k) = Poly<K>::zero(m.ring());
        }
        prev = piv;
    }
    return negate ? -m(n - 1, n - 1) : m(n - 1, n - 1);
}

template <Coefficient K>
Poly<K> det(const PolyMatrix<K>& m) {
    if (!m.is_square()) throw Error("dimension_mismatch", "determinant of a non-square matrix");
    return m.rows() <= 4 ? det_cofactor(m) : det_bareiss(m);
}

/// Determinant of the leading k x k block; k = 0 gives 1.
template <Coefficient K>
Poly<K> principal_minor(const PolyMatrix<K>& m, std::size_t k) {
    if (k > m.rows() || k > m.cols()) throw Error("out_of_range", "principal minor index exceeds matrix size");
    return det(m.leading_block(k));
}

/// Entry of a matrix over k(vars): num / den with den != 0, gcd removed.
template <Coefficient K>
struct RatEntry {
    Poly<K> num, den;
};

template <Coefficient K>
struct RatMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<RatEntry<K>> e;
    bool normalized = true;

    const RatEntry<K>& operator()(std::size_t i, std::size_t j) const { return e[i * cols + j]; }
    RatEntry<K>& operator()(std::size_t i, std::size_t j) { return e[i * cols + j]; }

    /// Each column scaled by the lcm of its denominators, then divided by its content.
    PolyMatrix<K> cleared(const RingPtr& ring) const {
        PolyMatrix<K> out(ring, rows, cols);
        for (std::size_t j = 0; j < cols; ++j) {
            Poly<K> l = Poly<K>::one(ring);
            for (std::size_t i = 0; i < rows; ++i) l = lcm(l, (*this)(i, j).den);
            std::vector<Poly<K>> col;
            for (std::size_t i = 0; i < rows; ++i) {
                const auto& r = (*this)(i, j);
                col.push_back(r.num * *divide_exact(l, r.den));
            }
            const Poly<K> g = gcd(col, ring);
            for (std::size_t i = 0; i < rows; ++i) out(i, j) = g.is_zero() ? col[i] : *divide_exact(col[i], g);
        }
        return out;
    }
};

namespace detail {

/// Fraction-free Gauss-Jordan; returns pivot columns and leaves m in reduced form.
/// Every pivot entry ends up equal to the last pivot.
template <Coefficient K>
std::vector<std::size_t> fraction_free_rref(PolyMatrix<K>& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::size_t> pivots;
    Poly<K> prev = Poly<K>::one(m.ring());
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pi = rows;
        for (std::size_t i = r; i < rows; ++i) {
            if (!m(i, c).is_zero() && (pi == rows || lighter(m(i, c), m(pi, c)))) pi = i;
        }
        if (pi == rows) continue;
        if (pi != r) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(m(pi, j), m(r, j));
        }
        const Poly<K> piv = m(r, c);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) continue;
            const Poly<K> f = m(i, c);
            for (std::size_t j = 0; j < cols; ++j) {
                if (j == c) continue;
                Poly<K> v = piv * m(i, j) - f * m(r, j);
                if (!v.is_zero()) {
                    auto q = divide_exact(v, prev);
                    if (!q) throw Error("internal", "fraction-free elimination lost exactness");
                    v = std::move(*q);
                }
                m(i, j) = std::move(v);
            }
            m(i, c) = Poly<K>::zero(m.ring());
        }
        prev = piv;
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace detail

/// Rank over the fraction field, computed exactly.
template <Coefficient K>
std::size_t generic_rank(PolyMatrix<K> m) {
    return detail::fraction_free_rref(m).size();
}

/// Basis of the right kernel over k(vars).
template <Coefficient K>
RatMatrix<K> kernel_over_fraction_field(const PolyMatrix<K>& m) {
    PolyMatrix<K> a = m;
    const auto pivots = detail::fraction_free_rref(a);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::size_t> free;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (!is_pivot[c]) free.push_back(c);
    }
    RatMatrix<K> k{m.cols(), free.size(), {}, true};
    const auto& ring = m.ring();
    k.e.assign(k.rows * k.cols, RatEntry<K>{Poly<K>::zero(ring), Poly<K>::one(ring)});
    for (std::size_t f = 0; f < free.size(); ++f) {
        k(free[f], f) = {Poly<K>::one(ring), Poly<K>::one(ring)};
        for (std::size_t i = 0; i < pivots.size(); ++i) {
            const Poly<K>& num = a(i, free[f]);
            if (num.is_zero()) continue;
            const Poly<K>& den = a(i, pivots[i]);
            const Poly<K> g = gcd(num, den);
            Poly<K> n = -*divide_exact(num, g), d = *divide_exact(den, g);
            const K lc = d.leading_coeff().inverse();
            k(pivots[i], f) = {lc * n, lc * d};
        }
    }
    return k;
}

}  // namespace quadbundle
