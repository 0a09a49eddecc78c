#pragma once

// Sparse multivariate polynomials over an exact field.
//
// Terms are kept sorted in descending graded-lex order with no zero
// coefficients, so structural equality is mathematical equality.

#include "field.hpp"

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <cctype>
#include <climits>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace quadbundle {

/// Degree reported for the zero polynomial.
inline constexpr int kMinusInfinity = INT_MIN;

/// Coefficient field plus the ordered list of variable names.
struct Ring {
    FieldSpec field;
    std::vector<std::string> vars;

    friend bool operator==(const Ring&, const Ring&) = default;

    std::optional<std::size_t> index_of(std::string_view name) const {
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (vars[i] == name) return i;
        }
        return std::nullopt;
    }
};

using RingPtr = std::shared_ptr<const Ring>;

inline RingPtr make_ring(FieldSpec field, std::vector<std::string> vars = {"x", "y", "z"}) {
    return std::make_shared<const Ring>(Ring{field, std::move(vars)});
}

inline bool same_ring(const RingPtr& a, const RingPtr& b) { return a == b || *a == *b; }

class Monomial {
public:
    using Storage = boost::container::small_vector<std::uint16_t, 4>;

    Monomial() = default;
    explicit Monomial(std::size_t nvars) : e_(nvars, 0) {}
    explicit Monomial(Storage e) : e_(std::move(e)) {
        for (auto v : e_) deg_ += v;
    }

    std::size_t size() const { return e_.size(); }
    std::uint16_t operator[](std::size_t i) const { return e_[i]; }
    unsigned degree() const { return deg_; }

    void set(std::size_t i, std::uint16_t v) {
        deg_ = deg_ - e_[i] + v;
        e_[i] = v;
    }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial r(a);
        for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = static_cast<std::uint16_t>(r.e_[i] + b.e_[i]);
        r.deg_ += b.deg_;
        return r;
    }

    bool divides(const Monomial& b) const {
        for (std::size_t i = 0; i < e_.size(); ++i) {
            if (e_[i] > b.e_[i]) return false;
        }
        return true;
    }

    /// b / a, requires a | b.
    friend Monomial quotient(const Monomial& b, const Monomial& a) {
        Monomial r(b);
        for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = static_cast<std::uint16_t>(r.e_[i] - a.e_[i]);
        r.deg_ -= a.deg_;
        return r;
    }

    /// Graded lex with x_0 > x_1 > ...
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
        if (a.deg_ != b.deg_) return a.deg_ <=> b.deg_;
        for (std::size_t i = 0; i < a.e_.size(); ++i) {
            if (a.e_[i] != b.e_[i]) return a.e_[i] <=> b.e_[i];
        }
        return std::strong_ordering::equal;
    }
    friend bool operator==(const Monomial& a, const Monomial& b) { return a.deg_ == b.deg_ && a.e_ == b.e_; }

    const Storage& exponents() const { return e_; }

private:
    Storage e_;
    unsigned deg_ = 0;
};

template <Coefficient K>
struct Term {
    Monomial mono;
    K coeff;
};

template <Coefficient K>
class Poly {
public:
    using coeff_type = K;
    using TermT = Term<K>;

    Poly() = default;
    explicit Poly(RingPtr ring) : ring_(std::move(ring)) {}

    static Poly zero(const RingPtr& ring) { return Poly(ring); }
    static Poly constant(const RingPtr& ring, const K& c) {
        Poly p(ring);
        if (!c.is_zero()) p.terms_.push_back({Monomial(ring->vars.size()), c});
        return p;
    }
    static Poly constant(const RingPtr& ring, long long c) { return constant(ring, K::from_int(c, ring->field)); }
    static Poly one(const RingPtr& ring) { return constant(ring, 1); }
    static Poly variable(const RingPtr& ring, std::size_t i) {
        Monomial m(ring->vars.size());
        m.set(i, 1);
        return monomial(ring, m, K::from_int(1, ring->field));
    }
    static Poly monomial(const RingPtr& ring, Monomial m, const K& c) {
        Poly p(ring);
        if (!c.is_zero()) p.terms_.push_back({std::move(m), c});
        return p;
    }
    /// Builds a canonical polynomial from arbitrary (possibly repeated, zero) terms.
    static Poly from_terms(const RingPtr& ring, std::vector<TermT> terms) {
        Poly p(ring);
        p.terms_ = std::move(terms);
        p.canonicalize();
        return p;
    }

    const RingPtr& ring() const { return ring_; }
    const FieldSpec& field() const { return ring_->field; }
    std::size_t nvars() const { return ring_->vars.size(); }
    const std::vector<TermT>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.degree() == 0); }
    K constant_value() const {
        if (terms_.empty()) return K::from_int(0, field());
        const auto& t = terms_.back();
        return t.mono.degree() == 0 ? t.coeff : K::from_int(0, field());
    }
    const TermT& leading_term() const { return terms_.front(); }
    K leading_coeff() const { return terms_.empty() ? K::from_int(0, field()) : terms_.front().coeff; }

    int degree() const { return terms_.empty() ? kMinusInfinity : static_cast<int>(terms_.front().mono.degree()); }

    int degree_in(std::size_t var) const {
        if (terms_.empty()) return kMinusInfinity;
        int d = 0;
        for (const auto& t : terms_) d = std::max<int>(d, t.mono[var]);
        return d;
    }

    bool is_homogeneous() const {
        for (const auto& t : terms_) {
            if (t.mono.degree() != terms_.front().mono.degree()) return false;
        }
        return true;
    }

    bool involves(std::size_t var) const {
        for (const auto& t : terms_) {
            if (t.mono[var] != 0) return true;
        }
        return false;
    }

    Poly operator-() const {
        Poly r(*this);
        for (auto& t : r.terms_) t.coeff = -t.coeff;
        return r;
    }

    Poly& operator+=(const Poly& o) { return *this = merge(*this, o, false); }
    Poly& operator-=(const Poly& o) { return *this = merge(*this, o, true); }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    friend Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, false); }
    friend Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, true); }

    friend Poly operator*(const Poly& a, const Poly& b) {
        check_compatible(a, b);
        if (a.is_zero() || b.is_zero()) return Poly(a.ring_);
        if (a.terms_.size() == 1) return b.scaled_by_term(a.terms_[0]);
        if (b.terms_.size() == 1) return a.scaled_by_term(b.terms_[0]);
        std::vector<TermT> out;
        out.reserve(a.terms_.size() * b.terms_.size());
        for (const auto& s : a.terms_) {
            for (const auto& t : b.terms_) out.push_back({s.mono * t.mono, s.coeff * t.coeff});
        }
        return from_terms(a.ring_, std::move(out));
    }

    friend Poly operator*(const K& c, const Poly& p) {
        if (c.is_zero()) return Poly(p.ring_);
        Poly r(p);
        for (auto& t : r.terms_) t.coeff *= c;
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i) {
            if (!(a.terms_[i].mono == b.terms_[i].mono) || !(a.terms_[i].coeff == b.terms_[i].coeff)) return false;
        }
        return true;
    }

    Poly pow(unsigned e) const {
        Poly r = one(ring_), base = *this;
        while (e) {
            if (e & 1) r *= base;
            e >>= 1;
            if (e) base *= base;
        }
        return r;
    }

    Poly scaled_by_term(const TermT& s) const {
        Poly r(ring_);
        if (s.coeff.is_zero()) return r;
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) r.terms_.push_back({t.mono * s.mono, t.coeff * s.coeff});
        return r;
    }

    /// Divides by the leading coefficient; zero stays zero.
    Poly monic() const {
        if (is_zero()) return *this;
        return leading_coeff().inverse() * *this;
    }

    K eval(std::span<const K> point) const {
        if (point.size() != nvars()) throw Error("arity_mismatch", "evaluation point has wrong length");
        K acc = K::from_int(0, field());
        std::vector<std::vector<K>> powers(nvars());
        for (const auto& t : terms_) {
            K v = t.coeff;
            for (std::size_t i = 0; i < nvars(); ++i) {
                const unsigned e = t.mono[i];
                if (e == 0) continue;
                auto& pw = powers[i];
                if (pw.empty()) pw.push_back(K::from_int(1, field()));
                while (pw.size() <= e) pw.push_back(pw.back() * point[i]);
                v *= pw[e];
            }
            acc += v;
        }
        return acc;
    }
    K eval(const std::vector<K>& point) const { return eval(std::span<const K>(point)); }

    Poly derivative(std::size_t var) const {
        std::vector<TermT> out;
        for (const auto& t : terms_) {
            const unsigned e = t.mono[var];
            if (e == 0) continue;
            Monomial m = t.mono;
            m.set(var, static_cast<std::uint16_t>(e - 1));
            out.push_back({std::move(m), t.coeff * K::from_int(e, field())});
        }
        return from_terms(ring_, std::move(out));
    }

    /// Sets `var` to 1.
    Poly dehomogenize(std::size_t var) const {
        std::vector<TermT> out;
        out.reserve(terms_.size());
        for (const auto& t : terms_) {
            Monomial m = t.mono;
            m.set(var, 0);
            out.push_back({std::move(m), t.coeff});
        }
        return from_terms(ring_, std::move(out));
    }

    Poly homogenize(std::size_t var, int target_degree) const {
        if (!is_zero() && degree() > target_degree) {
            throw Error("degree_too_small", "homogenization target degree below polynomial degree");
        }
        std::vector<TermT> out;
        for (const auto& t : terms_) {
            Monomial m = t.mono;
            m.set(var, static_cast<std::uint16_t>(m[var] + target_degree - static_cast<int>(t.mono.degree())));
            out.push_back({std::move(m), t.coeff});
        }
        return from_terms(ring_, std::move(out));
    }

    /// Replaces variable i by images[i] (all in the same target ring).
    Poly substitute(const std::vector<Poly>& images) const {
        if (images.size() != nvars()) throw Error("arity_mismatch", "substitution needs one image per variable");
        const RingPtr& target = images.empty() ? ring_ : images[0].ring_;
        Poly acc(target);
        std::vector<std::vector<Poly>> powers(nvars());
        for (const auto& t : terms_) {
            Poly v = constant(target, t.coeff);
            for (std::size_t i = 0; i < nvars(); ++i) {
                const unsigned e = t.mono[i];
                if (e == 0) continue;
                auto& pw = powers[i];
                if (pw.empty()) pw.push_back(one(target));
                while (pw.size() <= e) pw.push_back(pw.back() * images[i]);
                v *= pw[e];
            }
            acc += v;
        }
        return acc;
    }

    /// Exact quotient a / b, or nullopt when b does not divide a.
    friend std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
        check_compatible(a, b);
        if (b.is_zero()) throw Error("division_by_zero", "division by the zero polynomial");
        if (b.terms_.size() == 1) {
            const auto& lt = b.terms_[0];
            const K inv = lt.coeff.inverse();
            Poly q(a.ring_);
            q.terms_.reserve(a.terms_.size());
            for (const auto& t : a.terms_) {
                if (!lt.mono.divides(t.mono)) return std::nullopt;
                q.terms_.push_back({quotient(t.mono, lt.mono), t.coeff * inv});
            }
            return q;
        }
        const auto& lb = b.terms_.front();
        const K inv = lb.coeff.inverse();
        Poly r = a;
        std::vector<TermT> q;
        while (!r.is_zero()) {
            const auto& lr = r.terms_.front();
            if (!lb.mono.divides(lr.mono)) return std::nullopt;
            TermT t{quotient(lr.mono, lb.mono), lr.coeff * inv};
            r = merge(r, b.scaled_by_term(t), true);
            q.push_back(std::move(t));
        }
        Poly out(a.ring_);
        out.terms_ = std::move(q);  // produced in strictly decreasing order
        return out;
    }

    friend bool divides(const Poly& b, const Poly& a) { return divide_exact(a, b).has_value(); }

    /// Coefficients with respect to one variable: map exponent -> coefficient (var-free).
    std::map<unsigned, Poly> coefficients_in(std::size_t var) const {
        std::map<unsigned, std::vector<TermT>> buckets;
        for (const auto& t : terms_) {
            Monomial m = t.mono;
            m.set(var, 0);
            buckets[t.mono[var]].push_back({std::move(m), t.coeff});
        }
        std::map<unsigned, Poly> out;
        for (auto& [e, ts] : buckets) out.emplace(e, from_terms(ring_, std::move(ts)));
        return out;
    }

    /// Same polynomial read in another ring with the same variables.
    template <Coefficient L, class F>
    Poly<L> map_coefficients(const RingPtr& target, F&& f) const {
        std::vector<Term<L>> out;
        out.reserve(terms_.size());
        for (const auto& t : terms_) out.push_back({t.mono, f(t.coeff)});
        return Poly<L>::from_terms(target, std::move(out));
    }

private:
    static void check_compatible(const Poly& a, const Poly& b) {
        if (!a.ring_ || !b.ring_ || !same_ring(a.ring_, b.ring_)) {
            throw Error("ring_mismatch", "polynomials live in different rings");
        }
    }

    static Poly merge(const Poly& a, const Poly& b, bool subtract) {
        check_compatible(a, b);
        Poly r(a.ring_);
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].mono > b.terms_[j].mono)) {
                r.terms_.push_back(a.terms_[i++]);
            } else if (i == a.terms_.size() || b.terms_[j].mono > a.terms_[i].mono) {
                r.terms_.push_back({b.terms_[j].mono, subtract ? -b.terms_[j].coeff : b.terms_[j].coeff});
                ++j;
            } else {
                K c = subtract ? a.terms_[i].coeff - b.terms_[j].coeff : a.terms_[i].coeff + b.terms_[j].coeff;
                if (!c.is_zero()) r.terms_.push_back({a.terms_[i].mono, std::move(c)});
                ++i;
                ++j;
            }
        }
        return r;
    }

    void canonicalize() {
        std::sort(terms_.begin(), terms_.end(), [](const TermT& a, const TermT& b) { return a.mono > b.mono; });
        std::vector<TermT> out;
        out.reserve(terms_.size());
        for (auto& t : terms_) {
            if (!out.empty() && out.back().mono == t.mono) {
                out.back().coeff += t.coeff;
            } else {
                if (!out.empty() && out.back().coeff.is_zero()) out.pop_back();
                out.push_back(std::move(t));
            }
        }
        if (!out.empty() && out.back().coeff.is_zero()) out.pop_back();
        terms_ = std::move(out);
    }

    RingPtr ring_;
    std::vector<TermT> terms_;
};

using QPoly = Poly<Rational>;
using FpPoly = Poly<ModP>;

/// Image of a rational polynomial in F_p[vars]; throws `bad_reduction`.
inline FpPoly reduce_mod(const QPoly& p, const RingPtr& target) {
    return p.map_coefficients<ModP>(target, [&](const Rational& c) { return reduce_mod(c, target->field); });
}

// ---------------------------------------------------------------------------
// Text form.
//   expr  := term (('+'|'-') term)*      (a leading '-' is accepted)
//   term  := coeff | coeff '*' monos | monos
//   monos := mono ('*' mono)*
//   mono  := var ('^' uint)?
//   coeff := int | int '/' uint           ('/' only over QQ)
// ---------------------------------------------------------------------------

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t pos)
        : Error("parse_error", what + " at position " + std::to_string(pos)), pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

namespace detail {

template <Coefficient K>
class PolyParser {
public:
    PolyParser(std::string_view text, const RingPtr& ring) : s_(text), ring_(ring) {}

    Poly<K> parse() {
        skip();
        std::vector<Term<K>> terms;
        bool negate = false;
        if (peek() == '-') {
            negate = true;
            ++i_;
            skip();
        }
        terms.push_back(term(negate));
        while (true) {
            skip();
            if (i_ == s_.size()) break;
            const char c = s_[i_];
            if (c != '+' && c != '-') throw ParseError(std::string("unexpected character '") + c + "'", i_);
            ++i_;
            skip();
            terms.push_back(term(c == '-'));
        }
        return Poly<K>::from_terms(ring_, std::move(terms));
    }

private:
    char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    std::string_view digits() {
        skip();
        const std::size_t b = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (b == i_) throw ParseError("expected integer", b);
        return s_.substr(b, i_ - b);
    }

    Term<K> term(bool negate) {
        skip();
        Monomial m(ring_->vars.size());
        K c = K::from_int(1, ring_->field);
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            const std::size_t at = i_;
            auto num = digits();
            std::string_view den;
            skip();
            if (peek() == '/') {
                if (!ring_->field.is_rational()) throw ParseError("fractions are only allowed over QQ", i_);
                ++i_;
                den = digits();
            }
            try {
                c = K::from_decimal(num, den, ring_->field);
            } catch (const ParseError&) {
                throw;
            } catch (const Error& e) {
                throw ParseError(e.what(), at);
            }
            skip();
            if (peek() != '*') return {m, negate ? -c : c};
            ++i_;
        }
        mono(m);
        while (true) {
            skip();
            if (peek() != '*') break;
            ++i_;
            mono(m);
        }
        return {m, negate ? -c : c};
    }

    void mono(Monomial& m) {
        skip();
        const std::size_t b = i_;
        if (!(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) {
            throw ParseError("expected variable", i_);
        }
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
        const auto name = s_.substr(b, i_ - b);
        const auto idx = ring_->index_of(name);
        if (!idx) throw ParseError("unknown variable '" + std::string(name) + "'", b);
        unsigned e = 1;
        skip();
        if (peek() == '^') {
            ++i_;
            const auto d = digits();
            if (d.size() > 5) throw ParseError("exponent too large", i_);
            e = static_cast<unsigned>(std::stoul(std::string(d)));
        }
        const unsigned total = m[*idx] + e;
        if (total > 65535) throw ParseError("exponent too large", b);
        m.set(*idx, static_cast<std::uint16_t>(total));
    }

    std::string_view s_;
    std::size_t i_ = 0;
    RingPtr ring_;
};

}  // namespace detail

template <Coefficient K>
Poly<K> parse_poly(std::string_view text, const RingPtr& ring) {
    return detail::PolyParser<K>(text, ring).parse();
}

template <Coefficient K>
std::string to_string(const Poly<K>& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : p.terms()) {
        const bool neg = t.coeff.is_negative();
        const K mag = neg ? -t.coeff : t.coeff;
        if (first) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        first = false;
        std::string mono;
        for (std::size_t i = 0; i < p.nvars(); ++i) {
            const unsigned e = t.mono[i];
            if (e == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += p.ring()->vars[i];
            if (e > 1) mono += "^" + std::to_string(e);
        }
        if (mono.empty()) {
            out += mag.to_string();
        } else if (mag.is_one()) {
            out += mono;
        } else {
            out += mag.to_string() + "*" + mono;
        }
    }
    return out;
}

}  // namespace quadbundle
