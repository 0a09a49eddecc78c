#pragma once

// Exact scalar fields: arbitrary-precision rationals and word-size prime fields.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace quadbundle {

/// Base class for every error raised by the library. `kind` is a short
/// machine-readable tag that the CLI copies into its error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what) : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

namespace fp {

inline std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) { return (a * b) % p; }

inline std::uint64_t pow(std::uint64_t base, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    base %= p;
    while (e) {
        if (e & 1) r = mul(r, base, p);
        base = mul(base, base, p);
        e >>= 1;
    }
    return r;
}

inline std::uint64_t inv(std::uint64_t a, std::uint64_t p) {
    if (a % p == 0) throw Error("division_by_zero", "inverse of zero in F_" + std::to_string(p));
    return pow(a, p - 2, p);
}

/// Deterministic Miller-Rabin for 32-bit inputs.
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2u, 3u, 5u, 7u, 11u, 13u}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2u, 7u, 61u}) {
        if (a % n == 0) continue;
        std::uint64_t x = pow(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mul(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// Euler criterion: 1 for nonzero squares, p-1 for non-squares, 0 for zero.
inline std::uint64_t euler(std::uint64_t a, std::uint64_t p) { return pow(a, (p - 1) / 2, p); }

/// Tonelli-Shanks square root; the caller guarantees that `a` is a square.
inline std::uint64_t sqrt(std::uint64_t a, std::uint64_t p) {
    a %= p;
    if (a == 0) return 0;
    if (p % 4 == 3) return pow(a, (p + 1) / 4, p);
    std::uint64_t q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    std::uint64_t z = 2;
    while (euler(z, p) != p - 1) ++z;
    std::uint64_t m = s, c = pow(z, q, p), t = pow(a, q, p), r = pow(a, (q + 1) / 2, p);
    while (t != 1) {
        std::uint64_t i = 0, tt = t;
        while (tt != 1) {
            tt = mul(tt, tt, p);
            ++i;
        }
        std::uint64_t b = c;
        for (std::uint64_t j = 0; j + i + 1 < m; ++j) b = mul(b, b, p);
        m = i;
        c = mul(b, b, p);
        t = mul(t, c, p);
        r = mul(r, b, p);
    }
    return r;
}

}  // namespace fp

/// Field of definition. Characteristic 2 is rejected everywhere.
struct FieldSpec {
    enum class Kind { Rational, Prime };

    Kind kind = Kind::Rational;
    std::uint32_t p = 0;

    static FieldSpec rational() { return {}; }

    static FieldSpec prime(std::uint64_t p) {
        if (p < 3 || p >= (1ull << 31) || !fp::is_prime(p)) {
            throw Error("bad_field", "prime field modulus must be an odd prime below 2^31, got " + std::to_string(p));
        }
        return {Kind::Prime, static_cast<std::uint32_t>(p)};
    }

    bool is_rational() const { return kind == Kind::Rational; }
    bool is_prime() const { return kind == Kind::Prime; }
    /// 0 for the rationals.
    std::uint64_t characteristic() const { return is_prime() ? p : 0; }

    std::string to_string() const { return is_rational() ? std::string("QQ") : "F_" + std::to_string(p); }

    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

class Rational {
public:
    static constexpr FieldSpec::Kind kind = FieldSpec::Kind::Rational;

    Rational() = default;
    explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

    static Rational from_int(long long n, const FieldSpec& = {}) { return Rational(mpq_class(mpz_class(std::to_string(n)))); }

    /// Parses "num" or "num/den" with decimal integers.
    static Rational from_decimal(std::string_view num, std::string_view den, const FieldSpec&) {
        mpz_class n{std::string(num)}, d{den.empty() ? std::string("1") : std::string(den)};
        if (d == 0) throw Error("parse_error", "zero denominator in coefficient");
        return Rational(mpq_class(n, d));
    }

    const mpq_class& value() const { return v_; }
    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) {
        v_ += o.v_;
        return *this;
    }
    Rational& operator-=(const Rational& o) {
        v_ -= o.v_;
        return *this;
    }
    Rational& operator*=(const Rational& o) {
        v_ *= o.v_;
        return *this;
    }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw Error("division_by_zero", "division by zero rational");
        v_ /= o.v_;
        return *this;
    }
    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }

    Rational inverse() const { return Rational(1) / *this; }

    bool is_negative() const { return sgn(v_) < 0; }
    std::string to_string() const { return v_.get_str(); }

private:
    explicit Rational(int n) : v_(n) {}
    mpq_class v_{0};
};

/// Element of F_p with the modulus carried inline.
class ModP {
public:
    static constexpr FieldSpec::Kind kind = FieldSpec::Kind::Prime;

    ModP() = default;
    ModP(std::uint64_t v, std::uint32_t p) : v_(static_cast<std::uint32_t>(v % p)), p_(p) {}

    static ModP from_int(long long n, const FieldSpec& f) {
        long long r = n % static_cast<long long>(f.p);
        if (r < 0) r += f.p;
        return ModP(static_cast<std::uint64_t>(r), f.p);
    }

    static ModP from_decimal(std::string_view num, std::string_view den, const FieldSpec& f) {
        mpz_class n{std::string(num)}, d{den.empty() ? std::string("1") : std::string(den)};
        mpz_class pm(f.p);
        mpz_class nr = n % pm, dr = d % pm;
        if (nr < 0) nr += pm;
        if (dr < 0) dr += pm;
        if (dr == 0) throw Error("not_representable", "coefficient denominator vanishes in " + f.to_string());
        return ModP(nr.get_ui(), f.p) / ModP(dr.get_ui(), f.p);
    }

    std::uint32_t value() const { return v_; }
    std::uint32_t modulus() const { return p_; }
    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    ModP operator-() const { return ModP(v_ == 0 ? 0 : p_ - v_, p_); }
    ModP& operator+=(const ModP& o) {
        std::uint64_t s = std::uint64_t(v_) + o.v_;
        v_ = static_cast<std::uint32_t>(s >= p_ ? s - p_ : s);
        return *this;
    }
    ModP& operator-=(const ModP& o) {
        v_ = v_ >= o.v_ ? v_ - o.v_ : v_ + p_ - o.v_;
        return *this;
    }
    ModP& operator*=(const ModP& o) {
        v_ = static_cast<std::uint32_t>((std::uint64_t(v_) * o.v_) % p_);
        return *this;
    }
    ModP& operator/=(const ModP& o) {
        v_ = static_cast<std::uint32_t>(fp::mul(v_, fp::inv(o.v_, p_), p_));
        return *this;
    }
    friend ModP operator+(ModP a, const ModP& b) { return a += b; }
    friend ModP operator-(ModP a, const ModP& b) { return a -= b; }
    friend ModP operator*(ModP a, const ModP& b) { return a *= b; }
    friend ModP operator/(ModP a, const ModP& b) { return a /= b; }
    friend bool operator==(const ModP& a, const ModP& b) { return a.v_ == b.v_; }

    ModP inverse() const { return ModP(fp::inv(v_, p_), p_); }

    /// Symmetric representative in (-p/2, p/2].
    long long centered() const { return v_ > p_ / 2 ? static_cast<long long>(v_) - p_ : v_; }
    bool is_negative() const { return centered() < 0; }
    std::string to_string() const { return std::to_string(centered()); }

private:
    std::uint32_t v_ = 0;
    std::uint32_t p_ = 0;
};

template <class K>
concept Coefficient = requires(K a, const K b, const FieldSpec f) {
    { K::from_int(1, f) } -> std::same_as<K>;
    { a + b } -> std::same_as<K>;
    { a * b } -> std::same_as<K>;
    { a / b } -> std::same_as<K>;
    { b.is_zero() } -> std::same_as<bool>;
    { b.to_string() } -> std::same_as<std::string>;
};

template <Coefficient K>
K power(K base, unsigned e, const FieldSpec& f) {
    K r = K::from_int(1, f);
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

/// Reduction of a rational number modulo p; throws when p divides the denominator.
inline ModP reduce_mod(const Rational& q, const FieldSpec& target) {
    mpz_class pm(target.p);
    mpz_class n = q.value().get_num() % pm, d = q.value().get_den() % pm;
    if (n < 0) n += pm;
    if (d == 0) throw Error("bad_reduction", "prime " + std::to_string(target.p) + " divides a denominator");
    return ModP(n.get_ui(), target.p) / ModP(d.get_ui(), target.p);
}

}  // namespace quadbundle
