#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace arcurve {

/// Rational numbers backed by GMP.
class Rational {
public:
    Rational() = default;
    Rational(long n) : v_(n) {}
    Rational(long n, long d) : v_(n, d) {
        if (d == 0) throw std::domain_error("division by zero");
        v_.canonicalize();
    }
    explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

    static long characteristic() { return 0; }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("division by zero");
        v_ /= o.v_;
        return *this;
    }
    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }

    Rational inverse() const { return Rational(1) / *this; }

    const mpq_class& value() const { return v_; }
    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }

    std::string to_string() const { return v_.get_str(); }

    /// Same field, same value bound to this field's context (no-op for Q).
    Rational scalar(long n) const { return Rational(n); }

private:
    mpq_class v_;
};

/// Prime field F_l. The modulus travels with the value; a value built from a
/// bare integer is unbound until it meets a bound value.
class ModP {
public:
    ModP() = default;
    ModP(long n) : raw_(n) {}
    ModP(long n, std::uint64_t modulus) : mod_(modulus) {
        check_modulus(modulus);
        raw_ = reduce(n, modulus);
    }

    static void check_modulus(std::uint64_t l) {
        if (l < 3 || l > (1ULL << 31)) throw std::invalid_argument("modulus out of range");
        for (std::uint64_t d = 2; d * d <= l; ++d)
            if (l % d == 0) throw std::invalid_argument("modulus is not prime");
    }

    std::uint64_t modulus() const { return mod_; }
    bool bound() const { return mod_ != 0; }
    long characteristic() const { return static_cast<long>(mod_); }

    bool is_zero() const { return raw_ == 0; }
    bool is_one() const { return raw_ == 1; }

    std::uint64_t residue() const {
        if (!bound()) throw std::logic_error("unbound residue");
        return static_cast<std::uint64_t>(raw_);
    }

    ModP operator-() const {
        ModP r = *this;
        if (bound()) r.raw_ = raw_ == 0 ? 0 : static_cast<std::int64_t>(mod_) - raw_;
        else r.raw_ = -raw_;
        return r;
    }
    ModP& operator+=(const ModP& o) { return combine(o, [](std::int64_t a, std::int64_t b) { return a + b; }); }
    ModP& operator-=(const ModP& o) { return combine(o, [](std::int64_t a, std::int64_t b) { return a - b; }); }
    ModP& operator*=(const ModP& o) {
        std::uint64_t m = join(o);
        if (m == 0) { raw_ *= o.raw_; return *this; }
        auto a = static_cast<unsigned __int128>(reduce(raw_, m));
        auto b = static_cast<unsigned __int128>(reduce(o.raw_, m));
        raw_ = static_cast<std::int64_t>((a * b) % m);
        mod_ = m;
        return *this;
    }
    ModP& operator/=(const ModP& o) {
        std::uint64_t m = join(o);
        if (m == 0) throw std::logic_error("division of unbound prime-field constants");
        ModP bo(o.raw_, m);
        *this = ModP(raw_, m);
        return *this *= bo.inverse();
    }
    friend ModP operator+(ModP a, const ModP& b) { return a += b; }
    friend ModP operator-(ModP a, const ModP& b) { return a -= b; }
    friend ModP operator*(ModP a, const ModP& b) { return a *= b; }
    friend ModP operator/(ModP a, const ModP& b) { return a /= b; }
    friend bool operator==(const ModP& a, const ModP& b) {
        std::uint64_t m = a.mod_ ? a.mod_ : b.mod_;
        if (m == 0) return a.raw_ == b.raw_;
        if (a.mod_ && b.mod_ && a.mod_ != b.mod_) return false;
        return reduce(a.raw_, m) == reduce(b.raw_, m);
    }
    friend bool operator!=(const ModP& a, const ModP& b) { return !(a == b); }

    ModP inverse() const {
        if (!bound()) {
            if (raw_ == 1 || raw_ == -1) return *this;
            throw std::logic_error("inverse of unbound prime-field constant");
        }
        if (raw_ == 0) throw std::domain_error("division by zero");
        // Fermat: a^(l-2)
        return pow(mod_ - 2);
    }

    ModP pow(std::uint64_t e) const {
        ModP base = *this, r(1, mod_);
        while (e) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    std::string to_string() const {
        if (!bound()) return std::to_string(raw_);
        // symmetric representative reads better in reports
        std::int64_t v = raw_;
        if (static_cast<std::uint64_t>(v) > mod_ / 2) v -= static_cast<std::int64_t>(mod_);
        return std::to_string(v);
    }

    ModP scalar(long n) const { return bound() ? ModP(n, mod_) : ModP(n); }

private:
    static std::int64_t reduce(std::int64_t a, std::uint64_t m) {
        auto mm = static_cast<std::int64_t>(m);
        std::int64_t r = a % mm;
        return r < 0 ? r + mm : r;
    }
    std::uint64_t join(const ModP& o) const {
        if (mod_ && o.mod_ && mod_ != o.mod_) throw std::logic_error("mixed prime-field moduli");
        return mod_ ? mod_ : o.mod_;
    }
    template <class Op>
    ModP& combine(const ModP& o, Op op) {
        std::uint64_t m = join(o);
        raw_ = op(raw_, o.raw_);
        if (m) raw_ = reduce(raw_, m);
        mod_ = m;
        return *this;
    }

    std::int64_t raw_ = 0;
    std::uint64_t mod_ = 0;
};

inline long characteristic_of(const Rational&) { return 0; }
inline long characteristic_of(const ModP& a) { return a.characteristic(); }

/// n-th roots of a in the field (possibly empty).
inline std::optional<Rational> nth_root(const Rational& a, int n) {
    if (a.is_zero()) return Rational(0);
    mpz_class num = a.numerator(), den = a.denominator();
    bool neg = num < 0;
    if (neg && n % 2 == 0) return std::nullopt;
    if (neg) num = -num;
    mpz_class rn, rd;
    if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(n))) return std::nullopt;
    if (!mpz_root(rd.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(n))) return std::nullopt;
    mpq_class r(neg ? mpz_class(-rn) : rn, rd);
    return Rational(r);
}

inline std::optional<ModP> nth_root(const ModP& a, int n) {
    if (a.is_zero()) return a;
    std::uint64_t l = a.modulus();
    for (std::uint64_t c = 1; c < l; ++c) {
        ModP x(static_cast<long>(c), l);
        if (x.pow(static_cast<std::uint64_t>(n)) == a) return x;
    }
    return std::nullopt;
}

}  // namespace arcurve
