#pragma once

#include "field.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace arcurve {

/// Univariate polynomial in t, coefficients stored low to high.
template <class K>
class UPoly {
public:
    UPoly() = default;
    UPoly(K c) { if (!c.is_zero()) c_.push_back(std::move(c)); }
    explicit UPoly(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }

    static UPoly monomial(K c, int e) {
        if (e < 0) throw std::invalid_argument("negative exponent");
        if (c.is_zero()) return {};
        std::vector<K> v(static_cast<std::size_t>(e) + 1, K(0));
        v.back() = std::move(c);
        return UPoly(std::move(v));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<K>& coeffs() const { return c_; }
    K coeff(int e) const { return (e >= 0 && e <= degree()) ? c_[static_cast<std::size_t>(e)] : K(0); }
    K lead() const { return c_.empty() ? K(0) : c_.back(); }

    /// Lowest exponent with nonzero coefficient (-1 for the zero polynomial).
    int valuation() const {
        for (std::size_t i = 0; i < c_.size(); ++i) if (!c_[i].is_zero()) return static_cast<int>(i);
        return -1;
    }

    K eval(const K& t) const {
        K r(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * t + *it;
        return r;
    }

    UPoly operator-() const {
        UPoly r = *this;
        for (auto& e : r.c_) e = -e;
        return r;
    }
    UPoly& operator+=(const UPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), K(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    UPoly& operator-=(const UPoly& o) { return *this += -o; }
    friend UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
    friend UPoly operator-(UPoly a, const UPoly& b) { return a -= b; }
    friend UPoly operator*(const UPoly& a, const UPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<K> r(a.c_.size() + b.c_.size() - 1, K(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                if (!b.c_[j].is_zero()) r[i + j] += a.c_[i] * b.c_[j];
        }
        return UPoly(std::move(r));
    }
    UPoly& operator*=(const UPoly& o) { return *this = *this * o; }
    friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const UPoly& a, const UPoly& b) { return !(a == b); }

    UPoly scaled(const K& s) const {
        if (s.is_zero()) return {};
        UPoly r = *this;
        for (auto& e : r.c_) e *= s;
        return r;
    }

    /// Quotient and remainder of Euclidean division.
    std::pair<UPoly, UPoly> divmod(const UPoly& d) const {
        if (d.is_zero()) throw std::domain_error("polynomial division by zero");
        UPoly r = *this;
        if (degree() < d.degree()) return {UPoly(), r};
        std::vector<K> q(static_cast<std::size_t>(degree() - d.degree()) + 1, K(0));
        K inv = d.lead().inverse();
        while (!r.is_zero() && r.degree() >= d.degree()) {
            int s = r.degree() - d.degree();
            K c = r.lead() * inv;
            q[static_cast<std::size_t>(s)] = c;
            for (int i = 0; i <= d.degree(); ++i)
                r.c_[static_cast<std::size_t>(i + s)] -= c * d.c_[static_cast<std::size_t>(i)];
            r.trim();
        }
        return {UPoly(std::move(q)), r};
    }

    UPoly monic() const {
        if (is_zero()) return {};
        return scaled(lead().inverse());
    }

    UPoly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<K> r(c_.size() - 1, K(0));
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * c_[i].scalar(static_cast<long>(i));
        return UPoly(std::move(r));
    }

    std::string to_string(const std::string& var = "t") const {
        if (is_zero()) return "0";
        std::string s;
        for (int e = degree(); e >= 0; --e) {
            const K& c = c_[static_cast<std::size_t>(e)];
            if (c.is_zero()) continue;
            std::string cs = c.to_string();
            if (!s.empty()) s += (cs[0] == '-') ? "" : "+";
            if (e == 0) s += cs;
            else {
                if (cs == "-1") s += "-";
                else if (cs != "1") s += cs + "*";
                s += var;
                if (e > 1) s += "^" + std::to_string(e);
            }
        }
        return s;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<K> c_;
};

template <class K>
UPoly<K> gcd(UPoly<K> a, UPoly<K> b) {
    while (!b.is_zero()) {
        auto r = a.divmod(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

template <class K>
bool is_squarefree(const UPoly<K>& f) {
    if (f.degree() <= 0) return true;
    auto d = f.derivative();
    // char l and f = h(t^l) gives f' = 0; such f is never squarefree over F_l
    if (d.is_zero()) return false;
    return gcd(f, d).degree() == 0;
}

namespace detail {

inline std::vector<mpz_class> positive_divisors(mpz_class n) {
    if (n < 0) n = -n;
    std::vector<mpz_class> small, large;
    if (n == 0) return {};
    for (mpz_class d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            small.push_back(d);
            if (d * d != n) large.push_back(n / d);
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

}  // namespace detail

/// Distinct roots in Q (rational root theorem).
inline std::vector<Rational> field_roots(const UPoly<Rational>& f) {
    std::vector<Rational> out;
    if (f.degree() <= 0) return out;
    if (f.coeff(0).is_zero()) out.push_back(Rational(0));
    int v = f.valuation();
    std::vector<Rational> shifted(f.coeffs().begin() + v, f.coeffs().end());
    mpz_class l = 1;
    for (const auto& c : shifted) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.denominator().get_mpz_t());
    std::vector<mpz_class> ints;
    for (const auto& c : shifted) ints.push_back(mpz_class(c.value() * l));
    if (ints.size() <= 1) return out;
    auto num_div = detail::positive_divisors(ints.front());
    auto den_div = detail::positive_divisors(ints.back());
    UPoly<Rational> g(shifted);
    for (const auto& a : num_div)
        for (const auto& b : den_div)
            for (int sgn : {1, -1}) {
                Rational r(mpq_class(sgn * a, b));
                if (!g.eval(r).is_zero()) continue;
                if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
            }
    std::sort(out.begin(), out.end());
    return out;
}

/// Distinct roots in F_l by exhaustive search.
inline std::vector<ModP> field_roots(const UPoly<ModP>& f) {
    std::vector<ModP> out;
    if (f.degree() <= 0) return out;
    std::uint64_t l = f.lead().modulus();
    if (l == 0) throw std::logic_error("root search needs a bound prime field");
    for (std::uint64_t c = 0; c < l; ++c) {
        ModP x(static_cast<long>(c), l);
        if (f.eval(x).is_zero()) out.push_back(x);
    }
    return out;
}

/// Factorization into linear factors, when f splits over the ground field.
/// Returns roots with multiplicity, or nothing if some factor has degree >= 2.
template <class K>
std::optional<std::vector<std::pair<K, int>>> split_roots(const UPoly<K>& f) {
    std::vector<std::pair<K, int>> out;
    UPoly<K> rest = f;
    for (const K& r : field_roots(f)) {
        UPoly<K> lin(std::vector<K>{-r, f.lead().scalar(1)});
        int mult = 0;
        while (true) {
            auto [q, rem] = rest.divmod(lin);
            if (!rem.is_zero()) break;
            rest = q;
            ++mult;
        }
        out.emplace_back(r, mult);
    }
    if (rest.degree() > 0) return std::nullopt;
    return out;
}

/// Element of k(t): numerator over monic denominator, in lowest terms.
template <class K>
class RatFun {
public:
    RatFun() : den_(K(1)) {}
    RatFun(K c) : num_(std::move(c)), den_(K(1)) {}
    RatFun(UPoly<K> n) : num_(std::move(n)), den_(K(1)) {}
    RatFun(UPoly<K> n, UPoly<K> d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

    const UPoly<K>& num() const { return num_; }
    const UPoly<K>& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }

    /// t-adic valuation (num valuation minus den valuation). Zero maps to a large sentinel.
    int valuation() const {
        if (is_zero()) return 1 << 28;
        return num_.valuation() - den_.valuation();
    }

    RatFun operator-() const { return RatFun(-num_, den_, true); }
    friend RatFun operator+(const RatFun& a, const RatFun& b) {
        if (a.den_ == b.den_) return RatFun(a.num_ + b.num_, a.den_);
        return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }
    friend RatFun operator*(const RatFun& a, const RatFun& b) {
        if (a.is_zero() || b.is_zero()) return RatFun();
        return RatFun(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFun operator/(const RatFun& a, const RatFun& b) {
        if (b.is_zero()) throw std::domain_error("rational function division by zero");
        return RatFun(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
    RatFun& operator-=(const RatFun& o) { return *this = *this - o; }
    RatFun& operator*=(const RatFun& o) { return *this = *this * o; }
    RatFun& operator/=(const RatFun& o) { return *this = *this / o; }
    friend bool operator==(const RatFun& a, const RatFun& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const RatFun& a, const RatFun& b) { return !(a == b); }

    RatFun inverse() const { return RatFun(K(1)) / *this; }

    std::string to_string(const std::string& var = "t") const {
        if (is_polynomial()) return num_.scaled(den_.lead().inverse()).to_string(var);
        return "(" + num_.to_string(var) + ")/(" + den_.to_string(var) + ")";
    }

private:
    RatFun(UPoly<K> n, UPoly<K> d, bool) : num_(std::move(n)), den_(std::move(d)) {}

    void normalize() {
        if (den_.is_zero()) throw std::domain_error("zero denominator");
        if (num_.is_zero()) {
            den_ = UPoly<K>(den_.lead().scalar(1));
            return;
        }
        auto g = gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = num_.divmod(g).first;
            den_ = den_.divmod(g).first;
        }
        K inv = den_.lead().inverse();
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
    }

    UPoly<K> num_;
    UPoly<K> den_;
};

}  // namespace arcurve
