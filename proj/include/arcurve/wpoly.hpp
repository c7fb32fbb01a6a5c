#pragma once

#include "field.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace arcurve {

/// Exponent pair (i, j) of the monomial x^i y^j.
using Mono = std::pair<int, int>;

/// Sparse polynomial in x, y with exact coefficients. Weights live in the ring.
template <class K>
class WPoly {
public:
    using Terms = std::map<Mono, K>;

    WPoly() = default;
    WPoly(K c) { if (!c.is_zero()) t_.emplace(Mono{0, 0}, std::move(c)); }

    static WPoly monomial(K c, int i, int j) {
        if (i < 0 || j < 0) throw std::invalid_argument("negative exponent");
        WPoly p;
        if (!c.is_zero()) p.t_.emplace(Mono{i, j}, std::move(c));
        return p;
    }
    static WPoly x(const K& one) { return monomial(one, 1, 0); }
    static WPoly y(const K& one) { return monomial(one, 0, 1); }

    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    std::size_t size() const { return t_.size(); }

    K coeff(int i, int j) const {
        auto it = t_.find({i, j});
        return it == t_.end() ? K(0) : it->second;
    }

    void add_term(const Mono& m, const K& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = t_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    /// Weighted degree with deg x = wx, deg y = wy; nothing if not homogeneous or zero.
    std::optional<int> degree(int wx, int wy) const {
        if (t_.empty()) return std::nullopt;
        int d = wx * t_.begin()->first.first + wy * t_.begin()->first.second;
        for (const auto& [m, c] : t_)
            if (wx * m.first + wy * m.second != d) return std::nullopt;
        return d;
    }
    bool is_homogeneous(int wx, int wy) const { return t_.empty() || degree(wx, wy).has_value(); }

    int max_y() const {
        int r = -1;
        for (const auto& [m, c] : t_) r = std::max(r, m.second);
        return r;
    }
    int min_x() const {
        int r = 1 << 30;
        for (const auto& [m, c] : t_) r = std::min(r, m.first);
        return t_.empty() ? 0 : r;
    }
    int min_y() const {
        int r = 1 << 30;
        for (const auto& [m, c] : t_) r = std::min(r, m.second);
        return t_.empty() ? 0 : r;
    }

    /// A nonzero coefficient, used to reach the field context of the polynomial.
    std::optional<K> any_coeff() const {
        if (t_.empty()) return std::nullopt;
        return t_.begin()->second;
    }

    WPoly operator-() const {
        WPoly r = *this;
        for (auto& [m, c] : r.t_) c = -c;
        return r;
    }
    WPoly& operator+=(const WPoly& o) {
        for (const auto& [m, c] : o.t_) add_term(m, c);
        return *this;
    }
    WPoly& operator-=(const WPoly& o) {
        for (const auto& [m, c] : o.t_) add_term(m, -c);
        return *this;
    }
    friend WPoly operator+(WPoly a, const WPoly& b) { return a += b; }
    friend WPoly operator-(WPoly a, const WPoly& b) { return a -= b; }
    friend WPoly operator*(const WPoly& a, const WPoly& b) {
        WPoly r;
        for (const auto& [ma, ca] : a.t_)
            for (const auto& [mb, cb] : b.t_)
                r.add_term({ma.first + mb.first, ma.second + mb.second}, ca * cb);
        return r;
    }
    WPoly& operator*=(const WPoly& o) { return *this = *this * o; }
    friend bool operator==(const WPoly& a, const WPoly& b) { return a.t_ == b.t_; }
    friend bool operator!=(const WPoly& a, const WPoly& b) { return !(a == b); }

    WPoly scaled(const K& s) const {
        if (s.is_zero()) return {};
        WPoly r = *this;
        for (auto& [m, c] : r.t_) c *= s;
        return r;
    }

    /// Multiply by x^i y^j.
    WPoly shifted(int i, int j) const {
        WPoly r;
        for (const auto& [m, c] : t_) r.t_.emplace(Mono{m.first + i, m.second + j}, c);
        return r;
    }

    /// Exact division by the monomial x^i y^j; nothing when some term is not divisible.
    std::optional<WPoly> divide_monomial(int i, int j) const {
        WPoly r;
        for (const auto& [m, c] : t_) {
            if (m.first < i || m.second < j) return std::nullopt;
            r.t_.emplace(Mono{m.first - i, m.second - j}, c);
        }
        return r;
    }

    WPoly pow(int e) const {
        WPoly r(any_coeff() ? any_coeff()->scalar(1) : K(1));
        for (int k = 0; k < e; ++k) r *= *this;
        return r;
    }

    std::string to_string() const {
        if (t_.empty()) return "0";
        std::string s;
        // highest x power first, which lists y-free terms before the rest for binomials
        for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
            const auto& [m, c] = *it;
            std::string cs = c.to_string();
            bool neg = !cs.empty() && cs[0] == '-';
            if (!s.empty()) s += neg ? "" : "+";
            bool unit_mono = m.first == 0 && m.second == 0;
            std::string mono;
            if (m.first > 0) mono += m.first == 1 ? "x" : "x^" + std::to_string(m.first);
            if (m.second > 0) {
                if (!mono.empty()) mono += "*";
                mono += m.second == 1 ? "y" : "y^" + std::to_string(m.second);
            }
            if (unit_mono) s += cs;
            else if (cs == "1") s += mono;
            else if (cs == "-1") s += "-" + mono;
            else s += cs + "*" + mono;
        }
        return s;
    }

private:
    Terms t_;
};

namespace detail {

struct PolyLexer {
    const std::string& s;
    std::size_t i = 0;
    void skip() { while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i; }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) { ++i; return true; }
        return false;
    }
    bool at_end() { skip(); return i >= s.size(); }
    long integer() {
        skip();
        std::size_t st = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (st == i) throw std::invalid_argument("expected integer at position " + std::to_string(st) + " in '" + s + "'");
        return std::stol(s.substr(st, i - st));
    }
    bool peek_digit() { skip(); return i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); }
};

}  // namespace detail

/// Parses sums of terms "c*x^i*y^j" (signs, fractions a/b, and implicit
/// coefficient 1 accepted). proto supplies the field context.
template <class K>
WPoly<K> parse_wpoly(const std::string& text, const K& proto) {
    detail::PolyLexer lx{text};
    WPoly<K> out;
    if (lx.at_end()) throw std::invalid_argument("empty polynomial");
    bool first = true;
    while (!lx.at_end()) {
        long sign = 1;
        if (lx.eat('+')) {}
        else if (lx.eat('-')) sign = -1;
        else if (!first) throw std::invalid_argument("expected '+' or '-' in '" + text + "'");
        first = false;
        K c = proto.scalar(sign);
        int ei = 0, ej = 0;
        bool need_factor = true;
        if (lx.peek_digit()) {
            long a = lx.integer();
            long b = 1;
            if (lx.eat('/')) b = lx.integer();
            if (b == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
            c = c * proto.scalar(a) / proto.scalar(b);
            need_factor = lx.eat('*');
        }
        while (need_factor) {
            lx.skip();
            if (lx.eat('x') || lx.eat('y')) {
                char v = text[lx.i - 1];
                int e = 1;
                if (lx.eat('^')) e = static_cast<int>(lx.integer());
                (v == 'x' ? ei : ej) += e;
            } else {
                throw std::invalid_argument("unexpected character in '" + text + "'");
            }
            need_factor = lx.eat('*');
        }
        out.add_term({ei, ej}, c);
    }
    return out;
}

}  // namespace arcurve
