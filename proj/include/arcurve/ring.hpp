#pragma once

#include "upoly.hpp"
#include "wpoly.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace arcurve {

/// True iff d = a*p + b*q with a, b >= 0.
inline bool semigroup_member(int d, int p, int q) {
    if (d < 0) return false;
    for (int a = 0; a * p <= d; ++a)
        if ((d - a * p) % q == 0) return true;
    return false;
}

/// Membership in the numerical semigroup generated by gens (positive integers).
inline bool semigroup_member(int d, const std::vector<int>& gens) {
    if (d < 0) return false;
    std::vector<char> reach(static_cast<std::size_t>(d) + 1, 0);
    reach[0] = 1;
    for (int s = 1; s <= d; ++s)
        for (int g : gens)
            if (g > 0 && g <= s && reach[static_cast<std::size_t>(s - g)]) { reach[static_cast<std::size_t>(s)] = 1; break; }
    return reach[static_cast<std::size_t>(d)] != 0;
}

/// A weighted-homogeneous form written as x^a y^c H(x^p, y^q) with H a binary
/// form prime to X and Y. dehomogenized holds H(X, 1), of degree e.
template <class K>
struct BinaryFormSplit {
    int a = 0;
    int c = 0;
    int e = 0;
    UPoly<K> dehomogenized;
};

template <class K>
BinaryFormSplit<K> split_binary_form(const WPoly<K>& g, int p, int q) {
    if (g.is_zero()) throw std::invalid_argument("zero form");
    if (!g.is_homogeneous(q, p)) throw std::invalid_argument("form is not homogeneous");
    BinaryFormSplit<K> s;
    s.a = g.min_x();
    s.c = g.min_y();
    int e = 0;
    for (const auto& [m, coef] : g.terms()) e = std::max(e, (m.first - s.a) / p);
    s.e = e;
    std::vector<K> h(static_cast<std::size_t>(e) + 1, K(0));
    for (const auto& [m, coef] : g.terms()) {
        int i = m.first - s.a;
        if (i % p != 0) throw std::logic_error("unexpected exponent in homogeneous form");
        h[static_cast<std::size_t>(i / p)] = coef;
    }
    s.dehomogenized = UPoly<K>(std::move(h));
    return s;
}

/// R = k[x,y]/(g) with deg x = q, deg y = p and g = (b x^p + y^q) f.
template <class K>
class HypersurfaceRing {
public:
    HypersurfaceRing(int p, int q, K b, WPoly<K> f, std::optional<int> m = std::nullopt,
                     std::optional<int> n = std::nullopt, K one = K(1))
        : p_(p), q_(q), b_(std::move(b)), f_(std::move(f)), m_(m), n_(n), one_(std::move(one)) {
        if (p < 3 || q < 3 || std::gcd(p, q) != 1) throw std::invalid_argument("weights not coprime/>=3");
        // adopt the field of b or f when one is left generic
        if (characteristic_of(one_) == 0) {
            if (characteristic_of(b_) != 0) one_ = b_.scalar(1);
            else if (auto c = f_.any_coeff(); c && characteristic_of(*c) != 0) one_ = c->scalar(1);
        }
        if (characteristic_of(one_) == 2) throw std::invalid_argument("characteristic 2 not supported");
        b_ = b_ * one_;
        if (f_.is_zero()) throw std::invalid_argument("f must be nonzero");
        auto df = f_.degree(q_, p_);
        if (!df) throw std::invalid_argument("f is not homogeneous");
        if (*df % p_ != 0) throw std::invalid_argument("deg f is not divisible by p");
        v_ = *df / p_;
        auto rest = f_ - WPoly<K>::monomial(one_, 0, v_);
        for (const auto& [mono, c] : rest.terms())
            if (mono.first == 0) throw std::invalid_argument("f - y^v is not divisible by x");
        if (m_.has_value() != n_.has_value()) throw std::invalid_argument("m and n must be given together");
        if (m_ && (*m_ < 1 || *m_ >= p_ - 1)) throw std::invalid_argument("m out of range: need 1 <= m < p-1");
        if (n_ && (*n_ < 2 || *n_ >= q_)) throw std::invalid_argument("n out of range: need 2 <= n < q");
        g_ = (WPoly<K>::monomial(b_, p_, 0) + WPoly<K>::monomial(one_, 0, q_)) * f_;
        N_ = q_ + v_;
        tail_ = -(g_ - WPoly<K>::monomial(one_, 0, N_));
    }

    int p() const { return p_; }
    int q() const { return q_; }
    const K& b() const { return b_; }
    const WPoly<K>& f() const { return f_; }
    const WPoly<K>& g() const { return g_; }
    int v() const { return v_; }
    std::optional<int> m() const { return m_; }
    std::optional<int> n() const { return n_; }
    bool has_ideal() const { return m_.has_value(); }

    int deg_x() const { return q_; }
    int deg_y() const { return p_; }
    /// y-degree of g; R has k-basis x^i y^j with j below this.
    int y_bound() const { return N_; }
    int deg_g() const { return p_ * N_; }

    const K& one() const { return one_; }
    K scalar(long n) const { return one_.scalar(n); }
    WPoly<K> constant(long c) const { return WPoly<K>(scalar(c)); }
    WPoly<K> mono(int i, int j, long c = 1) const { return WPoly<K>::monomial(scalar(c), i, j); }
    WPoly<K> x() const { return mono(1, 0); }
    WPoly<K> y() const { return mono(0, 1); }
    WPoly<K> parse(const std::string& s) const { return parse_wpoly(s, one_); }

    int mono_degree(int i, int j) const { return q_ * i + p_ * j; }
    std::optional<int> degree(const WPoly<K>& a) const { return a.degree(q_, p_); }
    bool is_homogeneous(const WPoly<K>& a) const { return a.is_homogeneous(q_, p_); }

    /// Unique representative with y-degree below deg_y(g), using y^N = tail.
    WPoly<K> normal_form(const WPoly<K>& a) const {
        WPoly<K> r = a;
        while (r.max_y() >= N_) {
            int top = r.max_y();
            WPoly<K> lead, keep;
            for (const auto& [m, c] : r.terms()) {
                if (m.second == top) lead.add_term({m.first, m.second - N_}, c);
                else keep.add_term(m, c);
            }
            r = keep + lead * tail_;
        }
        return r;
    }

    /// Division in S: a = quot * g + rem with rem in normal form.
    std::pair<WPoly<K>, WPoly<K>> divide_by_g(const WPoly<K>& a) const {
        WPoly<K> r = a, quot;
        while (r.max_y() >= N_) {
            int top = r.max_y();
            WPoly<K> lead;
            for (const auto& [m, c] : r.terms())
                if (m.second == top) lead.add_term({m.first, m.second - N_}, c);
            quot += lead;
            r -= lead * g_;
        }
        return {quot, r};
    }

    std::optional<WPoly<K>> exact_div_g(const WPoly<K>& a) const {
        auto [quot, rem] = divide_by_g(a);
        if (!rem.is_zero()) return std::nullopt;
        return quot;
    }

    /// Monomial basis of R_d (empty for d < 0), ordered by increasing y-exponent.
    std::vector<Mono> basis_R(int d) const { return basis(d, N_); }
    /// Monomial basis of S_d.
    std::vector<Mono> basis_S(int d) const { return basis(d, 1 << 28); }
    std::size_t dim_R(int d) const { return basis_R(d).size(); }

    /// Coefficient of T^d in (1 - T^deg g) / ((1 - T^q)(1 - T^p)).
    long hilbert_coefficient(int d) const {
        auto count = [&](int e) -> long { return e < 0 ? 0 : static_cast<long>(basis_S(e).size()); };
        return count(d) - count(d - deg_g());
    }

    bool is_reduced() const {
        auto s = split_binary_form(g_, p_, q_);
        return s.a <= 1 && s.c <= 1 && is_squarefree(s.dehomogenized);
    }

    std::string describe() const {
        std::string s = "k[x,y]/(" + g_.to_string() + "), deg x = " + std::to_string(q_) +
                        ", deg y = " + std::to_string(p_);
        return s;
    }

private:
    std::vector<Mono> basis(int d, int jmax) const {
        std::vector<Mono> out;
        if (d < 0) return out;
        for (int j = 0; j < jmax && p_ * j <= d; ++j) {
            int rest = d - p_ * j;
            if (rest % q_ == 0) out.emplace_back(rest / q_, j);
        }
        return out;
    }

    int p_, q_;
    K b_;
    WPoly<K> f_;
    std::optional<int> m_, n_;
    K one_;
    int v_ = 0;
    int N_ = 0;
    WPoly<K> g_;
    WPoly<K> tail_;
};

}  // namespace arcurve
