#pragma once

#include "ring.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace arcurve {

/// XAxis is the component h = x (its ring is k[y]); YAxis is h = y (ring k[x]).
enum class BranchKind { XAxis, YAxis, Binomial };

inline std::string to_string(BranchKind k) {
    switch (k) {
        case BranchKind::XAxis: return "x-axis";
        case BranchKind::YAxis: return "y-axis";
        case BranchKind::Binomial: return "binomial";
    }
    return "?";
}

struct SemigroupData {
    std::vector<int> generators;
    int frobenius = -1;
    int conductor = 0;
};

/// Largest integer outside the semigroup generated by gens (-1 if none).
inline int frobenius_by_enumeration(const std::vector<int>& gens) {
    int g = 0;
    for (int x : gens) g = std::gcd(g, x);
    if (g != 1) throw std::invalid_argument("semigroup generators are not coprime");
    int mn = *std::min_element(gens.begin(), gens.end());
    // once mn consecutive members occur, everything beyond is a member
    int run = 0, last_gap = -1;
    for (int d = 0; run < mn; ++d) {
        if (semigroup_member(d, gens)) ++run;
        else { run = 0; last_gap = d; }
    }
    return last_gap;
}

inline SemigroupData make_semigroup(std::vector<int> gens) {
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    SemigroupData s;
    s.generators = gens;
    s.frobenius = frobenius_by_enumeration(gens);
    if (gens.size() == 2) {
        int closed = gens[0] * gens[1] - gens[0] - gens[1];
        if (closed != s.frobenius) throw std::logic_error("frobenius closed form disagrees with enumeration");
    }
    s.conductor = s.frobenius + 1;
    return s;
}

/// One irreducible component of the curve, with x -> cx t^ex, y -> cy t^ey.
template <class K>
struct Branch {
    BranchKind kind;
    WPoly<K> h;
    K cx, cy;
    int ex = 0, ey = 0;
    SemigroupData semigroup;
    /// Set when cx is not a p-th root and the Bezout parametrization is used.
    bool bezout_param = false;

    bool is_normal() const { return semigroup.frobenius < 0; }

    /// t-degree of the image of a homogeneous element of weighted degree d.
    int t_degree(int d, int p, int q) const {
        switch (kind) {
            case BranchKind::Binomial: return d;
            case BranchKind::YAxis: return d / q;
            case BranchKind::XAxis: return d / p;
        }
        return d;
    }
};

template <class K>
UPoly<K> evaluate_on_branch(const WPoly<K>& r, const Branch<K>& br) {
    std::vector<K> out;
    for (const auto& [m, c] : r.terms()) {
        auto [i, j] = m;
        if (i > 0 && br.cx.is_zero()) continue;
        if (j > 0 && br.cy.is_zero()) continue;
        K v = c;
        for (int k = 0; k < i; ++k) v *= br.cx;
        for (int k = 0; k < j; ++k) v *= br.cy;
        int e = (i > 0 ? br.ex * i : 0) + (j > 0 ? br.ey * j : 0);
        if (out.size() <= static_cast<std::size_t>(e)) out.resize(static_cast<std::size_t>(e) + 1, K(0));
        out[static_cast<std::size_t>(e)] += v;
    }
    return UPoly<K>(std::move(out));
}

template <class K>
SemigroupData value_semigroup(const Branch<K>& br) {
    return br.semigroup;
}

namespace detail {

// s, r with p*s - q*r = 1
inline std::pair<int, int> bezout_pair(int p, int q) {
    for (int s = 0; s < q; ++s)
        if ((p * s - 1) % q == 0) return {s, (p * s - 1) / q};
    throw std::logic_error("weights not coprime");
}

template <class K>
K power(const K& a, int e) {
    K base = e < 0 ? a.inverse() : a;
    K r = a.scalar(1);
    for (int k = 0; k < std::abs(e); ++k) r *= base;
    return r;
}

template <class K>
Branch<K> axis_branch(const HypersurfaceRing<K>& R, BranchKind kind) {
    Branch<K> br;
    br.kind = kind;
    if (kind == BranchKind::XAxis) {
        br.h = R.x();
        br.cx = K(0) * R.one();
        br.cy = R.one();
        br.ex = 0;
        br.ey = 1;
    } else {
        br.h = R.y();
        br.cx = R.one();
        br.cy = K(0) * R.one();
        br.ex = 1;
        br.ey = 0;
    }
    br.semigroup = make_semigroup({1});
    return br;
}

template <class K>
Branch<K> binomial_branch(const HypersurfaceRing<K>& R, const K& rho) {
    int p = R.p(), q = R.q();
    Branch<K> br;
    br.kind = BranchKind::Binomial;
    // x^p - rho y^q rescaled to be monic in y
    br.h = R.mono(0, q) - WPoly<K>::monomial(rho.inverse(), p, 0);
    br.ex = q;
    br.ey = p;
    if (auto c = nth_root(rho, p)) {
        br.cx = *c;
        br.cy = R.one();
    } else {
        auto [s, r] = bezout_pair(p, q);
        br.cx = power(rho, s);
        br.cy = power(rho, r);
        br.bezout_param = true;
    }
    br.semigroup = make_semigroup({p, q});
    return br;
}

template <class K>
std::vector<Branch<K>> branches_of_split(const HypersurfaceRing<K>& R, const BinaryFormSplit<K>& s) {
    std::vector<Branch<K>> out;
    if (s.a > 0) out.push_back(axis_branch(R, BranchKind::XAxis));
    if (s.c > 0) out.push_back(axis_branch(R, BranchKind::YAxis));
    if (s.e > 0) {
        auto roots = split_roots(s.dehomogenized);
        if (!roots) throw std::invalid_argument("form does not split over k");
        for (const auto& [rho, mult] : *roots) out.push_back(binomial_branch(R, rho));
    }
    return out;
}

}  // namespace detail

/// Branches of a reduced curve.
template <class K>
std::vector<Branch<K>> factor_hypersurface(const HypersurfaceRing<K>& R) {
    if (!R.is_reduced()) throw std::invalid_argument("not squarefree");
    return detail::branches_of_split(R, split_binary_form(R.g(), R.p(), R.q()));
}

/// Branches of the reduced curve underlying R (minimal primes), allowing
/// repeated factors in g.
template <class K>
std::vector<Branch<K>> minimal_primes(const HypersurfaceRing<K>& R) {
    return detail::branches_of_split(R, split_binary_form(R.g(), R.p(), R.q()));
}

/// A homogeneous fraction num/den in x, y.
template <class K>
struct Fraction {
    WPoly<K> num;
    WPoly<K> den;
};

template <class K>
struct GammaPrime {
    Fraction<K> value;
    /// Image in k(t) on the branch.
    RatFun<K> image;
    int t_degree = 0;
    /// True for 1/x or 1/y on a normal branch.
    bool normal_convention = false;
};

template <class K>
GammaPrime<K> gamma_prime(const HypersurfaceRing<K>& R, const Branch<K>& br) {
    GammaPrime<K> out;
    if (br.kind == BranchKind::Binomial) {
        int p = R.p(), q = R.q();
        out.value = {R.mono(0, q - 1), R.x()};
        out.t_degree = p * (q - 1) - q;
        if (out.t_degree != br.semigroup.frobenius) throw std::logic_error("gamma' degree is not the frobenius number");
        const auto& gens = br.semigroup.generators;
        if (semigroup_member(out.t_degree, gens)) throw std::logic_error("gamma' lies in the branch ring");
        for (int s : gens)
            if (!semigroup_member(out.t_degree + s, gens)) throw std::logic_error("gamma' does not multiply the maximal ideal into the branch ring");
    } else {
        out.normal_convention = true;
        out.value = {R.constant(1), br.kind == BranchKind::YAxis ? R.x() : R.y()};
        out.t_degree = -1;
    }
    out.image = RatFun<K>(evaluate_on_branch(out.value.num, br), evaluate_on_branch(out.value.den, br));
    return out;
}

}  // namespace arcurve
