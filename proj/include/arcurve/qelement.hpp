#pragma once

#include "branches.hpp"
#include "linalg.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace arcurve {

/// A ring together with its minimal primes. Shared by every module over it.
template <class K>
struct Curve {
    HypersurfaceRing<K> ring;
    std::vector<Branch<K>> branches;
    bool reduced = false;

    explicit Curve(HypersurfaceRing<K> r) : ring(std::move(r)) {
        reduced = ring.is_reduced();
        branches = minimal_primes(ring);
    }

    static std::shared_ptr<const Curve> make(HypersurfaceRing<K> r) {
        return std::make_shared<const Curve>(std::move(r));
    }

    void require_reduced() const {
        if (!reduced) throw std::invalid_argument("ring not reduced");
    }
    bool is_domain() const { return reduced && branches.size() == 1; }

    /// Index of the only singular branch; throws when there is none or several.
    std::size_t singular_branch() const {
        std::optional<std::size_t> found;
        for (std::size_t i = 0; i < branches.size(); ++i) {
            if (branches[i].is_normal()) continue;
            if (found) throw std::invalid_argument("several singular branches: choose one explicitly");
            found = i;
        }
        if (!found) {
            // every branch normal: the b = 0 route works with the y-axis component
            for (std::size_t i = 0; i < branches.size(); ++i)
                if (branches[i].kind == BranchKind::YAxis) return i;
            throw std::invalid_argument("no singular branch");
        }
        return *found;
    }
};

template <class K>
using CurvePtr = std::shared_ptr<const Curve<K>>;

/// True iff r lies in no minimal prime of R.
template <class K>
bool is_nonzerodivisor(const WPoly<K>& r, const Curve<K>& C) {
    WPoly<K> nf = C.ring.normal_form(r);
    if (nf.is_zero()) return false;
    for (const auto& br : C.branches)
        if (evaluate_on_branch(nf, br).is_zero()) return false;
    return true;
}

/// Independent check: multiplication by r is injective on R_d for 0 <= d <= deg g.
template <class K>
bool is_nonzerodivisor_linear(const WPoly<K>& r, const HypersurfaceRing<K>& R) {
    auto dr = R.degree(r);
    if (!dr) throw std::invalid_argument("element is not homogeneous");
    WPoly<K> nf = R.normal_form(r);
    if (nf.is_zero()) return false;
    for (int d = 0; d <= R.deg_g(); ++d) {
        auto src = R.basis_R(d);
        if (src.empty()) continue;
        auto tgt = R.basis_R(d + *dr);
        Matrix<K> m(tgt.size(), src.size());
        for (std::size_t c = 0; c < src.size(); ++c) {
            auto prod = R.normal_form(nf.shifted(src[c].first, src[c].second));
            for (std::size_t i = 0; i < tgt.size(); ++i) m(i, c) = prod.coeff(tgt[i].first, tgt[i].second);
        }
        if (rank(m) < src.size()) return false;
    }
    return true;
}

/// Element u/v of the total quotient ring, with v a homogeneous nonzerodivisor.
template <class K>
class QElement {
public:
    QElement() = default;
    QElement(CurvePtr<K> C, WPoly<K> num, WPoly<K> den) : C_(std::move(C)) {
        const auto& R = C_->ring;
        num_ = R.normal_form(num);
        den_ = R.normal_form(den);
        auto dd = R.degree(den_);
        if (!dd) throw std::invalid_argument("denominator must be homogeneous and nonzero");
        if (!is_nonzerodivisor(den_, *C_)) throw std::invalid_argument("denominator is a zerodivisor");
        if (num_.is_zero()) {
            auto dn = R.degree(num);
            deg_ = (dn ? *dn : 0) - *dd;
        } else {
            auto dn = R.degree(num_);
            if (!dn) throw std::invalid_argument("numerator must be homogeneous");
            deg_ = *dn - *dd;
        }
        for (const auto& br : C_->branches)
            images_.emplace_back(evaluate_on_branch(num_, br), evaluate_on_branch(den_, br));
    }

    static QElement from_ring(CurvePtr<K> C, const WPoly<K>& r) {
        auto one = C->ring.constant(1);
        return QElement(std::move(C), r, one);
    }

    /// Zero element of a prescribed degree.
    static QElement zero(CurvePtr<K> C, int degree) {
        QElement q(C, WPoly<K>(), C->ring.constant(1));
        q.deg_ = degree;
        return q;
    }

    const WPoly<K>& num() const { return num_; }
    const WPoly<K>& den() const { return den_; }
    int degree() const { return deg_; }
    const std::vector<RatFun<K>>& images() const { return images_; }
    const Curve<K>& curve() const { return *C_; }
    CurvePtr<K> curve_ptr() const { return C_; }
    bool is_zero() const { return num_.is_zero(); }

    friend QElement operator+(const QElement& a, const QElement& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.deg_ != b.deg_) throw std::invalid_argument("sum of elements of different degrees");
        const auto& R = a.C_->ring;
        if (a.den_ == b.den_) return QElement(a.C_, a.num_ + b.num_, a.den_).with_degree(a.deg_);
        // common power of x keeps denominators monomial
        auto ea = pure_x_power(a.den_), eb = pure_x_power(b.den_);
        if (ea && eb) {
            int e = std::max(*ea, *eb);
            return QElement(a.C_, R.normal_form(a.num_.shifted(e - *ea, 0) + b.num_.shifted(e - *eb, 0)),
                            a.den_.shifted(e - *ea, 0)).with_degree(a.deg_);
        }
        return QElement(a.C_, a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_).with_degree(a.deg_);
    }
    QElement operator-() const {
        QElement r = *this;
        r.num_ = -r.num_;
        for (auto& im : r.images_) im = -im;
        return r;
    }
    friend QElement operator-(const QElement& a, const QElement& b) { return a + (-b); }
    friend QElement operator*(const QElement& a, const QElement& b) {
        QElement r(a.C_, a.num_ * b.num_, a.den_ * b.den_);
        r.deg_ = a.deg_ + b.deg_;
        return r;
    }
    QElement scaled(const K& c) const {
        QElement r(C_, num_.scaled(c), den_);
        r.deg_ = deg_;
        return r;
    }

    std::string to_string() const {
        if (num_.is_zero()) return "0";
        if (den_.size() == 1 && den_.coeff(0, 0).is_one()) return num_.to_string();
        auto wrap = [](const WPoly<K>& p) { return p.size() > 1 ? "(" + p.to_string() + ")" : p.to_string(); };
        return wrap(num_) + "/" + wrap(den_);
    }

private:
    QElement& with_degree(int d) {
        deg_ = d;
        return *this;
    }
    static std::optional<int> pure_x_power(const WPoly<K>& d) {
        if (d.size() != 1) return std::nullopt;
        const auto& [m, c] = *d.terms().begin();
        if (m.second != 0 || !c.is_one()) return std::nullopt;
        return m.first;
    }

    CurvePtr<K> C_;
    WPoly<K> num_;
    WPoly<K> den_;
    int deg_ = 0;
    std::vector<RatFun<K>> images_;
};

/// r in R with r * den = num, if the fraction lies in R.
template <class K>
std::optional<WPoly<K>> q_membership(const QElement<K>& a) {
    const auto& R = a.curve().ring;
    if (a.is_zero()) return WPoly<K>();
    int d = a.degree();
    auto dn = R.degree(a.num());
    auto src = R.basis_R(d);
    auto tgt = R.basis_R(*dn);
    if (src.empty()) return std::nullopt;
    Matrix<K> m(tgt.size(), src.size());
    for (std::size_t c = 0; c < src.size(); ++c) {
        auto prod = R.normal_form(a.den().shifted(src[c].first, src[c].second));
        for (std::size_t i = 0; i < tgt.size(); ++i) m(i, c) = prod.coeff(tgt[i].first, tgt[i].second);
    }
    Vec<K> rhs(tgt.size());
    for (std::size_t i = 0; i < tgt.size(); ++i) rhs[i] = a.num().coeff(tgt[i].first, tgt[i].second);
    auto sol = solve(m, rhs);
    if (!sol) return std::nullopt;
    WPoly<K> r;
    for (std::size_t c = 0; c < src.size(); ++c) r.add_term(src[c], (*sol)[c]);
    return r;
}

}  // namespace arcurve
