#pragma once

#include "decompose.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace arcurve {

/// Raised when End(M) generation could not be certified inside the window.
class WindowNotSaturated : public std::runtime_error {
public:
    WindowNotSaturated() : std::runtime_error("window not saturated") {}
};

/// trace(h (x) Q): one value in k(t) per branch, and a fraction u/x^k when it lifts.
template <class K>
struct TraceValue {
    int degree = 0;
    std::vector<RatFun<K>> images;
    std::optional<QElement<K>> fraction;

    bool is_integral() const {
        for (const auto& v : images)
            if (!v.is_polynomial()) return false;
        return true;
    }
    /// Smallest t-valuation over the branches (large when the trace vanishes).
    int min_valuation() const {
        int v = 1 << 28;
        for (const auto& im : images) v = std::min(v, im.valuation());
        return v;
    }
    bool is_zero() const {
        for (const auto& v : images)
            if (!v.is_zero()) return false;
        return true;
    }
    std::string to_string() const {
        if (fraction) return fraction->to_string();
        std::string s = "(";
        for (std::size_t i = 0; i < images.size(); ++i) s += (i ? ", " : "") + images[i].to_string();
        return s + ")";
    }
};

namespace detail {

template <class K>
Matrix<RatFun<K>> on_branch(const GradedMatrix<K>& A, const Branch<K>& br) {
    Matrix<RatFun<K>> E(A.rows(), A.cols());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j)
            if (!A(i, j).is_zero()) E(i, j) = RatFun<K>(evaluate_on_branch(A(i, j), br));
    return E;
}

/// Trace of the map induced by H on k(t)^n / im A, via a complement of
/// standard basis vectors to the pivot columns of A.
template <class K>
RatFun<K> quotient_trace(const Matrix<RatFun<K>>& A, const Matrix<RatFun<K>>& H, const K& one) {
    std::size_t n = H.rows();
    Matrix<RatFun<K>> Ar = A;
    auto piv = rref(Ar);
    std::vector<Vec<RatFun<K>>> cols;
    for (auto c : piv) cols.push_back(A.col(c));
    Subspace<RatFun<K>> span(n);
    for (const auto& c : cols) span.add(c);
    std::vector<std::size_t> comp;
    for (std::size_t j = 0; j < n; ++j) {
        Vec<RatFun<K>> e(n);
        e[j] = RatFun<K>(one);
        if (span.add(e)) {
            comp.push_back(j);
            cols.push_back(e);
        }
    }
    auto T = Matrix<RatFun<K>>::from_columns(cols, n);
    RatFun<K> tr;
    for (std::size_t k = 0; k < comp.size(); ++k) {
        auto sol = solve(T, H.col(comp[k]));
        if (!sol) throw std::logic_error("complement basis is singular");
        tr += (*sol)[piv.size() + k];
    }
    return tr;
}

/// Same trace as tr(H) minus the trace of H restricted to im A.
template <class K>
RatFun<K> quotient_trace_by_restriction(const Matrix<RatFun<K>>& A, const Matrix<RatFun<K>>& H) {
    Matrix<RatFun<K>> Ar = A;
    auto piv = rref(Ar);
    std::vector<Vec<RatFun<K>>> cols;
    for (auto c : piv) cols.push_back(A.col(c));
    RatFun<K> tr;
    for (std::size_t i = 0; i < H.rows(); ++i) tr += H(i, i);
    if (cols.empty()) return tr;
    auto B = Matrix<RatFun<K>>::from_columns(cols, H.rows());
    for (std::size_t k = 0; k < cols.size(); ++k) {
        auto sol = solve(B, H * cols[k]);
        if (!sol) throw std::logic_error("endomorphism does not preserve the relations");
        tr -= (*sol)[k];
    }
    return tr;
}

}  // namespace detail

/// Element u/x^k of Q with the given branch images, if one exists with k <= max_k.
template <class K>
std::optional<QElement<K>> lift_images(const CurvePtr<K>& C, const std::vector<RatFun<K>>& images, int degree,
                                       int max_k) {
    const auto& R = C->ring;
    bool all_zero = true;
    for (const auto& v : images) all_zero = all_zero && v.is_zero();
    if (all_zero) return QElement<K>::zero(C, degree);
    for (int k = 0; k <= max_k; ++k) {
        auto basis = R.basis_R(degree + k * R.q());
        if (basis.empty()) continue;
        auto xk = R.mono(k, 0);
        // unknown coefficients of u; equations: image(u) = image(x^k) * target on every branch
        std::vector<std::vector<Vec<K>>> rows_per_branch;
        Matrix<K> sys;
        Vec<K> rhs;
        bool ok = true;
        for (std::size_t b = 0; b < C->branches.size() && ok; ++b) {
            const auto& br = C->branches[b];
            RatFun<K> target = images[b] * RatFun<K>(evaluate_on_branch(xk, br));
            if (!target.is_polynomial()) {
                ok = false;
                break;
            }
            UPoly<K> tp = target.num().scaled(target.den().lead().inverse());
            std::vector<UPoly<K>> ev;
            int top = tp.degree();
            for (const auto& m : basis) {
                ev.push_back(evaluate_on_branch(WPoly<K>::monomial(R.one(), m.first, m.second), br));
                top = std::max(top, ev.back().degree());
            }
            for (int e = 0; e <= top; ++e) {
                Vec<K> row(basis.size(), R.scalar(0));
                for (std::size_t c = 0; c < basis.size(); ++c) row[c] = ev[c].coeff(e);
                sys.append_row(row);
                rhs.push_back(tp.coeff(e));
            }
        }
        if (!ok) continue;
        auto sol = solve(sys, rhs);
        if (!sol) continue;
        WPoly<K> u;
        for (std::size_t c = 0; c < basis.size(); ++c) u.add_term(basis[c], (*sol)[c]);
        if (u.is_zero()) continue;
        return QElement<K>(C, u, xk);
    }
    return std::nullopt;
}

/// trace(h (x) Q) for an endomorphism h of M.
template <class K>
TraceValue<K> trace_Q(const GradedHom<K>& h, int max_k = -1) {
    if (h.src.get() != h.tgt.get()) throw std::invalid_argument("trace needs an endomorphism");
    const auto& C = h.src->curve_ptr();
    C->require_reduced();
    TraceValue<K> tv;
    tv.degree = h.degree;
    const auto& A = h.src->presentation();
    for (const auto& br : C->branches) {
        auto Ab = detail::on_branch(A, br);
        auto Hb = detail::on_branch(h.H, br);
        tv.images.push_back(detail::quotient_trace(Ab, Hb, C->ring.one()));
    }
    if (max_k < 0) {
        int cond = 0;
        for (const auto& br : C->branches) cond = std::max(cond, br.semigroup.conductor);
        max_k = cond / C->ring.q() + C->ring.y_bound() + 2;
    }
    tv.fraction = lift_images(C, tv.images, h.degree, max_k);
    return tv;
}

/// Trace of an element of degree d acting by multiplication, r a fraction.
template <class K>
TraceValue<K> scalar_trace(const QElement<K>& r, const std::vector<int>& ranks) {
    TraceValue<K> tv;
    tv.degree = r.degree();
    for (std::size_t b = 0; b < ranks.size(); ++b)
        tv.images.push_back(r.images()[b] * RatFun<K>(r.curve().ring.scalar(ranks[b])));
    return tv;
}

/// Whether the trace lies in R (q_membership of the lifted fraction).
template <class K>
bool trace_in_R(const TraceValue<K>& tv) {
    if (tv.is_zero()) return true;
    if (!tv.fraction) return false;
    return q_membership(*tv.fraction).has_value();
}

/// Homogeneous R-module generators of End(M), certified complete by the rank
/// of End(M) as a free k[x]-module.
template <class K>
struct EndGenerators {
    std::vector<GradedHom<K>> gens;
    int lo = 0;
    int hi = 0;
    long k_x_rank = 0;
};

template <class K>
EndGenerators<K> end_generators(const ModPtr<K>& M, int max_hi = -1) {
    const auto& C = M->curve();
    C.require_reduced();
    const auto& R = M->ring();
    EndGenerators<K> out;
    if (M->ngens() == 0) return out;
    auto ranks = rank_vector(*M);
    long expected = 0;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        const auto& br = C.branches[i];
        expected += static_cast<long>(ranks[i]) * ranks[i] * br.ex;
    }
    out.k_x_rank = expected;
    const auto& a = M->gen_degrees();
    int amin = *std::min_element(a.begin(), a.end()), amax = *std::max_element(a.begin(), a.end());
    out.lo = amin - amax;
    int B = 2 * R.deg_g() + (amax - amin);
    if (max_hi < 0) max_hi = 4 * B + 4 * R.deg_g();
    std::map<int, std::size_t> dims;
    auto dim_at = [&](int d) {
        auto it = dims.find(d);
        if (it != dims.end()) return it->second;
        std::size_t v = d < out.lo ? 0 : hom_graded(M, M, d).size();
        dims[d] = v;
        return v;
    };
    long found = 0;
    int d = out.lo;
    for (;; ++d) {
        found += static_cast<long>(dim_at(d)) - static_cast<long>(dim_at(d - R.q()));
        if (d >= B && found == expected) break;
        if (found > expected) throw std::logic_error("End(M) exceeds its k[x]-rank");
        if (d >= max_hi) throw WindowNotSaturated();
    }
    out.hi = d;
    // minimal R-generators in increasing degree
    std::map<int, Subspace<K>> spans;
    for (int e = out.lo; e <= out.hi; ++e) {
        auto basis = hom_graded(M, M, e);
        if (basis.empty()) continue;
        Subspace<K> span(hom_ambient_dim(*M, *M, e));
        for (const auto& g : out.gens)
            for (const auto& m : R.basis_R(e - g.degree))
                span.add(hom_coords(compose(mult_hom(M, R.mono(m.first, m.second)), g)));
        for (const auto& h : basis)
            if (span.add(hom_coords(h))) out.gens.push_back(h);
    }
    return out;
}

/// Decides stable vanishing of endomorphisms of a fixed module two ways.
template <class K>
class StableOracle {
public:
    explicit StableOracle(ModPtr<K> M) : M_(std::move(M)) {}

    const ModPtr<K>& module() const { return M_; }

    const EndGenerators<K>& generators() const {
        std::lock_guard<std::mutex> lock(mu_);
        if (!gens_) gens_ = std::make_shared<EndGenerators<K>>(end_generators(M_));
        return *gens_;
    }

    /// h is stably zero iff trace(g h) lies in R for every generator g of End(M).
    bool stably_zero_trace(const GradedHom<K>& h, std::vector<TraceValue<K>>* witnesses = nullptr) const {
        bool zero = true;
        for (const auto& g : generators().gens) {
            auto tv = trace_Q(compose(g, h));
            bool in = trace_in_R(tv);
            if (witnesses) witnesses->push_back(tv);
            if (!in) {
                zero = false;
                if (!witnesses) break;
            }
        }
        return zero;
    }

    /// h is stably zero iff it lifts through the free cover F -> M.
    bool stably_zero_bruteforce(const GradedHom<K>& h) const {
        auto F = free_cover();
        auto lifts = hom_graded(M_, F, h.degree);
        Subspace<K> span(hom_ambient_dim(*M_, *M_, h.degree));
        for (const auto& L : lifts) span.add(hom_coords(make_hom(M_, M_, h.degree, L.H)));
        return span.contains(hom_coords(h));
    }

    /// [h] generates the socle of the stable endomorphism ring: h is stably
    /// nonzero and every nonunit generator kills it stably.
    bool socle_test(const GradedHom<K>& h) const {
        if (stably_zero_trace(h)) return false;
        for (const auto& g : nonunit_generators())
            if (!stably_zero_trace(compose(g, h))) return false;
        return true;
    }

    /// R-module generators of the nonunit endomorphisms (M indecomposable).
    std::vector<GradedHom<K>> nonunit_generators() const {
        std::vector<GradedHom<K>> out;
        const auto& R = M_->ring();
        for (const auto& g : generators().gens)
            if (g.degree != 0) out.push_back(g);
        EndAlgebra<K> A(M_);
        for (const auto& j : A.radical()) out.push_back(A.to_hom(j));
        for (const auto& b : A.basis()) {
            out.push_back(compose(mult_hom(M_, R.x()), b));
            out.push_back(compose(mult_hom(M_, R.y()), b));
        }
        return out;
    }

    /// Basis of the stably zero subspace of End(M)_d, by the lifting test.
    std::vector<GradedHom<K>> stably_zero_basis(int d) const {
        auto F = free_cover();
        std::vector<GradedHom<K>> out;
        Subspace<K> span(hom_ambient_dim(*M_, *M_, d));
        for (const auto& L : hom_graded(M_, F, d)) {
            auto h = make_hom(M_, M_, d, L.H);
            if (span.add(hom_coords(h))) out.push_back(h);
        }
        return out;
    }

    /// dim of the stable endomorphism space in degree d.
    std::size_t stable_dim(int d) const { return hom_graded(M_, M_, d).size() - stably_zero_basis(d).size(); }

private:
    ModPtr<K> free_cover() const {
        std::lock_guard<std::mutex> lock(mu_);
        if (!cover_) cover_ = GradedModule<K>::free(M_->curve_ptr(), M_->gen_degrees());
        return cover_;
    }

    ModPtr<K> M_;
    mutable std::mutex mu_;
    mutable std::shared_ptr<EndGenerators<K>> gens_;
    mutable ModPtr<K> cover_;
};

}  // namespace arcurve
