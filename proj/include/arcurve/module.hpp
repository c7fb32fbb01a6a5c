#pragma once

#include "graded_matrix.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace arcurve {

template <class K>
using Column = std::vector<WPoly<K>>;

/// Graded piece M_d of a cokernel: the free piece F_d modulo relations.
/// The quotient basis consists of free basis vectors at non-pivot positions.
template <class K>
struct Piece {
    int degree = 0;
    std::vector<std::pair<std::size_t, Mono>> basis;
    std::map<std::pair<std::size_t, Mono>, std::size_t> index;
    Subspace<K> rel;
    std::vector<std::size_t> quot;
    std::size_t dim() const { return quot.size(); }
};

/// Graded R-module cok A, with A a graded matrix over R in normal form.
template <class K>
class GradedModule {
public:
    using Ptr = std::shared_ptr<const GradedModule>;

    GradedModule(CurvePtr<K> C, GradedMatrix<K> A, std::optional<MatrixFactorization<K>> mf = std::nullopt)
        : C_(std::move(C)), A_(A.reduced(C_->ring)), mf_(std::move(mf)) {
        if (!A_.degrees_consistent(C_->ring.deg_x(), C_->ring.deg_y()))
            throw std::invalid_argument("presentation entries do not match their degrees");
    }

    static Ptr from_mf(CurvePtr<K> C, const MatrixFactorization<K>& mf) {
        auto chk = mf_check(mf, C->ring);
        if (!chk.ok) throw std::invalid_argument("not a matrix factorization of g");
        return std::make_shared<const GradedModule>(C, mf.phi, mf);
    }
    static Ptr free(CurvePtr<K> C, const std::vector<int>& degrees) {
        return std::make_shared<const GradedModule>(C, GradedMatrix<K>(degrees, {}));
    }
    static Ptr from_presentation(CurvePtr<K> C, const GradedMatrix<K>& A) {
        return std::make_shared<const GradedModule>(C, A);
    }

    const CurvePtr<K>& curve_ptr() const { return C_; }
    const Curve<K>& curve() const { return *C_; }
    const HypersurfaceRing<K>& ring() const { return C_->ring; }
    const GradedMatrix<K>& presentation() const { return A_; }
    const std::optional<MatrixFactorization<K>>& mf() const { return mf_; }
    std::size_t ngens() const { return A_.rows(); }
    const std::vector<int>& gen_degrees() const { return A_.row_degrees(); }
    const std::vector<int>& rel_degrees() const { return A_.col_degrees(); }

    /// M(s), with M(s)_j = M_{s+j}.
    Ptr shifted(int s) const {
        auto r = A_.row_degrees(), c = A_.col_degrees();
        for (auto& d : r) d -= s;
        for (auto& d : c) d -= s;
        GradedMatrix<K> A = A_;
        A.set_degrees(r, c);
        std::optional<MatrixFactorization<K>> mf;
        if (mf_) {
            mf = *mf_;
            auto pr = mf->phi.row_degrees(), pc = mf->phi.col_degrees();
            auto sc = mf->psi.col_degrees();
            for (auto& d : pr) d -= s;
            for (auto& d : pc) d -= s;
            for (auto& d : sc) d -= s;
            mf->phi.set_degrees(pr, pc);
            mf->psi.set_degrees(pc, sc);
        }
        return std::make_shared<const GradedModule>(C_, A, mf);
    }

    const Piece<K>& piece(int d) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = pieces_.find(d);
        if (it != pieces_.end()) return *it->second;
        auto p = std::make_shared<Piece<K>>(build_piece(d));
        pieces_[d] = p;
        return *p;
    }
    std::size_t dim(int d) const { return piece(d).dim(); }

    /// Coordinates of a column in the free piece F_d.
    Vec<K> to_free(const Column<K>& v, int d) const {
        const auto& P = piece(d);
        Vec<K> out(P.basis.size(), ring().scalar(0));
        for (std::size_t i = 0; i < v.size(); ++i) {
            auto nf = ring().normal_form(v[i]);
            for (const auto& [m, c] : nf.terms()) {
                auto it = P.index.find({i, m});
                if (it == P.index.end())
                    throw std::logic_error("element entry has the wrong degree for its generator");
                out[it->second] += c;
            }
        }
        return out;
    }
    Column<K> from_free(const Vec<K>& f, int d) const {
        const auto& P = piece(d);
        Column<K> v(ngens());
        for (std::size_t k = 0; k < P.basis.size(); ++k) {
            if (f[k].is_zero()) continue;
            const auto& [i, m] = P.basis[k];
            v[i].add_term(m, f[k]);
        }
        return v;
    }
    /// Coordinates in the quotient basis of M_d.
    Vec<K> coords(const Column<K>& v, int d) const {
        const auto& P = piece(d);
        auto red = P.rel.reduce(to_free(v, d));
        Vec<K> c(P.quot.size());
        for (std::size_t k = 0; k < P.quot.size(); ++k) c[k] = red[P.quot[k]];
        return c;
    }
    Column<K> from_coords(const Vec<K>& c, int d) const {
        const auto& P = piece(d);
        Vec<K> f(P.basis.size(), ring().scalar(0));
        for (std::size_t k = 0; k < P.quot.size(); ++k) f[P.quot[k]] = c[k];
        return from_free(f, d);
    }
    Column<K> canonical(const Column<K>& v, int d) const { return from_coords(coords(v, d), d); }
    bool is_zero_element(const Column<K>& v, int d) const {
        return Subspace<K>::is_zero_vec(coords(v, d));
    }

    /// Relation generators (relation column, monomial) spanning relations in F_d,
    /// with a tracked echelon form for expressing elements of the span.
    struct RelationTracker {
        std::vector<std::pair<std::size_t, Mono>> gens;
        Subspace<K> span;
    };
    const RelationTracker& relation_tracker(int d) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = trackers_.find(d);
        if (it != trackers_.end()) return *it->second;
        auto t = std::make_shared<RelationTracker>();
        auto basis = free_basis(d);
        std::map<std::pair<std::size_t, Mono>, std::size_t> index;
        for (std::size_t k = 0; k < basis.size(); ++k) index[basis[k]] = k;
        t->span = Subspace<K>(basis.size(), true);
        for (std::size_t c = 0; c < A_.cols(); ++c)
            for (const auto& m : ring().basis_R(d - A_.col_degrees()[c])) {
                t->gens.emplace_back(c, m);
                t->span.add(relation_vector(c, m, index, basis.size()));
            }
        trackers_[d] = t;
        return *t;
    }

    std::string describe() const {
        std::string s = "cok " + A_.to_string() + " gens(";
        for (std::size_t i = 0; i < ngens(); ++i) s += (i ? "," : "") + std::to_string(gen_degrees()[i]);
        return s + ")";
    }

private:
    std::vector<std::pair<std::size_t, Mono>> free_basis(int d) const {
        std::vector<std::pair<std::size_t, Mono>> b;
        for (std::size_t i = 0; i < ngens(); ++i)
            for (const auto& m : ring().basis_R(d - gen_degrees()[i])) b.emplace_back(i, m);
        return b;
    }

    Vec<K> relation_vector(std::size_t c, const Mono& m, const std::map<std::pair<std::size_t, Mono>, std::size_t>& index,
                           std::size_t n) const {
        Vec<K> v(n, ring().scalar(0));
        for (std::size_t i = 0; i < ngens(); ++i) {
            const auto& a = A_(i, c);
            if (a.is_zero()) continue;
            auto prod = ring().normal_form(a.shifted(m.first, m.second));
            for (const auto& [mm, cc] : prod.terms()) v[index.at({i, mm})] += cc;
        }
        return v;
    }

    Piece<K> build_piece(int d) const {
        Piece<K> P;
        P.degree = d;
        P.basis = free_basis(d);
        for (std::size_t k = 0; k < P.basis.size(); ++k) P.index[P.basis[k]] = k;
        P.rel = Subspace<K>(P.basis.size());
        for (std::size_t c = 0; c < A_.cols(); ++c)
            for (const auto& m : ring().basis_R(d - A_.col_degrees()[c]))
                P.rel.add(relation_vector(c, m, P.index, P.basis.size()));
        std::vector<bool> piv(P.basis.size(), false);
        for (auto p : P.rel.pivots()) piv[p] = true;
        for (std::size_t k = 0; k < P.basis.size(); ++k)
            if (!piv[k]) P.quot.push_back(k);
        return P;
    }

    CurvePtr<K> C_;
    GradedMatrix<K> A_;
    std::optional<MatrixFactorization<K>> mf_;
    mutable std::mutex mu_;
    mutable std::map<int, std::shared_ptr<Piece<K>>> pieces_;
    mutable std::map<int, std::shared_ptr<RelationTracker>> trackers_;
};

template <class K>
using ModPtr = std::shared_ptr<const GradedModule<K>>;

/// Degree-d homomorphism src -> tgt; column j is the image of generator j,
/// stored in canonical form.
template <class K>
struct GradedHom {
    ModPtr<K> src;
    ModPtr<K> tgt;
    int degree = 0;
    GradedMatrix<K> H;

    std::string to_string() const { return H.to_string(); }
};

template <class K>
void check_same_curve(const GradedModule<K>& M, const GradedModule<K>& N) {
    if (M.curve_ptr() != N.curve_ptr()) throw std::invalid_argument("modules over different rings");
}

/// Canonical form of a matrix whose column j is an element of tgt in degree src.a_j + d.
template <class K>
GradedHom<K> make_hom(const ModPtr<K>& src, const ModPtr<K>& tgt, int d, const GradedMatrix<K>& H) {
    check_same_curve(*src, *tgt);
    std::vector<int> cols;
    for (int a : src->gen_degrees()) cols.push_back(a + d);
    GradedMatrix<K> out(tgt->gen_degrees(), cols);
    for (std::size_t j = 0; j < src->ngens(); ++j)
        out.set_column(j, tgt->canonical(H.column(j), cols[j]));
    return {src, tgt, d, out};
}

/// Image of an element v of src in degree e.
template <class K>
Column<K> hom_apply(const GradedHom<K>& h, const Column<K>& v, int e) {
    const auto& R = h.src->ring();
    Column<K> out(h.tgt->ngens());
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[j].is_zero()) continue;
        for (std::size_t i = 0; i < out.size(); ++i)
            if (!h.H(i, j).is_zero()) out[i] += v[j] * h.H(i, j);
    }
    for (auto& a : out) a = R.normal_form(a);
    return h.tgt->canonical(out, e + h.degree);
}

/// a o b.
template <class K>
GradedHom<K> compose(const GradedHom<K>& a, const GradedHom<K>& b) {
    if (b.tgt.get() != a.src.get()) throw std::invalid_argument("composition of incompatible maps");
    std::vector<int> cols;
    for (int g : b.src->gen_degrees()) cols.push_back(g + a.degree + b.degree);
    GradedMatrix<K> H(a.tgt->gen_degrees(), cols);
    for (std::size_t j = 0; j < b.src->ngens(); ++j)
        H.set_column(j, hom_apply(a, b.H.column(j), b.src->gen_degrees()[j] + b.degree));
    return {b.src, a.tgt, a.degree + b.degree, H};
}

template <class K>
GradedHom<K> hom_add(const GradedHom<K>& a, const GradedHom<K>& b) {
    if (a.degree != b.degree || a.src.get() != b.src.get() || a.tgt.get() != b.tgt.get())
        throw std::invalid_argument("sum of incompatible maps");
    return make_hom(a.src, a.tgt, a.degree, a.H + b.H);
}
template <class K>
GradedHom<K> hom_scale(const GradedHom<K>& a, const K& c) {
    return make_hom(a.src, a.tgt, a.degree, a.H.scaled(c));
}
template <class K>
GradedHom<K> hom_sub(const GradedHom<K>& a, const GradedHom<K>& b) {
    return hom_add(a, hom_scale(b, a.src->ring().scalar(-1)));
}
template <class K>
GradedHom<K> zero_hom(const ModPtr<K>& src, const ModPtr<K>& tgt, int d) {
    std::vector<int> cols;
    for (int a : src->gen_degrees()) cols.push_back(a + d);
    return {src, tgt, d, GradedMatrix<K>(tgt->gen_degrees(), cols)};
}
template <class K>
GradedHom<K> identity_hom(const ModPtr<K>& M) {
    return make_hom(M, M, 0, GradedMatrix<K>::identity(M->gen_degrees(), M->ring().one()));
}
/// Multiplication by a homogeneous r in R.
template <class K>
GradedHom<K> mult_hom(const ModPtr<K>& M, const WPoly<K>& r) {
    auto d = M->ring().degree(r);
    if (!d) throw std::invalid_argument("multiplier must be homogeneous and nonzero");
    return make_hom(M, M, *d, GradedMatrix<K>::scalar(M->gen_degrees(), *d, r));
}

template <class K>
bool hom_is_zero(const GradedHom<K>& h) {
    return h.H.is_zero();
}

/// Coordinates of h in the concatenated quotient bases of tgt_{a_j + d}.
template <class K>
Vec<K> hom_coords(const GradedHom<K>& h) {
    Vec<K> out;
    for (std::size_t j = 0; j < h.src->ngens(); ++j) {
        auto c = h.tgt->coords(h.H.column(j), h.src->gen_degrees()[j] + h.degree);
        out.insert(out.end(), c.begin(), c.end());
    }
    return out;
}

template <class K>
GradedHom<K> hom_from_coords(const ModPtr<K>& src, const ModPtr<K>& tgt, int d, const Vec<K>& c) {
    std::vector<int> cols;
    for (int a : src->gen_degrees()) cols.push_back(a + d);
    GradedMatrix<K> H(tgt->gen_degrees(), cols);
    std::size_t off = 0;
    for (std::size_t j = 0; j < src->ngens(); ++j) {
        std::size_t n = tgt->dim(cols[j]);
        Vec<K> part(c.begin() + static_cast<std::ptrdiff_t>(off), c.begin() + static_cast<std::ptrdiff_t>(off + n));
        H.set_column(j, tgt->from_coords(part, cols[j]));
        off += n;
    }
    return {src, tgt, d, H};
}

/// Total length of hom_coords for maps of degree d.
template <class K>
std::size_t hom_ambient_dim(const GradedModule<K>& M, const GradedModule<K>& N, int d) {
    std::size_t n = 0;
    for (int a : M.gen_degrees()) n += N.dim(a + d);
    return n;
}

/// Basis of Hom(M, N)_d.
template <class K>
std::vector<GradedHom<K>> hom_graded(const ModPtr<K>& M, const ModPtr<K>& N, int d) {
    check_same_curve(*M, *N);
    const auto& R = M->ring();
    const auto& A = M->presentation();
    // unknowns: quotient basis of N_{a_j + d} for each generator j
    std::vector<std::size_t> col_off{0};
    for (std::size_t j = 0; j < M->ngens(); ++j) col_off.push_back(col_off.back() + N->dim(M->gen_degrees()[j] + d));
    std::vector<std::size_t> row_off{0};
    for (std::size_t c = 0; c < A.cols(); ++c) row_off.push_back(row_off.back() + N->dim(A.col_degrees()[c] + d));
    Matrix<K> sys(row_off.back(), col_off.back());
    for (std::size_t j = 0; j < M->ngens(); ++j) {
        int e = M->gen_degrees()[j] + d;
        const auto& P = N->piece(e);
        for (std::size_t u = 0; u < P.quot.size(); ++u) {
            const auto& [gi, mono] = P.basis[P.quot[u]];
            for (std::size_t c = 0; c < A.cols(); ++c) {
                const auto& a = A(j, c);
                if (a.is_zero()) continue;
                Column<K> v(N->ngens());
                v[gi] = R.normal_form(a.shifted(mono.first, mono.second));
                auto img = N->coords(v, A.col_degrees()[c] + d);
                for (std::size_t r = 0; r < img.size(); ++r) sys(row_off[c] + r, col_off[j] + u) = img[r];
            }
        }
    }
    std::vector<GradedHom<K>> out;
    if (col_off.back() == 0) return out;
    for (const auto& v : nullspace(sys)) out.push_back(hom_from_coords(M, N, d, v));
    return out;
}

/// K with H A_src = A_tgt K over R (the lift of h to relations).
template <class K>
GradedMatrix<K> hom_certificate(const GradedHom<K>& h) {
    const auto& R = h.src->ring();
    const auto& As = h.src->presentation();
    const auto& At = h.tgt->presentation();
    std::vector<int> cols;
    for (int b : As.col_degrees()) cols.push_back(b + h.degree);
    GradedMatrix<K> Kc(At.col_degrees(), cols);
    auto HA = (h.H * As).reduced(R);
    for (std::size_t c = 0; c < As.cols(); ++c) {
        int e = cols[c];
        const auto& T = h.tgt->relation_tracker(e);
        auto comb = T.span.express(h.tgt->to_free(HA.column(c), e));
        if (!comb) throw std::logic_error("map does not respect relations");
        for (std::size_t k = 0; k < comb->size(); ++k) {
            if ((*comb)[k].is_zero()) continue;
            const auto& [rc, mono] = T.gens[k];
            Kc(rc, c).add_term(mono, (*comb)[k]);
        }
    }
    return Kc;
}

template <class K>
ModPtr<K> direct_sum(const ModPtr<K>& M, const ModPtr<K>& N) {
    check_same_curve(*M, *N);
    auto A = GradedMatrix<K>::diag(M->presentation(), N->presentation());
    std::optional<MatrixFactorization<K>> mf;
    if (M->mf() && N->mf())
        mf = MatrixFactorization<K>{GradedMatrix<K>::diag(M->mf()->phi, N->mf()->phi),
                                    GradedMatrix<K>::diag(M->mf()->psi, N->mf()->psi)};
    return std::make_shared<const GradedModule<K>>(M->curve_ptr(), A, mf);
}

/// Per-branch rank of M over the branch's fraction field.
template <class K>
std::vector<int> rank_vector(const GradedModule<K>& M) {
    std::vector<int> out;
    const auto& A = M.presentation();
    for (const auto& br : M.curve().branches) {
        Matrix<RatFun<K>> E(A.rows(), A.cols());
        for (std::size_t i = 0; i < A.rows(); ++i)
            for (std::size_t j = 0; j < A.cols(); ++j) E(i, j) = RatFun<K>(evaluate_on_branch(A(i, j), br));
        out.push_back(static_cast<int>(A.rows()) - static_cast<int>(rank(E)));
    }
    return out;
}

/// Branch multiplicity: smallest positive element of the value semigroup.
template <class K>
int branch_multiplicity(const Branch<K>& br) {
    return br.semigroup.generators.front();
}

template <class K>
Rational multiplicity(const GradedModule<K>& M) {
    auto r = rank_vector(M);
    long e = 0;
    for (std::size_t i = 0; i < r.size(); ++i) e += static_cast<long>(r[i]) * branch_multiplicity(M.curve().branches[i]);
    return Rational(e);
}

}  // namespace arcurve
