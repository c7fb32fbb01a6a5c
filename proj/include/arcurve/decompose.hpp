#pragma once

#include "module.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace arcurve {

/// The finite-dimensional algebra End(M)_0 with structure constants.
template <class K>
class EndAlgebra {
public:
    explicit EndAlgebra(ModPtr<K> M) : M_(std::move(M)) {
        basis_ = hom_graded(M_, M_, 0);
        n_ = basis_.size();
        span_ = Subspace<K>(hom_ambient_dim(*M_, *M_, 0), true);
        for (const auto& h : basis_) span_.add(hom_coords(h));
        unit_ = coords_of(identity_hom(M_));
        left_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            left_[i] = Matrix<K>(n_, n_);
            for (std::size_t j = 0; j < n_; ++j) {
                auto c = coords_of(compose(basis_[i], basis_[j]));
                for (std::size_t r = 0; r < n_; ++r) left_[i](r, j) = c[r];
            }
        }
    }

    std::size_t dim() const { return n_; }
    const ModPtr<K>& module() const { return M_; }
    const std::vector<GradedHom<K>>& basis() const { return basis_; }
    const Vec<K>& unit() const { return unit_; }
    K zero() const { return M_->ring().scalar(0); }

    Vec<K> coords_of(const GradedHom<K>& h) const {
        auto c = span_.express(hom_coords(h));
        if (!c) throw std::logic_error("map is not a degree-0 endomorphism");
        c->resize(n_, zero());
        return *c;
    }
    GradedHom<K> to_hom(const Vec<K>& a) const {
        auto h = zero_hom(M_, M_, 0);
        for (std::size_t i = 0; i < n_; ++i)
            if (!a[i].is_zero()) h = hom_add(h, hom_scale(basis_[i], a[i]));
        return h;
    }

    Matrix<K> left_matrix(const Vec<K>& a) const {
        Matrix<K> L(n_, n_);
        for (std::size_t i = 0; i < n_; ++i) {
            if (a[i].is_zero()) continue;
            for (std::size_t r = 0; r < n_; ++r)
                for (std::size_t c = 0; c < n_; ++c)
                    if (!left_[i](r, c).is_zero()) L(r, c) += a[i] * left_[i](r, c);
        }
        return L;
    }
    Vec<K> mul(const Vec<K>& a, const Vec<K>& b) const { return left_matrix(a) * b; }
    Vec<K> add(Vec<K> a, const Vec<K>& b, const K& s) const {
        for (std::size_t i = 0; i < n_; ++i) a[i] += s * b[i];
        return a;
    }

    /// Jacobson radical as the kernel of the trace form (char 0 or char > dim).
    std::vector<Vec<K>> radical() const {
        auto ch = characteristic_of(M_->ring().one());
        if (ch != 0 && ch <= static_cast<long>(n_)) throw std::invalid_argument("field too small");
        Matrix<K> T(n_, n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) {
                Vec<K> e(n_, zero());
                e[j] = M_->ring().one();
                auto prod = left_[i] * e;  // b_i b_j
                T(i, j) = trace(left_matrix(prod));
            }
        return nullspace(T);
    }

    bool is_unit(const Vec<K>& a) const { return rank(left_matrix(a)) == n_; }

private:
    K trace(const Matrix<K>& L) const {
        K t = zero();
        for (std::size_t i = 0; i < n_; ++i) t += L(i, i);
        return t;
    }

    ModPtr<K> M_;
    std::vector<GradedHom<K>> basis_;
    std::size_t n_ = 0;
    Subspace<K> span_;
    Vec<K> unit_;
    std::vector<Matrix<K>> left_;
};

template <class K>
struct Decomposition {
    std::vector<ModPtr<K>> parts;
    std::vector<int> free_degrees;
    std::size_t free_rank() const { return free_degrees.size(); }
};

namespace detail {

template <class K>
K random_scalar(std::mt19937_64& rng, const K& one, int range) {
    std::uniform_int_distribution<int> d(-range, range);
    return one.scalar(d(rng));
}

/// Minimal polynomial of a in A/J, with J given by an echelon subspace.
template <class K>
UPoly<K> min_poly_mod(const EndAlgebra<K>& A, const Subspace<K>& J, const Vec<K>& a) {
    Subspace<K> pw(A.dim(), true);
    Vec<K> cur = A.unit();
    for (std::size_t k = 0; k <= A.dim(); ++k) {
        auto red = J.reduce(cur);
        auto comb = pw.express(red);
        if (comb) {
            std::vector<K> c(k + 1, A.zero());
            for (std::size_t i = 0; i < comb->size(); ++i) c[i] = -(*comb)[i];
            c[k] = A.module()->ring().one();
            return UPoly<K>(c);
        }
        pw.add(red);
        cur = A.mul(a, cur);
    }
    throw std::logic_error("minimal polynomial degree exceeds algebra dimension");
}

template <class K>
Vec<K> poly_at(const EndAlgebra<K>& A, const UPoly<K>& f, const Vec<K>& a) {
    // Horner
    Vec<K> r(A.dim(), A.zero());
    for (int i = f.degree(); i >= 0; --i) {
        r = A.mul(a, r);
        r = A.add(r, A.unit(), f.coeff(i));
    }
    return r;
}

template <class K>
bool is_idempotent(const EndAlgebra<K>& A, const Vec<K>& e) {
    return A.mul(e, e) == e;
}

template <class K>
Vec<K> lift_idempotent(const EndAlgebra<K>& A, Vec<K> e) {
    const K& one = A.module()->ring().one();
    for (int it = 0; it < 64; ++it) {
        auto e2 = A.mul(e, e);
        if (e2 == e) return e;
        auto e3 = A.mul(e2, e);
        Vec<K> next(A.dim(), A.zero());
        next = A.add(next, e2, one.scalar(3));
        next = A.add(next, e3, one.scalar(-2));
        e = std::move(next);
    }
    throw std::logic_error("idempotent lifting did not converge");
}

/// A nontrivial idempotent of A, or nothing when A is local.
template <class K>
std::optional<Vec<K>> find_idempotent(const EndAlgebra<K>& A, std::uint64_t seed) {
    std::size_t n = A.dim();
    if (n <= 1) return std::nullopt;
    auto rad = A.radical();
    Subspace<K> J(n);
    for (const auto& v : rad) J.add(v);
    std::size_t s = n - J.rank();
    if (s <= 1) return std::nullopt;
    const K& one = A.module()->ring().one();

    std::mt19937_64 rng(seed);
    std::vector<Vec<K>> candidates;
    for (std::size_t i = 0; i < n; ++i) {
        Vec<K> e(n, A.zero());
        e[i] = one;
        candidates.push_back(e);
    }
    for (int t = 0; t < 24; ++t) {
        Vec<K> a(n, A.zero());
        int range = t < 12 ? 1 : 7;
        for (auto& c : a) c = random_scalar(rng, one, range);
        candidates.push_back(a);
    }
    bool generated_field = false;
    for (const auto& a : candidates) {
        auto mu = min_poly_mod(A, J, a);
        if (mu.degree() <= 1) continue;
        auto roots = field_roots(mu);
        if (roots.empty()) {
            // quadratic or cubic without roots generating all of A/J: A/J is a field
            if (mu.degree() <= 3 && static_cast<std::size_t>(mu.degree()) == s) generated_field = true;
            continue;
        }
        const K& lam = roots.front();
        UPoly<K> lin(std::vector<K>{-lam, one});
        auto [f2, rem] = mu.divmod(lin);
        K at = f2.eval(lam);
        if (at.is_zero()) throw std::logic_error("minimal polynomial modulo the radical is not squarefree");
        auto e = poly_at(A, f2.scaled(at.inverse()), a);
        return lift_idempotent(A, e);
    }
    if (generated_field) return std::nullopt;
    throw std::runtime_error("could not split End_0 modulo its radical with the available root finding");
}

/// Minimal generators among the given elements of M (in increasing degree).
template <class K>
std::vector<std::pair<Column<K>, int>> minimal_generators(const GradedModule<K>& M,
                                                          std::vector<std::pair<Column<K>, int>> cand) {
    std::stable_sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    const auto& R = M.ring();
    std::vector<std::pair<Column<K>, int>> kept;
    for (const auto& [v, d] : cand) {
        if (M.is_zero_element(v, d)) continue;
        Subspace<K> span(M.dim(d));
        for (const auto& [w, e] : kept)
            for (const auto& m : R.basis_R(d - e)) {
                Column<K> mw(w.size());
                for (std::size_t i = 0; i < w.size(); ++i) mw[i] = R.normal_form(w[i].shifted(m.first, m.second));
                span.add(M.coords(mw, d));
            }
        if (!span.contains(M.coords(v, d))) kept.emplace_back(v, d);
    }
    return kept;
}

/// Presentation over S (over R when over == Over::R) of the submodule of M
/// generated by gens; relations are found degree by degree up to the largest
/// generator degree plus deg g.
template <class K>
GradedMatrix<K> submodule_presentation(const GradedModule<K>& M, const std::vector<std::pair<Column<K>, int>>& gens,
                                       Over over) {
    const auto& R = M.ring();
    auto basis = [&](int d) { return over == Over::R ? R.basis_R(d) : R.basis_S(d); };
    auto nf = [&](const WPoly<K>& a) { return over == Over::R ? R.normal_form(a) : a; };
    std::vector<int> gdeg;
    for (const auto& g : gens) gdeg.push_back(g.second);
    if (gens.empty()) return GradedMatrix<K>({}, {});
    int lo = *std::min_element(gdeg.begin(), gdeg.end());
    int hi = *std::max_element(gdeg.begin(), gdeg.end()) + R.deg_g();
    std::vector<Column<K>> rels;
    std::vector<int> rdeg;
    for (int d = lo; d <= hi; ++d) {
        std::vector<std::pair<std::size_t, Mono>> fb;
        std::map<std::pair<std::size_t, Mono>, std::size_t> index;
        for (std::size_t i = 0; i < gens.size(); ++i)
            for (const auto& m : basis(d - gdeg[i])) {
                index[{i, m}] = fb.size();
                fb.emplace_back(i, m);
            }
        if (fb.empty()) continue;
        auto to_vec = [&](const Column<K>& v) {
            Vec<K> out(fb.size(), R.scalar(0));
            for (std::size_t i = 0; i < v.size(); ++i) {
                auto vi = nf(v[i]);
                for (const auto& [m, c] : vi.terms()) out[index.at({i, m})] += c;
            }
            return out;
        };
        std::size_t md = M.dim(d);
        Matrix<K> img(md, fb.size());
        for (std::size_t u = 0; u < fb.size(); ++u) {
            const auto& [i, m] = fb[u];
            Column<K> v(gens[i].first.size());
            for (std::size_t r = 0; r < v.size(); ++r) v[r] = R.normal_form(gens[i].first[r].shifted(m.first, m.second));
            auto c = M.coords(v, d);
            for (std::size_t r = 0; r < md; ++r) img(r, u) = c[r];
        }
        Subspace<K> known(fb.size());
        for (std::size_t c = 0; c < rels.size(); ++c)
            for (const auto& m : basis(d - rdeg[c])) {
                Column<K> v(rels[c].size());
                for (std::size_t r = 0; r < v.size(); ++r) v[r] = rels[c][r].shifted(m.first, m.second);
                known.add(to_vec(v));
            }
        std::vector<Vec<K>> ker;
        if (md) {
            ker = nullspace(img);
        } else {
            for (std::size_t u = 0; u < fb.size(); ++u) {
                Vec<K> e(fb.size(), R.scalar(0));
                e[u] = R.one();
                ker.push_back(e);
            }
        }
        for (const auto& k : ker)
            if (known.add(k)) {
                Column<K> v(gens.size());
                for (std::size_t u = 0; u < fb.size(); ++u)
                    if (!k[u].is_zero()) v[fb[u].first].add_term(fb[u].second, k[u]);
                rels.push_back(v);
                rdeg.push_back(d);
            }
    }
    GradedMatrix<K> A(gdeg, rdeg);
    for (std::size_t c = 0; c < rels.size(); ++c) A.set_column(c, rels[c]);
    return A;
}

/// Module e(M) for an idempotent endomorphism e, with a factorization when one exists.
template <class K>
ModPtr<K> image_module(const ModPtr<K>& M, const GradedHom<K>& e) {
    std::vector<std::pair<Column<K>, int>> cand;
    for (std::size_t j = 0; j < M->ngens(); ++j) cand.emplace_back(e.H.column(j), M->gen_degrees()[j]);
    auto gens = minimal_generators(*M, cand);
    auto phi = submodule_presentation(*M, gens, Over::S);
    const auto& R = M->ring();
    if (phi.rows() == phi.cols() && phi.rows() > 0) {
        std::vector<int> psi_cols;
        for (int a : phi.row_degrees()) psi_cols.push_back(a + R.deg_g());
        auto gI = GradedMatrix<K>::scalar(phi.row_degrees(), R.deg_g(), R.g());
        auto psi = solve_right(phi, gI, R, Over::S);
        if (psi) {
            MatrixFactorization<K> mf{phi, *psi};
            if (mf_check(mf, R).ok) return GradedModule<K>::from_mf(M->curve_ptr(), mf);
        }
    }
    return GradedModule<K>::from_presentation(M->curve_ptr(), phi);
}

/// Splits off free summands: unit entries of psi for factorizations, zero
/// rows of the presentation otherwise.
template <class K>
ModPtr<K> strip_free(const ModPtr<K>& M, std::vector<int>& free_degrees) {
    if (M->mf()) {
        auto [rest, fd] = split_free_mf(prune_mf(*M->mf()));
        free_degrees.insert(free_degrees.end(), fd.begin(), fd.end());
        if (fd.empty() && rest.phi.rows() == M->ngens()) return M;
        if (rest.phi.rows() == 0) return GradedModule<K>::free(M->curve_ptr(), {});
        return GradedModule<K>::from_mf(M->curve_ptr(), rest);
    }
    const auto& A = M->presentation();
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < A.rows(); ++i) {
        bool zero = true;
        for (std::size_t j = 0; j < A.cols(); ++j) zero = zero && A(i, j).is_zero();
        if (zero) free_degrees.push_back(A.row_degrees()[i]);
        else keep.push_back(i);
    }
    if (keep.size() == A.rows()) return M;
    std::vector<std::size_t> cols(A.cols());
    for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = j;
    return GradedModule<K>::from_presentation(M->curve_ptr(), A.sub(keep, cols));
}

template <class K>
void decompose_into(const ModPtr<K>& M0, std::uint64_t seed, Decomposition<K>& out) {
    auto M = strip_free(M0, out.free_degrees);
    if (M->ngens() == 0) return;
    EndAlgebra<K> A(M);
    auto e = find_idempotent(A, seed);
    if (!e) {
        out.parts.push_back(M);
        return;
    }
    auto one_minus = A.add(A.unit(), *e, M->ring().scalar(-1));
    auto N1 = image_module(M, A.to_hom(*e));
    auto N2 = image_module(M, A.to_hom(one_minus));
    int lo = *std::min_element(M->gen_degrees().begin(), M->gen_degrees().end());
    int hi = *std::max_element(M->gen_degrees().begin(), M->gen_degrees().end()) + 2 * M->ring().deg_g();
    for (int d = lo; d <= hi; ++d)
        if (N1->dim(d) + N2->dim(d) != M->dim(d))
            throw std::logic_error("summand presentations do not add up to the module");
    decompose_into(N1, seed * 6364136223846793005ULL + 1, out);
    decompose_into(N2, seed * 6364136223846793005ULL + 3, out);
}

}  // namespace detail

/// Splits M into graded-indecomposable summands and a free part.
template <class K>
Decomposition<K> decompose(const ModPtr<K>& M, std::uint64_t seed = 1) {
    Decomposition<K> out;
    detail::decompose_into(M, seed, out);
    std::sort(out.free_degrees.begin(), out.free_degrees.end());
    return out;
}

/// Map induced on k-spaces of minimal generators (constant parts of H).
template <class K>
Matrix<K> generator_map(const GradedHom<K>& h) {
    Matrix<K> m(h.H.rows(), h.H.cols());
    for (std::size_t i = 0; i < h.H.rows(); ++i)
        for (std::size_t j = 0; j < h.H.cols(); ++j) m(i, j) = h.H(i, j).coeff(0, 0);
    return m;
}

/// A degree-0 map u : M -> N bijective on minimal generators, if one exists
/// (searched over the basis and seeded random combinations).
template <class K>
std::optional<GradedHom<K>> surjection_on_generators(const ModPtr<K>& M, const ModPtr<K>& N, std::uint64_t seed) {
    if (M->ngens() != N->ngens()) return std::nullopt;
    auto basis = hom_graded(M, N, 0);
    if (basis.empty()) return M->ngens() == 0 ? std::optional<GradedHom<K>>(zero_hom(M, N, 0)) : std::nullopt;
    std::size_t r = M->ngens();
    auto good = [&](const GradedHom<K>& u) { return rank(generator_map(u)) == r; };
    for (const auto& u : basis)
        if (good(u)) return u;
    std::mt19937_64 rng(seed);
    const K& one = M->ring().one();
    for (int t = 0; t < 16; ++t) {
        auto u = zero_hom(M, N, 0);
        for (const auto& b : basis) u = hom_add(u, hom_scale(b, detail::random_scalar(rng, one, 3 + 4 * t)));
        if (good(u)) return u;
    }
    return std::nullopt;
}

/// s with M isomorphic to N(s), where N(s)_j = N_{s+j}; minimal presentations assumed.
template <class K>
std::optional<int> iso_up_to_shift(const ModPtr<K>& M, const ModPtr<K>& N, std::uint64_t seed = 1) {
    check_same_curve(*M, *N);
    if (M->ngens() != N->ngens()) return std::nullopt;
    if (M->ngens() == 0) return 0;
    auto a = M->gen_degrees(), b = N->gen_degrees();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    int s = b[0] - a[0];
    for (std::size_t i = 0; i < a.size(); ++i)
        if (b[i] - a[i] != s) return std::nullopt;
    if (M->rel_degrees().size() != N->rel_degrees().size()) return std::nullopt;
    auto Ns = N->shifted(s);
    // u and w surjective on generators make wu and uw surjective, hence invertible
    if (!surjection_on_generators(M, Ns, seed)) return std::nullopt;
    if (!surjection_on_generators(Ns, M, seed + 1)) return std::nullopt;
    return s;
}

}  // namespace arcurve
