#pragma once

#include "trace.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace arcurve {

/// The element gamma = z * (lift of gamma') attached to one minimal prime.
template <class K>
struct GammaDatum {
    std::size_t branch_index = 0;
    Branch<K> branch;
    GammaPrime<K> gamma_prime;
    QElement<K> lift;
    WPoly<K> z;
    QElement<K> gamma;
    int degree() const { return gamma.degree(); }
};

/// One pass/fail line of a verification, with witnesses.
struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Report {
    std::string name;
    std::vector<Check> checks;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return !checks.empty();
    }
    void add(std::string n, bool ok, std::string d = {}) { checks.push_back({std::move(n), ok, std::move(d)}); }
};

namespace detail {

/// a / h in S for h monic in y (leading y-power with constant coefficient); nullopt if inexact.
template <class K>
std::optional<WPoly<K>> divide_monic_y(WPoly<K> a, const WPoly<K>& h) {
    int e = h.max_y();
    K lead = h.coeff(0, e);
    for (const auto& [m, c] : h.terms())
        if (m.second == e && m.first != 0) return std::nullopt;
    if (lead.is_zero()) return std::nullopt;
    WPoly<K> quo;
    while (!a.is_zero() && a.max_y() >= e) {
        Mono top{0, -1};
        K c;
        for (const auto& [m, cc] : a.terms())
            if (m.second > top.second || (m.second == top.second && m.first > top.first)) {
                top = m;
                c = cc;
            }
        if (top.second < e) break;
        auto t = WPoly<K>::monomial(c / lead, top.first, top.second - e);
        quo += t;
        a -= t * h;
    }
    if (!a.is_zero()) return std::nullopt;
    return quo;
}

/// Whether Ann_R(z) = hR, compared degreewise up to twice deg g.
template <class K>
bool annihilator_is(const HypersurfaceRing<K>& R, const WPoly<K>& z, const WPoly<K>& h) {
    if (!R.normal_form(z * h).is_zero()) return false;
    int dz = *R.degree(z), dh = *R.degree(h);
    for (int d = 0; d <= 2 * R.deg_g(); ++d) {
        auto src = R.basis_R(d), tgt = R.basis_R(d + dz);
        if (src.empty()) continue;
        Matrix<K> mz(tgt.size(), src.size());
        for (std::size_t c = 0; c < src.size(); ++c) {
            auto prod = R.normal_form(z.shifted(src[c].first, src[c].second));
            for (std::size_t r = 0; r < tgt.size(); ++r) mz(r, c) = prod.coeff(tgt[r].first, tgt[r].second);
        }
        std::size_t ann = src.size() - (tgt.empty() ? 0 : rank(mz));
        Subspace<K> hR(src.size());
        for (const auto& m : R.basis_R(d - dh)) {
            auto prod = R.normal_form(h.shifted(m.first, m.second));
            Vec<K> v(src.size(), R.scalar(0));
            for (std::size_t k = 0; k < src.size(); ++k) v[k] = prod.coeff(src[k].first, src[k].second);
            hR.add(v);
        }
        if (hR.rank() != ann) return false;
    }
    return true;
}

template <class K>
GradedMatrix<K> shifted_degrees(GradedMatrix<K> A, int rs, int cs) {
    auto r = A.row_degrees(), c = A.col_degrees();
    for (auto& d : r) d += rs;
    for (auto& d : c) d += cs;
    A.set_degrees(r, c);
    return A;
}

}  // namespace detail

/// gamma * A with entries brought back into R; column degrees move by deg gamma.
template <class K>
GradedMatrix<K> gamma_times(const GammaDatum<K>& gd, const GradedMatrix<K>& A) {
    auto out = detail::shifted_degrees(A, 0, gd.degree());
    const auto& C = gd.gamma.curve_ptr();
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) {
            if (A(i, j).is_zero()) continue;
            QElement<K> v(C, gd.gamma.num() * A(i, j), gd.gamma.den());
            auto r = q_membership(v);
            if (!r) throw std::domain_error("gamma times an entry does not lie in R");
            out(i, j) = *r;
        }
    return out;
}

/// gamma for the given minimal prime (default: the singular branch).
template <class K>
GammaDatum<K> gamma_for(const CurvePtr<K>& C, std::optional<std::size_t> branch = std::nullopt) {
    const auto& R = C->ring;
    GammaDatum<K> gd;
    gd.branch_index = branch ? *branch : C->singular_branch();
    if (gd.branch_index >= C->branches.size()) throw std::invalid_argument("branch index out of range");
    gd.branch = C->branches[gd.branch_index];
    gd.gamma_prime = gamma_prime(R, gd.branch);
    gd.lift = QElement<K>(C, gd.gamma_prime.value.num, gd.gamma_prime.value.den);
    auto cofactor = detail::divide_monic_y(R.g(), gd.branch.h);
    if (!cofactor) throw std::logic_error("branch equation does not divide g");
    int window = gd.branch.semigroup.conductor + R.deg_g();
    for (int d = 0; d <= window; ++d) {
        auto monos = R.basis_S(d);
        std::sort(monos.begin(), monos.end());
        for (const auto& m : monos) {
            auto z = R.normal_form(cofactor->shifted(m.first, m.second));
            if (z.is_zero()) continue;
            if (!detail::annihilator_is(R, z, gd.branch.h)) continue;
            QElement<K> gamma(C, z * gd.lift.num(), gd.lift.den());
            if (q_membership(gamma)) continue;
            gd.z = z;
            gd.gamma = gamma;
            return gd;
        }
    }
    throw std::runtime_error("no z found in window");
}

/// Invariant checks on a gamma datum: gamma not in R, gamma m in R, gamma p = 0.
template <class K>
Report check_gamma(const GammaDatum<K>& gd) {
    const auto& C = gd.gamma.curve_ptr();
    const auto& R = C->ring;
    Report rep{"gamma", {}};
    rep.add("gamma not in R", !q_membership(gd.gamma).has_value(), gd.gamma.to_string());
    for (const auto& [name, r] : {std::pair<std::string, WPoly<K>>{"x", R.x()}, {"y", R.y()}}) {
        QElement<K> v(C, gd.gamma.num() * r, gd.gamma.den());
        rep.add("gamma*" + name + " in R", q_membership(v).has_value(), v.to_string());
    }
    rep.add("z*h = 0 in R", R.normal_form(gd.z * gd.branch.h).is_zero(), gd.z.to_string());
    return rep;
}

template <class K>
void require_reduced_mf(const GradedModule<K>& M) {
    if (!M.mf()) throw std::invalid_argument("module is not given by a matrix factorization");
    if (M.ngens() == 0 || !mf_check(*M.mf(), M.ring()).reduced)
        throw std::invalid_argument("reduced matrix factorization required (free summands present)");
}

/// Module cok psi for M = cok phi.
template <class K>
ModPtr<K> syz_module(const ModPtr<K>& M) {
    if (!M->mf()) throw std::invalid_argument("module is not given by a matrix factorization");
    return GradedModule<K>::from_mf(M->curve_ptr(), syz_mf(*M->mf()));
}

/// A matrix alpha with psi alpha = gamma psi over R, graded as an endomorphism of cok phi.
template <class K>
GradedMatrix<K> gamma_alpha(const GradedModule<K>& M, const GammaDatum<K>& gd) {
    require_reduced_mf(M);
    const auto& psi = M.mf()->psi;
    auto alpha = solve_right(psi, gamma_times(gd, psi), M.ring(), Over::R);
    if (!alpha) throw std::runtime_error("no solution for alpha");
    auto a = M.gen_degrees();
    std::vector<int> cols = a;
    for (auto& d : cols) d += gd.degree();
    alpha->set_degrees(a, cols);
    return *alpha;
}

/// gamma_M, the endomorphism induced by alpha.
template <class K>
GradedHom<K> gamma_endo(const ModPtr<K>& M, const GammaDatum<K>& gd) {
    return make_hom(M, M, gd.degree(), gamma_alpha(*M, gd));
}

/// The AR sequence 0 -> M -> push(M) -> cok psi -> 0 as a block factorization.
template <class K>
struct ARSequence {
    ModPtr<K> left, middle, right;
    GradedHom<K> iota, pi;
    GradedMatrix<K> alpha, beta;
    MatrixFactorization<K> block;
};

/// beta with alpha phi = phi beta over S.
template <class K>
GradedMatrix<K> mf_partner(const GradedModule<K>& M, const GradedMatrix<K>& alpha, int d) {
    const auto& phi = M.mf()->phi;
    auto rhs = alpha * detail::shifted_degrees(phi, d, d);
    auto beta = solve_right(phi, rhs, M.ring(), Over::S);
    if (!beta) throw std::runtime_error("no solution for beta");
    return *beta;
}

/// push(M) with a given alpha; alpha must satisfy psi alpha = gamma psi over R.
template <class K>
ARSequence<K> push(const ModPtr<K>& M, const GammaDatum<K>& gd, const GradedMatrix<K>& alpha);

template <class K>
ARSequence<K> push(const ModPtr<K>& M, const GammaDatum<K>& gd) {
    return push(M, gd, gamma_alpha(*M, gd));
}

template <class K>
ARSequence<K> push(const ModPtr<K>& M, const GammaDatum<K>& gd, const GradedMatrix<K>& alpha) {
    require_reduced_mf(*M);
    const auto& R = M->ring();
    auto ranks = rank_vector(*M);
    if (R.scalar(ranks[gd.branch_index]).is_zero())
        throw std::invalid_argument("characteristic divides the rank at the chosen branch");
    int d = gd.degree(), G = R.deg_g();
    const auto& phi = M->mf()->phi;
    const auto& psi = M->mf()->psi;
    if (!((psi * alpha).reduced(R) == gamma_times(gd, psi).reduced(R)))
        throw std::invalid_argument("alpha does not lift gamma");
    auto beta = mf_partner(*M, alpha, d);
    auto psi_s = detail::shifted_degrees(psi, d - G, d - G);
    auto xi = GradedMatrix<K>::block(phi, -alpha, GradedMatrix<K>::zeros(psi_s.row_degrees(), phi.col_degrees()), psi_s);
    auto phi_s = detail::shifted_degrees(phi, d, d);
    auto eta = GradedMatrix<K>::block(psi, beta, GradedMatrix<K>::zeros(phi_s.row_degrees(), psi.col_degrees()), phi_s);
    MatrixFactorization<K> mf{xi, eta};
    auto chk = mf_check(mf, R);
    if (!chk.ok) throw std::logic_error("block pair is not a matrix factorization");
    ARSequence<K> seq;
    seq.left = M;
    seq.middle = GradedModule<K>::from_mf(M->curve_ptr(), mf);
    seq.right = GradedModule<K>::from_mf(M->curve_ptr(), {psi_s, phi_s});
    seq.alpha = alpha;
    seq.beta = beta;
    seq.block = mf;
    std::size_t n = M->ngens();
    GradedMatrix<K> I(seq.middle->gen_degrees(), M->gen_degrees());
    GradedMatrix<K> P(seq.right->gen_degrees(), seq.middle->gen_degrees());
    for (std::size_t i = 0; i < n; ++i) {
        I(i, i) = R.constant(1);
        P(i, n + i) = R.constant(1);
    }
    seq.iota = make_hom(M, seq.middle, 0, I);
    seq.pi = make_hom(seq.middle, seq.right, 0, P);
    return seq;
}

/// k-matrix of h on the degree-e pieces.
template <class K>
Matrix<K> piece_map(const GradedHom<K>& h, int e) {
    std::size_t m = h.src->dim(e), n = h.tgt->dim(e + h.degree);
    Matrix<K> out(n, m);
    for (std::size_t c = 0; c < m; ++c) {
        Vec<K> u(m, h.src->ring().scalar(0));
        u[c] = h.src->ring().one();
        auto img = h.tgt->coords(hom_apply(h, h.src->from_coords(u, e), e), e + h.degree);
        for (std::size_t r = 0; r < n; ++r) out(r, c) = img[r];
    }
    return out;
}

/// Degreewise exactness of the sequence on [lo, hi].
template <class K>
Check sequence_exact(const ARSequence<K>& s, int lo, int hi) {
    for (int e = lo; e <= hi; ++e) {
        std::size_t a = s.left->dim(e), b = s.middle->dim(e), c = s.right->dim(e);
        if (a + c != b) return {"exact", false, "dimension mismatch in degree " + std::to_string(e)};
        if (a && rank(piece_map(s.iota, e)) != a) return {"exact", false, "left map not injective in degree " + std::to_string(e)};
        if (c && rank(piece_map(s.pi, e)) != c) return {"exact", false, "right map not onto in degree " + std::to_string(e)};
    }
    if (!hom_is_zero(compose(s.pi, s.iota))) return {"exact", false, "composition is nonzero"};
    return {"exact", true, "degrees " + std::to_string(lo) + ".." + std::to_string(hi)};
}

/// Whether u : M -> M factors through the left map of the sequence.
template <class K>
bool factors_through_left(const ARSequence<K>& s, const GradedHom<K>& u) {
    Subspace<K> span(hom_ambient_dim(*s.left, *s.left, u.degree));
    for (const auto& v : hom_graded(s.middle, s.left, u.degree)) span.add(hom_coords(compose(v, s.iota)));
    return span.contains(hom_coords(u));
}

/// W with eta W = gamma eta, of the shape [[alpha, Z'], [0, -beta + psi Z]].
template <class K>
struct WData {
    GradedMatrix<K> W, Z, Zp, D;
};

template <class K>
WData<K> solve_W(const ARSequence<K>& s, const GammaDatum<K>& gd) {
    const auto& R = s.left->ring();
    const auto& eta = s.block.psi;
    std::size_t n = s.left->ngens();
    const auto& psi = s.left->mf()->psi;
    std::vector<std::size_t> top(n), bottom(n), all(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        top[i] = i;
        bottom[i] = n + i;
    }
    for (std::size_t i = 0; i < 2 * n; ++i) all[i] = i;
    auto rhs = gamma_times(gd, eta.sub(all, bottom));
    auto right = solve_right(eta, rhs, R, Over::R);
    if (!right) throw std::runtime_error("no solution for W");
    WData<K> w;
    std::vector<std::size_t> cols(n);
    for (std::size_t i = 0; i < n; ++i) cols[i] = i;
    w.Zp = right->sub(top, cols);
    w.D = right->sub(bottom, cols);
    // D + beta = psi Z
    GradedMatrix<K> target = w.D;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) target(i, j) = R.normal_form(w.D(i, j) + s.beta(i, j));
    int sh = target.row_degrees()[0] - psi.row_degrees()[0];
    auto Z = solve_right(detail::shifted_degrees(psi, sh, sh), target, R, Over::R);
    if (!Z) throw std::runtime_error("D + beta is not in the image of psi");
    w.Z = *Z;
    // assemble W with rows = eta columns, columns shifted by deg gamma
    auto rd = eta.col_degrees();
    auto cd = rd;
    for (auto& d : cd) d += gd.degree();
    GradedMatrix<K> W(rd, cd);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            W(i, j) = s.alpha(i, j);
            W(i, n + j) = w.Zp(i, j);
            W(n + i, n + j) = w.D(i, j);
        }
    w.W = W;
    return w;
}

/// The endomorphism of cok psi induced by h on cok phi (B with A phi = phi B).
template <class K>
GradedHom<K> syz_transport(const GradedHom<K>& h, const ModPtr<K>& syzM) {
    const auto& M = *h.src;
    if (!M.mf()) throw std::invalid_argument("module is not given by a matrix factorization");
    auto B = mf_partner(M, h.H, h.degree);
    return make_hom(syzM, syzM, h.degree, B);
}

/// Whether trace(f) + trace(g) lies in R.
template <class K>
bool traces_sum_into_R(const TraceValue<K>& f, const TraceValue<K>& g, const CurvePtr<K>& C) {
    std::vector<RatFun<K>> s;
    for (std::size_t b = 0; b < f.images.size(); ++b) s.push_back(f.images[b] + g.images[b]);
    bool zero = true;
    for (const auto& v : s) zero = zero && v.is_zero();
    if (zero) return true;
    auto q = lift_images(C, s, f.degree, C->ring.y_bound() + 8);
    return q && q_membership(*q).has_value();
}

/// [gamma_M] is a nonzero socle element of the stable endomorphism ring.
template <class K>
Report verify_main_theorem(const ModPtr<K>& M, const GammaDatum<K>& gd, std::uint64_t seed = 1) {
    require_reduced_mf(*M);
    Report rep{"main-theorem", {}};
    auto dec = decompose(M, seed);
    rep.add("indecomposable nonfree", dec.parts.size() == 1 && dec.free_rank() == 0,
            std::to_string(dec.parts.size()) + " summands");
    auto ranks = rank_vector(*M);
    int r = ranks[gd.branch_index];
    rep.add("rank is a unit", !M->ring().scalar(r).is_zero(), "rank " + std::to_string(r));
    auto h = gamma_endo(M, gd);
    auto tv = trace_Q(h);
    bool trace_ok = true;
    for (std::size_t b = 0; b < tv.images.size(); ++b)
        trace_ok = trace_ok && tv.images[b] == gd.gamma.images()[b] * RatFun<K>(M->ring().scalar(ranks[b]));
    rep.add("trace(gamma_M) = rank * gamma", trace_ok, tv.to_string());
    rep.add("trace(gamma_M) not in R", !trace_in_R(tv), tv.to_string());
    StableOracle<K> O(M);
    rep.add("gamma_M stably nonzero", !O.stably_zero_trace(h));
    std::size_t killed = 0, total = 0;
    std::string bad;
    for (const auto& g : O.nonunit_generators()) {
        ++total;
        if (O.stably_zero_trace(compose(g, h)))
            ++killed;
        else
            bad = "degree " + std::to_string(g.degree);
    }
    rep.add("nonunits kill gamma_M stably", killed == total,
            std::to_string(killed) + "/" + std::to_string(total) + (bad.empty() ? "" : " failing at " + bad));
    return rep;
}

/// rank(syz M) syz[gamma_M] + rank(M) [gamma_{syz M}] = 0, and the negative-trace statement.
template <class K>
Report verify_syz_gamma(const ModPtr<K>& M, const GammaDatum<K>& gd) {
    const auto& C = M->curve_ptr();
    if (!C->is_domain()) throw std::invalid_argument("ring not a domain");
    require_reduced_mf(*M);
    Report rep{"syz-gamma", {}};
    auto S = syz_module(M);
    auto f = gamma_endo(M, gd);
    auto t = syz_transport(f, S);
    auto gs = gamma_endo(S, gd);
    int rM = rank_vector(*M)[0], rS = rank_vector(*S)[0];
    const auto& R = M->ring();
    auto h1 = hom_add(hom_scale(t, R.scalar(rS)), hom_scale(gs, R.scalar(rM)));
    StableOracle<K> OS(S);
    rep.add("rank(syz M) syz[gamma_M] + rank(M) [gamma_syz M] stably zero", OS.stably_zero_trace(h1),
            "ranks " + std::to_string(rM) + ", " + std::to_string(rS));
    auto tf = trace_Q(f), tg = trace_Q(t);
    rep.add("trace f + trace syz(f) in R", traces_sum_into_R(tf, tg, C), tf.to_string() + " + " + tg.to_string());
    EndAlgebra<K> AM(M), AS(S);
    bool local_k = AM.dim() - AM.radical().size() == 1 && AS.dim() - AS.radical().size() == 1;
    rep.add("End/J is k on both sides", local_k);
    return rep;
}

/// Average multiplicity over the tau-orbit (period 1 or 2).
template <class K>
Rational e_avg(const ModPtr<K>& M, std::uint64_t seed = 1) {
    auto e = multiplicity(*M);
    if (!M->mf()) return e;
    auto S = syz_module(M);
    if (iso_up_to_shift(M, S, seed)) return e;
    return (e + multiplicity(*S)) / Rational(2);
}

/// dim Ext^1(N, X)_d with N = cok P for a factorization (P, Q) of g.
template <class K>
std::size_t ext1_dim(const ModPtr<K>& N, const ModPtr<K>& X, int d) {
    if (!N->mf()) throw std::invalid_argument("module is not given by a matrix factorization");
    const auto& P = N->mf()->phi;
    const auto& Qm = N->mf()->psi;
    const auto& R = X->ring();
    auto block = [&](const std::vector<int>& degs) {
        std::vector<std::size_t> off{0};
        for (int g : degs) off.push_back(off.back() + X->dim(g + d));
        return off;
    };
    // map (x_i) -> (sum_i A_ij x_i)_j between Hom(F_src, X)_d and Hom(F_tgt, X)_d
    auto dual = [&](const GradedMatrix<K>& A) {
        auto ro = block(A.row_degrees()), co = block(A.col_degrees());
        Matrix<K> out(co.back(), ro.back());
        for (std::size_t i = 0; i < A.rows(); ++i) {
            int e = A.row_degrees()[i] + d;
            std::size_t n = X->dim(e);
            for (std::size_t c = 0; c < n; ++c) {
                Vec<K> u(n, R.scalar(0));
                u[c] = R.one();
                auto v = X->from_coords(u, e);
                for (std::size_t j = 0; j < A.cols(); ++j) {
                    if (A(i, j).is_zero()) continue;
                    int t = A.col_degrees()[j] + d;
                    Column<K> w(v.size());
                    for (std::size_t k = 0; k < v.size(); ++k) w[k] = R.normal_form(v[k] * A(i, j));
                    auto img = X->coords(w, t);
                    for (std::size_t r = 0; r < img.size(); ++r) out(co[j] + r, ro[i] + c) += img[r];
                }
            }
        }
        return out;
    };
    auto Pd = dual(P), Qd = dual(Qm);
    std::size_t ker = Qd.cols() - (Qd.rows() ? rank(Qd) : 0);
    std::size_t im = Pd.rows() && Pd.cols() ? rank(Pd) : 0;
    return ker - im;
}

}  // namespace arcurve
