#include <arcurve/decompose.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace arcurve;
using Q = Rational;

namespace {

CurvePtr<Q> inst1() { return Curve<Q>::make(HypersurfaceRing<Q>(3, 4, Q(1), parse_wpoly("y", Q(1)), 1, 2)); }
CurvePtr<Q> inst2() { return Curve<Q>::make(HypersurfaceRing<Q>(3, 4, Q(1), parse_wpoly("1", Q(1)), 1, 2)); }

GradedMatrix<Q> mat(const HypersurfaceRing<Q>& R, std::vector<int> rows, std::vector<int> cols,
                    std::vector<std::vector<std::string>> e) {
    GradedMatrix<Q> m(rows, cols);
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = 0; j < e[i].size(); ++j) m(i, j) = R.parse(e[i][j]);
    return m;
}

// Matrix of the degree-d piece of A : sum R(-c_j) -> sum R(-r_i).
Matrix<Q> piece_matrix(const HypersurfaceRing<Q>& R, const GradedMatrix<Q>& A, int d) {
    std::vector<std::pair<std::size_t, Mono>> rb, cb;
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (auto m : R.basis_R(d - A.row_degrees()[i])) rb.emplace_back(i, m);
    for (std::size_t j = 0; j < A.cols(); ++j)
        for (auto m : R.basis_R(d - A.col_degrees()[j])) cb.emplace_back(j, m);
    Matrix<Q> M(rb.size(), cb.size());
    for (std::size_t c = 0; c < cb.size(); ++c)
        for (std::size_t r = 0; r < rb.size(); ++r) {
            auto prod = R.normal_form(A(rb[r].first, cb[c].first).shifted(cb[c].second.first, cb[c].second.second));
            M(r, c) = prod.coeff(rb[r].second.first, rb[r].second.second);
        }
    return M;
}

// Degree-e piece of the ideal generated by gens, as a subspace of R_e.
Subspace<Q> ideal_piece(const HypersurfaceRing<Q>& R, const std::vector<WPoly<Q>>& gens, int e) {
    auto basis = R.basis_R(e);
    Subspace<Q> S(basis.size());
    for (const auto& g : gens) {
        int dg = *R.degree(g);
        for (auto m : R.basis_R(e - dg)) {
            auto prod = R.normal_form(g.shifted(m.first, m.second));
            Vec<Q> v(basis.size());
            for (std::size_t k = 0; k < basis.size(); ++k) v[k] = prod.coeff(basis[k].first, basis[k].second);
            S.add(v);
        }
    }
    return S;
}

// dim End(I)_d for I = (x^m, y^n), computed as {u/x^m : u I in x^m I}.
std::size_t ideal_endo_dim(const HypersurfaceRing<Q>& R, int d) {
    int m = *R.m(), n = *R.n();
    auto xm = R.mono(m, 0), yn = R.mono(0, n);
    int e = d + m * R.q();
    auto src = R.basis_R(e);
    if (src.empty()) return 0;
    // unknown u in R_e; conditions u * gen in x^m I
    std::vector<std::pair<WPoly<Q>, Subspace<Q>>> conds;
    for (const auto& gen : {xm, yn}) {
        int te = e + *R.degree(gen);
        conds.emplace_back(gen, ideal_piece(R, {xm * xm, xm * yn}, te));
    }
    Matrix<Q> sys;
    for (auto& [gen, S] : conds) {
        int te = e + *R.degree(gen);
        auto tb = R.basis_R(te);
        // quotient map R_te -> R_te / (x^m I)_te: coordinates of reduce()
        for (std::size_t r = 0; r < tb.size(); ++r) {
            Vec<Q> row(src.size());
            for (std::size_t c = 0; c < src.size(); ++c) {
                auto prod = R.normal_form(gen.shifted(src[c].first, src[c].second));
                Vec<Q> v(tb.size());
                for (std::size_t k = 0; k < tb.size(); ++k) v[k] = prod.coeff(tb[k].first, tb[k].second);
                row[c] = S.reduce(v)[r];
            }
            sys.append_row(row);
        }
    }
    if (sys.rows() == 0) return src.size();
    return nullspace(sys).size();
}

Q rnd(std::mt19937& rng) { return Q(std::uniform_int_distribution<int>(-3, 3)(rng)); }

// Random invertible change of generators and relations that respects degrees.
GradedMatrix<Q> scramble(const HypersurfaceRing<Q>& R, GradedMatrix<Q> A, std::mt19937& rng) {
    auto rand_elem = [&](int d) {
        WPoly<Q> c;
        for (auto m : R.basis_R(d)) c.add_term(m, rnd(rng));
        return c;
    };
    for (int it = 0; it < 6; ++it) {
        std::size_t k = rng() % A.rows(), i = rng() % A.rows();
        if (k == i) continue;
        auto c = rand_elem(A.row_degrees()[i] - A.row_degrees()[k]);
        if (c.is_zero()) continue;
        for (std::size_t j = 0; j < A.cols(); ++j) A(k, j) = R.normal_form(A(k, j) + c * A(i, j));
    }
    for (int it = 0; it < 6; ++it) {
        std::size_t k = rng() % A.cols(), j = rng() % A.cols();
        if (k == j) continue;
        auto c = rand_elem(A.col_degrees()[k] - A.col_degrees()[j]);
        if (c.is_zero()) continue;
        for (std::size_t r = 0; r < A.rows(); ++r) A(r, k) = R.normal_form(A(r, k) + A(r, j) * c);
    }
    return A;
}

}  // namespace

TEST(MatrixFactorization, FromIdeal) {
    auto C1 = inst1();
    const auto& R1 = C1->ring;
    auto mf1 = mf_from_ideal(R1);
    EXPECT_EQ(mf1.phi, mat(R1, {4, 6}, {15, 10}, {{"x^2*y", "-y^2"}, {"y^3", "x"}}));
    EXPECT_EQ(mf1.psi, mat(R1, {15, 10}, {19, 21}, {{"x", "y^2"}, {"-y^3", "x^2*y"}}));
    auto chk = mf_check(mf1, R1);
    EXPECT_TRUE(chk.ok);
    EXPECT_TRUE(chk.reduced);

    auto C2 = inst2();
    const auto& R2 = C2->ring;
    auto mf2 = mf_from_ideal(R2);
    EXPECT_EQ(mf2.phi, mat(R2, {4, 6}, {12, 10}, {{"x^2", "-y^2"}, {"y^2", "x"}}));
    EXPECT_TRUE(mf_check(mf2, R2).ok);

    MatrixFactorization<Q> trivial{GradedMatrix<Q>::identity({0}, Q(1)), GradedMatrix<Q>::scalar({0}, 12, R2.g())};
    auto t = mf_check(trivial, R2);
    EXPECT_TRUE(t.ok);
    EXPECT_FALSE(t.reduced);

    MatrixFactorization<Q> square{mf2.phi, mf2.phi};
    EXPECT_FALSE(mf_check(square, R2).ok);

    HypersurfaceRing<Q> bare(3, 4, Q(1), parse_wpoly("1", Q(1)));
    EXPECT_THROW(mf_from_ideal(bare), std::invalid_argument);
}

TEST(MatrixFactorization, SyzygyIsAnInvolution) {
    auto C = inst2();
    const auto& R = C->ring;
    auto mf = mf_from_ideal(R);
    auto s = syz_mf(mf);
    EXPECT_EQ(s.phi, mat(R, {12, 10}, {16, 18}, {{"x", "y^2"}, {"-y^2", "x^2"}}));
    EXPECT_TRUE(mf_check(s, R).ok);
    auto ss = syz_mf(s);
    EXPECT_EQ(ss.phi.to_strings(), mf.phi.to_strings());
    EXPECT_EQ(ss.psi.to_strings(), mf.psi.to_strings());
    // same matrices, generator degrees moved by deg g
    EXPECT_EQ(ss.phi.row_degrees(), (std::vector<int>{16, 18}));
}

TEST(MatrixFactorization, PeriodicResolutionIsExact) {
    for (auto C : {inst1(), inst2()}) {
        const auto& R = C->ring;
        auto mf = mf_from_ideal(R);
        auto s = syz_mf(mf);
        for (const auto& pair : {mf, s}) {
            // F1 --phi--> F0 and F0(-G) --psi--> F1: ker phi = im psi in every degree
            for (int d = 0; d <= 3 * R.deg_g(); ++d) {
                auto P = piece_matrix(R, pair.phi, d);
                auto S = piece_matrix(R, pair.psi, d);
                std::size_t kerphi = P.cols() - rank(P);
                EXPECT_EQ(rank(S), kerphi) << "degree " << d;
                if (S.cols() && P.rows()) {
                    auto PS = P * S;
                    for (std::size_t i = 0; i < PS.rows(); ++i)
                        for (std::size_t j = 0; j < PS.cols(); ++j) EXPECT_TRUE(PS(i, j).is_zero());
                }
            }
        }
    }
}

TEST(MatrixFactorization, PruningRemovesTrivialSummands) {
    auto C = inst2();
    const auto& R = C->ring;
    auto mf = mf_from_ideal(R);
    // add a trivial summand (1, g) and a free summand (g, 1), then mix
    MatrixFactorization<Q> unit{GradedMatrix<Q>::identity({7}, Q(1)), GradedMatrix<Q>::scalar({7}, 12, R.g())};
    MatrixFactorization<Q> freef{GradedMatrix<Q>::scalar({3}, 12, R.g()), GradedMatrix<Q>::identity({15}, Q(1))};
    MatrixFactorization<Q> big{GradedMatrix<Q>::diag(GradedMatrix<Q>::diag(mf.phi, unit.phi), freef.phi),
                               GradedMatrix<Q>::diag(GradedMatrix<Q>::diag(mf.psi, unit.psi), freef.psi)};
    ASSERT_TRUE(mf_check(big, R).ok);
    auto pruned = prune_mf(big);
    EXPECT_TRUE(mf_check(pruned, R).ok);
    EXPECT_EQ(pruned.phi.rows(), 3u);
    EXPECT_FALSE(pruned.phi.has_unit_entry());
    auto [rest, free_degrees] = split_free_mf(pruned);
    EXPECT_EQ(free_degrees, std::vector<int>{3});
    EXPECT_EQ(rest.phi.rows(), 2u);
    EXPECT_TRUE(mf_check(rest, R).ok);
    auto chk = mf_check(rest, R);
    EXPECT_TRUE(chk.reduced);
}

TEST(Hom, FreeModulesAndIdentity) {
    auto C = inst2();
    const auto& R = C->ring;
    auto F = GradedModule<Q>::free(C, {0});
    auto h0 = hom_graded(F, F, 0);
    ASSERT_EQ(h0.size(), 1u);
    EXPECT_EQ(h0[0].H(0, 0), R.constant(1));
    for (int d = -3; d <= 30; ++d) EXPECT_EQ(hom_graded(F, F, d).size(), R.dim_R(d)) << d;
    auto F2 = GradedModule<Q>::free(C, {0, 3});
    for (int d = 0; d <= 20; ++d)
        EXPECT_EQ(hom_graded(F2, F, d).size(), R.dim_R(d) + R.dim_R(d + 3)) << d;
}

TEST(Hom, EndomorphismsOfTheIdealMatchColonOracle) {
    for (auto C : {inst1(), inst2()}) {
        const auto& R = C->ring;
        auto M = GradedModule<Q>::from_mf(C, mf_from_ideal(R));
        for (int d = -2 * R.deg_g(); d <= 2 * R.deg_g(); ++d)
            EXPECT_EQ(hom_graded(M, M, d).size(), ideal_endo_dim(R, d)) << "degree " << d;
    }
    auto C = inst2();
    auto M = GradedModule<Q>::from_mf(C, mf_from_ideal(C->ring));
    EXPECT_EQ(hom_graded(M, M, 0).size(), 1u);
}

TEST(Hom, MultiplicationAndCertificates) {
    auto C = inst2();
    const auto& R = C->ring;
    auto M = GradedModule<Q>::from_mf(C, mf_from_ideal(R));
    auto basis = hom_graded(M, M, 4);
    Subspace<Q> span(hom_ambient_dim(*M, *M, 4));
    for (const auto& h : basis) span.add(hom_coords(h));
    auto mx = mult_hom(M, R.x());
    EXPECT_TRUE(span.contains(hom_coords(mx)));
    for (int d = -6; d <= 16; ++d)
        for (const auto& h : hom_graded(M, M, d)) {
            auto K = hom_certificate(h);
            auto lhs = (h.H * M->presentation()).reduced(R);
            auto rhs = (M->presentation() * K).reduced(R);
            EXPECT_EQ(lhs.to_strings(), rhs.to_strings());
        }
    auto id = identity_hom(M);
    auto c = compose(mx, id);
    EXPECT_EQ(hom_coords(c), hom_coords(mx));
    EXPECT_TRUE(hom_is_zero(hom_sub(c, mx)));
}

TEST(Hom, DimensionIndependentOfPresentation) {
    std::mt19937 rng(7);
    for (auto C : {inst1(), inst2()}) {
        const auto& R = C->ring;
        auto mf = mf_from_ideal(R);
        auto M = GradedModule<Q>::from_mf(C, mf);
        auto S = GradedModule<Q>::from_mf(C, syz_mf(mf));
        auto sum = direct_sum(direct_sum(M, M), S);
        for (int trial = 0; trial < 3; ++trial) {
            auto A = scramble(R, sum->presentation(), rng);
            // a redundant relation
            std::vector<int> cols = A.col_degrees();
            cols.push_back(cols[0] + R.q());
            GradedMatrix<Q> B(A.row_degrees(), cols);
            for (std::size_t j = 0; j < A.cols(); ++j) B.set_column(j, A.column(j));
            auto c0 = A.column(0);
            for (auto& e : c0) e = R.normal_form(e * R.x());
            B.set_column(A.cols(), c0);
            auto N = GradedModule<Q>::from_presentation(C, B);
            for (int d : {-R.deg_g(), -4, 0, 3, 4, 10, R.deg_g()})
                EXPECT_EQ(hom_graded(N, N, d).size(), hom_graded(sum, sum, d).size()) << "degree " << d;
        }
    }
}

TEST(Modules, RanksAndMultiplicities) {
    auto C1 = inst1();
    auto C2 = inst2();
    auto M1 = GradedModule<Q>::from_mf(C1, mf_from_ideal(C1->ring));
    auto M2 = GradedModule<Q>::from_mf(C2, mf_from_ideal(C2->ring));
    EXPECT_EQ(rank_vector(*M1), (std::vector<int>{1, 1}));
    EXPECT_EQ(rank_vector(*M2), std::vector<int>{1});
    auto F3 = GradedModule<Q>::free(C1, {0, 2, 5});
    EXPECT_EQ(rank_vector(*F3), (std::vector<int>{3, 3}));
    EXPECT_EQ(multiplicity(*GradedModule<Q>::free(C2, {0})), Q(3));
    EXPECT_EQ(multiplicity(*GradedModule<Q>::free(C1, {0})), Q(4));
    auto sum = direct_sum(M1, GradedModule<Q>::from_mf(C1, syz_mf(mf_from_ideal(C1->ring))));
    EXPECT_EQ(rank_vector(*sum), (std::vector<int>{2, 2}));
    EXPECT_EQ(multiplicity(*sum), multiplicity(*M1) * Q(2));
}

TEST(Modules, ShiftConvention) {
    auto C = inst2();
    auto M = GradedModule<Q>::from_mf(C, mf_from_ideal(C->ring));
    auto M3 = M->shifted(3);
    for (int d = -5; d <= 30; ++d) EXPECT_EQ(M3->dim(d), M->dim(d + 3));
    EXPECT_EQ(M3->gen_degrees(), (std::vector<int>{1, 3}));
}

TEST(Decompose, IndecomposableIdeal) {
    auto C = inst2();
    auto M = GradedModule<Q>::from_mf(C, mf_from_ideal(C->ring));
    auto d = decompose(M, 5);
    ASSERT_EQ(d.parts.size(), 1u);
    EXPECT_EQ(d.free_rank(), 0u);
    EXPECT_EQ(iso_up_to_shift(d.parts[0], M), std::optional<int>(0));
}

TEST(Decompose, SplitSumsAndFreeParts) {
    for (auto C : {inst1(), inst2()}) {
        const auto& R = C->ring;
        auto mf = mf_from_ideal(R);
        auto M = GradedModule<Q>::from_mf(C, mf);
        auto S = GradedModule<Q>::from_mf(C, syz_mf(mf));
        MatrixFactorization<Q> freef{GradedMatrix<Q>::scalar({3}, R.deg_g(), R.g()),
                                     GradedMatrix<Q>::identity({3 + R.deg_g()}, Q(1))};
        auto F = GradedModule<Q>::from_mf(C, freef);
        auto MM = direct_sum(M, M);
        auto dm = decompose(MM, 11);
        ASSERT_EQ(dm.parts.size(), 2u);
        for (const auto& p : dm.parts) EXPECT_EQ(iso_up_to_shift(p, M), std::optional<int>(0));

        auto big = direct_sum(direct_sum(M, F), S->shifted(-2));
        auto db = decompose(big, 3);
        EXPECT_EQ(db.free_degrees, std::vector<int>{3});
        ASSERT_EQ(db.parts.size(), 2u);
        int hits_m = 0, hits_s = 0;
        for (const auto& p : db.parts) {
            if (iso_up_to_shift(p, M) == std::optional<int>(0)) { ++hits_m; }
            if (iso_up_to_shift(p, S) == std::optional<int>(-2)) { ++hits_s; }
            EXPECT_EQ(EndAlgebra<Q>(p).dim() - EndAlgebra<Q>(p).radical().size(), 1u);
        }
        EXPECT_EQ(hits_m, 1);
        EXPECT_EQ(hits_s, 1);
    }
}

TEST(Decompose, IsoUpToShiftConventions) {
    auto C = inst2();
    auto M = GradedModule<Q>::from_mf(C, mf_from_ideal(C->ring));
    EXPECT_EQ(iso_up_to_shift(M, M), std::optional<int>(0));
    EXPECT_EQ(iso_up_to_shift(M, M->shifted(3)), std::optional<int>(-3));
    auto S = GradedModule<Q>::from_mf(C, syz_mf(mf_from_ideal(C->ring)));
    auto r = iso_up_to_shift(M, S);
    auto back = iso_up_to_shift(S, M);
    EXPECT_EQ(r.has_value(), back.has_value());
    if (r) {
        EXPECT_EQ(*r, -*back);
    }
    auto F = GradedModule<Q>::free(C, {0});
    EXPECT_FALSE(iso_up_to_shift(M, F).has_value());
}

TEST(Decompose, SmallPrimeFieldIsRejected) {
    auto C = Curve<ModP>::make(HypersurfaceRing<ModP>(3, 4, ModP(1, 3), parse_wpoly("1", ModP(1, 3)), 1, 2));
    auto M = GradedModule<ModP>::from_mf(C, mf_from_ideal(C->ring));
    auto MM = direct_sum(direct_sum(M, M), M);
    EXPECT_THROW(decompose(MM, 1), std::invalid_argument);
}
