#include <arcurve/explore.hpp>

#include <gtest/gtest.h>

using namespace arcurve;
using namespace arcurve::quiver;
using Q = Rational;

namespace {

DirectedTree a_tree(int k) {
    auto t = a_ray(k);
    t.open.assign(static_cast<std::size_t>(k), false);
    return t;
}

DirectedTree d4_tree() {
    DirectedTree t;
    for (const char* s : {"a", "c", "b", "d"}) t.add_vertex(s);
    t.add_arrow(0, 1);
    t.add_arrow(1, 2);
    t.add_arrow(1, 3);
    return t;
}

int vertex(const TranslationQuiver& q, const std::string& label) {
    for (int x = 0; x < q.size(); ++x)
        if (q.labels[x] == label) return x;
    return -1;
}

bool has_arrow(const TranslationQuiver& q, const std::string& a, const std::string& b) {
    return q.value(vertex(q, a), vertex(q, b)).has_value();
}

}  // namespace

TEST(Validate, SingleVertexWithIdentityTranslation) {
    TranslationQuiver q;
    q.add_vertex("x");
    q.tau[0] = 0;
    EXPECT_TRUE(validate(q).empty());
}

TEST(Validate, LoopAndMultipleArrowsAreReported) {
    TranslationQuiver q;
    q.add_vertex("x");
    q.add_vertex("y");
    q.tau = {0, 1};
    q.arrows.push_back({0, 0, {}});
    q.arrows.push_back({0, 1, {}});
    q.arrows.push_back({0, 1, {}});
    auto v = validate(q);
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v[0].rfind("loop", 0), 0u);
    bool multiple = false;
    for (const auto& s : v) multiple = multiple || s.rfind("multiple arrows", 0) == 0;
    EXPECT_TRUE(multiple);
}

TEST(Validate, LoopsAreKeptAsVertexFlags) {
    TranslationQuiver q;
    q.add_vertex("x");
    q.tau[0] = 0;
    EXPECT_TRUE(q.add_arrow(0, 0, {}));
    EXPECT_TRUE(q.loop[0]);
    EXPECT_TRUE(q.arrows.empty());
}

TEST(Validate, DirectedTrees) {
    EXPECT_TRUE(validate(d4_tree()).empty());
    DirectedTree bad = a_tree(3);
    bad.add_arrow(2, 0);
    EXPECT_FALSE(validate(bad).empty());
    DirectedTree two_preds;
    for (const char* s : {"a", "b", "c"}) two_preds.add_vertex(s);
    two_preds.add_arrow(0, 2);
    two_preds.add_arrow(1, 2);
    EXPECT_FALSE(validate(two_preds).empty());
}

TEST(ZT, OneVertexGivesATauLine) {
    auto q = zt_build(a_tree(1), 0, 4);
    EXPECT_EQ(q.size(), 5);
    EXPECT_TRUE(q.arrows.empty());
    for (int n = 0; n < 4; ++n) EXPECT_EQ(*q.tau_of(n), n + 1);
}

TEST(ZT, A2WindowArrows) {
    auto q = zt_build(a_tree(2), 0, 1);
    EXPECT_EQ(q.size(), 4);
    EXPECT_EQ(q.arrows.size(), 3u);
    EXPECT_TRUE(has_arrow(q, "(0,x0)", "(0,x1)"));
    EXPECT_TRUE(has_arrow(q, "(1,x0)", "(1,x1)"));
    EXPECT_TRUE(has_arrow(q, "(1,x1)", "(0,x0)"));
    EXPECT_EQ(*q.tau_of(vertex(q, "(0,x0)")), vertex(q, "(1,x0)"));
}

TEST(ZT, ValuesAreSwappedOnBackwardArrows) {
    DirectedTree t;
    t.add_vertex("x");
    t.add_vertex("y");
    t.add_arrow(0, 1, {1, 2});
    auto q = zt_build(t, -2, 2);
    EXPECT_EQ(*q.value(vertex(q, "(0,x)"), vertex(q, "(0,y)")), (Value{1, 2}));
    EXPECT_EQ(*q.value(vertex(q, "(0,y)"), vertex(q, "(-1,x)")), (Value{2, 1}));
    EXPECT_TRUE(validate(q).empty());
}

TEST(ZT, WindowsValidateOnInteriorVertices) {
    for (const auto& t : {a_tree(3), d4_tree(), a_ray(5)}) EXPECT_TRUE(validate(zt_build(t, -3, 3)).empty());
}

TEST(Quotient, TubesFromTheRay) {
    for (int n = 1; n <= 3; ++n) {
        auto z = zt_build(a_ray(6), 0, 3 * n + 2);
        auto qt = quotient_tau(z, n);
        EXPECT_TRUE(qt.covering()) << n << ": " << (qt.covering_failures.empty() ? "" : qt.covering_failures[0]);
        EXPECT_EQ(qt.quiver.size(), 6 * n);
        EXPECT_TRUE(validate(qt.quiver).empty()) << n;
        auto c = classify_fragment(qt.quiver);
        EXPECT_EQ(c.shape, Shape::tube) << c.reason;
        EXPECT_EQ(c.rank, n);
    }
}

TEST(Quotient, HomogeneousTubeHasBothArrowsBetweenNeighbours) {
    auto qt = quotient_tau(zt_build(a_ray(4), 0, 4), 1);
    const auto& q = qt.quiver;
    int x0 = vertex(q, "[(0,x0)]"), x1 = vertex(q, "[(0,x1)]");
    ASSERT_GE(x0, 0);
    ASSERT_GE(x1, 0);
    EXPECT_TRUE(q.value(x0, x1));
    EXPECT_TRUE(q.value(x1, x0));
    EXPECT_EQ(*q.tau_of(x0), x0);
}

TEST(Quotient, NonAdmissibleGroupIsRejected) {
    // tau swaps a and b, so the orbit {a, b} meets {a} u a^+ twice
    TranslationQuiver q;
    q.add_vertex("a");
    q.add_vertex("b");
    q.tau = {1, 0};
    q.add_arrow(0, 1, {});
    q.add_arrow(1, 0, {});
    EXPECT_THROW(quotient_tau(q, 1), std::invalid_argument);
}

TEST(TreeClass, RecoversTheTree) {
    for (const auto& t : {a_tree(2), a_tree(3), d4_tree()}) {
        auto z = zt_build(t, -6, 6);
        int base = vertex(z, "(0," + t.labels[0] + ")");
        auto tc = tree_class(z, base, 8);
        EXPECT_TRUE(validate(tc.tree).empty());
        EXPECT_TRUE(same_valued_graph(tc.tree, t)) << tree_shape(tc.tree) << " vs " << tree_shape(t);
    }
}

TEST(TreeClass, SingleTauLineIsA1) {
    auto z = zt_build(a_tree(1), 0, 4);
    EXPECT_EQ(tree_class(z, 2, 5).tree.size(), 1);
}

TEST(TreeClass, HomogeneousTubeGivesAPathFromAnyInteriorVertex) {
    auto q = quotient_tau(zt_build(a_ray(8), 0, 4), 1).quiver;
    for (const char* b : {"[(0,x0)]", "[(0,x2)]"}) {
        auto tc = tree_class(q, vertex(q, b), 4);
        std::vector<int> deg(static_cast<std::size_t>(tc.tree.size()), 0);
        for (const auto& e : tc.tree.arrows) {
            ++deg[e.src];
            ++deg[e.dst];
        }
        for (int d : deg) EXPECT_LE(d, 2);
        EXPECT_GE(tc.tree.size(), 4);
    }
}

TEST(Subadditive, ConstantAndLinearOnTheRay) {
    auto t = a_ray(6);
    std::vector<Q> c(6, Q(3)), lin;
    for (int i = 0; i < 6; ++i) lin.push_back(Q(i + 1));
    // the ray end x0 has one neighbour, so constants are strictly subadditive there
    auto r = check_subadditive(t, c);
    EXPECT_EQ(r.kind, Additivity::strictly_subadditive);
    EXPECT_EQ(r.skipped, std::vector<int>{5});
    EXPECT_EQ(check_subadditive(t, lin).kind, Additivity::additive);
    std::vector<Q> bad{Q(1), Q(5), Q(1), Q(1), Q(1), Q(1)};
    EXPECT_EQ(check_subadditive(t, bad).kind, Additivity::fails);
}

TEST(Subadditive, ValuesWeightTheSum) {
    DirectedTree t;
    t.add_vertex("x");
    t.add_vertex("y");
    t.add_arrow(0, 1, {1, 2});
    // d_yx = 2 at x, d_xy = 1 at y
    auto r = check_subadditive(t, {Q(1), Q(1)});
    EXPECT_EQ(r.kind, Additivity::strictly_subadditive);
    r = check_subadditive(t, {Q(1), Q(2)});
    ASSERT_EQ(r.failing.size(), 1u);
    EXPECT_EQ(r.failing[0], 0);
}

TEST(Classify, NonPeriodicWindowIsNotATube) {
    auto c = classify_fragment(zt_build(a_tree(2), 0, 4));
    EXPECT_NE(c.shape, Shape::tube);
}

TEST(Classify, FiniteFoldIsNotATube) {
    // ZA_3 folded by tau has a closed path as tree class
    auto q = quotient_tau(zt_build(a_tree(3), 0, 4), 1).quiver;
    EXPECT_EQ(classify_fragment(q).shape, Shape::other);
}

TEST(Export, DotCarriesValuesAndTau) {
    auto q = quotient_tau(zt_build(a_ray(3), 0, 3), 2).quiver;
    auto dot = to_dot(q);
    EXPECT_NE(dot.find("(1,1)"), std::string::npos);
    EXPECT_NE(dot.find("style=dashed"), std::string::npos);
}

TEST(Explore, DepthZeroHasTheModuleAndItsTranslate) {
    auto C = Curve<Q>::make(HypersurfaceRing<Q>(3, 4, Q(1), parse_wpoly("y", Q(1)), 1, 2));
    auto I = GradedModule<Q>::from_mf(C, mf_from_ideal(C->ring));
    auto ex = explore_component(I, gamma_for(C), 0);
    EXPECT_EQ(ex.quiver.size(), 2);
    EXPECT_TRUE(ex.quiver.arrows.empty());
    EXPECT_EQ(*ex.quiver.tau_of(0), 1);
}

TEST(Explore, ReducibleInstanceIsATube) {
    auto C = Curve<Q>::make(HypersurfaceRing<Q>(3, 4, Q(1), parse_wpoly("y", Q(1)), 1, 2));
    auto I = GradedModule<Q>::from_mf(C, mf_from_ideal(C->ring));
    auto ex = explore_component(I, gamma_for(C), 3);
    EXPECT_TRUE(validate(ex.quiver).empty());
    EXPECT_TRUE(ex.conflicts.empty());
    EXPECT_TRUE(ex.is_tube()) << ex.classification << ": " << ex.fragment.reason;
    ASSERT_TRUE(ex.two_summand_witness);
    EXPECT_EQ(*ex.two_summand_witness, 0);
    for (int v = 0; v < ex.quiver.size(); ++v) {
        if (ex.expanded[v]) {
            EXPECT_LE(e_avg_of_push(ex, v), Q(2) * ex.e_avg[v]);
        }
    }
    auto sr = tree_subadditivity(ex, 8);
    EXPECT_NE(sr.kind, Additivity::fails);
    EXPECT_FALSE(sr.checked.empty());
}
