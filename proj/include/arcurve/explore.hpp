#pragma once

#include "ar_engine.hpp"
#include "quiver.hpp"

#include <future>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace arcurve {

/// A finite piece of the stable AR component through M0, with the data used
/// to classify it.
template <class K>
struct Exploration {
    quiver::TranslationQuiver quiver;
    std::vector<ModPtr<K>> modules;
    std::vector<int> depth;
    std::vector<bool> expanded;
    // nonfree summands of push(M) with multiplicity, for expanded vertices
    std::vector<std::map<int, int>> push_parts;
    std::vector<std::size_t> push_free_rank;
    std::vector<Rational> e_avg;
    std::vector<std::optional<std::size_t>> push2_nonfree;
    std::vector<std::string> conflicts;
    std::optional<int> two_summand_witness;
    quiver::Classification fragment;
    std::string classification;
    int tube_rank = 0;

    bool is_tube() const { return classification.rfind("tube", 0) == 0; }
};

namespace detail {

template <class K>
int find_or_add(Exploration<K>& ex, const ModPtr<K>& X, int d, std::uint64_t seed) {
    for (std::size_t v = 0; v < ex.modules.size(); ++v)
        if (iso_up_to_shift(X, ex.modules[v], seed)) return static_cast<int>(v);
    int id = ex.quiver.add_vertex("M" + std::to_string(ex.modules.size()), true);
    ex.modules.push_back(X);
    ex.depth.push_back(d);
    ex.expanded.push_back(false);
    ex.push_parts.emplace_back();
    ex.push_free_rank.push_back(0);
    ex.e_avg.push_back(arcurve::e_avg(X, seed));
    ex.push2_nonfree.emplace_back();
    ex.quiver.weight[id] = ex.e_avg.back();
    return id;
}

/// Adds X together with its tau-partner syz X (tau has period 1 or 2 here).
template <class K>
int add_with_partner(Exploration<K>& ex, const ModPtr<K>& X, int d, std::uint64_t seed) {
    std::size_t before = ex.modules.size();
    int v = find_or_add(ex, X, d, seed);
    if (ex.modules.size() == before) return v;
    auto S = syz_module(X);
    int w = iso_up_to_shift(S, X, seed) ? v : find_or_add(ex, S, d, seed);
    ex.quiver.tau[v] = w;
    ex.quiver.tau[w] = v;
    return v;
}

}  // namespace detail

/// BFS from M0 in rounds: every vertex of depth < max_depth is pushed and the
/// middle term decomposed. Pushes within a round run concurrently; merging into
/// the table is serial in vertex order. Arrow values are copy counts.
template <class K>
Exploration<K> explore_component(const ModPtr<K>& M0, const GammaDatum<K>& gd, int max_depth, std::uint64_t seed = 1) {
    if (max_depth < 0) throw std::invalid_argument("depth must be nonnegative");
    Exploration<K> ex;
    detail::add_with_partner(ex, M0, 0, seed);
    struct Expansion {
        bool right_ok = false;
        Decomposition<K> dec;
    };
    for (;;) {
        std::vector<int> frontier;
        for (int v = 0; v < ex.quiver.size(); ++v)
            if (!ex.expanded[v] && ex.depth[v] < max_depth) frontier.push_back(v);
        if (frontier.empty()) break;
        std::vector<std::future<Expansion>> jobs;
        for (int v : frontier) {
            ModPtr<K> M = ex.modules[v], partner = ex.modules[*ex.quiver.tau[v]];
            jobs.push_back(std::async(std::launch::async, [M, partner, &gd, seed] {
                auto s = push(M, gd);
                Expansion e;
                e.right_ok = iso_up_to_shift(s.right, partner, seed).has_value();
                e.dec = decompose(s.middle, seed);
                return e;
            }));
        }
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            int v = frontier[i];
            auto e = jobs[i].get();
            if (!e.right_ok) throw std::logic_error("right end of the AR sequence is not the tau-partner");
            ex.expanded[v] = true;
            int r = *ex.quiver.tau[v];
            ex.push_free_rank[v] = e.dec.free_rank();
            for (const auto& X : e.dec.parts) {
                int x = detail::add_with_partner(ex, X, ex.depth[v] + 1, seed);
                ++ex.push_parts[v][x];
            }
            for (const auto& [x, c] : ex.push_parts[v]) {
                quiver::Value val{c, c};
                if (!ex.quiver.add_arrow(v, x, val)) ex.conflicts.push_back("value clash M" + std::to_string(v) + " -> M" + std::to_string(x));
                if (!ex.quiver.add_arrow(x, r, val)) ex.conflicts.push_back("value clash M" + std::to_string(x) + " -> M" + std::to_string(r));
            }
        }
    }
    for (int v = 0; v < ex.quiver.size(); ++v) {
        auto t = ex.quiver.tau_of(v);
        ex.quiver.boundary[v] = !(ex.expanded[v] && t && ex.expanded[*t]);
    }
    for (int v = 0; v < ex.quiver.size(); ++v) {
        if (!ex.expanded[v]) continue;
        std::size_t total = 0;
        bool known = true;
        for (const auto& [x, c] : ex.push_parts[v]) {
            if (!ex.expanded[x]) known = false;
            else for (const auto& [y, cy] : ex.push_parts[x]) total += static_cast<std::size_t>(c * cy);
        }
        if (known) ex.push2_nonfree[v] = total;
        if (known && total == 2 && !ex.two_summand_witness) ex.two_summand_witness = v;
    }
    ex.fragment = quiver::classify_fragment(ex.quiver);
    auto period = quiver::tau_period(ex.quiver, 0);
    ex.tube_rank = period ? *period : 0;
    bool periodic = true;
    for (int v = 0; v < ex.quiver.size(); ++v) periodic = periodic && quiver::tau_period(ex.quiver, v).has_value();
    if (ex.two_summand_witness && periodic && ex.conflicts.empty() &&
        (ex.fragment.shape == quiver::Shape::tube || ex.fragment.shape == quiver::Shape::a_infinity_consistent))
        ex.classification = "tube(" + std::to_string(ex.tube_rank) + ")";
    else
        ex.classification = ex.fragment.to_string();
    return ex;
}

/// Sum of e_avg over the nonfree summands of push(M), with multiplicity.
template <class K>
Rational e_avg_of_push(const Exploration<K>& ex, int v) {
    Rational s(0);
    for (const auto& [x, c] : ex.push_parts[v]) s = s + Rational(c) * ex.e_avg[x];
    return s;
}

/// Subadditivity of e_avg on the tree class of the fragment at a mouth vertex.
template <class K>
quiver::SubadditiveReport tree_subadditivity(const Exploration<K>& ex, int radius) {
    int base = -1;
    for (int x = 0; x < ex.quiver.size(); ++x)
        if (ex.quiver.interior(x) && (base < 0 || ex.quiver.succ(x).size() < ex.quiver.succ(base).size())) base = x;
    if (base < 0) return {};
    auto tc = quiver::tree_class(ex.quiver, base, radius);
    std::vector<Rational> f;
    for (int e : tc.endpoint) f.push_back(ex.e_avg[e]);
    return quiver::check_subadditive(tc.tree, f);
}

}  // namespace arcurve
