#pragma once

#include "field.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace arcurve::quiver {

/// v(x -> y) = (a, b) = (d_xy, d_yx).
struct Value {
    int a = 1;
    int b = 1;
    friend bool operator==(const Value&, const Value&) = default;
    Value swapped() const { return {b, a}; }
};

struct Arrow {
    int src = 0;
    int dst = 0;
    Value v;
};

/// Finite window of a valued translation quiver. Boundary vertices are where
/// the window was cut; checks skip them.
struct TranslationQuiver {
    std::vector<std::string> labels;
    std::vector<std::optional<int>> tau;
    std::vector<bool> boundary;
    std::vector<bool> loop;
    std::vector<std::optional<Rational>> weight;
    std::vector<Arrow> arrows;

    int size() const { return static_cast<int>(labels.size()); }

    int add_vertex(std::string label, bool is_boundary = false) {
        labels.push_back(std::move(label));
        tau.emplace_back();
        boundary.push_back(is_boundary);
        loop.push_back(false);
        weight.emplace_back();
        return size() - 1;
    }

    /// Adds x -> y, or returns false when an arrow x -> y with another value exists.
    bool add_arrow(int x, int y, Value v) {
        if (x == y) {
            loop[static_cast<std::size_t>(x)] = true;
            return true;
        }
        for (const auto& e : arrows)
            if (e.src == x && e.dst == y) return e.v == v;
        arrows.push_back({x, y, v});
        return true;
    }

    std::optional<Value> value(int x, int y) const {
        for (const auto& e : arrows)
            if (e.src == x && e.dst == y) return e.v;
        return std::nullopt;
    }

    std::vector<int> succ(int x) const {
        std::vector<int> out;
        for (const auto& e : arrows)
            if (e.src == x) out.push_back(e.dst);
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<int> pred(int x) const {
        std::vector<int> out;
        for (const auto& e : arrows)
            if (e.dst == x) out.push_back(e.src);
        std::sort(out.begin(), out.end());
        return out;
    }

    bool interior(int x) const { return !boundary[static_cast<std::size_t>(x)]; }
    std::optional<int> tau_of(int x) const { return tau[static_cast<std::size_t>(x)]; }
};

/// A valued quiver whose underlying graph is a tree and with |x^-| <= 1.
struct DirectedTree {
    std::vector<std::string> labels;
    std::vector<bool> open;
    std::vector<Arrow> arrows;

    int size() const { return static_cast<int>(labels.size()); }
    int add_vertex(std::string label, bool is_open = false) {
        labels.push_back(std::move(label));
        open.push_back(is_open);
        return size() - 1;
    }
    void add_arrow(int x, int y, Value v = {}) { arrows.push_back({x, y, v}); }
};

/// The path x_0 -> x_1 -> ... -> x_{k-1}, all values (1,1).
inline DirectedTree a_ray(int k) {
    DirectedTree t;
    for (int i = 0; i < k; ++i) t.add_vertex("x" + std::to_string(i), i == k - 1);
    for (int i = 0; i + 1 < k; ++i) t.add_arrow(i, i + 1);
    return t;
}

inline std::vector<std::string> validate(const DirectedTree& t) {
    std::vector<std::string> out;
    int n = t.size();
    std::vector<int> indeg(static_cast<std::size_t>(n), 0);
    std::set<std::pair<int, int>> seen;
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const auto& e : t.arrows) {
        if (e.src == e.dst) out.push_back("loop at " + t.labels[e.src]);
        if (!seen.insert({std::min(e.src, e.dst), std::max(e.src, e.dst)}).second) out.push_back("multiple arrows");
        if (++indeg[e.dst] > 1) out.push_back("more than one predecessor at " + t.labels[e.dst]);
        int a = find(e.src), b = find(e.dst);
        if (a == b && e.src != e.dst) out.push_back("cycle through " + t.labels[e.src]);
        parent[a] = b;
    }
    for (int x = 1; x < n; ++x)
        if (find(x) != find(0)) {
            out.push_back("not connected");
            break;
        }
    return out;
}

/// All invariant violations at interior vertices; empty means valid.
inline std::vector<std::string> validate(const TranslationQuiver& q) {
    std::vector<std::string> out;
    std::set<std::pair<int, int>> seen;
    for (const auto& e : q.arrows) {
        if (e.src == e.dst) out.push_back("loop at " + q.labels[e.src]);
        if (!seen.insert({e.src, e.dst}).second) out.push_back("multiple arrows " + q.labels[e.src] + " -> " + q.labels[e.dst]);
    }
    std::map<int, int> preimage;
    for (int x = 0; x < q.size(); ++x)
        if (auto t = q.tau_of(x)) {
            auto [it, fresh] = preimage.emplace(*t, x);
            if (!fresh) out.push_back("tau not injective at " + q.labels[*t]);
        }
    for (int x = 0; x < q.size(); ++x) {
        if (!q.interior(x)) continue;
        auto t = q.tau_of(x);
        if (!t) {
            out.push_back("tau undefined at interior vertex " + q.labels[x]);
            continue;
        }
        if (q.pred(x) != q.succ(*t)) out.push_back("x^- differs from tau(x)^+ at " + q.labels[x]);
    }
    for (const auto& e : q.arrows) {
        auto ty = q.tau_of(e.dst);
        if (!ty || !q.interior(e.dst)) continue;
        auto w = q.value(*ty, e.src);
        if (!w) continue;  // reported by the x^- check
        if (!(*w == e.v.swapped()))
            out.push_back("value of tau(" + q.labels[e.dst] + ") -> " + q.labels[e.src] + " is not the swap");
    }
    return out;
}

/// The window n_lo <= n <= n_hi of ZT, with tau(n, x) = (n + 1, x).
inline TranslationQuiver zt_build(const DirectedTree& t, int n_lo, int n_hi) {
    if (n_lo > n_hi) throw std::invalid_argument("empty window");
    TranslationQuiver q;
    int k = t.size();
    auto id = [&](int n, int x) { return (n - n_lo) * k + x; };
    for (int n = n_lo; n <= n_hi; ++n)
        for (int x = 0; x < k; ++x)
            q.add_vertex("(" + std::to_string(n) + "," + t.labels[x] + ")",
                         n == n_lo || n == n_hi || t.open[static_cast<std::size_t>(x)]);
    for (int n = n_lo; n <= n_hi; ++n) {
        for (int x = 0; x < k; ++x)
            if (n < n_hi) q.tau[id(n, x)] = id(n + 1, x);
        for (const auto& e : t.arrows) {
            q.add_arrow(id(n, e.src), id(n, e.dst), e.v);
            if (n - 1 >= n_lo) q.add_arrow(id(n, e.dst), id(n - 1, e.src), e.v.swapped());
        }
    }
    return q;
}

struct Quotient {
    TranslationQuiver quiver;
    std::vector<int> projection;
    std::vector<std::string> covering_failures;
    bool covering() const { return covering_failures.empty(); }
};

/// Gamma / <tau^n>, with the admissibility and covering checks.
inline Quotient quotient_tau(const TranslationQuiver& q, int n) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    int V = q.size();
    std::vector<int> parent(static_cast<std::size_t>(V));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (int x = 0; x < V; ++x) {
        std::optional<int> y = x;
        for (int i = 0; i < n && y; ++i) y = q.tau_of(*y);
        if (y) parent[find(x)] = find(*y);
    }
    // no orbit meets {x} u x^+ or {x} u x^- twice
    for (int x = 0; x < V; ++x) {
        for (const auto& nb : {q.succ(x), q.pred(x)}) {
            std::set<int> orbits{find(x)};
            for (int y : nb)
                if (!orbits.insert(find(y)).second) throw std::invalid_argument("not admissible");
        }
    }
    Quotient out;
    std::map<int, int> orbit_id;
    out.projection.resize(static_cast<std::size_t>(V));
    for (int x = 0; x < V; ++x) {
        auto [it, fresh] = orbit_id.emplace(find(x), out.quiver.size());
        if (fresh) out.quiver.add_vertex("[" + q.labels[x] + "]", true);
        out.projection[x] = it->second;
    }
    for (int x = 0; x < V; ++x) {
        int px = out.projection[x];
        if (q.interior(x)) out.quiver.boundary[px] = false;
        if (auto t = q.tau_of(x)) out.quiver.tau[px] = out.projection[*t];
    }
    for (const auto& e : q.arrows)
        if (!out.quiver.add_arrow(out.projection[e.src], out.projection[e.dst], e.v))
            out.covering_failures.push_back("conflicting values on " + q.labels[e.src] + " -> " + q.labels[e.dst]);
    for (int x = 0; x < V; ++x) {
        if (!q.interior(x)) continue;
        int px = out.projection[x];
        auto image = [&](const std::vector<int>& nb) {
            std::vector<int> r;
            for (int y : nb) r.push_back(out.projection[y]);
            std::sort(r.begin(), r.end());
            return r;
        };
        if (image(q.succ(x)) != out.quiver.succ(px) || image(q.pred(x)) != out.quiver.pred(px))
            out.covering_failures.push_back("neighbourhood not bijective at " + q.labels[x]);
    }
    return out;
}

struct TreeClass {
    DirectedTree tree;
    std::vector<int> endpoint;
};

/// Paths base = y_0 -> ... -> y_n with no y_i = tau(y_{i+2}), n <= radius.
/// Paths that reach the boundary or the radius are marked open.
inline TreeClass tree_class(const TranslationQuiver& q, int base, int radius) {
    TreeClass out;
    struct Node {
        std::vector<int> path;
        int id;
    };
    std::vector<Node> stack{{{base}, out.tree.add_vertex(q.labels[base], !q.interior(base) || radius == 0)}};
    out.endpoint.push_back(base);
    while (!stack.empty()) {
        auto node = stack.back();
        stack.pop_back();
        int last = node.path.back();
        if (static_cast<int>(node.path.size()) > radius || !q.interior(last)) continue;
        for (int y : q.succ(last)) {
            if (node.path.size() >= 2) {
                int prev = node.path[node.path.size() - 2];
                auto ty = q.tau_of(y);
                if (ty && *ty == prev) continue;
            }
            auto path = node.path;
            path.push_back(y);
            std::string label;
            for (std::size_t i = 0; i < path.size(); ++i) label += (i ? ">" : "") + q.labels[path[i]];
            bool open = static_cast<int>(path.size()) > radius || !q.interior(y) || !q.tau_of(y);
            int id = out.tree.add_vertex(label, open);
            out.endpoint.push_back(y);
            out.tree.add_arrow(node.id, id, *q.value(last, y));
            stack.push_back({path, id});
        }
    }
    return out;
}

enum class Additivity { additive, strictly_subadditive, fails };

inline std::string to_string(Additivity a) {
    switch (a) {
        case Additivity::additive: return "additive";
        case Additivity::strictly_subadditive: return "strictly-subadditive";
        default: return "fails";
    }
}

struct SubadditiveReport {
    Additivity kind = Additivity::additive;
    std::vector<int> checked;
    std::vector<int> skipped;
    std::vector<int> failing;
};

/// 2 f(x) >= sum_y d_yx f(y) at every vertex that is not open.
inline SubadditiveReport check_subadditive(const DirectedTree& t, const std::vector<Rational>& f) {
    if (static_cast<int>(f.size()) != t.size()) throw std::invalid_argument("one value per vertex required");
    SubadditiveReport rep;
    bool strict = false;
    for (int x = 0; x < t.size(); ++x) {
        if (t.open[static_cast<std::size_t>(x)]) {
            rep.skipped.push_back(x);
            continue;
        }
        Rational sum(0);
        for (const auto& e : t.arrows) {
            if (e.src == x) sum = sum + Rational(e.v.b) * f[e.dst];
            if (e.dst == x) sum = sum + Rational(e.v.a) * f[e.src];
        }
        Rational lhs = Rational(2) * f[x];
        rep.checked.push_back(x);
        if (lhs < sum) rep.failing.push_back(x);
        else if (lhs != sum) strict = true;
    }
    rep.kind = !rep.failing.empty() ? Additivity::fails : strict ? Additivity::strictly_subadditive : Additivity::additive;
    return rep;
}

/// Canonical string of the valued undirected graph of a tree, up to isomorphism.
inline std::string tree_shape(const DirectedTree& t) {
    int n = t.size();
    std::vector<std::vector<std::pair<int, std::pair<int, int>>>> adj(static_cast<std::size_t>(n));
    for (const auto& e : t.arrows) {
        adj[e.src].push_back({e.dst, {e.v.a, e.v.b}});
        adj[e.dst].push_back({e.src, {e.v.b, e.v.a}});
    }
    std::function<std::string(int, int)> enc = [&](int x, int from) {
        std::vector<std::string> kids;
        for (const auto& [y, v] : adj[x])
            if (y != from) kids.push_back(std::to_string(v.first) + "," + std::to_string(v.second) + enc(y, x));
        std::sort(kids.begin(), kids.end());
        std::string s = "(";
        for (const auto& k : kids) s += k;
        return s + ")";
    };
    std::string best;
    for (int r = 0; r < n; ++r) {
        auto s = enc(r, -1);
        if (best.empty() || s < best) best = s;
    }
    return best;
}

inline bool same_valued_graph(const DirectedTree& a, const DirectedTree& b) {
    return a.size() == b.size() && tree_shape(a) == tree_shape(b);
}

enum class Shape { tube, a_infinity_consistent, other, inconclusive };

struct Classification {
    Shape shape = Shape::inconclusive;
    int rank = 0;
    std::string reason;
    std::string to_string() const {
        switch (shape) {
            case Shape::tube: return "tube(" + std::to_string(rank) + ")";
            case Shape::a_infinity_consistent: return "A_inf-consistent";
            case Shape::other: return "other";
            default: return "inconclusive";
        }
    }
};

/// Orbit size of x under tau, if x is periodic within the window.
inline std::optional<int> tau_period(const TranslationQuiver& q, int x) {
    std::optional<int> y = q.tau_of(x);
    for (int k = 1; y && k <= q.size(); ++k) {
        if (*y == x) return k;
        y = q.tau_of(*y);
    }
    return std::nullopt;
}

/// tube(r) when the fragment is tau-periodic with orbit size r and its tree
/// class is a path with (1,1) values that runs into the window boundary.
inline Classification classify_fragment(const TranslationQuiver& q) {
    Classification c;
    if (q.size() == 0) {
        c.reason = "empty fragment";
        return c;
    }
    auto bad = validate(q);
    if (!bad.empty()) {
        c.shape = Shape::other;
        c.reason = bad.front();
        return c;
    }
    std::set<int> periods;
    for (int x = 0; x < q.size(); ++x) {
        auto p = tau_period(q, x);
        if (!p) {
            c.shape = Shape::other;
            c.reason = "not tau-periodic at " + q.labels[x];
            return c;
        }
        periods.insert(*p);
    }
    if (periods.size() != 1) {
        c.shape = Shape::other;
        c.reason = "tau-orbits of different sizes";
        return c;
    }
    c.rank = *periods.begin();
    // base at a mouth vertex: interior with the fewest successors
    int base = -1;
    for (int x = 0; x < q.size(); ++x)
        if (q.interior(x) && (base < 0 || q.succ(x).size() < q.succ(base).size())) base = x;
    if (base < 0) {
        c.reason = "no interior vertex";
        return c;
    }
    auto tc = tree_class(q, base, q.size());
    const auto& t = tc.tree;
    std::vector<int> deg(static_cast<std::size_t>(t.size()), 0);
    bool path = true, unit_values = true, open_end = false;
    for (const auto& e : t.arrows) {
        path = path && ++deg[e.src] <= 2 && ++deg[e.dst] <= 2;
        unit_values = unit_values && e.v == Value{1, 1};
    }
    for (int x = 0; x < t.size(); ++x) open_end = open_end || t.open[static_cast<std::size_t>(x)];
    if (!path || !unit_values) {
        c.shape = Shape::other;
        c.reason = !path ? "tree class is not a path" : "tree class has values other than (1,1)";
        return c;
    }
    if (!open_end) {
        c.shape = Shape::other;
        c.reason = "tree class is a finite path";
        return c;
    }
    if (t.size() < 3) {
        c.shape = Shape::a_infinity_consistent;
        c.reason = "window too small to see past the mouth";
        return c;
    }
    c.shape = Shape::tube;
    c.reason = "periodic with path tree class of length " + std::to_string(t.size());
    return c;
}

inline std::string to_dot(const TranslationQuiver& q, const std::string& name = "fragment") {
    std::ostringstream os;
    os << "digraph " << name << " {\n";
    for (int x = 0; x < q.size(); ++x) {
        os << "  v" << x << " [label=\"" << q.labels[x];
        if (q.weight[x]) os << "\\ne_avg=" << q.weight[x]->to_string();
        os << "\"";
        if (q.boundary[x]) os << ", style=dotted";
        if (q.loop[x]) os << ", peripheries=2";
        os << "];\n";
    }
    for (const auto& e : q.arrows)
        os << "  v" << e.src << " -> v" << e.dst << " [label=\"(" << e.v.a << "," << e.v.b << ")\"];\n";
    for (int x = 0; x < q.size(); ++x)
        if (auto t = q.tau_of(x)) os << "  v" << x << " -> v" << *t << " [style=dashed, label=\"tau\"];\n";
    os << "}\n";
    return os.str();
}

}  // namespace arcurve::quiver
