#pragma once

#include "explore.hpp"
#include "section7.hpp"

#include <random>
#include <string>
#include <utility>
#include <vector>

namespace arcurve {

/// Running tally of every trace computed: integrality for all, positive
/// valuation for those of nonisomorphisms.
struct TraceAudit {
    std::size_t traces = 0;
    std::size_t not_integral = 0;
    std::size_t nonisos = 0;
    std::size_t not_in_radical = 0;

    template <class K>
    void record(const TraceValue<K>& tv, bool noniso) {
        ++traces;
        if (!tv.is_integral()) ++not_integral;
        if (noniso) {
            ++nonisos;
            if (tv.min_valuation() < 1) ++not_in_radical;
        }
    }
    bool ok() const { return traces > 0 && not_integral == 0 && not_in_radical == 0; }
    std::string summary() const {
        return std::to_string(traces - not_integral) + "/" + std::to_string(traces) + " integral, " +
               std::to_string(nonisos - not_in_radical) + "/" + std::to_string(nonisos) + " nonisomorphisms in the radical";
    }
};

/// h is not an isomorphism: nonzero degree, or not bijective on minimal generators.
template <class K>
bool is_noniso(const GradedHom<K>& h) {
    if (h.degree != 0) return true;
    return rank(generator_map(h)) != h.src->ngens();
}

template <class K>
ModPtr<K> ideal_module(const CurvePtr<K>& C) {
    return GradedModule<K>::from_mf(C, mf_from_ideal(C->ring));
}

/// Nonfree summands of push(M) for every nonfree summand of M.
template <class K>
std::vector<ModPtr<K>> push_summands(const ModPtr<K>& M, const GammaDatum<K>& gd, std::uint64_t seed) {
    std::vector<ModPtr<K>> out;
    for (const auto& X : decompose(M, seed).parts)
        for (const auto& Y : decompose(push(X, gd).middle, seed).parts) out.push_back(Y);
    return out;
}

/// {I, syz I, push(I), summands of push(push(I))}.
template <class K>
std::vector<std::pair<std::string, ModPtr<K>>> oracle_corpus(const CurvePtr<K>& C, const GammaDatum<K>& gd,
                                                              std::uint64_t seed) {
    std::vector<std::pair<std::string, ModPtr<K>>> out;
    auto I = ideal_module(C);
    out.emplace_back("I", I);
    out.emplace_back("syz I", syz_module(I));
    auto P = push(I, gd).middle;
    out.emplace_back("push(I)", P);
    std::size_t k = 0;
    for (const auto& Y : push_summands(P, gd, seed)) out.emplace_back("push(push(I))[" + std::to_string(k++) + "]", Y);
    return out;
}

/// Trace criterion against lifting through the free cover on a basis of
/// End(M)_d for |d| <= window.
template <class K>
Check oracle_equivalence(const std::string& name, const ModPtr<K>& M, int window, TraceAudit* audit) {
    StableOracle<K> O(M);
    const auto& gens = O.generators().gens;
    std::size_t agree = 0, total = 0;
    std::string first_bad;
    for (int d = -window; d <= window; ++d) {
        for (const auto& h : hom_graded(M, M, d)) {
            std::vector<TraceValue<K>> w;
            bool a = O.stably_zero_trace(h, &w);
            bool b = O.stably_zero_bruteforce(h);
            ++total;
            if (a == b) ++agree;
            else if (first_bad.empty()) first_bad = " first disagreement in degree " + std::to_string(d);
            if (audit)
                for (std::size_t i = 0; i < w.size(); ++i) audit->record(w[i], is_noniso(compose(gens[i], h)));
        }
    }
    return {"oracle agreement on " + name, agree == total && total > 0,
            std::to_string(agree) + "/" + std::to_string(total) + first_bad};
}

template <class K>
Report suite_trace_oracle(const CurvePtr<K>& C, const GammaDatum<K>& gd, std::uint64_t seed, int window,
                          TraceAudit* audit = nullptr) {
    Report rep{"trace-oracle", {}};
    for (const auto& [name, M] : oracle_corpus(C, gd, seed)) rep.checks.push_back(oracle_equivalence(name, M, window, audit));
    return rep;
}

/// The traces behind the main theorem check, for the audit.
template <class K>
void audit_main_theorem(const ModPtr<K>& M, const GammaDatum<K>& gd, TraceAudit& audit) {
    auto h = gamma_endo(M, gd);
    audit.record(trace_Q(h), is_noniso(h));
    StableOracle<K> O(M);
    const auto& gens = O.generators().gens;
    for (const auto& g : O.nonunit_generators()) {
        auto gh = compose(g, h);
        std::vector<TraceValue<K>> w;
        O.stably_zero_trace(gh, &w);
        for (std::size_t i = 0; i < w.size(); ++i) audit.record(w[i], is_noniso(compose(gens[i], gh)));
    }
}

/// The traces behind the syzygy check, for the audit.
template <class K>
void audit_syz_gamma(const ModPtr<K>& M, const GammaDatum<K>& gd, TraceAudit& audit) {
    auto S = syz_module(M);
    auto f = gamma_endo(M, gd);
    auto t = syz_transport(f, S);
    audit.record(trace_Q(f), is_noniso(f));
    audit.record(trace_Q(t), is_noniso(t));
    const auto& R = M->ring();
    int rM = rank_vector(*M)[0], rS = rank_vector(*S)[0];
    auto h1 = hom_add(hom_scale(t, R.scalar(rS)), hom_scale(gamma_endo(S, gd), R.scalar(rM)));
    StableOracle<K> OS(S);
    const auto& gens = OS.generators().gens;
    std::vector<TraceValue<K>> w;
    OS.stably_zero_trace(h1, &w);
    for (std::size_t i = 0; i < w.size(); ++i) audit.record(w[i], is_noniso(compose(gens[i], h1)));
}

/// (phi, psi), (xi, eta) and (theta, theta') from I = (x^m, y^n).
template <class K>
Report suite_mf_identities(const CurvePtr<K>& C, const GammaDatum<K>& gd) {
    const auto& R = C->ring;
    Report rep{"mf-identities", {}};
    auto mf = mf_from_ideal(R);
    rep.add("(phi, psi)", mf_check(mf, R).ok);
    auto s = push(GradedModule<K>::from_mf(C, mf), gd, ideal_alpha(mf, R, gd));
    rep.add("(xi, eta)", mf_check(s.block, R).ok);
    auto w = solve_W(s, gd);
    rep.add("(theta, theta')", mf_check(build_theta(s, w, gd).mf, R).ok);
    return rep;
}

struct RandomInstance {
    int p, q, m, n;
    long b;
    std::string f;
};

/// A valid (p, q, m, n, f) with p, q <= max_weight and R reduced.
inline RandomInstance random_instance(std::mt19937_64& rng, int max_weight = 7) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    for (;;) {
        int p = pick(3, max_weight), q = pick(3, max_weight);
        if (std::gcd(p, q) != 1 || p - 2 < 1) continue;
        long b = pick(1, 3) * (pick(0, 1) ? 1 : -1);
        long c = pick(-3, 3);
        std::string f, cs = (c < 0 ? " - " : " + ") + std::to_string(c < 0 ? -c : c);
        switch (pick(0, 3)) {
            case 0: f = "1"; break;
            case 1: f = "y"; break;
            case 2: f = "y^" + std::to_string(q) + cs + "*x^" + std::to_string(p); break;
            default: f = "y^" + std::to_string(q + 1) + cs + "*x^" + std::to_string(p) + "*y"; break;
        }
        if (f.find("x") != std::string::npos && (c == 0 || c == b)) continue;
        return {p, q, pick(1, p - 2), pick(2, q - 1), b, f};
    }
}

inline std::string to_string(const RandomInstance& r) {
    return "p=" + std::to_string(r.p) + " q=" + std::to_string(r.q) + " m=" + std::to_string(r.m) +
           " n=" + std::to_string(r.n) + " b=" + std::to_string(r.b) + " f=" + r.f;
}

}  // namespace arcurve
