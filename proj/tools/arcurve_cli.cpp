// arcurve: command-line front end for the AR-sequence toolkit.
//
// Exit codes: 0 pass, 1 verification failure, 2 input error,
// 3 certification failure (window not saturated and similar).

#include <arcurve/suites.hpp>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

using json = nlohmann::json;
using namespace arcurve;

namespace {

enum Exit { kPass = 0, kFail = 1, kInput = 2, kCert = 3 };

struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct JobSpec {
    std::string field = "Q";
    std::optional<int> p, q, m, n;
    std::string b, f;
    std::string source;
};

struct Options {
    std::string config;
    std::string which;
    std::string module = "I";
    int depth = 2;
    std::optional<std::uint64_t> seed;
    std::optional<int> window;
    std::string out;
    std::string format = "json";
};

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

int parse_int(const std::string& v, const std::string& where) {
    std::size_t pos = 0;
    int out = 0;
    try {
        out = std::stoi(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != v.size()) throw InputError(where + ": expected an integer, got '" + v + "'");
    return out;
}

JobSpec read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path + ": cannot open");
    JobSpec spec;
    spec.source = path;
    std::map<std::string, int> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::string where = path + ":" + std::to_string(lineno);
        auto eq = line.find('=');
        if (eq == std::string::npos) throw InputError(where + ": expected key=value");
        auto key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (val.empty()) throw InputError(where + ": empty value for '" + key + "'");
        if (seen.count(key)) throw InputError(where + ": duplicate key '" + key + "' (first on line " + std::to_string(seen[key]) + ")");
        seen[key] = lineno;
        if (key == "field") spec.field = val;
        else if (key == "p") spec.p = parse_int(val, where);
        else if (key == "q") spec.q = parse_int(val, where);
        else if (key == "m") spec.m = parse_int(val, where);
        else if (key == "n") spec.n = parse_int(val, where);
        else if (key == "b") spec.b = val;
        else if (key == "f") spec.f = val;
        else throw InputError(where + ": unknown key '" + key + "'");
    }
    for (const char* k : {"p", "q", "b", "f"})
        if (!seen.count(k)) throw InputError(path + ": missing key '" + std::string(k) + "'");
    return spec;
}

std::string sha256_hex(const std::string& text) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return os.str();
}

json report_json(const Report& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    return {{"name", r.name}, {"pass", r.pass()}, {"checks", checks}};
}

template <class K>
json matrix_json(const GradedMatrix<K>& A) {
    return {{"entries", A.to_string()}, {"row_degrees", A.row_degrees()}, {"col_degrees", A.col_degrees()}};
}

template <class K>
json module_json(const ModPtr<K>& M) {
    json j{{"generator_degrees", M->gen_degrees()},
           {"ranks", rank_vector(*M)},
           {"multiplicity", multiplicity(*M).to_string()}};
    if (M->mf()) j["phi"] = matrix_json(M->mf()->phi);
    return j;
}

template <class K>
class Runner {
public:
    Runner(const JobSpec& spec, const Options& opt, K one) : spec_(spec), opt_(opt) {
        auto f = parse_wpoly(spec.f, one);
        auto bp = parse_wpoly(spec.b, one);
        if (bp.size() > 1 || (bp.size() == 1 && bp.terms().begin()->first != Mono{0, 0}))
            throw InputError(spec.source + ": b must be a constant");
        K b = bp.is_zero() ? one.scalar(0) : bp.terms().begin()->second;
        C_ = Curve<K>::make(HypersurfaceRing<K>(*spec.p, *spec.q, b, f, spec.m, spec.n, one));
        const auto& R = C_->ring;
        canonical_ = "field=" + spec.field + "\np=" + std::to_string(R.p()) + "\nq=" + std::to_string(R.q()) +
                     "\nb=" + WPoly<K>(R.b()).to_string() + "\nf=" + R.f().to_string();
        if (R.has_ideal()) canonical_ += "\nm=" + std::to_string(*R.m()) + "\nn=" + std::to_string(*R.n());
        canonical_ += "\n";
    }

    int run(const std::string& command, json& out, std::string& dot) {
        const auto& R = C_->ring;
        out["command"] = command;
        out["spec"] = {{"field", spec_.field}, {"p", R.p()}, {"q", R.q()}, {"b", WPoly<K>(R.b()).to_string()},
                       {"f", R.f().to_string()}};
        if (R.has_ideal()) {
            out["spec"]["m"] = *R.m();
            out["spec"]["n"] = *R.n();
        }
        out["spec_hash"] = sha256_hex(canonical_);
        out["seed"] = seed();
        out["windows"] = json::object();
        if (command == "ring-info") return ring_info(out);
        if (command == "verify") return verify(out);
        if (command == "explore") return explore(out, dot);
        if (command == "push") return push_cmd(out);
        if (command == "decompose") return decompose_cmd(out);
        throw InputError("unknown command " + command);
    }

private:
    std::uint64_t seed() const { return *opt_.seed; }
    int window() const { return opt_.window ? *opt_.window : C_->ring.deg_g(); }

    ModPtr<K> ideal() const {
        if (!C_->ring.has_ideal()) throw InputError(spec_.source + ": m and n are required for this command");
        return ideal_module(C_);
    }

    int ring_info(json& out) {
        const auto& R = C_->ring;
        out["ring"] = {{"g", R.g().to_string()}, {"deg_g", R.deg_g()}, {"v", R.v()},
                       {"reduced", C_->reduced}, {"domain", C_->is_domain()}};
        json brs = json::array();
        int zwin = 0;
        for (const auto& br : C_->branches) {
            json jb{{"kind", to_string(br.kind)},
                    {"h", br.h.to_string()},
                    {"semigroup", br.semigroup.generators},
                    {"frobenius", br.semigroup.frobenius},
                    {"conductor", br.semigroup.conductor}};
            auto gp = gamma_prime(R, br);
            jb["gamma_prime"] = "(" + gp.value.num.to_string() + ")/(" + gp.value.den.to_string() + ")";
            brs.push_back(jb);
            zwin = std::max(zwin, br.semigroup.conductor + R.deg_g());
        }
        out["branches"] = brs;
        if (!C_->reduced) {
            out["pass"] = true;
            return kPass;
        }
        auto gd = gamma_for(C_);
        out["singular_branch"] = gd.branch_index;
        out["gamma"] = {{"branch", gd.branch_index}, {"z", gd.z.to_string()}, {"gamma", gd.gamma.to_string()},
                        {"degree", gd.degree()}};
        out["windows"]["z_search_degrees"] = {0, zwin};
        auto chk = check_gamma(gd);
        out["reports"] = json::array({report_json(chk)});
        out["pass"] = chk.pass();
        return chk.pass() ? kPass : kFail;
    }

    int verify(json& out) {
        std::vector<Report> reps;
        if (opt_.which == "main-theorem") {
            auto I = ideal();
            auto gd = gamma_for(C_);
            reps.push_back(verify_main_theorem(I, gd, seed()));
            StableOracle<K> O(I);
            out["windows"]["end_generators"] = {O.generators().lo, O.generators().hi};
        } else if (opt_.which == "syz-gamma") {
            if (!C_->is_domain()) throw InputError("ring not a domain");
            auto I = ideal();
            auto gd = gamma_for(C_);
            auto a = verify_syz_gamma(I, gd);
            a.name += " on I";
            auto b = verify_syz_gamma(push(I, gd).middle, gd);
            b.name += " on push(I)";
            reps.push_back(a);
            reps.push_back(b);
        } else if (opt_.which == "trace-oracle") {
            if (!C_->reduced) throw InputError("ring not reduced");
            reps.push_back(suite_trace_oracle(C_, gamma_for(C_), seed(), window()));
            out["windows"]["endomorphism_degrees"] = {-window(), window()};
        } else if (opt_.which == "section7") {
            auto r = section7_pipeline(C_, seed());
            reps.push_back(r.report);
            out["section7"] = {{"degrees", r.degrees}, {"closed_form", r.closed_form}, {"shift", r.shift},
                               {"nonfree_summands", r.nonfree_summands}, {"free_rank", r.free_rank},
                               {"W34", r.W34.to_string()}};
            out["assumption"] = "CM(R) has infinitely many indecomposables (not verified)";
        } else {
            throw InputError("verify: unknown suite '" + opt_.which + "'");
        }
        bool ok = true;
        out["reports"] = json::array();
        for (const auto& r : reps) {
            out["reports"].push_back(report_json(r));
            ok = ok && r.pass();
        }
        out["pass"] = ok;
        return ok ? kPass : kFail;
    }

    int explore(json& out, std::string& dot) {
        auto I = ideal();
        if (opt_.depth < 0) throw InputError("--depth must be nonnegative");
        auto ex = explore_component(I, gamma_for(C_), opt_.depth, seed());
        const auto& qv = ex.quiver;
        json verts = json::array();
        for (int v = 0; v < qv.size(); ++v) {
            json jv{{"id", v},
                    {"label", qv.labels[v]},
                    {"depth", ex.depth[v]},
                    {"expanded", static_cast<bool>(ex.expanded[v])},
                    {"boundary", static_cast<bool>(qv.boundary[v])},
                    {"e_avg", ex.e_avg[v].to_string()},
                    {"module", module_json(ex.modules[v])}};
            if (auto t = qv.tau_of(v)) jv["tau"] = *t;
            if (ex.expanded[v]) {
                json parts = json::object();
                for (const auto& [x, c] : ex.push_parts[v]) parts[qv.labels[x]] = c;
                jv["push"] = {{"nonfree", parts}, {"free_rank", ex.push_free_rank[v]},
                              {"e_avg", e_avg_of_push(ex, v).to_string()}};
            }
            if (ex.push2_nonfree[v]) jv["push2_nonfree_summands"] = *ex.push2_nonfree[v];
            verts.push_back(jv);
        }
        json arrows = json::array();
        for (const auto& a : qv.arrows) arrows.push_back({{"src", a.src}, {"dst", a.dst}, {"value", {a.v.a, a.v.b}}});
        auto issues = quiver::validate(qv);
        out["quiver"] = {{"vertices", verts}, {"arrows", arrows}, {"validation", issues}};
        out["classification"] = ex.classification;
        out["fragment"] = ex.fragment.to_string() + (ex.fragment.reason.empty() ? "" : ": " + ex.fragment.reason);
        out["conflicts"] = ex.conflicts;
        if (ex.two_summand_witness) out["two_summand_witness"] = qv.labels[*ex.two_summand_witness];
        out["depth"] = opt_.depth;
        dot = quiver::to_dot(qv, "component");
        bool ok = issues.empty() && ex.conflicts.empty();
        out["pass"] = ok;
        return ok ? kPass : kFail;
    }

    int push_cmd(json& out) {
        const auto& R = C_->ring;
        auto I = ideal();
        auto gd = gamma_for(C_);
        auto s = push(I, gd);
        const auto& a = s.middle->gen_degrees();
        int lo = *std::min_element(a.begin(), a.end()), hi = lo + 3 * R.deg_g();
        Report rep{"push", {}};
        auto mc = mf_check(s.block, R);
        rep.add("(xi, eta) is a factorization", mc.ok);
        rep.checks.push_back(sequence_exact(s, lo, hi));
        auto dec = decompose(s.middle, seed());
        out["alpha"] = matrix_json(s.alpha);
        out["beta"] = matrix_json(s.beta);
        out["xi"] = matrix_json(s.block.phi);
        out["eta"] = matrix_json(s.block.psi);
        out["middle"] = module_json(s.middle);
        out["middle_nonfree_summands"] = dec.parts.size();
        out["middle_free_rank"] = dec.free_rank();
        out["windows"]["exactness_degrees"] = {lo, hi};
        out["reports"] = json::array({report_json(rep)});
        out["pass"] = rep.pass();
        return rep.pass() ? kPass : kFail;
    }

    int decompose_cmd(json& out) {
        auto I = ideal();
        ModPtr<K> M;
        if (opt_.module == "I") M = I;
        else if (opt_.module == "syz") M = syz_module(I);
        else if (opt_.module == "push") M = push(I, gamma_for(C_)).middle;
        else throw InputError("--module must be one of I, syz, push");
        auto dec = decompose(M, seed());
        json parts = json::array();
        for (const auto& X : dec.parts) parts.push_back(module_json(X));
        out["module"] = opt_.module;
        out["nonfree"] = parts;
        out["free_degrees"] = dec.free_degrees;
        out["pass"] = true;
        return kPass;
    }

    JobSpec spec_;
    Options opt_;
    CurvePtr<K> C_;
    std::string canonical_;
};

void emit(const Options& opt, const std::string& text) {
    if (opt.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(opt.out);
    if (!f) throw InputError(opt.out + ": cannot write");
    f << text;
}

int dispatch(const std::string& command, Options opt) {
    if (!opt.seed) {
        if (const char* env = std::getenv("AR_CURVE_SEED")) opt.seed = static_cast<std::uint64_t>(parse_int(env, "AR_CURVE_SEED"));
        else opt.seed = 1;
    }
    if (opt.format != "json" && opt.format != "dot") throw InputError("--format must be json or dot");
    if (opt.format == "dot" && command != "explore") throw InputError("--format dot is only available for explore");
    auto spec = read_config(opt.config);
    json out;
    std::string dot;
    int code;
    if (spec.field == "Q") {
        code = Runner<Rational>(spec, opt, Rational(1)).run(command, out, dot);
    } else if (spec.field.size() > 1 && spec.field[0] == 'F') {
        long l = parse_int(spec.field.substr(1), spec.source + ": field");
        ModP one(1, static_cast<std::uint64_t>(l));
        code = Runner<ModP>(spec, opt, one).run(command, out, dot);
    } else {
        throw InputError(spec.source + ": field must be Q or F<prime>");
    }
    emit(opt, opt.format == "dot" ? dot : out.dump(2) + "\n");
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Auslander-Reiten sequences on graded plane curve singularities"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_option("--seed", opt.seed, "RNG seed (falls back to AR_CURVE_SEED, then 1)");
    app.add_option("--window", opt.window, "endomorphism degree window |d| <= W (default deg g)");
    app.add_option("--out", opt.out, "output file (default stdout)");
    app.add_option("--format", opt.format, "json or dot")->check(CLI::IsMember({"json", "dot"}));

    auto* info = app.add_subcommand("ring-info", "branches, semigroups and the gamma datum");
    info->add_option("config", opt.config)->required();
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", opt.which, "main-theorem, syz-gamma, trace-oracle or section7")
        ->required()
        ->check(CLI::IsMember({"main-theorem", "syz-gamma", "trace-oracle", "section7"}));
    verify->add_option("config", opt.config)->required();
    auto* explore = app.add_subcommand("explore", "explore the stable AR component of I = (x^m, y^n)");
    explore->add_option("config", opt.config)->required();
    explore->add_option("--depth", opt.depth, "BFS depth");
    auto* push = app.add_subcommand("push", "the AR sequence starting at I");
    push->add_option("config", opt.config)->required();
    auto* dec = app.add_subcommand("decompose", "graded indecomposable summands");
    dec->add_option("config", opt.config)->required();
    dec->add_option("--module", opt.module, "I, syz or push");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kPass : kInput;
    }
    try {
        return dispatch(app.get_subcommands().front()->get_name(), opt);
    } catch (const WindowNotSaturated& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCert;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCert;
    }
}
