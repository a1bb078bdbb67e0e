// ipw: exact symbolic workbench for first-order Poisson data along a
// coordinate submanifold S = {y = 0}. See README.md for the file format.

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ipw/cohomology.hpp"
#include "ipw/problem.hpp"

using json = nlohmann::ordered_json;
using namespace ipw;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitNotPoisson = 2;
constexpr int kExitNotSubmanifold = 3;
constexpr int kExitInconsistent = 4;

struct Options {
    std::string file;
    std::string format = "text";
    long long max_weight = -1; // -1: use the file's option (default 2)
    std::string bracket_u, bracket_v;
};

std::string pair_key(const ContextPtr& ctx, std::size_t u, std::size_t v) {
    return ctx->name(u) + "," + ctx->name(v);
}

json input_echo(const ProblemFile& pf) {
    json j;
    j["file"] = pf.file_name;
    j["coordinates"] = pf.coordinates;
    j["normal"] = pf.normal;
    json comps = json::object();
    for (const auto& [t, c] : pf.pi.components())
        comps[pair_key(pf.ctx, t[0], t[1])] = to_string(c);
    j["poisson"] = comps;
    return j;
}

json data_block(const InfinitesimalData& d) {
    const auto& ctx = d.ctx;
    const std::size_t m = d.m, q = d.q, off = m;
    json psi = json::object(), c = json::object(), gamma = json::object(),
         kappa = json::object();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            psi[pair_key(ctx, i, j)] = to_string(d.psi[i][j]);
    for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = a + 1; b < q; ++b) {
            json inner = json::object();
            for (std::size_t e = 0; e < q; ++e)
                if (!d.c[a][b][e].is_zero())
                    inner[ctx->name(off + e)] = to_string(d.c[a][b][e]);
            c[pair_key(ctx, off + a, off + b)] = inner;
        }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t a = 0; a < q; ++a) {
            json inner = json::object();
            for (std::size_t b = 0; b < q; ++b)
                if (!d.gamma[i][a][b].is_zero())
                    inner[ctx->name(off + b)] = to_string(d.gamma[i][a][b]);
            gamma[pair_key(ctx, i, off + a)] = inner;
        }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            json inner = json::object();
            for (std::size_t a = 0; a < q; ++a)
                if (!d.kappa[i][j][a].is_zero())
                    inner[ctx->name(off + a)] = to_string(d.kappa[i][j][a]);
            kappa[pair_key(ctx, i, j)] = inner;
        }
    json j;
    j["psi"] = psi;
    j["c"] = c;
    j["gamma"] = gamma;
    j["kappa"] = kappa;
    return j;
}

void print_tensor_text(std::ostream& os, const char* label, const json& block) {
    os << label << ":\n";
    if (block.empty()) os << "  (all zero)\n";
    for (const auto& [k, v] : block.items()) {
        if (v.is_string()) {
            os << "  " << k << " = " << v.get<std::string>() << "\n";
        } else {
            os << "  " << k << " =";
            if (v.empty()) os << " 0";
            bool first = true;
            for (const auto& [n, p] : v.items()) {
                os << (first ? " " : " + ") << "(" << p.get<std::string>() << ")*" << n;
                first = false;
            }
            os << "\n";
        }
    }
}

json pt_block(const PTReport& r) {
    json j;
    j["pt1"] = r.pt1;
    j["pt2"] = r.pt2;
    j["pt3"] = r.pt3;
    json res = json::array();
    for (const auto& [tag, sec] : r.residuals) {
        json one;
        one["where"] = tag;
        json vals = json::array();
        for (const auto& p : sec) vals.push_back(to_string(p));
        one["residual"] = vals;
        res.push_back(one);
    }
    j["residuals"] = res;
    return j;
}

json dims_json(const SpaceDims& d, std::size_t w) {
    json j;
    j["cocycles"] = d.cocycles[w];
    j["coboundaries"] = d.coboundaries[w];
    j["dim"] = d.quotient[w];
    return j;
}

json cohomology_block(const CohomologyReport& rep) {
    json j;
    j["homogeneous"] = rep.homogeneous;
    j["data_degree"] = rep.data_degree;
    j["truncated"] = rep.truncated;
    j["max_weight"] = rep.w_max;
    j["partial_d_skipped"] = rep.partial_d_skipped;
    json pw = json::array();
    for (long long w = 0; w <= rep.w_max + 1; ++w) {
        json e;
        e["weight"] = w;
        e["poisson"] = dims_json(rep.poisson, w);
        e["ce"] = dims_json(rep.ce, w);
        e["center"] = dims_json(rep.center, w);
        if (w <= rep.w_max) {
            if (!rep.partial_d_skipped) e["partial_d"] = dims_json(rep.partial_d, w);
            e["h1"] = dims_json(rep.h1, w);
            json ms;
            ms["m"] = rep.mspace[w].m_dim;
            ms["m0"] = rep.mspace[w].m0_dim;
            ms["c"] = rep.mspace[w].c_dim;
            ms["inner"] = rep.mspace[w].inn_dim;
            ms["m_mod"] = rep.mspace[w].m_mod;
            ms["m0_mod"] = rep.mspace[w].m0_mod;
            ms["sigma_mod"] = rep.mspace[w].sigma_mod;
            e["m_space"] = ms;
            e["additivity"] = static_cast<bool>(rep.additivity_ok[w]);
            e["bound"] = static_cast<bool>(rep.bound_ok[w]);
        }
        pw.push_back(e);
    }
    j["per_weight"] = pw;
    return j;
}

void print_dims_text(std::ostream& os, const char* name, const SpaceDims& d) {
    os << "  " << name << ":";
    for (std::size_t w = 0; w < d.quotient.size(); ++w)
        os << "  w" << w << "=" << d.quotient[w] << " (" << d.cocycles[w] << "/"
           << d.coboundaries[w] << ")";
    os << "\n";
}

void print_cohomology_text(std::ostream& os, const CohomologyReport& rep) {
    os << "weight mode: " << (rep.homogeneous ? "homogeneous" : "filtered (truncated)")
       << ", data degree " << rep.data_degree << ", window 0.." << rep.w_max << "\n";
    os << "dims per weight, written dim (cocycles/coboundaries):\n";
    print_dims_text(os, "poisson H1 ", rep.poisson);
    print_dims_text(os, "ce H1      ", rep.ce);
    print_dims_text(os, "center H0  ", rep.center);
    if (rep.partial_d_skipped)
        os << "  partial_d H1: skipped (center module has no free weight-graded basis)\n";
    else
        print_dims_text(os, "partial_d H1", rep.partial_d);
    print_dims_text(os, "H1(P)      ", rep.h1);
    for (long long w = 0; w <= rep.w_max; ++w)
        os << "  weight " << w << ": M/(C+Inn) = " << rep.mspace[w].m_mod
           << ", M0/(C0+Inn) = " << rep.mspace[w].m0_mod
           << ", additivity " << (rep.additivity_ok[w] ? "ok" : "FAIL") << ", bound "
           << (rep.bound_ok[w] ? "ok" : "FAIL") << "\n";
}

struct LoadedProblem {
    ProblemFile pf;
    InfinitesimalData data;
};

/// Parse + Jacobi + submanifold checks; throws/exits per the exit-code table.
int validate_problem(const Options& opt, ProblemFile& pf, std::string& diag) {
    try {
        pf = load_problem(opt.file);
    } catch (const ProblemError& e) {
        diag = std::string("parse error: ") + e.what();
        return kExitParse;
    }
    if (!jacobi_check(pf.pi).holds) {
        diag = "the bivector is not Poisson: its Schouten self-bracket is nonzero";
        return kExitNotPoisson;
    }
    auto sub = check_poisson_submanifold(pf.pi, pf.ctx);
    if (!sub.ok) {
        diag = "S = {normal = 0} is not a Poisson submanifold; offending components:";
        for (const auto& [a, b] : sub.offending) diag += " " + a + "," + b;
        return kExitNotSubmanifold;
    }
    return kExitOk;
}

void emit(const Options& opt, const json& j, const std::string& text) {
    if (opt.format == "json")
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

long long effective_weight(const Options& opt, const ProblemFile& pf) {
    if (opt.max_weight >= 0) return opt.max_weight;
    return pf.max_weight;
}

int run(const std::string& cmd, const Options& opt) {
    ProblemFile pf;
    std::string diag;
    int st = validate_problem(opt, pf, diag);
    if (st != kExitOk) {
        if (opt.format == "json") {
            json j;
            j["input_echo"] = json::object({{"file", opt.file}});
            j["error"] = diag;
            j["exit_code"] = st;
            std::cout << j.dump(2) << "\n";
        } else {
            std::cerr << diag << "\n";
        }
        return st;
    }
    if (cmd == "validate") {
        json j;
        j["input_echo"] = input_echo(pf);
        j["valid"] = true;
        emit(opt, j, "ok: Poisson bivector with Poisson submanifold {normal = 0}\n");
        return kExitOk;
    }

    InfinitesimalData d = extract(pf.pi, pf.ctx);
    if (cmd == "extract") {
        json j;
        j["input_echo"] = input_echo(pf);
        j["data"] = data_block(d);
        std::ostringstream os;
        print_tensor_text(os, "psi", j["data"]["psi"]);
        print_tensor_text(os, "c", j["data"]["c"]);
        print_tensor_text(os, "gamma", j["data"]["gamma"]);
        print_tensor_text(os, "kappa", j["data"]["kappa"]);
        emit(opt, j, os.str());
        return kExitOk;
    }
    if (cmd == "verify-pt") {
        PTReport r = verify_pt(d);
        json j;
        j["input_echo"] = input_echo(pf);
        j["data"] = data_block(d);
        j["pt"] = pt_block(r);
        std::ostringstream os;
        os << "pt1 " << (r.pt1 ? "ok" : "FAIL") << ", pt2 " << (r.pt2 ? "ok" : "FAIL")
           << ", pt3 " << (r.pt3 ? "ok" : "FAIL") << "\n";
        for (const auto& [tag, sec] : r.residuals) {
            os << "  residual " << tag << ":";
            for (const auto& p : sec) os << " " << to_string(p);
            os << "\n";
        }
        emit(opt, j, os.str());
        return r.all() ? kExitOk : kExitInconsistent;
    }
    if (cmd == "bracket") {
        AffineElement u, v;
        try {
            u = poly_to_affine(pf.ctx, parse_poly(opt.bracket_u, pf.ctx));
            v = poly_to_affine(pf.ctx, parse_poly(opt.bracket_v, pf.ctx));
        } catch (const std::exception& e) {
            std::cerr << "argument error: " << e.what() << "\n";
            return kExitParse;
        }
        Poly res = affine_to_poly(pf.ctx, affine_bracket(d, u, v));
        json j;
        j["input_echo"] = input_echo(pf);
        j["bracket"] = json::object(
            {{"u", opt.bracket_u}, {"v", opt.bracket_v}, {"result", to_string(res)}});
        emit(opt, j, to_string(res) + "\n");
        return kExitOk;
    }

    WeightWindow win{effective_weight(opt, pf)};
    if (cmd == "cohomology") {
        CohomologyReport rep = exact_sequence_report(d, win);
        json j;
        j["input_echo"] = input_echo(pf);
        j["data"] = data_block(d);
        j["cohomology"] = cohomology_block(rep);
        std::ostringstream os;
        print_cohomology_text(os, rep);
        emit(opt, j, os.str());
        return kExitOk;
    }
    // theorem1
    TheoremVerdict v = theorem1_check(d, win);
    json j;
    j["input_echo"] = input_echo(pf);
    j["data"] = data_block(d);
    PTReport ptr = verify_pt(d);
    j["pt"] = pt_block(ptr);
    j["cohomology"] = cohomology_block(v.report);
    json crit;
    crit["cond_i_poisson_h1_zero"] = v.cond_i;
    crit["cond_ii_ce_h1_zero"] = v.cond_ii;
    crit["cond_iii_centerless"] = v.cond_iii;
    crit["criterion_i_ii_iii"] = v.set1;
    crit["generalized_partial_d_h1_zero"] = v.gen_iii;
    crit["generalized_criterion"] = v.set2;
    crit["h1_zero_direct"] = v.h1_zero;
    crit["conclusive"] = v.conclusive;
    j["criteria"] = crit;
    j["verdict"] = v.verdict;
    std::ostringstream os;
    print_cohomology_text(os, v.report);
    os << "conditions: (i) " << (v.cond_i ? "holds" : "fails") << ", (ii) "
       << (v.cond_ii ? "holds" : "fails") << ", (iii) " << (v.cond_iii ? "holds" : "fails")
       << "; generalized third condition " << (v.gen_iii ? "holds" : "fails") << "\n";
    os << "verdict: " << v.verdict << "\n";
    emit(opt, j, os.str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact first-order Poisson workbench around a coordinate submanifold"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
    app.add_option("--max-weight", opt.max_weight, "weight window upper bound")
        ->check(CLI::NonNegativeNumber);

    std::string cmd;
    for (const char* name : {"validate", "extract", "verify-pt", "bracket", "cohomology",
                             "theorem1"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->fallthrough();
        sub->add_option("file", opt.file, "problem file")->required();
        if (std::string(name) == "bracket") {
            sub->add_option("u", opt.bracket_u, "first fiberwise-affine element")->required();
            sub->add_option("v", opt.bracket_v, "second fiberwise-affine element")->required();
        }
        sub->callback([&cmd, name] { cmd = name; });
    }

    CLI11_PARSE(app, argc, argv);
    try {
        return run(cmd, opt);
    } catch (const InconsistencyError& e) {
        std::cerr << "internal inconsistency: " << e.what() << "\n";
        return kExitInconsistent;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
}
