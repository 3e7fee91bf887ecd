// extbloch: volume and Chern-Simons invariant from ordered triangulations.

#include "extbloch/errors.hpp"
#include "extbloch/invariants.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

using namespace extbloch;
using json = nlohmann::ordered_json;

namespace {

enum Exit { ok = 0, parse_failure = 1, solver_failure = 2, flattening_failure = 3 };

std::string fmt(double x) {
    if (x == 0.0) x = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

double round15(double x) { return std::stod(fmt(x)); }

std::string fmt(cplx z) {
    std::string s = fmt(z.real());
    if (z.imag() != 0.0) s += (z.imag() < 0 ? "-" : "+") + fmt(std::abs(z.imag())) + "i";
    return s;
}

struct Common {
    double tol = 1e-12;
    std::uint64_t seed = 0;
    std::string format = "text";

    void attach(CLI::App* cmd) {
        cmd->add_option("--tol", tol, "Newton tolerance (default 1e-12, or EXTBLOCH_TOL)");
        cmd->add_option("--seed", seed, "seed for generic choices")->capture_default_str();
        cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    }

    PipelineOptions options() const {
        PipelineOptions o;
        o.newton.tol = tol;
        o.seed = seed;
        return o;
    }
};

json report_json(const InvariantReport& r) {
    json beta = json::array();
    for (const BlochTerm& t : r.beta.terms())
        beta.push_back({{"z", {round15(t.param.z.real()), round15(t.param.z.imag())}},
                        {"p", t.param.p},
                        {"q", t.param.q},
                        {"coef", t.coef}});
    return {{"volume", round15(r.volume)},
            {"cs_mod_pi2", round15(r.cs)},
            {"cs_over_2pi2_mod_half", round15(r.cs_over_2pi2)},
            {"beta", beta},
            {"method", to_string(r.method)},
            {"warnings", r.warnings}};
}

void print_report(std::ostream& os, const std::string& title, const InvariantReport& r) {
    os << title << " (" << to_string(r.method) << ")\n"
       << "  volume              " << fmt(r.volume) << "\n"
       << "  cs mod pi^2         " << fmt(r.cs) << "\n"
       << "  cs/(2 pi^2) mod 1/2 " << fmt(r.cs_over_2pi2) << "\n"
       << "  beta\n";
    for (const BlochTerm& t : r.beta.terms())
        os << "    " << (t.coef > 0 ? "+" : "") << t.coef << " [" << fmt(t.param.z) << "; " << t.param.p << ", "
           << t.param.q << "]\n";
    if (r.warnings.empty()) os << "  warnings: none\n";
    for (const std::string& w : r.warnings) os << "  warning: " << w << "\n";
}

void emit(const std::string& format, const std::string& title, const std::vector<InvariantReport>& reports) {
    if (format == "json") {
        if (reports.size() == 1) {
            std::cout << report_json(reports[0]).dump(2) << "\n";
        } else {
            json all = json::array();
            for (const auto& r : reports) all.push_back(report_json(r));
            std::cout << all.dump(2) << "\n";
        }
        return;
    }
    for (const auto& r : reports) print_report(std::cout, title, r);
    if (reports.size() == 2)
        std::cout << "methods differ by " << fmt(reports[0].r.distance(reports[1].r)) << " mod pi^2\n";
}

FillingSpec parse_fillings(const std::vector<std::string>& specs) {
    static const std::regex re(R"(\s*(\d+)\s*=\s*(-?\d+)\s*,\s*(-?\d+)\s*(?:,\s*(-?\d+)\s*,\s*(-?\d+)\s*)?)");
    FillingSpec out;
    for (const std::string& s : specs) {
        std::smatch m;
        if (!std::regex_match(s, m, re)) throw ParseError("--fill " + s + ": expected CUSP=alpha,beta[,gamma,delta]");
        const auto cusp = std::stoul(m[1]);
        if (out.size() <= cusp) out.resize(cusp + 1);
        if (out[cusp]) throw ParseError("--fill: cusp " + m[1].str() + " given twice");
        const Int a = std::stoll(m[2]);
        const Int b = std::stoll(m[3]);
        out[cusp] = m[4].matched ? make_filling(a, b, std::stoll(m[4]), std::stoll(m[5])) : make_filling(a, b);
    }
    return out;
}

int run_invariants(const std::string& path, const std::vector<std::string>& fills, const std::string& method,
                   const Common& c) {
    const OrderedTriangulation tri = load_triangulation(path);
    FillingSpec fillings;
    try {
        fillings = parse_fillings(fills);
    } catch (const DomainError& e) {
        throw ParseError(std::string("--fill: ") + e.what());
    }
    PipelineOptions o = c.options();
    o.direct = method != "corrected";
    o.corrected = method != "direct";
    const PipelineResult res = run_pipeline(tri, fillings, o);
    std::vector<InvariantReport> reports;
    if (res.direct) reports.push_back(*res.direct);
    if (res.corrected) reports.push_back(*res.corrected);
    emit(c.format, tri.name(), reports);
    return ok;
}

int run_lens(int n, const Common& c) {
    const LensResult l = lens_space_class(n, c.seed);
    if (c.format == "json") {
        json j = report_json(l.report);
        j["n"] = n;
        j["r"] = {round15(l.report.r.real()), round15(l.report.r.imag())};
        j["expected_r"] = round15(pi_sq / n);
        j["residual"] = round15(l.report.r.distance(ModPiSquared(cplx(pi_sq / n, 0.0))));
        std::cout << j.dump(2) << "\n";
        return ok;
    }
    print_report(std::cout, "L(" + std::to_string(n) + ",1)", l.report);
    std::cout << "R mod pi^2          " << fmt(l.report.r.value()) << "\n"
              << "pi^2/n              " << fmt(pi_sq / n) << "\n"
              << "residual            " << fmt(l.report.r.distance(ModPiSquared(cplx(pi_sq / n, 0.0)))) << "\n";
    return ok;
}

int run_five_term(int count, const Common& c) {
    const FiveTermSweep s = five_term_sweep(count, c.seed);
    if (c.format == "json") {
        std::cout << json{{"count", s.count}, {"max_residual", s.max_residual}, {"criteria_agree", s.criteria_agree}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "instances           " << s.count << "\n"
                  << "max residual        " << fmt(s.max_residual) << "\n"
                  << "criteria agree      " << s.criteria_agree << "/" << s.count << "\n";
    }
    return s.criteria_agree == s.count ? ok : solver_failure;
}

OrderedTriangulation apply_move(const OrderedTriangulation& tri, const std::string& move) {
    static const std::regex face(R"(23:face=(\d+)/(\d+))");
    static const std::regex edge(R"(32:edge=(\d+))");
    std::smatch m;
    if (std::regex_match(move, m, face)) return pachner_23(tri, std::stoi(m[1]), std::stoi(m[2]));
    if (std::regex_match(move, m, edge)) return pachner_32(tri, std::stoi(m[1]));
    throw ParseError("--move " + move + ": expected 23:face=TET/FACE or 32:edge=EDGE");
}

int run_pachner(const std::string& path, const std::string& move, const std::string& output, const Common& c) {
    const OrderedTriangulation tri = load_triangulation(path);
    const OrderedTriangulation moved = apply_move(tri, move);
    if (!output.empty()) {
        std::ofstream out(output);
        if (!out) throw ParseError("cannot write " + output);
        out << serialize_triangulation(moved) << "\n";
    }
    const PipelineResult before = run_pipeline(tri, {}, c.options());
    const PipelineResult after = run_pipeline(moved, {}, c.options());
    const double delta = before.direct->r.distance(after.direct->r);
    if (c.format == "json") {
        json j{{"move", move},
               {"tetrahedra_before", tri.size()},
               {"tetrahedra_after", moved.size()},
               {"before", report_json(*before.direct)},
               {"after", report_json(*after.direct)},
               {"delta", delta}};
        std::cout << j.dump(2) << "\n";
        return ok;
    }
    print_report(std::cout, tri.name() + " before, " + std::to_string(tri.size()) + " tets", *before.direct);
    print_report(std::cout, tri.name() + " after " + move + ", " + std::to_string(moved.size()) + " tets",
                 *after.direct);
    std::cout << "invariant delta     " << fmt(delta) << "\n";
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Extended Bloch group invariants of ordered triangulations"};
    app.require_subcommand(1);

    Common common;
    if (const char* env = std::getenv("EXTBLOCH_TOL")) {
        try {
            common.tol = std::stod(env);
        } catch (const std::exception&) {
            std::cerr << "error: EXTBLOCH_TOL is not a number\n";
            return parse_failure;
        }
    }

    std::string path;
    std::vector<std::string> fills;
    std::string method = "direct";
    auto* inv = app.add_subcommand("invariants", "volume and cs of a tri-json document");
    inv->add_option("file", path, "tri-json document")->required();
    inv->add_option("--fill", fills, "Dehn filling CUSP=alpha,beta[,gamma,delta]");
    inv->add_option("--method", method, "direct, corrected or both")
        ->check(CLI::IsMember({"direct", "corrected", "both"}));
    common.attach(inv);

    int n = 0;
    auto* lens = app.add_subcommand("lens", "class of the lens space L(n,1)");
    lens->add_option("n", n, "order")->required();
    common.attach(lens);

    int count = 1000;
    auto* five = app.add_subcommand("five-term-check", "random lifted five-term instances");
    five->add_option("count", count, "number of instances")->required();
    common.attach(five);

    std::string move;
    std::string output;
    auto* pach = app.add_subcommand("pachner", "apply a 2-3 or 3-2 move and compare invariants");
    pach->add_option("file", path, "tri-json document")->required();
    pach->add_option("--move", move, "23:face=TET/FACE or 32:edge=EDGE")->required();
    pach->add_option("-o,--output", output, "write the moved complex here");
    common.attach(pach);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? ok : parse_failure;
    }

    try {
        if (*inv) return run_invariants(path, fills, method, common);
        if (*lens) return run_lens(n, common);
        if (*five) return run_five_term(count, common);
        if (*pach) return run_pachner(path, move, output, common);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return parse_failure;
    } catch (const TopologyError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return parse_failure;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return solver_failure;
    } catch (const DegenerateError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return solver_failure;
    } catch (const FlatteningError& e) {
        std::cerr << "flattening failure: " << e.what() << "\n";
        return flattening_failure;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return parse_failure;
    }
    return ok;
}
