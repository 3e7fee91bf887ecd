// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "extbloch/errors.hpp"
#include "extbloch/invariants.hpp"
#include "extbloch/zsolve.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

using namespace extbloch;

namespace {

constexpr double V0 = 1.014941606409653625021202554;

OrderedTriangulation m004() { return load_triangulation(std::string(EXTBLOCH_DATA_DIR) + "/m004.tri.json"); }

struct Outcome {
    bool pass = true;
    std::ostringstream note;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            note << " [failed: " << what << "]";
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void m004_golden(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = run_pipeline(m004());
    const double dt = seconds_since(t0);
    const InvariantReport& r = *res.direct;
    BlochSum expect;
    const cplx w = std::exp(cplx(0.0, pi / 3.0));
    expect.add(1, ExtParam(w, 0, -1));
    expect.add(-1, ExtParam(1.0 / w, 0, 1));
    o.note.precision(15);
    o.note << "volume " << r.volume << ", cs " << r.cs << ", ";
    o.note.precision(3);
    o.note << dt << " s";
    o.require(std::abs(r.volume - 2.029883212819306) < 1e-9, "volume");
    o.require(std::abs(r.volume - 2.0 * V0) < 1e-9, "2 V0");
    o.require(ModPiSquared(cplx(r.cs, 0.0)).distance(ModPiSquared(cplx(0.0, 0.0))) < 1e-9, "cs");
    o.require(r_congruent(r.beta, expect, 1e-9), "beta");
    o.require(dt < 1.0, "runtime");
}

void flattening_family(Outcome& o) {
    const auto tri = m004();
    const auto res = run_pipeline(tri);
    const auto& f = res.complete_flattening;
    o.require(f.q[0] == -1 - 2 * f.p[0] && f.p[1] == -f.p[0] && f.q[1] == -f.q[0], "complete family");
    o.note << "complete (" << f.p[0] << "," << f.q[0] << "," << f.p[1] << "," << f.q[1] << ")";
    for (auto [a, b] : std::vector<std::pair<Int, Int>>{{5, 1}, {1, 2}, {6, 1}, {-3, 2}, {7, 3}}) {
        const Filling fl = make_filling(a, b);
        const auto r = run_pipeline(tri, {fl});
        const FlatteningSolution s = solve_flattening(tri, *r.filled, r.signs, {fl});
        const Int p = s.p[0], q = s.q[0], rr = s.p[1], ss = s.q[1];
        o.require(q == fl.gamma - 1 - 2 * p && rr == -2 * fl.delta - p &&
                      ss == -fl.gamma + 4 * fl.delta + 1 + 2 * p,
                  "filled family " + std::to_string(a) + "," + std::to_string(b));
    }
    o.note << ", 5 fillings checked";
}

void dehn_cross_check(Outcome& o) {
    const auto tri = m004();
    const auto t0 = std::chrono::steady_clock::now();
    PipelineOptions opt;
    opt.corrected = true;
    double worst_r = 0.0;
    double worst_bw = 0.0;
    for (auto [a, b] : std::vector<std::pair<Int, Int>>{{5, 1}, {1, 2}, {6, 1}}) {
        const auto res = run_pipeline(tri, {make_filling(a, b)}, opt);
        worst_r = std::max(worst_r, res.direct->r.distance(res.corrected->r));
        worst_bw = std::max(worst_bw, std::abs(res.direct->volume - bloch_wigner_volume(res.filled->z, res.signs)));
    }
    const double dt = seconds_since(t0);
    o.note << "methods " << worst_r << ", Bloch-Wigner " << worst_bw << ", " << dt << " s";
    o.require(worst_r < 1e-9, "methods disagree");
    o.require(worst_bw < 1e-9, "Bloch-Wigner volume");
    o.require(dt < 5.0, "runtime");
}

void lens_torsion(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int n = 2; n <= 7; ++n)
        worst = std::max(worst, lens_space_class(n).report.r.distance(ModPiSquared(cplx(pi_sq / n, 0.0))));
    const double dt = seconds_since(t0);
    o.note << "max residual " << worst << ", " << dt << " s";
    o.require(worst < 1e-9, "residual");
    o.require(dt < 2.0, "runtime");
}

void five_term(Outcome& o) {
    const FiveTermSweep s = five_term_sweep(1000, 7);
    o.note << "max residual " << s.max_residual << ", criteria agree " << s.criteria_agree << "/" << s.count;
    o.require(s.max_residual < 1e-9, "residual");
    o.require(s.criteria_agree == s.count, "criteria");
}

void identities(Outcome& o) {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> nd(0.0, 2.0);
    std::uniform_int_distribution<int> br(-5, 5);
    auto sample = [&] {
        for (;;) {
            const cplx z(nd(rng), nd(rng));
            if (std::abs(z.imag()) > 1e-3 && std::abs(z - 1.0) > 1e-3) return ExtParam(z, br(rng), br(rng));
        }
    };
    double transfer = 0.0, one_minus = 0.0, perms = 0.0, chi_log = 0.0;
    for (int k = 0; k < 200; ++k) {
        const ExtParam x = sample();
        const Int p2 = br(rng);
        const Int q2 = br(rng);
        transfer = std::max(transfer, std::abs(r_value(x) + r_value(ExtParam(x.z, p2, q2)) -
                                               r_value(ExtParam(x.z, x.p, q2)) - r_value(ExtParam(x.z, p2, x.q))));
        transfer = std::max(transfer, std::abs(r_of_sum_raw(transfer_expand(x)) - r_value(x)));

        one_minus = std::max(one_minus,
                             distance_mod_pi2(r_value(x) + r_value(ExtParam(1.0 - x.z, -x.q, -x.p)), -pi_sq / 6));

        for (auto which : {EvenReorder::order_0312, EvenReorder::order_0231}) {
            const Reordered r = permute_even(x, which);
            perms = std::max(perms, distance_mod_pi2(r_value(x) - r_value(r.param),
                                                     r_of_sum_raw(chi(r.chi_argument))));
        }
        for (auto which : {OddReorder::swap01, OddReorder::swap13, OddReorder::swap12}) {
            const Reordered r = permute_odd(x, which);
            perms = std::max(perms, distance_mod_pi2(r_value(x) + r_value(r.param),
                                                     r_of_sum_raw(chi(r.chi_argument))));
        }

        const cplx w(nd(rng), nd(rng));
        chi_log = std::max(chi_log, distance_mod_pi2(r_of_sum_raw(chi(w)), 0.5 * i_pi * principal_log(w)));
    }
    o.note << "transfer " << transfer << ", 1-x " << one_minus << ", reorderings " << perms << ", R(chi) "
           << chi_log;
    o.require(transfer < 1e-10, "transfer");
    o.require(one_minus < 1e-10, "1-x");
    o.require(perms < 1e-10, "reorderings");
    o.require(chi_log < 1e-10, "R(chi)");
}

void invariance(Outcome& o) {
    double worst = 0.0;
    // Base points.
    const auto lens = lens_space_class(5, 2);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        PipelineOptions opt;
        opt.seed = seed;
        worst = std::max(worst, run_pipeline(lens.tri, {}, opt).direct->r.distance(lens.report.r));
    }
    const double reseed = worst;
    // Constant cochain on the labels.
    Mat2 h{cplx(0.8, 0.3), cplx(-0.4, 1.1), cplx(0.2, -0.7), 0.0};
    h.d = (1.0 + h.b * h.c) / h.a;
    std::vector<Labels> labels = lens.tri.labels();
    for (Labels& l : labels)
        for (Mat2& g : l) g = g * h;
    const OrderedTriangulation moved(lens.tri.name(), lens.tri.tets(), labels, {}, lens.tri.signs());
    const double cochain = run_pipeline(moved).direct->r.distance(lens.report.r);
    // Kernel vectors of the flattening.
    const auto tri = m004();
    const auto res = run_pipeline(tri);
    const FlatteningSystem sys = build_flattening_system(tri, res.complete, res.signs);
    double kernel = 0.0;
    for (const IntVector& k : res.complete_flattening.kernel)
        for (Int m : {-2, -1, 1, 3}) {
            FlatteningSolution g = res.complete_flattening;
            for (std::size_t t = 0; t < g.p.size(); ++t) {
                g.p[t] += m * k[2 * t].convert_to<Int>();
                g.q[t] += m * k[2 * t + 1].convert_to<Int>();
            }
            o.require(audit_flattening(sys, g), "kernel move breaks a row");
            kernel = std::max(kernel, r_of_sum(beta_hat(res.complete, res.signs, g)).distance(res.direct->r));
        }
    // One 2-3 move.
    const double pachner = run_pipeline(pachner_23(tri, 0, 2)).direct->r.distance(res.direct->r);
    o.note << "reseed " << reseed << ", cochain " << cochain << ", kernel " << kernel << ", 2-3 move " << pachner;
    o.require(reseed < 1e-9, "reseed");
    o.require(cochain < 1e-9, "cochain");
    o.require(kernel < 1e-9, "kernel");
    o.require(pachner < 1e-9, "2-3 move");
}

void integer_kernel(Outcome& o) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> e(-5, 5);
    int solved = 0;
    int unimodular = 0;
    for (int t = 0; t < 500; ++t) {
        const std::size_t m = 1 + rng() % 5;
        const std::size_t n = 1 + rng() % 6;
        IntMatrix a(m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = e(rng);
        IntVector x(n);
        for (auto& v : x) v = e(rng);
        const IntVector b = a.apply(x);
        const auto sol = solve_integer(a, b);
        bool good = sol && a.apply(sol->particular) == b;
        if (good)
            for (const auto& k : sol->kernel) good = good && a.apply(k) == IntVector(m);
        if (good) ++solved;
        const auto hf = hermite_normal_form(a);
        if (abs(determinant(hf.U)) == 1 && hf.U * a == hf.H) ++unimodular;
    }
    o.note << solved << "/500 planted systems solved, " << unimodular << "/500 unimodular transforms";
    o.require(solved == 500, "planted");
    o.require(unimodular == 500, "unimodular");
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"m004 golden", m004_golden},
        {"flattening family", flattening_family},
        {"Dehn filling cross-check", dehn_cross_check},
        {"lens torsion", lens_torsion},
        {"five-term suite", five_term},
        {"identity suite", identities},
        {"invariance suite", invariance},
        {"integer kernel", integer_kernel},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        o.note.precision(3);
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.note << " [threw: " << e.what() << "]";
        }
        failures += o.pass ? 0 : 1;
        std::printf("criterion %zu %-26s %s  %s\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                    o.note.str().c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
