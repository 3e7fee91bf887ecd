#include "extbloch/invariants.hpp"

#include "extbloch/errors.hpp"

#include <cmath>
#include <random>

namespace extbloch {

std::string to_string(Method m) { return m == Method::direct ? "direct" : "corrected"; }

namespace {

// Reduce into [0, period), folding values within rounding of the period to 0.
double wrap(double x, double period) {
    double r = std::fmod(x, period);
    if (r < 0) r += period;
    if (period - r < 1e-11 * std::max(1.0, period) || r == 0.0) r = 0.0;  // also clears -0
    return r;
}

Int integer_shift(cplx a, cplx b) {
    // (a - b) / (pi i) for logs of the same number
    const cplx d = (a - b) / i_pi;
    const double r = std::round(d.real());
    if (std::abs(d.real() - r) > 1e-6 || std::abs(d.imag()) > 1e-6)
        throw FlatteningError("log branches of the continued shapes are inconsistent");
    return static_cast<Int>(r);
}

bool positively_oriented(const ShapeAssignment& s, const std::vector<int>& signs) {
    for (std::size_t t = 0; t < s.size(); ++t)
        if (signs[t] * s.z[t].imag() <= 1e-9) return false;
    return true;
}

// The shared default start first, then seeded starts in the half-plane each
// tet's sign asks for, until a positively oriented solution turns up.
ShapeAssignment solve_complete(const OrderedTriangulation& tri, const std::vector<int>& signs,
                               const PipelineOptions& opt, std::vector<std::string>& warnings) {
    const GluingSystem sys = build_gluing_system(tri, {}, signs);
    std::optional<ShapeAssignment> fallback;
    std::string last;
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> re(-0.5, 1.5);
    std::uniform_real_distribution<double> im(0.2, 1.5);
    for (int attempt = 0; attempt < 64; ++attempt) {
        ShapeAssignment init = default_initial_shapes(tri.size());
        if (attempt > 0) {
            std::vector<cplx> z;
            for (std::size_t t = 0; t < tri.size(); ++t) z.emplace_back(re(rng), signs[t] * im(rng));
            init = ShapeAssignment::principal(z);
        }
        try {
            ShapeAssignment s = solve_newton(sys, init, opt.newton);
            if (positively_oriented(s, signs)) return s;
            if (!fallback) fallback = std::move(s);
        } catch (const SolverError& e) {
            last = e.what();
        }
    }
    if (!fallback) throw SolverError(last);
    warnings.push_back("no positively oriented solution found; using a degenerate or negatively oriented one");
    return *fallback;
}

} // namespace

InvariantReport vol_cs_direct(const BlochSum& beta) {
    InvariantReport rep;
    rep.beta = beta;
    rep.r = r_of_sum(beta);
    rep.volume = rep.r.imag();
    rep.cs = wrap(-rep.r.real(), pi_sq);
    rep.cs_over_2pi2 = wrap(rep.cs / (2.0 * pi_sq), 0.5);
    rep.method = Method::direct;
    return rep;
}

TransportedFlattening transport_flattening(const ShapeAssignment& complete, const FlatteningSolution& flat,
                                           const ShapeAssignment& filled) {
    TransportedFlattening out;
    const auto wc = principal_parts(complete.z);
    const auto wf = principal_parts(filled.z);
    for (std::size_t t = 0; t < complete.size(); ++t) {
        // Relative to the tracked logs the branch data stays constant along the path.
        const Int pt = flat.p[t] + integer_shift(wc[t][0], complete.logz[t]);
        const Int qt = flat.q[t] + integer_shift(-complete.log1mz[t], wc[t][1]);
        out.p.push_back(pt + integer_shift(filled.logz[t], wf[t][0]));
        out.q.push_back(qt + integer_shift(wf[t][1], -filled.log1mz[t]));
    }
    return out;
}

InvariantReport vol_cs_corrected(const OrderedTriangulation& tri, const ShapeAssignment& filled,
                                 const TransportedFlattening& flat, const std::vector<int>& signs,
                                 const FillingSpec& fillings) {
    BlochSum beta;
    for (std::size_t k = 0; k < fillings.size(); ++k)
        if (fillings[k]) beta -= chi(std::exp(complex_length(tri, filled, signs, fillings, static_cast<int>(k))));
    for (std::size_t t = 0; t < filled.size(); ++t) {
        const cplx z = filled.z[t];
        beta.add(signs[t], ExtParam(z, flat.p[t], flat.q[t], side_for(z, Side::upper)));
    }
    InvariantReport rep = vol_cs_direct(beta);
    rep.method = Method::corrected;
    return rep;
}

double bloch_wigner_volume(const std::vector<cplx>& z, const std::vector<int>& signs) {
    double v = 0.0;
    for (std::size_t t = 0; t < z.size(); ++t) v += signs[t] * bloch_wigner(z[t]);
    return v;
}

std::vector<BoundaryPoint> random_base_points(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<BoundaryPoint> out;
    for (int k = 0; k < count; ++k) out.push_back(BoundaryPoint::finite(cplx(nd(rng), nd(rng))));
    return out;
}

LensResult lens_space_class(int n, std::uint64_t seed) {
    if (n < 1) throw DomainError("lens_space_class: n must be at least 1");
    if (n == 1) {
        // g is the identity: every simplex is degenerate and the class is trivial.
        LensResult r{};
        r.report = vol_cs_direct(BlochSum{});
        r.report.warnings.push_back("L(1,1) is the trivial class");
        return r;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
    const Mat2 g = Mat2::rotation(2.0 * pi / n);
    std::string last_error;
    for (int attempt = 0; attempt < 20; ++attempt) {
        const Mat2 h1 = Mat2::rotation(angle(rng));
        const Mat2 h2 = Mat2::rotation(angle(rng));
        std::vector<ChainSimplex> chain;
        Mat2 gj = Mat2::identity();
        bool distinct = true;
        for (int j = 0; j < n; ++j) {
            const Mat2 gj1 = g * gj;
            ChainSimplex s{1, {h1, g * h1, gj * h2, gj1 * h2}};
            for (int a = 0; a < 4; ++a)
                for (int b = a + 1; b < 4; ++b)
                    if (psl_distance(s.labels[a], s.labels[b]) < 1e-6) distinct = false;
            chain.push_back(s);
            gj = gj1;
        }
        if (!distinct) {
            last_error = "labels not distinct";
            continue;
        }
        try {
            OrderedTriangulation tri =
                cycle_from_homogeneous_chain(chain, "L(" + std::to_string(n) + ",1)");
            const ShapeAssignment shapes = shapes_from_labels(tri, random_base_points(tri.vertex_count(), rng()));
            const FlatteningSolution sol = solve_flattening(tri, shapes, tri.signs());
            BlochSum beta = beta_hat(shapes, tri.signs(), sol);
            InvariantReport rep = vol_cs_direct(beta);
            rep.warnings = sol.warnings;
            return {std::move(tri), std::move(beta), std::move(rep)};
        } catch (const DegenerateError& e) {
            last_error = e.what();
        }
    }
    throw DegenerateError("lens_space_class: no generic draw found (" + last_error + ")");
}

PipelineResult run_pipeline(const OrderedTriangulation& tri, const FillingSpec& fillings,
                            const PipelineOptions& opt) {
    PipelineResult res;
    res.signs = tri.signs();
    bool filled = false;
    for (const auto& f : fillings) filled = filled || f.has_value();

    if (tri.has_labels()) {
        if (filled) throw DomainError("labeled complexes cannot be Dehn filled");
        std::mt19937_64 rng(opt.seed);
        std::string last;
        for (int attempt = 0; attempt < 20 && res.complete.size() == 0; ++attempt) {
            try {
                res.complete = shapes_from_labels(tri, random_base_points(tri.vertex_count(), rng()));
            } catch (const DegenerateError& e) {
                last = e.what();
            }
        }
        if (res.complete.size() == 0) throw DegenerateError(last);
    } else {
        res.complete = solve_complete(tri, res.signs, opt, res.warnings);
    }
    res.complete_flattening = solve_flattening(tri, res.complete, res.signs);
    res.warnings.insert(res.warnings.end(), res.complete_flattening.warnings.begin(),
                        res.complete_flattening.warnings.end());

    if (!filled) {
        const BlochSum beta = beta_hat(res.complete, res.signs, res.complete_flattening);
        if (opt.direct) res.direct = vol_cs_direct(beta);
        if (opt.corrected) {
            res.corrected = vol_cs_direct(beta);
            res.corrected->method = Method::corrected;
        }
    } else {
        res.filled = continue_to_filling(tri, res.complete, fillings, res.signs, opt.steps, opt.newton);
        if (opt.direct) {
            const FlatteningSolution sol = solve_flattening(tri, *res.filled, res.signs, fillings);
            res.direct = vol_cs_direct(beta_hat(*res.filled, res.signs, sol));
            res.direct->warnings = sol.warnings;
        }
        if (opt.corrected) {
            const TransportedFlattening tf = transport_flattening(res.complete, res.complete_flattening, *res.filled);
            res.corrected = vol_cs_corrected(tri, *res.filled, tf, res.signs, fillings);
        }
    }
    for (auto* rep : {&res.direct, &res.corrected})
        if (*rep) (*rep)->warnings.insert((*rep)->warnings.begin(), res.warnings.begin(), res.warnings.end());
    return res;
}

} // namespace extbloch
