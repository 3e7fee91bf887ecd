#include "extbloch/shapes.hpp"

#include "extbloch/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numeric>

namespace extbloch {

namespace {

cplx lift_near(cplx principal, cplx previous) {
    const double k = std::round((previous.imag() - principal.imag()) / (2.0 * pi));
    return principal + cplx(0.0, 2.0 * pi * k);
}

std::tuple<Int, Int, Int> ext_gcd(Int a, Int b) {
    // returns (g, x, y) with a x + b y = g >= 0
    Int x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        const Int q = a / b;
        std::tie(a, b) = std::make_tuple(b, a - q * b);
        std::tie(x0, x1) = std::make_tuple(x1, x0 - q * x1);
        std::tie(y0, y1) = std::make_tuple(y1, y0 - q * y1);
    }
    if (a < 0) return {-a, -x0, -y0};
    return {a, x0, y0};
}

} // namespace

ShapeAssignment ShapeAssignment::principal(const std::vector<cplx>& z) {
    ShapeAssignment s;
    for (cplx x : z) {
        if (x == cplx(0.0) || x == cplx(1.0)) throw DomainError("shape in {0, 1}");
        s.z.push_back(x);
        s.logz.push_back(principal_log(x));
        s.log1mz.push_back(principal_log(1.0 - x));
    }
    return s;
}

ShapeAssignment ShapeAssignment::from_logs(const std::vector<cplx>& logz, const std::vector<cplx>& previous) {
    ShapeAssignment s;
    for (std::size_t t = 0; t < logz.size(); ++t) {
        const cplx z = std::exp(logz[t]);
        s.z.push_back(z);
        s.logz.push_back(logz[t]);
        s.log1mz.push_back(lift_near(principal_log(1.0 - z), previous[t]));
    }
    return s;
}

bool ShapeAssignment::consistent(double tol) const {
    for (std::size_t t = 0; t < z.size(); ++t) {
        if (std::abs(z[t]) < 1e-12 || std::abs(1.0 - z[t]) < 1e-12) return false;
        if (std::abs(std::exp(logz[t]) - z[t]) > tol * std::abs(z[t])) return false;
        if (std::abs(std::exp(log1mz[t]) - (1.0 - z[t])) > tol * std::abs(1.0 - z[t])) return false;
    }
    return true;
}

ShapeAssignment ShapeAssignment::conjugated() const {
    ShapeAssignment s;
    for (std::size_t t = 0; t < z.size(); ++t) {
        s.z.push_back(std::conj(z[t]));
        s.logz.push_back(std::conj(logz[t]));
        s.log1mz.push_back(std::conj(log1mz[t]));
    }
    return s;
}

Filling make_filling(Int alpha, Int beta) {
    const auto [g, x, y] = ext_gcd(alpha, beta);
    if (g != 1) throw DomainError("filling coefficients must be coprime");
    // alpha x + beta y = 1, so (gamma, delta) = (-y, x).
    return {alpha, beta, -y, x};
}

Filling make_filling(Int alpha, Int beta, Int gamma, Int delta) {
    if (alpha * delta - beta * gamma != 1) throw DomainError("filling needs alpha*delta - beta*gamma = 1");
    return {alpha, beta, gamma, delta};
}

std::string GluingRow::describe() const {
    switch (kind) {
    case RowKind::edge: return "edge " + std::to_string(index);
    case RowKind::cusp_u: return "cusp " + std::to_string(index) + " meridian";
    case RowKind::cusp_v: return "cusp " + std::to_string(index) + " longitude";
    case RowKind::filled: return "cusp " + std::to_string(index) + " filling";
    }
    return "row";
}

std::vector<std::array<cplx, 3>> geometric_logs(const ShapeAssignment& s, const std::vector<int>& signs) {
    std::vector<std::array<cplx, 3>> out(s.size());
    for (std::size_t t = 0; t < s.size(); ++t)
        out[t] = {s.logz[t], -s.log1mz[t],
                  s.log1mz[t] - s.logz[t] + static_cast<double>(signs[t]) * i_pi};
    return out;
}

cplx row_value(const std::vector<std::array<int, 3>>& counts, const ShapeAssignment& s,
               const std::vector<int>& signs) {
    const auto l = geometric_logs(s, signs);
    cplx sum = 0.0;
    for (std::size_t t = 0; t < counts.size(); ++t)
        for (int k = 0; k < 3; ++k) sum += static_cast<double>(counts[t][k]) * l[t][k];
    return sum;
}

ShapeAssignment shapes_from_labels(const OrderedTriangulation& tri, const std::vector<BoundaryPoint>& base) {
    if (static_cast<int>(base.size()) != tri.vertex_count())
        throw DomainError("shapes_from_labels: need one base point per vertex class");
    const auto& labels = tri.labels();
    std::vector<cplx> z;
    for (std::size_t t = 0; t < tri.size(); ++t) {
        std::array<BoundaryPoint, 4> pts;
        for (int s = 0; s < 4; ++s)
            pts[s] = base[static_cast<std::size_t>(tri.vertex_of(static_cast<int>(t), s))].moved_by(labels[t][s]);
        try {
            z.push_back(cross_ratio(pts[0], pts[1], pts[2], pts[3]));
        } catch (const DegenerateError& e) {
            throw DegenerateError("tet " + std::to_string(t) + " is degenerate: " + e.what());
        }
    }
    return ShapeAssignment::principal(z);
}

GluingSystem build_gluing_system(const OrderedTriangulation& tri, const FillingSpec& fillings,
                                 const std::vector<int>& signs, double scale) {
    GluingSystem sys;
    sys.signs = signs;
    for (const VertexLink& l : tri.links())
        if (l.kind == LinkKind::singular)
            throw TopologyError("vertex " + std::to_string(l.vertex) + " has a link of genus " +
                                std::to_string(l.genus) + "; geometric solving is unsupported");
    sys.cusps = cusp_bases(tri);
    sys.fillings = fillings;
    sys.fillings.resize(sys.cusps.size());
    if (fillings.size() > sys.cusps.size()) throw DomainError("filling given for a cusp that does not exist");
    for (std::size_t e = 0; e < tri.edges().size(); ++e) {
        const EdgeClass& ec = tri.edges()[e];
        GluingRow r{RowKind::edge, static_cast<int>(e), component_counts(tri, ec.loop), cplx(0.0, 2.0 * pi)};
        if (ec.loop_sign < 0)
            for (auto& c : r.counts)
                for (int& x : c) x = -x;
        sys.rows.push_back(std::move(r));
    }
    for (std::size_t k = 0; k < sys.cusps.size(); ++k) {
        const auto u = component_counts(tri, sys.cusps[k].meridian);
        const auto v = component_counts(tri, sys.cusps[k].longitude);
        const auto& f = sys.fillings[k];
        if (!f) {
            sys.rows.push_back({RowKind::cusp_u, static_cast<int>(k), u, 0.0});
            sys.rows.push_back({RowKind::cusp_v, static_cast<int>(k), v, 0.0});
            continue;
        }
        std::vector<std::array<int, 3>> c(tri.size());
        for (std::size_t t = 0; t < tri.size(); ++t)
            for (int j = 0; j < 3; ++j)
                c[t][j] = static_cast<int>(f->alpha * u[t][j] + f->beta * v[t][j]);
        sys.rows.push_back({RowKind::filled, static_cast<int>(k), c, cplx(0.0, 2.0 * pi * scale)});
    }
    return sys;
}

ShapeAssignment default_initial_shapes(std::size_t n) {
    cplx z = std::exp(cplx(0.0, pi / 3)) * cplx(1.0, 0.1);
    z /= std::abs(z);
    return ShapeAssignment::principal(std::vector<cplx>(n, z));
}

double max_residual(const GluingSystem& sys, const ShapeAssignment& s) {
    double worst = 0.0;
    for (const GluingRow& r : sys.rows)
        worst = std::max(worst, std::abs(row_value(r.counts, s, sys.signs) - r.target));
    return worst;
}

namespace {

Eigen::VectorXcd residual_vector(const GluingSystem& sys, const ShapeAssignment& s) {
    Eigen::VectorXcd f(static_cast<Eigen::Index>(sys.rows.size()));
    for (std::size_t r = 0; r < sys.rows.size(); ++r)
        f[static_cast<Eigen::Index>(r)] = row_value(sys.rows[r].counts, s, sys.signs) - sys.rows[r].target;
    return f;
}

bool near_degenerate(const ShapeAssignment& s) {
    for (cplx z : s.z)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) < 1e-10 ||
            std::abs(1.0 - z) < 1e-10)
            return true;
    return false;
}

} // namespace

ShapeAssignment solve_newton(const GluingSystem& sys, const ShapeAssignment& init, const NewtonOptions& opt) {
    const auto n = static_cast<Eigen::Index>(init.size());
    const auto m = static_cast<Eigen::Index>(sys.rows.size());
    if (n == 0) return init;
    ShapeAssignment cur = init;
    Eigen::VectorXcd f = residual_vector(sys, cur);
    for (int iter = 0; iter < opt.max_iter; ++iter) {
        if (f.lpNorm<Eigen::Infinity>() < opt.tol) return cur;
        Eigen::MatrixXcd jac = Eigen::MatrixXcd::Zero(m, n);
        for (Eigen::Index r = 0; r < m; ++r)
            for (Eigen::Index t = 0; t < n; ++t) {
                const auto& c = sys.rows[static_cast<std::size_t>(r)].counts[static_cast<std::size_t>(t)];
                const cplx z = cur.z[static_cast<std::size_t>(t)];
                jac(r, t) = static_cast<double>(c[0]) + static_cast<double>(c[1]) * z / (1.0 - z) -
                            static_cast<double>(c[2]) / (1.0 - z);
            }
        const Eigen::VectorXcd step = jac.completeOrthogonalDecomposition().solve(-f);
        double lambda = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 40; ++halving, lambda *= 0.5) {
            std::vector<cplx> logz(cur.logz);
            for (Eigen::Index t = 0; t < n; ++t) logz[static_cast<std::size_t>(t)] += lambda * step[t];
            ShapeAssignment trial = ShapeAssignment::from_logs(logz, cur.log1mz);
            if (near_degenerate(trial)) continue;
            const Eigen::VectorXcd ft = residual_vector(sys, trial);
            if (ft.norm() < f.norm() || ft.lpNorm<Eigen::Infinity>() < opt.tol) {
                cur = std::move(trial);
                f = ft;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (f.lpNorm<Eigen::Infinity>() < std::sqrt(opt.tol) * 1e-2) return cur;  // rounding floor
            throw SolverError("Newton stalled with residual " + std::to_string(f.lpNorm<Eigen::Infinity>()));
        }
    }
    if (f.lpNorm<Eigen::Infinity>() < opt.tol) return cur;
    throw SolverError("Newton did not converge in " + std::to_string(opt.max_iter) +
                      " iterations (residual " + std::to_string(f.lpNorm<Eigen::Infinity>()) + ")");
}

ShapeAssignment continue_to_filling(const OrderedTriangulation& tri, const ShapeAssignment& complete,
                                    const FillingSpec& fillings, const std::vector<int>& signs, int steps,
                                    const NewtonOptions& opt) {
    if (steps < 1) throw DomainError("continuation needs at least one step");
    constexpr int max_depth = 10;
    ShapeAssignment cur = complete;
    double t = 0.0;
    const double h0 = 1.0 / steps;
    // Recursive halving of a failed step, up to max_depth levels.
    std::function<void(double, int)> advance = [&](double to, int depth) {
        try {
            cur = solve_newton(build_gluing_system(tri, fillings, signs, to), cur, opt);
            t = to;
        } catch (const SolverError&) {
            if (depth >= max_depth)
                throw SolverError("continuation failed near t = " + std::to_string(to));
            const double mid = 0.5 * (t + to);
            advance(mid, depth + 1);
            advance(to, depth + 1);
        }
    };
    for (int k = 1; k <= steps; ++k) advance(k == steps ? 1.0 : k * h0, 0);
    return cur;
}

cplx complex_length(const OrderedTriangulation& tri, const ShapeAssignment& s, const std::vector<int>& signs,
                    const FillingSpec& fillings, int cusp) {
    if (cusp < 0 || static_cast<std::size_t>(cusp) >= fillings.size() || !fillings[cusp])
        throw DomainError("complex_length: cusp " + std::to_string(cusp) + " is not filled");
    const CuspCurves c = cusp_basis(tri, cusp_bases(tri).at(static_cast<std::size_t>(cusp)).vertex);
    const cplx u = row_value(component_counts(tri, c.meridian), s, signs);
    const cplx v = row_value(component_counts(tri, c.longitude), s, signs);
    const Filling& f = *fillings[cusp];
    return -(static_cast<double>(f.gamma) * u + static_cast<double>(f.delta) * v);
}

} // namespace extbloch
