#include "extbloch/flatten_solver.hpp"

#include "extbloch/errors.hpp"

#include <cmath>

namespace extbloch {

namespace {

Int to_int(const BigInt& x) { return x.convert_to<long long>(); }

// Exact integer from a value that should be one; `what` names the row.
BigInt integral(cplx v, const std::string& what) {
    const double r = std::round(v.real());
    if (std::abs(v.real() - r) > 1e-6 || std::abs(v.imag()) > 1e-6)
        throw FlatteningError("inconsistent shapes: residue of " + what + " is not an integer (" +
                              std::to_string(v.real()) + std::string(v.imag() >= 0 ? "+" : "") +
                              std::to_string(v.imag()) + "i)");
    return BigInt(static_cast<long long>(r));
}

using Counts = std::vector<std::array<int, 3>>;

Counts combine(const Counts& a, Int s, const Counts& b, Int t) {
    Counts c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (int k = 0; k < 3; ++k) c[i][k] = static_cast<int>(s * a[i][k] + t * b[i][k]);
    return c;
}

struct Builder {
    const ShapeAssignment& shapes;
    const std::vector<int>& signs;
    std::vector<std::array<cplx, 3>> w;
    FlatteningSystem sys;

    // Flattening log-parameter along the row equals `value` (a multiple of pi i
    // away from the principal sum).
    void add(const Counts& c, cplx value, const std::string& what) {
        const std::size_t n = c.size();
        IntVector row(2 * n);
        cplx principal = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            row[2 * t] = c[t][0] - c[t][2];
            row[2 * t + 1] = c[t][1] - c[t][2];
            for (int k = 0; k < 3; ++k) principal += static_cast<double>(c[t][k]) * w[t][k];
        }
        sys.A.append_row(row);
        sys.b.push_back(integral((value - principal) / i_pi, what));
        sys.rows.push_back(what);
    }
};

} // namespace

std::vector<std::array<cplx, 3>> principal_parts(const std::vector<cplx>& z) {
    std::vector<std::array<cplx, 3>> out;
    for (cplx x : z) {
        const ExtParam e(x, 0, 0, side_for(x, Side::upper));
        const cplx lz = e.log_z();
        const cplx l1 = e.log_one_minus_z();
        out.push_back({lz, -l1, l1 - lz});
    }
    return out;
}

FlatteningSystem build_flattening_system(const OrderedTriangulation& tri, const ShapeAssignment& shapes,
                                         const std::vector<int>& signs, const FillingSpec& fillings) {
    const std::size_t n = tri.size();
    Builder bld{shapes, signs, principal_parts(shapes.z), {}};
    bld.sys.A = IntMatrix(0, 2 * n);
    for (std::size_t e = 0; e < tri.edges().size(); ++e)
        bld.add(component_counts(tri, tri.edges()[e].loop), 0.0, "edge " + std::to_string(e));

    std::size_t cusp = 0;
    for (const VertexLink& l : tri.links()) {
        if (l.kind == LinkKind::material) continue;
        if (tri.has_labels()) {
            // A material vertex with a link of positive genus: every link cycle.
            const auto cycles = link_cycle_basis(tri, l.vertex);
            for (std::size_t k = 0; k < cycles.size(); ++k)
                bld.add(component_counts(tri, cycles[k]), 0.0,
                        "vertex " + std::to_string(l.vertex) + " link cycle " + std::to_string(k));
            continue;
        }
        if (l.kind == LinkKind::singular)
            throw FlatteningError("vertex " + std::to_string(l.vertex) + " has a link of genus " +
                                  std::to_string(l.genus) + " and no labels");
        const CuspCurves c = cusp_basis(tri, l.vertex);
        const Counts u = component_counts(tri, c.meridian);
        const Counts v = component_counts(tri, c.longitude);
        const std::string name = "cusp " + std::to_string(cusp);
        const auto& f = cusp < fillings.size() ? fillings[cusp] : std::nullopt;
        if (!f) {
            bld.add(u, 0.0, name + " meridian");
            bld.add(v, 0.0, name + " longitude");
        } else {
            bld.add(combine(u, f->alpha, v, f->beta), 0.0, name + " filling");
            // gamma*u + delta*v keeps its geometric value -lambda.
            const Counts gd = combine(u, f->gamma, v, f->delta);
            bld.add(gd, row_value(gd, shapes, signs), name + " core");
        }
        ++cusp;
    }
    if (cusp < fillings.size()) throw DomainError("filling given for a cusp that does not exist");

    for (const NormalCurve& c : normal_loop_basis(tri)) {
        const auto h = component_hits(tri, c);
        BitVector row(2 * n, 0);
        unsigned rhs = 0;
        for (std::size_t t = 0; t < n; ++t) {
            row[2 * t] = static_cast<std::uint8_t>((h[t][0] + h[t][2]) & 1);
            row[2 * t + 1] = static_cast<std::uint8_t>((h[t][1] + h[t][2]) & 1);
            rhs += static_cast<unsigned>(h[t][2]);
        }
        bld.sys.parity.push_back(row);
        bld.sys.parity_rhs.push_back(static_cast<std::uint8_t>(rhs & 1U));
        bld.sys.parity_rows.push_back("parity of loop " + std::to_string(bld.sys.parity_rows.size()));
    }
    return bld.sys;
}

namespace {

unsigned parity_of(const BitVector& row, const std::vector<Int>& x) {
    unsigned acc = 0;
    for (std::size_t j = 0; j < x.size(); ++j) acc ^= row[j] & static_cast<unsigned>(x[j] & 1);
    return acc;
}

bool parity_ok(const FlatteningSystem& sys, const std::vector<Int>& x) {
    for (std::size_t r = 0; r < sys.parity.size(); ++r)
        if (parity_of(sys.parity[r], x) != sys.parity_rhs[r]) return false;
    return true;
}

bool key_less(const std::vector<Int>& a, const std::vector<Int>& b) {
    Int la = 0;
    Int lb = 0;
    for (Int v : a) la += v < 0 ? -v : v;
    for (Int v : b) lb += v < 0 ? -v : v;
    if (la != lb) return la < lb;
    return a < b;
}

} // namespace

FlatteningSolution solve_flattening(const OrderedTriangulation& tri, const ShapeAssignment& shapes,
                                    const std::vector<int>& signs, const FillingSpec& fillings) {
    const FlatteningSystem sys = build_flattening_system(tri, shapes, signs, fillings);
    const std::size_t m = 2 * tri.size();
    const auto sol = solve_integer(sys.A, sys.b);
    if (!sol) throw FlatteningError("no integer flattening exists (rows: edges and cusps)");

    FlatteningSolution out;
    out.conditions_used = sys.rows;
    out.kernel = sol->kernel;
    std::vector<Int> x(m);
    for (std::size_t j = 0; j < m; ++j) x[j] = to_int(sol->particular[j]);
    std::vector<std::vector<Int>> ker;
    for (const auto& k : sol->kernel) {
        std::vector<Int> v(m);
        for (std::size_t j = 0; j < m; ++j) v[j] = to_int(k[j]);
        ker.push_back(std::move(v));
    }

    // Parities: solve (P K^T) lambda = P x0 + c over GF(2).
    if (!parity_ok(sys, x)) {
        BitMatrix pk(sys.parity.size(), BitVector(ker.size(), 0));
        BitVector rhs(sys.parity.size(), 0);
        for (std::size_t r = 0; r < sys.parity.size(); ++r) {
            for (std::size_t i = 0; i < ker.size(); ++i)
                pk[r][i] = static_cast<std::uint8_t>(parity_of(sys.parity[r], ker[i]));
            rhs[r] = static_cast<std::uint8_t>(parity_of(sys.parity[r], x) ^ sys.parity_rhs[r]);
        }
        const auto lam = solve_mod2(pk, rhs, ker.size());
        if (lam) {
            for (std::size_t i = 0; i < ker.size(); ++i)
                if ((*lam)[i])
                    for (std::size_t j = 0; j < m; ++j) x[j] += ker[i][j];
        } else {
            out.parity_enforced = false;
            out.warnings.push_back("parity conditions could not be met; the result may differ by the element of order 2");
        }
    }

    // Descent to the canonical representative with parity-preserving moves.
    std::vector<std::vector<Int>> moves;
    auto push = [&](std::vector<Int> v) {
        bool zero = true;
        for (Int a : v) zero = zero && a == 0;
        if (zero) return;
        if (out.parity_enforced) {
            for (const BitVector& row : sys.parity)
                if (parity_of(row, v) != 0) return;
        }
        moves.push_back(std::move(v));
    };
    for (std::size_t i = 0; i < ker.size(); ++i) {
        for (Int s : {1, -1, 2, -2}) {
            std::vector<Int> v(m);
            for (std::size_t j = 0; j < m; ++j) v[j] = s * ker[i][j];
            push(v);
        }
        for (std::size_t k = i + 1; k < ker.size(); ++k)
            for (Int s : {1, -1})
                for (Int t : {1, -1}) {
                    std::vector<Int> v(m);
                    for (std::size_t j = 0; j < m; ++j) v[j] = s * ker[i][j] + t * ker[k][j];
                    push(v);
                }
    }
    for (int guard = 0; guard < 100000; ++guard) {
        std::vector<Int> best = x;
        for (const auto& mv : moves) {
            std::vector<Int> y(m);
            for (std::size_t j = 0; j < m; ++j) y[j] = x[j] + mv[j];
            if (key_less(y, best)) best = std::move(y);
        }
        if (best == x) break;
        x = std::move(best);
    }

    for (std::size_t t = 0; t < tri.size(); ++t) {
        out.p.push_back(x[2 * t]);
        out.q.push_back(x[2 * t + 1]);
    }
    if (!audit_flattening(sys, out)) throw FlatteningError("flattening failed its audit");
    return out;
}

bool audit_flattening(const FlatteningSystem& sys, const FlatteningSolution& sol) {
    IntVector x;
    std::vector<Int> xi;
    for (std::size_t t = 0; t < sol.p.size(); ++t) {
        x.emplace_back(sol.p[t]);
        x.emplace_back(sol.q[t]);
        xi.push_back(sol.p[t]);
        xi.push_back(sol.q[t]);
    }
    if (sys.A.apply(x) != sys.b) return false;
    return !sol.parity_enforced || parity_ok(sys, xi);
}

BlochSum beta_hat(const ShapeAssignment& shapes, const std::vector<int>& signs, const FlatteningSolution& sol) {
    BlochSum s;
    for (std::size_t t = 0; t < shapes.size(); ++t) {
        const cplx z = shapes.z[t];
        s.add(signs[t], ExtParam(z, sol.p[t], sol.q[t], side_for(z, Side::upper)));
    }
    return s;
}

} // namespace extbloch
