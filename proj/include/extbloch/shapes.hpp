#pragma once

// Shapes of ideal simplices: from G-labels and base points, or by Newton's
// method on the gluing equations with branch-tracked logarithms, including
// path continuation toward Dehn-filled structures.

#include "extbloch/tricomplex.hpp"

#include <optional>
#include <string>
#include <vector>

namespace extbloch {

/// Per-tet shapes with continuous (not necessarily principal) lifts of
/// log z and log(1-z).
struct ShapeAssignment {
    std::vector<cplx> z;
    std::vector<cplx> logz;
    std::vector<cplx> log1mz;

    [[nodiscard]] std::size_t size() const { return z.size(); }
    /// Principal logs; throws DomainError for z in {0, 1}.
    static ShapeAssignment principal(const std::vector<cplx>& z);
    /// Shapes derived from log z with log(1-z) lifted nearest to `previous`.
    static ShapeAssignment from_logs(const std::vector<cplx>& logz, const std::vector<cplx>& previous_log1mz);
    /// exp-consistency to 1e-10 relative and z away from {0, 1}.
    [[nodiscard]] bool consistent(double tol = 1e-10) const;
    /// Conjugates every entry, which swaps the orientation of the structure.
    [[nodiscard]] ShapeAssignment conjugated() const;
};

struct Filling {
    Int alpha = 1;
    Int beta = 0;
    Int gamma = 0;
    Int delta = 1;
};

/// Filled(alpha, beta) with (gamma, delta) from the extended Euclidean
/// algorithm; throws DomainError unless gcd(alpha, beta) = 1.
Filling make_filling(Int alpha, Int beta);
/// Throws DomainError unless alpha*delta - beta*gamma = 1.
Filling make_filling(Int alpha, Int beta, Int gamma, Int delta);

/// One entry per torus cusp in vertex order; nullopt means unfilled.
using FillingSpec = std::vector<std::optional<Filling>>;

enum class RowKind { edge, cusp_u, cusp_v, filled };

/// sum_t sum_k counts[t][k] * L_k(t) = target, where L_0 = log z,
/// L_1 = -log(1-z) and L_2 = log(1-z) - log z + eps*pi*i.
struct GluingRow {
    RowKind kind = RowKind::edge;
    int index = 0;  ///< edge class or cusp
    std::vector<std::array<int, 3>> counts;
    cplx target{};
    [[nodiscard]] std::string describe() const;
};

struct GluingSystem {
    std::vector<GluingRow> rows;
    std::vector<int> signs;
    std::vector<CuspCurves> cusps;
    FillingSpec fillings;
};

/// Per-tet values (L_0, L_1, L_2) of the tracked logs.
std::vector<std::array<cplx, 3>> geometric_logs(const ShapeAssignment& s, const std::vector<int>& signs);
/// Signed sum of tracked logs with the given per-tet counts.
cplx row_value(const std::vector<std::array<int, 3>>& counts, const ShapeAssignment& s,
               const std::vector<int>& signs);

/// Moved points g_k z_v for every tet; throws DegenerateError naming the tet.
ShapeAssignment shapes_from_labels(const OrderedTriangulation& tri, const std::vector<BoundaryPoint>& base_points);

/// Edge rows (each scaled so that its target is 2 pi i), then per torus cusp
/// either u = 0 and v = 0 or alpha*u + beta*v = 2 pi i * scale.
GluingSystem build_gluing_system(const OrderedTriangulation& tri, const FillingSpec& fillings,
                                 const std::vector<int>& signs, double scale = 1.0);

struct NewtonOptions {
    double tol = 1e-12;
    int max_iter = 100;
};

/// Default start: every shape at e^{i pi/3}(1 + 0.1i), normalized to modulus 1.
ShapeAssignment default_initial_shapes(std::size_t n);

/// Damped least-squares Newton on log z. Throws SolverError.
ShapeAssignment solve_newton(const GluingSystem& system, const ShapeAssignment& init,
                             const NewtonOptions& opt = {});
/// Largest |row value - target|.
double max_residual(const GluingSystem& system, const ShapeAssignment& s);

/// Continues the complete solution along the filled targets t * 2 pi i,
/// t = 0..1, in `steps` increments with adaptive halving.
ShapeAssignment continue_to_filling(const OrderedTriangulation& tri, const ShapeAssignment& complete,
                                    const FillingSpec& fillings, const std::vector<int>& signs, int steps = 32,
                                    const NewtonOptions& opt = {});

/// lambda = -(gamma u + delta v) for a filled cusp. Throws DomainError if unfilled.
cplx complex_length(const OrderedTriangulation& tri, const ShapeAssignment& s, const std::vector<int>& signs,
                    const FillingSpec& fillings, int cusp);

} // namespace extbloch
