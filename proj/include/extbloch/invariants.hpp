#pragma once

// vol + i cs from the extended Bloch element, the two Dehn filling formulas,
// the Bloch-Wigner volume and the lens space classes, plus the end-to-end
// pipeline shared by the command line tool.

#include "extbloch/flatten_solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace extbloch {

enum class Method { direct, corrected };

std::string to_string(Method m);

struct InvariantReport {
    double volume = 0.0;
    double cs = 0.0;             ///< in [0, pi^2)
    double cs_over_2pi2 = 0.0;   ///< in [0, 1/2)
    ModPiSquared r;              ///< i(vol + i cs) mod pi^2
    BlochSum beta;
    Method method = Method::direct;
    std::vector<std::string> warnings;
};

/// vol = Im R(beta), cs = -Re R(beta) mod pi^2.
InvariantReport vol_cs_direct(const BlochSum& beta);

/// Branch data of the complete flattening carried continuously to `filled`.
struct TransportedFlattening {
    std::vector<Int> p;
    std::vector<Int> q;
};

TransportedFlattening transport_flattening(const ShapeAssignment& complete, const FlatteningSolution& flat,
                                           const ShapeAssignment& filled);

/// beta' = -sum_j chi(e^{lambda_j}) + sum_i eps_i [x'_i; p'_i, q'_i].
InvariantReport vol_cs_corrected(const OrderedTriangulation& tri, const ShapeAssignment& filled,
                                 const TransportedFlattening& flat, const std::vector<int>& signs,
                                 const FillingSpec& fillings);

/// sum_i eps_i D(z_i).
double bloch_wigner_volume(const std::vector<cplx>& z, const std::vector<int>& signs);

struct LensResult {
    OrderedTriangulation tri;
    BlochSum beta;
    InvariantReport report;
};

/// The class of L(n,1) from the chain sum_j <h1, g h1, g^j h2, g^{j+1} h2>,
/// g the rotation by 2 pi / n, with seeded generic h1, h2 and base points.
LensResult lens_space_class(int n, std::uint64_t seed = 0);

/// One random generic base point per vertex class.
std::vector<BoundaryPoint> random_base_points(int count, std::uint64_t seed);

struct PipelineOptions {
    NewtonOptions newton;
    int steps = 32;
    std::uint64_t seed = 0;
    bool direct = true;
    bool corrected = false;
};

struct PipelineResult {
    std::vector<int> signs;
    ShapeAssignment complete;
    std::optional<ShapeAssignment> filled;
    FlatteningSolution complete_flattening;
    std::optional<InvariantReport> direct;
    std::optional<InvariantReport> corrected;
    std::vector<std::string> warnings;
};

/// Labeled complexes: shapes from seeded base points. Otherwise Newton for the
/// complete structure (default start, then seeded starts until every tet is
/// positively oriented), then continuation to the filling if one is given.
PipelineResult run_pipeline(const OrderedTriangulation& tri, const FillingSpec& fillings = {},
                            const PipelineOptions& opt = {});

} // namespace extbloch
