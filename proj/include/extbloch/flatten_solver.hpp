#pragma once

// Integer branch data (p_i, q_i) making the per-tet flattenings satisfy the
// edge, cusp and parity conditions, and the resulting element
// sum eps_i [z_i; p_i, q_i].

#include "extbloch/ebloch.hpp"
#include "extbloch/shapes.hpp"
#include "extbloch/zsolve.hpp"

#include <string>
#include <vector>

namespace extbloch {

/// Unknowns ordered p_0, q_0, p_1, q_1, ...
struct FlatteningSystem {
    IntMatrix A;
    IntVector b;
    std::vector<std::string> rows;
    BitMatrix parity;        ///< one row per curve of the normal loop basis
    BitVector parity_rhs;
    std::vector<std::string> parity_rows;
};

struct FlatteningSolution {
    std::vector<Int> p;
    std::vector<Int> q;
    bool parity_enforced = true;
    std::vector<std::string> conditions_used;
    std::vector<std::string> warnings;
    std::vector<IntVector> kernel;  ///< integer kernel of the log system
};

/// Principal log-parameters W = (Log z, -Log(1-z), Log(1-z) - Log z) of each
/// shape; real shapes are read on the upper side.
std::vector<std::array<cplx, 3>> principal_parts(const std::vector<cplx>& z);

/// Rows: one per edge class; per torus cusp either the meridian and longitude
/// or, when filled, alpha*u + beta*v together with gamma*u + delta*v = -lambda;
/// for material vertices with genus >= 1 links, every link cycle.
/// Throws FlatteningError when a right-hand side is not an integer.
FlatteningSystem build_flattening_system(const OrderedTriangulation& tri, const ShapeAssignment& shapes,
                                         const std::vector<int>& signs, const FillingSpec& fillings = {});

/// Integer solution with parities fixed by kernel moves, reduced to the
/// representative of least L1 norm, ties broken lexicographically.
/// Throws FlatteningError when no integer solution exists.
FlatteningSolution solve_flattening(const OrderedTriangulation& tri, const ShapeAssignment& shapes,
                                    const std::vector<int>& signs, const FillingSpec& fillings = {});

/// Whether the solution satisfies every integer row (and the parity rows if enforced).
bool audit_flattening(const FlatteningSystem& sys, const FlatteningSolution& sol);

/// sum_i eps_i [z_i; p_i, q_i].
BlochSum beta_hat(const ShapeAssignment& shapes, const std::vector<int>& signs, const FlatteningSolution& sol);

} // namespace extbloch
