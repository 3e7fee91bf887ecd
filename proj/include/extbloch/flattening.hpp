#pragma once

// Flattened ideal simplices: the bijection between cover points (z;p,q) and
// log-parameter triples, per-edge log and parity parameters, cross-ratios of
// boundary points and the effect of reordering simplex vertices.

#include "extbloch/branchlog.hpp"
#include "extbloch/ext_param.hpp"

#include <array>
#include <utility>

namespace extbloch {

/// A combinatorial flattening (w0, w1, w2) of an ideal simplex; w0 + w1 + w2 = 0.
struct FlatTriple {
    cplx w0{};
    cplx w1{};
    cplx w2{};

    [[nodiscard]] cplx sum() const { return w0 + w1 + w2; }
    [[nodiscard]] const cplx& operator[](int k) const { return k == 0 ? w0 : (k == 1 ? w1 : w2); }
};

/// 2x2 complex matrix acting on the boundary sphere by fractional-linear maps.
/// Labels in PSL(2,C) are only meaningful up to sign.
struct Mat2 {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

    static Mat2 identity() { return {}; }
    /// Rotation by `angle` about i in the upper half-plane (an element of SO(2)).
    static Mat2 rotation(double angle);

    [[nodiscard]] cplx det() const { return a * d - b * c; }
    [[nodiscard]] Mat2 inverse() const;
    friend Mat2 operator*(const Mat2& x, const Mat2& y);
};

/// Max-entry distance between two matrices modulo the sign ambiguity of PSL(2).
double psl_distance(const Mat2& x, const Mat2& y);

/// A point of CP^1 in homogeneous coordinates (num : den); infinity is (1 : 0).
class BoundaryPoint {
public:
    BoundaryPoint() = default;
    /// Throws DomainError if both coordinates vanish.
    BoundaryPoint(cplx num, cplx den);

    static BoundaryPoint finite(cplx z) { return {z, 1.0}; }
    static BoundaryPoint infinity() { return {1.0, 0.0}; }

    [[nodiscard]] cplx num() const { return num_; }
    [[nodiscard]] cplx den() const { return den_; }
    [[nodiscard]] bool is_infinity(double tol = 0.0) const { return std::abs(den_) <= tol; }
    /// Affine coordinate; throws DomainError at infinity.
    [[nodiscard]] cplx affine() const;

    [[nodiscard]] BoundaryPoint moved_by(const Mat2& g) const;

private:
    cplx num_{0.0};
    cplx den_{1.0};
};

/// Tolerance below which two normalized boundary points count as coincident.
inline constexpr double coincidence_tol = 1e-12;

/// [z0:z1:z2:z3] = (z2-z1)(z3-z0) / ((z2-z0)(z3-z1)), computed projectively.
/// Throws DegenerateError when two of the points coincide.
cplx cross_ratio(const BoundaryPoint& z0, const BoundaryPoint& z1, const BoundaryPoint& z2,
                 const BoundaryPoint& z3);

/// Simplex edges in the fixed order 01, 02, 03, 12, 13, 23.
enum class SimplexEdge { e01 = 0, e02, e03, e12, e13, e23 };

/// Index (0, 1 or 2) of the triple component carried by an edge:
/// {01, 23} -> w0, {03, 12} -> w1, {02, 13} -> w2.
int component_of_edge(SimplexEdge e);
/// Same, for an edge given by its two vertex slots.
int component_of_edge(int a, int b);
SimplexEdge edge_from_slots(int a, int b);

/// ell(z;p,q) = (log z + p pi i, -log(1-z) + q pi i, log(1-z) - log z - (p+q) pi i).
FlatTriple ell(const ExtParam& param);

/// Inverse of ell. Real shapes on a cut are returned on the upper side.
/// Throws DomainError when the triple is not a flattening of any simplex.
ExtParam from_triple(const FlatTriple& t, double tol = 1e-9);

/// Log-parameter l_E carried by an edge of the flattened simplex.
cplx edge_param(const FlatTriple& t, SimplexEdge e);

/// Shape parameter attached to an edge: z, z' = 1/(1-z) or z'' = 1 - 1/z.
cplx edge_shape(cplx z, SimplexEdge e);

/// Parity parameter (s mod 2) where l_E = log(edge shape) + s pi i.
int parity_param(const FlatTriple& t, SimplexEdge e);

/// Parity parameter read directly from the branch indices: (p, q, p+q+1) mod 2
/// for the components (w0, w1, w2).
int parity_of_component(Int p, Int q, int component);

/// Even reorderings of the vertices that change the edge-01 shape.
enum class EvenReorder {
    order_0312,  ///< edge 01 now carries z' = 1/(1-z)
    order_0231,  ///< edge 01 now carries z'' = 1 - 1/z
};

/// Transpositions of two vertices (each up to the Klein four-group).
enum class OddReorder {
    swap01,  ///< 1/z
    swap13,  ///< 1 - z
    swap12,  ///< z/(z-1)
};

/// Result of reordering: the new cover point and the argument w of the chi(w)
/// element relating old and new classes.
struct Reordered {
    ExtParam param;
    cplx chi_argument;
};

/// [z;p,q] - [new] = chi(w). Throws DomainError for real z.
Reordered permute_even(const ExtParam& param, EvenReorder which);

/// [z;p,q] + [new] = chi(w). Throws DomainError for real z.
Reordered permute_odd(const ExtParam& param, OddReorder which);

} // namespace extbloch
