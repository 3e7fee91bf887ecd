#pragma once

// Formal sums of cover points, lifted five-term instances, chi elements and
// the transfer normal form, plus R evaluation of sums.

#include "extbloch/branchlog.hpp"
#include "extbloch/ext_param.hpp"
#include "extbloch/flattening.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace extbloch {

struct BlochTerm {
    Int coef = 0;
    ExtParam param;

    friend bool operator==(const BlochTerm&, const BlochTerm&) = default;
};

/// A finite Z-linear combination of classes [z;p,q]. Terms keep their
/// insertion order; identical cover points are merged and zero coefficients
/// dropped.
class BlochSum {
public:
    BlochSum() = default;

    void add(Int coef, const ExtParam& param);
    [[nodiscard]] const std::vector<BlochTerm>& terms() const { return terms_; }
    [[nodiscard]] bool empty() const { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }

    BlochSum& operator+=(const BlochSum& o);
    BlochSum& operator-=(const BlochSum& o);
    friend BlochSum operator+(BlochSum a, const BlochSum& b) { return a += b; }
    friend BlochSum operator-(BlochSum a, const BlochSum& b) { return a -= b; }
    friend BlochSum operator-(const BlochSum& a);
    friend BlochSum operator*(Int k, const BlochSum& a);

    /// Term-wise equality after normalization (order-insensitive).
    friend bool operator==(const BlochSum& a, const BlochSum& b);

private:
    std::vector<BlochTerm> terms_;
};

/// Sum of coef * R(param), not reduced.
cplx r_of_sum_raw(const BlochSum& s);
/// Sum of coef * R(param) modulo pi^2.
ModPiSquared r_of_sum(const BlochSum& s);
/// Weaker comparator: equal R-values modulo pi^2.
bool r_congruent(const BlochSum& a, const BlochSum& b, double tol = default_congruence_tol);
/// Weaker comparator: equal after forgetting branch data (sums of shapes in the
/// pre-Bloch group, compared term-wise).
bool same_projection(const BlochSum& a, const BlochSum& b, double tol = 1e-12);

/// chi(w) = [w;0,1] - [w;0,0]. chi(1) is the empty sum; w == 0 throws DomainError.
BlochSum chi(cplx w);

/// pq[x;1,1] - (pq-p)[x;1,0] - (pq-q)[x;0,1] + (pq-p-q+1)[x;0,0].
BlochSum transfer_expand(const ExtParam& param);

/// A lifted five-term instance: the shapes x, y, y/x, (1-1/x)/(1-1/y),
/// (1-x)/(1-y) with branch indices p[i], q[i].
struct FiveTermInstance {
    cplx x{};
    cplx y{};
    std::array<Int, 5> p{};
    std::array<Int, 5> q{};
    std::array<ExtParam, 5> params{};

    /// Alternating sum sum_i (-1)^i [x_i;p_i,q_i].
    [[nodiscard]] BlochSum alternating_sum() const;
};

/// Shapes of the five-term relation. Throws DegenerateError naming the index
/// of a shape that hits {0,1}.
std::array<cplx, 5> five_term_shapes(cplx x, cplx y);

/// Builds an instance with the derived branches
/// p2=p1-p0, p3=p1-p0+q1-q0, q3=q2-q1, p4=q1-q0, q4=q2-q1-p0.
FiveTermInstance five_term_instance(cplx x, cplx y, Int p0, Int q0, Int p1, Int q1, Int q2);

/// Builds an instance from arbitrary branch tuples (for validation).
FiveTermInstance five_term_instance_raw(cplx x, cplx y, const std::array<Int, 5>& p,
                                        const std::array<Int, 5>& q);

/// True iff the five integer expressions of the wedge map all vanish.
bool nu_vanishes(const FiveTermInstance& inst);

/// Five boundary points (z0..z4) whose omit-one simplices have the shapes of
/// the five-term relation: z2 = 0, z3 = 1, z4 = inf, z1 = 1 - 1/x, z0 = 1 - 1/y.
std::array<BoundaryPoint, 5> canonical_five_points(cplx x, cplx y);

/// Shape of the simplex obtained by omitting vertex k of the five points.
cplx omit_one_shape(const std::array<BoundaryPoint, 5>& pts, int k);

/// Edge-sum criterion: for each of the ten edges z_i z_j, the alternating sum
/// sum_k (-1)^k l_E over the three simplices containing it vanishes.
/// Throws DomainError if a flattening does not match its simplex shape.
bool verify_five_term_geometric(const std::array<BoundaryPoint, 5>& pts,
                                const std::array<FlatTriple, 5>& flats,
                                double tol = default_congruence_tol);

/// Completes flattenings on a subset of the omit-one simplices to all five.
/// Throws FlatteningError when no completion satisfies the edge sums.
std::array<FlatTriple, 5> extend_flattening(const std::array<BoundaryPoint, 5>& pts,
                                            const std::array<std::optional<FlatTriple>, 5>& known,
                                            double tol = default_congruence_tol);

struct FiveTermSweep {
    int count = 0;
    double max_residual = 0.0;  ///< max |sum (-1)^i R| mod pi^2
    int criteria_agree = 0;     ///< instances where nu_vanishes and the edge-sum test agree
};

/// Seeded random instances with x inside the triangle (0, 1, y), branch
/// indices in [-3, 3]. Every instance is also checked with one branch index
/// perturbed, which both criteria must reject.
FiveTermSweep five_term_sweep(int count, std::uint64_t seed);

} // namespace extbloch
