#include "extbloch/flattening.hpp"

#include "extbloch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace extbloch {

Mat2 Mat2::rotation(double angle) {
    // Acting on the upper half-plane, this fixes i and rotates by `angle`.
    const double h = 0.5 * angle;
    return {std::cos(h), std::sin(h), -std::sin(h), std::cos(h)};
}

Mat2 Mat2::inverse() const {
    const cplx det_ = det();
    if (std::abs(det_) == 0.0) throw DomainError("Mat2::inverse: singular matrix");
    return {d / det_, -b / det_, -c / det_, a / det_};
}

Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
}

double psl_distance(const Mat2& x, const Mat2& y) {
    auto dist = [](const Mat2& u, const Mat2& v, double sign) {
        return std::max({std::abs(u.a - sign * v.a), std::abs(u.b - sign * v.b),
                         std::abs(u.c - sign * v.c), std::abs(u.d - sign * v.d)});
    };
    return std::min(dist(x, y, 1.0), dist(x, y, -1.0));
}

// ---------------------------------------------------------------------------

BoundaryPoint::BoundaryPoint(cplx num, cplx den) {
    const double scale = std::max(std::abs(num), std::abs(den));
    if (scale == 0.0 || !std::isfinite(scale))
        throw DomainError("BoundaryPoint: coordinates must not both vanish");
    // Normalize so the larger coordinate is exactly 1.
    if (std::abs(num) >= std::abs(den)) {
        den_ = den / num;
        num_ = 1.0;
    } else {
        num_ = num / den;
        den_ = 1.0;
    }
}

cplx BoundaryPoint::affine() const {
    if (den_ == cplx(0.0, 0.0)) throw DomainError("BoundaryPoint::affine: point at infinity");
    return num_ / den_;
}

BoundaryPoint BoundaryPoint::moved_by(const Mat2& g) const {
    return {g.a * num_ + g.b * den_, g.c * num_ + g.d * den_};
}

cplx cross_ratio(const BoundaryPoint& z0, const BoundaryPoint& z1, const BoundaryPoint& z2,
                 const BoundaryPoint& z3) {
    const std::array<const BoundaryPoint*, 4> pts{&z0, &z1, &z2, &z3};
    auto gap = [&](int i, int j) {
        return pts[i]->num() * pts[j]->den() - pts[j]->num() * pts[i]->den();
    };
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (std::abs(gap(i, j)) <= coincidence_tol)
                throw DegenerateError("cross_ratio: points " + std::to_string(i) + " and " +
                                      std::to_string(j) + " coincide");
    return gap(2, 1) * gap(3, 0) / (gap(2, 0) * gap(3, 1));
}

// ---------------------------------------------------------------------------

int component_of_edge(SimplexEdge e) {
    switch (e) {
    case SimplexEdge::e01:
    case SimplexEdge::e23: return 0;
    case SimplexEdge::e03:
    case SimplexEdge::e12: return 1;
    case SimplexEdge::e02:
    case SimplexEdge::e13: return 2;
    }
    return 0;
}

SimplexEdge edge_from_slots(int a, int b) {
    if (a > b) std::swap(a, b);
    if (a < 0 || b > 3 || a == b) throw DomainError("edge_from_slots: invalid vertex pair");
    if (a == 0) return static_cast<SimplexEdge>(b - 1);      // 01, 02, 03
    if (a == 1) return static_cast<SimplexEdge>(b + 1);      // 12, 13
    return SimplexEdge::e23;
}

int component_of_edge(int a, int b) { return component_of_edge(edge_from_slots(a, b)); }

FlatTriple ell(const ExtParam& x) {
    const cplx lz = x.log_z();
    const cplx l1mz = x.log_one_minus_z();
    const cplx w0 = lz + static_cast<double>(x.p) * i_pi;
    const cplx w1 = -l1mz + static_cast<double>(x.q) * i_pi;
    // w2 written as -(w0 + w1) so the components sum to zero exactly.
    return {w0, w1, -(w0 + w1)};
}

namespace {

Int nearest_integer_multiple_of_pi_i(cplx w, double tol, const char* what) {
    const double s = w.imag() / pi;
    const double r = std::round(s);
    if (std::abs(s - r) > tol || std::abs(w.real()) > tol)
        throw DomainError(std::string("from_triple: ") + what + " is not an integer multiple of pi i");
    return static_cast<Int>(r);
}

} // namespace

ExtParam from_triple(const FlatTriple& t, double tol) {
    if (std::abs(t.sum()) > tol) throw DomainError("from_triple: components do not sum to zero");
    const cplx e0 = std::exp(t.w0);
    const cplx e1 = std::exp(-t.w1);
    // z = +-e^{w0} and 1 - z = +-e^{-w1}; pick the sign combination that fits.
    double best = std::numeric_limits<double>::infinity();
    cplx z{};
    for (double s : {1.0, -1.0})
        for (double u : {1.0, -1.0}) {
            const double mismatch = std::abs(1.0 - s * e0 - u * e1);
            if (mismatch < best) {
                best = mismatch;
                z = s * e0;
            }
        }
    const double scale = std::max({1.0, std::abs(e0), std::abs(e1)});
    if (best > tol * scale) throw DomainError("from_triple: no shape z matches the triple");
    // Snap shapes that are real up to rounding.
    if (std::abs(z.imag()) <= 1e-15 * std::max(1.0, std::abs(z))) z = {z.real(), 0.0};
    if (std::abs(z) <= tol || std::abs(1.0 - z) <= tol)
        throw DomainError("from_triple: recovered shape is degenerate");
    const Side side = side_for(z, Side::upper);
    const ExtParam base(z, 0, 0, side);
    const Int p = nearest_integer_multiple_of_pi_i(t.w0 - base.log_z(), 1e-6, "w0 - log z");
    const Int q = nearest_integer_multiple_of_pi_i(t.w1 + base.log_one_minus_z(), 1e-6,
                                                   "w1 + log(1-z)");
    return {z, p, q, side};
}

cplx edge_param(const FlatTriple& t, SimplexEdge e) { return t[component_of_edge(e)]; }

cplx edge_shape(cplx z, SimplexEdge e) {
    switch (component_of_edge(e)) {
    case 0: return z;
    case 1: return 1.0 / (1.0 - z);
    default: return 1.0 - 1.0 / z;
    }
}

int parity_param(const FlatTriple& t, SimplexEdge e) {
    const ExtParam x = from_triple(t);
    const cplx shape = edge_shape(x.z, e);
    const cplx diff = edge_param(t, e) - principal_log(shape);
    const double s = diff.imag() / pi;
    const double r = std::round(s);
    if (std::abs(s - r) > 1e-6 || std::abs(diff.real()) > 1e-6)
        throw Error("parity_param: log-parameter is not log(shape) + s pi i");
    const Int si = static_cast<Int>(r);
    return static_cast<int>(((si % 2) + 2) % 2);
}

int parity_of_component(Int p, Int q, int component) {
    Int s = 0;
    switch (component) {
    case 0: s = p; break;
    case 1: s = q; break;
    default: s = p + q + 1; break;
    }
    return static_cast<int>(((s % 2) + 2) % 2);
}

// ---------------------------------------------------------------------------

namespace {

ExtParam conjugate(const ExtParam& x) {
    Side s = x.side;
    if (s == Side::upper) s = Side::lower;
    else if (s == Side::lower) s = Side::upper;
    return {std::conj(x.z), -x.p, -x.q, s};
}

void require_nonreal(const ExtParam& x, const char* op) {
    if (x.is_real())
        throw DomainError(std::string(op) + ": reordering identities are not available for real shapes");
}

Reordered even_upper(const ExtParam& x, EvenReorder which) {
    const cplx z = x.z;
    if (which == EvenReorder::order_0312)
        return {ExtParam(1.0 / (1.0 - z), x.q, -1 - x.p - x.q),
                std::exp(cplx(0.0, pi / 3.0 + static_cast<double>(x.q) * pi))};
    return {ExtParam(1.0 - 1.0 / z, -1 - x.p - x.q, x.p),
            std::exp(cplx(0.0, -pi / 3.0 + static_cast<double>(x.p) * pi))};
}

Reordered odd_upper(const ExtParam& x, OddReorder which) {
    const cplx z = x.z;
    switch (which) {
    case OddReorder::swap01:
        return {ExtParam(1.0 / z, -x.p, 1 + x.p + x.q),
                std::exp(cplx(0.0, static_cast<double>(x.p) * pi))};
    case OddReorder::swap13:
        return {ExtParam(1.0 - z, -x.q, -x.p), std::exp(cplx(0.0, pi / 3.0))};
    case OddReorder::swap12:
        return {ExtParam(z / (z - 1.0), 1 + x.p + x.q, -x.q),
                std::exp(cplx(0.0, 2.0 * pi / 3.0 + static_cast<double>(x.q) * pi))};
    }
    return {x, 1.0};
}

} // namespace

Reordered permute_even(const ExtParam& x, EvenReorder which) {
    require_nonreal(x, "permute_even");
    if (x.z.imag() > 0.0) return even_upper(x, which);
    // Lower half-plane: conjugate, apply the upper identity, conjugate back.
    // Conjugating R(chi(w)) = (pi i / 2) log w replaces w by 1/conj(w).
    const Reordered r = even_upper(conjugate(x), which);
    return {conjugate(r.param), 1.0 / std::conj(r.chi_argument)};
}

Reordered permute_odd(const ExtParam& x, OddReorder which) {
    require_nonreal(x, "permute_odd");
    if (x.z.imag() > 0.0) return odd_upper(x, which);
    const Reordered r = odd_upper(conjugate(x), which);
    return {conjugate(r.param), 1.0 / std::conj(r.chi_argument)};
}

} // namespace extbloch
