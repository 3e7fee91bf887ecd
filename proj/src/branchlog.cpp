#include "extbloch/branchlog.hpp"

#include "extbloch/errors.hpp"
#include "extbloch/ext_param.hpp"

#include <array>
#include <cmath>
#include <ostream>

namespace extbloch {

namespace {

// B_n / (n+1)! for n = 0, 1, 2, 4, ..., 42.
constexpr std::array<double, 23> bernoulli_coeffs = {
    1.00000000000000000e+00,  -2.50000000000000000e-01, 2.77777777777777762e-02,
    -2.77777777777777778e-04, 4.72411186696900978e-06,  -9.18577307466196408e-08,
    1.89788699889710005e-09,  -4.06476164514422560e-11, 8.92169102045645230e-13,
    -1.99392958607210744e-14, 4.51898002961991825e-16,  -1.03565176121812472e-17,
    2.39521862102618698e-19,  -5.58178587432500898e-21, 1.30915075541832125e-22,
    -3.08741980242674029e-24, 7.31597565270220293e-26,  -1.74084565723400088e-27,
    4.15763564461389988e-29,  -9.96214848828462168e-31, 2.39403442489616522e-32,
    -5.76834735536738970e-34, 1.39317947964700803e-35,
};

// Li2 via the Bernoulli series in u = -log(1-z). Converges for |u| < 2 pi;
// used where |z| <= 1 and Re z <= 1/2, so |u| stays below about 1.05.
cplx dilog_bernoulli(cplx z) {
    const cplx u = -std::log(1.0 - z);
    const cplx u2 = u * u;
    cplx sum = u + bernoulli_coeffs[1] * u2;
    cplx power = u;  // u^(n+1) for n = 0
    for (std::size_t k = 2; k < bernoulli_coeffs.size(); ++k) {
        power *= u2;
        sum += bernoulli_coeffs[k] * power;
    }
    return sum;
}

// Principal Li2 for z off the cut (1, inf).
cplx dilog_principal(cplx z) {
    if (z == cplx(0.0, 0.0)) return 0.0;
    if (z == cplx(1.0, 0.0)) return pi_sq / 6.0;
    const double r = std::abs(z);
    if (r > 1.0) {
        // Li2(z) + Li2(1/z) = -pi^2/6 - 1/2 log^2(-z)
        const cplx l = std::log(-z);
        return -dilog_principal(1.0 / z) - pi_sq / 6.0 - 0.5 * l * l;
    }
    if (z.real() > 0.5) {
        // Li2(z) + Li2(1-z) = pi^2/6 - log z log(1-z)
        return pi_sq / 6.0 - std::log(z) * std::log(1.0 - z) - dilog_bernoulli(1.0 - z);
    }
    return dilog_bernoulli(z);
}

bool on_negative_axis(cplx z) { return z.imag() == 0.0 && z.real() < 0.0; }

} // namespace

cplx principal_log(cplx z) {
    if (z == cplx(0.0, 0.0)) throw DomainError("principal_log: argument is zero");
    // std::log returns the branch with Im in [-pi, pi]; -0.0 imaginary parts
    // land on -pi, which the half-open convention maps to +pi.
    if (on_negative_axis(z)) return {std::log(-z.real()), pi};
    return std::log(z);
}

cplx log_from_side(cplx z, Side side) {
    if (on_negative_axis(z) && side == Side::lower) {
        if (z == cplx(0.0, 0.0)) throw DomainError("log_from_side: argument is zero");
        return {std::log(-z.real()), -pi};
    }
    return principal_log(z);
}

cplx dilog(cplx z) { return dilog(z, Side::upper); }

cplx dilog(cplx z, Side side) {
    if (z.imag() == 0.0 && z.real() > 1.0) {
        const double x = z.real();
        // Real part from the inversion formula on the reals; imaginary part
        // jumps by 2 pi log x across the cut.
        const double l = std::log(x);
        const double re = -dilog_principal(1.0 / x).real() + pi_sq / 3.0 - 0.5 * l * l;
        const double im = pi * l;
        return {re, side == Side::lower ? -im : im};
    }
    return dilog_principal(z);
}

cplx rogers(cplx z, Side side) {
    if (z == cplx(0.0, 0.0) || z == cplx(1.0, 0.0))
        throw DomainError("rogers: argument must avoid {0, 1}");
    const bool on_cut = z.imag() == 0.0 && (z.real() < 0.0 || z.real() > 1.0);
    if (on_cut && side == Side::none)
        throw DomainError("rogers: real argument on a branch cut needs a side");
    const Side opposite = side == Side::upper ? Side::lower : Side::upper;
    const cplx log_z = log_from_side(z, side);
    const cplx log_1mz = log_from_side(1.0 - z, on_cut ? opposite : Side::none);
    return 0.5 * log_z * log_1mz + dilog(z, side);
}

double bloch_wigner(cplx z) {
    if (z.imag() == 0.0) return 0.0;
    return dilog_principal(z).imag() + std::arg(1.0 - z) * std::log(std::abs(z));
}

// ---------------------------------------------------------------------------

namespace {
double reduce_real(double x) {
    double r = std::fmod(x, pi_sq);
    if (r < 0.0) r += pi_sq;
    if (r >= pi_sq) r -= pi_sq;
    return r;
}
} // namespace

ModPiSquared::ModPiSquared(cplx c) : value_(reduce_real(c.real()), c.imag()) {}

double ModPiSquared::distance(const ModPiSquared& other) const {
    return distance_mod_pi2(value_, other.value_);
}

ModPiSquared& ModPiSquared::operator+=(const ModPiSquared& o) {
    *this = ModPiSquared(value_ + o.value_);
    return *this;
}

ModPiSquared& ModPiSquared::operator-=(const ModPiSquared& o) {
    *this = ModPiSquared(value_ - o.value_);
    return *this;
}

ModPiSquared mod_pi2(cplx c) { return ModPiSquared(c); }

double distance_mod_pi2(cplx a, cplx b) {
    const double d = reduce_real(a.real() - b.real());
    const double re_gap = std::min(d, pi_sq - d);
    return std::max(re_gap, std::abs(a.imag() - b.imag()));
}

// ---------------------------------------------------------------------------

ExtParam::ExtParam(cplx z_in, Int p_in, Int q_in, Side side_in)
    : z(z_in), p(p_in), q(q_in), side(side_in) {
    if (z == cplx(0.0, 0.0) || z == cplx(1.0, 0.0))
        throw DomainError("ExtParam: shape must avoid {0, 1}");
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("ExtParam: shape is not finite");
    if (z.imag() != 0.0) {
        side = Side::none;
    } else if (z.real() > 0.0 && z.real() < 1.0) {
        side = Side::none;
    } else if (side == Side::none) {
        throw DomainError("ExtParam: real shape outside (0,1) needs a side flag");
    }
}

cplx ExtParam::log_z() const { return log_from_side(z, side); }

cplx ExtParam::log_one_minus_z() const {
    Side s = Side::none;
    if (side == Side::upper) s = Side::lower;
    if (side == Side::lower) s = Side::upper;
    return log_from_side(1.0 - z, s);
}

std::ostream& operator<<(std::ostream& os, const ExtParam& x) {
    os << "[" << x.z.real() << (x.z.imag() < 0 ? "-" : "+") << std::abs(x.z.imag()) << "i";
    if (x.side == Side::upper) os << "(+0i)";
    if (x.side == Side::lower) os << "(-0i)";
    return os << ";" << x.p << "," << x.q << "]";
}

Side side_for(cplx z, Side hint) {
    if (z.imag() != 0.0) return Side::none;
    if (z.real() > 0.0 && z.real() < 1.0) return Side::none;
    return hint == Side::none ? Side::upper : hint;
}

cplx r_value(const ExtParam& x) {
    const cplx log_z = x.log_z();
    const cplx log_1mz = x.log_one_minus_z();
    const cplx rog = 0.5 * log_z * log_1mz + dilog(x.z, x.side);
    return rog + 0.5 * i_pi * (static_cast<double>(x.p) * log_1mz + static_cast<double>(x.q) * log_z) -
           pi_sq / 6.0;
}

} // namespace extbloch
