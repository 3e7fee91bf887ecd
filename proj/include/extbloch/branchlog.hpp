#pragma once

// Branch-aware complex special functions: logarithms, the dilogarithm,
// the Rogers dilogarithm and its lift R(z;p,q), arithmetic in C / pi^2 Z.

#include <complex>
#include <numbers>

namespace extbloch {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double pi_sq = std::numbers::pi * std::numbers::pi;
inline constexpr cplx i_pi{0.0, std::numbers::pi};

/// Default tolerance for congruences modulo pi^2.
inline constexpr double default_congruence_tol = 1e-9;

/// Half-plane from which a real argument on a branch cut is approached.
/// `none` is only meaningful off the cuts.
enum class Side { none, upper, lower };

/// Log with imaginary part in (-pi, pi]. Throws DomainError for z == 0.
cplx principal_log(cplx z);

/// Log of z evaluated as a limit from the given half-plane when z is a
/// negative real; otherwise identical to principal_log.
cplx log_from_side(cplx z, Side side);

/// Principal dilogarithm Li2(z) = -int_0^z log(1-t)/t dt.
/// On the cut (1, inf) the value is the limit from the upper half-plane.
cplx dilog(cplx z);

/// Dilogarithm with an explicit side for real arguments on (1, inf).
cplx dilog(cplx z, Side side);

/// Rogers dilogarithm 1/2 log z log(1-z) + Li2(z).
/// Real z outside [0,1] requires a side; z in {0,1} throws DomainError.
cplx rogers(cplx z, Side side = Side::none);

/// Bloch-Wigner function D(z) = Im Li2(z) + arg(1-z) log|z|; zero on the reals.
double bloch_wigner(cplx z);

/// A complex number modulo pi^2 Z (acting on the real part).
class ModPiSquared {
public:
    ModPiSquared() = default;
    explicit ModPiSquared(cplx c);

    [[nodiscard]] cplx value() const { return value_; }
    [[nodiscard]] double real() const { return value_.real(); }
    [[nodiscard]] double imag() const { return value_.imag(); }

    /// Distance in C / pi^2 Z: max of the imaginary gap and the circular real gap.
    [[nodiscard]] double distance(const ModPiSquared& other) const;
    [[nodiscard]] bool congruent(const ModPiSquared& other,
                                 double tol = default_congruence_tol) const {
        return distance(other) <= tol;
    }

    ModPiSquared& operator+=(const ModPiSquared& o);
    ModPiSquared& operator-=(const ModPiSquared& o);
    friend ModPiSquared operator+(ModPiSquared a, const ModPiSquared& b) { return a += b; }
    friend ModPiSquared operator-(ModPiSquared a, const ModPiSquared& b) { return a -= b; }

private:
    cplx value_{};
};

/// Reduce the real part into [0, pi^2).
ModPiSquared mod_pi2(cplx c);

/// Circular distance of the real parts modulo pi^2 combined with the imaginary gap.
double distance_mod_pi2(cplx a, cplx b);

} // namespace extbloch
