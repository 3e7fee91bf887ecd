#include <doctest.h>

#include "extbloch/branchlog.hpp"
#include "extbloch/errors.hpp"
#include "extbloch/ext_param.hpp"

#include <random>

using namespace extbloch;

namespace {

constexpr double V0 = 1.014941606409653625021202554;

// Li2(z) = -int_0^1 log(1 - s z) / s ds, composite Simpson along the segment.
cplx dilog_quadrature(cplx z, int intervals = 20000) {
    auto f = [&](double s) -> cplx {
        if (s == 0.0) return z;
        return -std::log(1.0 - s * z) / s;
    };
    const double h = 1.0 / intervals;
    cplx acc = f(0.0) + f(1.0);
    for (int k = 1; k < intervals; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(k * h);
    return acc * h / 3.0;
}

} // namespace

TEST_CASE("principal log convention") {
    CHECK(std::abs(principal_log(1.0)) == 0.0);
    CHECK(std::abs(principal_log(-1.0) - cplx(0.0, pi)) < 1e-15);
    CHECK(std::abs(principal_log(cplx(-1.0, -0.0)) - cplx(0.0, pi)) < 1e-15);
    CHECK(std::abs(principal_log(cplx(0.0, 2.0)) - cplx(std::log(2.0), pi / 2)) < 1e-15);
    CHECK_THROWS_AS(principal_log(0.0), DomainError);
    CHECK(std::abs(log_from_side(-2.0, Side::lower) - cplx(std::log(2.0), -pi)) < 1e-15);
}

TEST_CASE("exp inverts the principal log") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int k = 0; k < 200; ++k) {
        const cplx z(u(rng), u(rng));
        const cplx w = principal_log(z);
        CHECK(std::abs(std::exp(w) - z) <= 1e-14 * std::abs(z));
        CHECK(w.imag() > -pi);
        CHECK(w.imag() <= pi);
    }
}

TEST_CASE("dilog special values") {
    CHECK(std::abs(dilog(0.0)) == 0.0);
    // Partial sums of 1/k^2 with an Euler-Maclaurin tail.
    const int n = 100000;
    double s = 0.0;
    for (int k = n; k >= 1; --k) s += 1.0 / (static_cast<double>(k) * k);
    s += 1.0 / n - 0.5 / (static_cast<double>(n) * n) + 1.0 / (6.0 * n * n * static_cast<double>(n));
    CHECK(std::abs(dilog(1.0) - s) < 1e-13);
    const cplx half = dilog(0.5);
    CHECK(std::abs(half - dilog_quadrature(0.5)) < 1e-13);
    CHECK(std::abs(half - (pi_sq / 12 - 0.5 * std::log(2.0) * std::log(2.0))) < 1e-14);
}

TEST_CASE("dilog agrees with quadrature across the plane") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    int checked = 0;
    while (checked < 60) {
        const cplx z(u(rng), u(rng));
        // The straight segment from 0 must stay away from the singularity at 1.
        if (std::abs(z.imag()) < 0.2 && z.real() > 0.8) continue;
        CHECK(std::abs(dilog(z) - dilog_quadrature(z)) < 1e-11);
        ++checked;
    }
}

TEST_CASE("dilog inversion relation in the upper half-plane") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    std::uniform_real_distribution<double> v(0.01, 4.0);
    for (int k = 0; k < 200; ++k) {
        const cplx z(u(rng), v(rng));
        const cplx l = std::log(-z);
        CHECK(std::abs(dilog(z) + dilog(1.0 / z) - (-pi_sq / 6 - 0.5 * l * l)) < 1e-12);
    }
}

TEST_CASE("dilog on the cut is the one-sided limit") {
    const double x = 3.0;
    const cplx above = dilog(cplx(x, 1e-12));
    const cplx below = dilog(cplx(x, -1e-12));
    CHECK(std::abs(dilog(x, Side::upper) - above) < 1e-10);
    CHECK(std::abs(dilog(x, Side::lower) - below) < 1e-10);
}

TEST_CASE("rogers values") {
    CHECK(std::abs(rogers(0.5) - pi_sq / 12) < 1e-14);
    const cplx omega = std::exp(cplx(0.0, pi / 3));
    CHECK(std::abs(rogers(omega) - cplx(pi_sq / 12, V0)) < 1e-13);
    CHECK(std::abs(rogers(std::conj(omega)) - cplx(pi_sq / 12, -V0)) < 1e-13);
    CHECK_THROWS_AS(rogers(0.0), DomainError);
    CHECK_THROWS_AS(rogers(1.0), DomainError);
    CHECK_THROWS_AS(rogers(-2.0), DomainError);
}

TEST_CASE("R(z;p,q) at the golden values") {
    CHECK(std::abs(r_value(ExtParam(0.5, 0, 0)) + pi_sq / 12) < 1e-14);
    const cplx omega = std::exp(cplx(0.0, pi / 3));
    for (Int p = -3; p <= 3; ++p)
        for (Int q = -3; q <= 3; ++q) {
            const cplx want(static_cast<double>(2 * p - 2 * q - 1) * pi_sq / 12, V0);
            CHECK(std::abs(r_value(ExtParam(omega, p, q)) - want) < 1e-12);
            const cplx want_conj(want.real(), -V0);
            CHECK(std::abs(r_value(ExtParam(std::conj(omega), -p, -q)) - want_conj) < 1e-12);
        }
}

TEST_CASE("R(z;p+2,q) - R(z;p,q) = i pi log(1-z)") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_int_distribution<int> b(-4, 4);
    for (int k = 0; k < 200; ++k) {
        const ExtParam x(cplx(u(rng), u(rng)), b(rng), b(rng));
        const ExtParam y(x.z, x.p + 2, x.q);
        CHECK(std::abs(r_value(y) - r_value(x) - i_pi * principal_log(1.0 - x.z)) < 1e-12);
    }
}

TEST_CASE("R is conjugation-equivariant") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_int_distribution<int> b(-4, 4);
    for (int k = 0; k < 100; ++k) {
        const ExtParam x(cplx(u(rng), u(rng)), b(rng), b(rng));
        const ExtParam xc(std::conj(x.z), -x.p, -x.q);
        CHECK(std::abs(std::conj(r_value(x)) - r_value(xc)) < 1e-12);
    }
}

TEST_CASE("real shapes on the cuts need a side") {
    CHECK_THROWS_AS(ExtParam(-1.0, 0, 0), DomainError);
    CHECK_THROWS_AS(ExtParam(2.0, 0, 0), DomainError);
    CHECK_NOTHROW(ExtParam(0.3, 0, 0));
    // The two sides differ by a shift of two in the matching branch index.
    CHECK(distance_mod_pi2(r_value(ExtParam(-2.0, 0, 0, Side::lower)),
                           r_value(ExtParam(-2.0, -2, 0, Side::upper))) < 1e-12);
    CHECK(distance_mod_pi2(r_value(ExtParam(3.0, 0, 0, Side::lower)),
                           r_value(ExtParam(3.0, 0, -2, Side::upper))) < 1e-12);
    // Sided values are limits of nearby non-real values.
    const cplx above = r_value(ExtParam(cplx(3.0, 1e-13), 1, -1));
    CHECK(std::abs(r_value(ExtParam(3.0, 1, -1, Side::upper)) - above) < 1e-10);
}

TEST_CASE("mod pi^2 arithmetic") {
    CHECK(std::abs(mod_pi2(pi_sq + 1.0).value() - 1.0) < 1e-14);
    CHECK(std::abs(mod_pi2(-pi_sq / 12).real() - 11 * pi_sq / 12) < 1e-14);
    CHECK(mod_pi2(cplx(0.0, 3.0)).value() == cplx(0.0, 3.0));
    const ModPiSquared a = mod_pi2(cplx(2.5, 1.0));
    CHECK(mod_pi2(a.value()).value() == a.value());
    const ModPiSquared b = mod_pi2(cplx(9.0, -0.5));
    CHECK((a + b).congruent(mod_pi2(cplx(11.5, 0.5))));
    // Values straddling the wrap boundary are close.
    CHECK(mod_pi2(1e-12).congruent(mod_pi2(pi_sq - 1e-12)));
    CHECK_FALSE(mod_pi2(0.0).congruent(mod_pi2(cplx(0.0, 1e-6))));
}
