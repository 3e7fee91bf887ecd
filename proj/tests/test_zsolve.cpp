#include <doctest.h>

#include "extbloch/zsolve.hpp"

#include <random>

using namespace extbloch;

namespace {

IntVector vec(std::initializer_list<long long> v) {
    IntVector out;
    for (long long x : v) out.emplace_back(x);
    return out;
}

// Row-style Hermite conditions: echelon, positive pivots, reduced above pivots.
bool is_hermite(const IntMatrix& h) {
    std::size_t last = 0;
    bool seen_zero_row = false;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        std::size_t c = 0;
        while (c < h.cols() && h(i, c).is_zero()) ++c;
        if (c == h.cols()) {
            seen_zero_row = true;
            continue;
        }
        if (seen_zero_row) return false;
        if (i > 0 && c <= last) return false;
        if (h(i, c) <= 0) return false;
        for (std::size_t r = 0; r < i; ++r)
            if (h(r, c) < 0 || h(r, c) >= h(i, c)) return false;
        last = c;
    }
    return true;
}

} // namespace

TEST_CASE("Hermite normal form examples") {
    const auto id = IntMatrix::identity(3);
    const auto hf = hermite_normal_form(id);
    CHECK(hf.H == id);
    CHECK(hf.U == id);

    const auto a = IntMatrix::from_rows({{2, 4}, {1, 3}});
    const auto h2 = hermite_normal_form(a);
    CHECK(h2.H(0, 0) == 1);
    CHECK(h2.U * a == h2.H);
    CHECK(abs(determinant(h2.U)) == 1);
    CHECK(is_hermite(h2.H));

    const IntMatrix zero(2, 3);
    const auto hz = hermite_normal_form(zero);
    CHECK(hz.H.is_zero());
    CHECK(hz.U == IntMatrix::identity(2));
    CHECK(hz.rank == 0);
}

TEST_CASE("determinant") {
    CHECK(determinant(IntMatrix::from_rows({{2, 1}, {7, 4}})) == 1);
    CHECK(determinant(IntMatrix::from_rows({{0, 1, 2}, {1, 0, 3}, {4, -3, 8}})) == -2);
    CHECK(determinant(IntMatrix::from_rows({{1, 2}, {2, 4}})) == 0);
}

TEST_CASE("solve_integer examples") {
    auto s1 = solve_integer(IntMatrix::from_rows({{2, 0}, {0, 3}}), vec({4, 9}));
    REQUIRE(s1);
    CHECK(s1->particular == vec({2, 3}));
    CHECK(s1->kernel.empty());

    CHECK_FALSE(solve_integer(IntMatrix::from_rows({{2}}), vec({3})));

    auto s3 = solve_integer(IntMatrix::from_rows({{1, 1}}), vec({0}));
    REQUIRE(s3);
    CHECK(s3->particular == vec({0, 0}));
    REQUIRE(s3->kernel.size() == 1);
    CHECK(s3->kernel[0] == vec({1, -1}));
}

TEST_CASE("solve_mod2 examples") {
    const BitMatrix id{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    CHECK(*solve_mod2(id, {1, 0, 1}) == BitVector{1, 0, 1});
    CHECK(*solve_mod2({{1, 1}}, {1}) == BitVector{0, 1});
    CHECK_FALSE(solve_mod2({{0}}, {1}));
    CHECK(*solve_mod2({}, {}, 3) == BitVector{0, 0, 0});
}

TEST_CASE("solve_mod2 returns the lexicographically least solution") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 200; ++t) {
        const std::size_t m = 1 + rng() % 4;
        const std::size_t n = 1 + rng() % 5;
        BitMatrix a(m, BitVector(n));
        for (auto& r : a)
            for (auto& x : r) x = rng() & 1U;
        BitVector b(m);
        for (auto& x : b) x = rng() & 1U;
        // Brute force in lexicographic order (x0 most significant).
        std::optional<BitVector> best;
        for (std::size_t mask = 0; mask < (1U << n) && !best; ++mask) {
            BitVector x(n);
            for (std::size_t j = 0; j < n; ++j) x[j] = (mask >> (n - 1 - j)) & 1U;
            bool ok = true;
            for (std::size_t i = 0; i < m && ok; ++i) {
                unsigned acc = 0;
                for (std::size_t j = 0; j < n; ++j) acc ^= a[i][j] & x[j];
                ok = acc == b[i];
            }
            if (ok) best = x;
        }
        const auto got = solve_mod2(a, b);
        CHECK(got.has_value() == best.has_value());
        if (got && best) CHECK(*got == *best);
    }
}

TEST_CASE("planted integer systems") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> e(-4, 4);
    for (int t = 0; t < 500; ++t) {
        const std::size_t m = 1 + rng() % 5;
        const std::size_t n = 1 + rng() % 6;
        IntMatrix a(m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = e(rng);
        IntVector x(n);
        for (auto& v : x) v = e(rng);
        const IntVector b = a.apply(x);
        const auto sol = solve_integer(a, b);
        REQUIRE(sol);
        CHECK(a.apply(sol->particular) == b);
        for (const auto& k : sol->kernel) CHECK(a.apply(k) == IntVector(m));
        // The planted solution differs from x0 by an integer kernel combination.
        IntMatrix kt(n, sol->kernel.size());
        for (std::size_t c = 0; c < sol->kernel.size(); ++c)
            for (std::size_t j = 0; j < n; ++j) kt(j, c) = sol->kernel[c][j];
        IntVector diff(n);
        for (std::size_t j = 0; j < n; ++j) diff[j] = x[j] - sol->particular[j];
        CHECK(solve_integer(kt, diff).has_value());
        const auto hf = hermite_normal_form(a.transpose());
        CHECK(sol->kernel.size() == n - hf.rank);
        CHECK(abs(determinant(hf.U)) == 1);
        CHECK(hf.U * a.transpose() == hf.H);
        CHECK(is_hermite(hf.H));
        // Idempotence on H.
        CHECK(hermite_normal_form(hf.H).H == hf.H);
    }
}
