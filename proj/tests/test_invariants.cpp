#include <doctest.h>

#include "extbloch/errors.hpp"
#include "extbloch/invariants.hpp"

#include <algorithm>
#include <random>

using namespace extbloch;

namespace {

OrderedTriangulation m004() { return load_triangulation(std::string(EXTBLOCH_DATA_DIR) + "/m004.tri.json"); }

constexpr double V0 = 1.014941606409653625021202554;
const cplx omega = std::exp(cplx(0.0, pi / 3.0));

PipelineOptions both() {
    PipelineOptions o;
    o.corrected = true;
    return o;
}

} // namespace

TEST_CASE("m004: twice the regular ideal tetrahedron, cs zero") {
    const auto res = run_pipeline(m004(), {}, both());
    REQUIRE(res.direct);
    CHECK(res.direct->volume == doctest::Approx(2.0 * V0).epsilon(1e-13));
    CHECK(res.direct->r.distance(ModPiSquared(cplx(0.0, 2.0 * V0))) < 1e-12);
    CHECK(res.direct->cs_over_2pi2 == 0.0);

    BlochSum expect;
    expect.add(1, ExtParam(omega, 0, -1));
    expect.add(-1, ExtParam(1.0 / omega, 0, 1));
    CHECK(r_congruent(res.direct->beta, expect, 1e-12));
    CHECK(res.corrected->r.distance(res.direct->r) < 1e-12);
}

TEST_CASE("volume from R agrees with Bloch-Wigner") {
    const auto tri = m004();
    const auto res = run_pipeline(tri);
    CHECK(res.direct->volume == doctest::Approx(bloch_wigner_volume(res.complete.z, res.signs)).epsilon(1e-12));
}

TEST_CASE("Dehn fillings: both formulas agree") {
    const auto tri = m004();
    for (auto [a, b] : std::vector<std::pair<Int, Int>>{{5, 1}, {1, 2}, {6, 1}, {7, 1}, {3, 2}}) {
        CAPTURE(a);
        CAPTURE(b);
        const auto res = run_pipeline(tri, {make_filling(a, b)}, both());
        REQUIRE(res.direct);
        REQUIRE(res.corrected);
        CHECK(res.direct->r.distance(res.corrected->r) < 1e-9);
        CHECK(std::abs(res.direct->volume - bloch_wigner_volume(res.filled->z, res.signs)) < 1e-9);
        CHECK(res.direct->volume < 2.0 * V0);
        CHECK(res.direct->volume > 0.0);
    }
}

TEST_CASE("m004(5,1) is the Meyerhoff manifold") {
    const auto res = run_pipeline(m004(), {make_filling(5, 1)});
    CHECK(res.direct->volume == doctest::Approx(0.9813688288922).epsilon(1e-11));
}

TEST_CASE("the filling answer does not depend on the choice of (gamma, delta)") {
    const auto tri = m004();
    const Filling f = make_filling(5, 1);
    const auto a = run_pipeline(tri, {f}, both());
    const auto b = run_pipeline(tri, {make_filling(5, 1, f.gamma - 5, f.delta - 1)}, both());
    CHECK(a.direct->r.distance(b.direct->r) < 1e-9);
    CHECK(a.corrected->r.distance(b.corrected->r) < 1e-9);
}

TEST_CASE("lens spaces have R = pi^2 / n") {
    for (int n = 2; n <= 7; ++n)
        for (std::uint64_t seed : {0, 1, 9}) {
            CAPTURE(n);
            const auto lens = lens_space_class(n, seed);
            CHECK(lens.report.r.distance(ModPiSquared(cplx(pi_sq / n, 0.0))) < 1e-9);
            CHECK(std::abs(lens.report.volume) < 1e-9);
        }
    const auto trivial = lens_space_class(1);
    CHECK(trivial.beta.empty());
    CHECK_FALSE(trivial.report.warnings.empty());
    CHECK_THROWS_AS(lens_space_class(0), DomainError);
}

TEST_CASE("base points do not matter") {
    for (int n : {3, 5, 6}) {
        const auto lens = lens_space_class(n, 4);
        for (std::uint64_t seed = 0; seed < 6; ++seed) {
            PipelineOptions o;
            o.seed = seed;
            CHECK(run_pipeline(lens.tri, {}, o).direct->r.distance(lens.report.r) < 1e-9);
        }
    }
}

TEST_CASE("a constant cochain on the labels does not matter") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> nd;
    for (int n : {2, 4, 7}) {
        const auto lens = lens_space_class(n, 6);
        Mat2 h{cplx(nd(rng), nd(rng)), cplx(nd(rng), nd(rng)), cplx(nd(rng), nd(rng)), 0.0};
        h.d = (1.0 + h.b * h.c) / h.a;
        std::vector<Labels> labels = lens.tri.labels();
        for (Labels& l : labels)
            for (Mat2& g : l) g = g * h;
        const OrderedTriangulation moved(lens.tri.name(), lens.tri.tets(), labels, {}, lens.tri.signs());
        CHECK(run_pipeline(moved).direct->r.distance(lens.report.r) < 1e-9);
    }
}

TEST_CASE("2-3 moves on m004 keep the invariant") {
    const auto tri = m004();
    const ModPiSquared r0 = run_pipeline(tri).direct->r;
    for (int t = 0; t < 2; ++t)
        for (int f = 0; f < 4; ++f) {
            CAPTURE(t);
            CAPTURE(f);
            const auto moved = pachner_23(tri, t, f);
            const auto res = run_pipeline(moved);
            CHECK(res.direct->r.distance(r0) < 1e-9);
            CHECK(res.warnings.empty());
        }
}

TEST_CASE("pairing order of a chain does not matter") {
    // The same lens chain listed in two orders gives congruent classes.
    const int n = 5;
    const Mat2 g = Mat2::rotation(2.0 * pi / n);
    const Mat2 h1 = Mat2::rotation(0.37);
    const Mat2 h2 = Mat2::rotation(1.91);
    std::vector<ChainSimplex> chain;
    Mat2 gj = Mat2::identity();
    for (int j = 0; j < n; ++j) {
        chain.push_back({1, {h1, g * h1, gj * h2, g * gj * h2}});
        gj = g * gj;
    }
    auto shuffled = chain;
    std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(3));
    const auto a = run_pipeline(cycle_from_homogeneous_chain(chain));
    const auto b = run_pipeline(cycle_from_homogeneous_chain(shuffled));
    CHECK(a.direct->r.distance(b.direct->r) < 1e-9);
    CHECK(a.direct->r.distance(ModPiSquared(cplx(pi_sq / n, 0.0))) < 1e-9);
}

TEST_CASE("report ranges") {
    const auto lens = lens_space_class(3);
    CHECK(lens.report.cs >= 0.0);
    CHECK(lens.report.cs < pi_sq);
    CHECK(lens.report.cs_over_2pi2 >= 0.0);
    CHECK(lens.report.cs_over_2pi2 < 0.5);
    CHECK_THROWS_AS(run_pipeline(lens.tri, {make_filling(1, 0)}), DomainError);
}
