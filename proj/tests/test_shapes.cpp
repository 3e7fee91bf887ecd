#include <doctest.h>

#include "extbloch/errors.hpp"
#include "extbloch/invariants.hpp"
#include "extbloch/shapes.hpp"

using namespace extbloch;

namespace {

OrderedTriangulation m004() { return load_triangulation(std::string(EXTBLOCH_DATA_DIR) + "/m004.tri.json"); }

const cplx omega = std::exp(cplx(0.0, pi / 3.0));

cplx mobius(const Mat2& g, cplx z) { return (g.a * z + g.b) / (g.c * z + g.d); }

} // namespace

TEST_CASE("Newton finds the regular shapes of m004") {
    const auto tri = m004();
    const GluingSystem sys = build_gluing_system(tri, {}, tri.signs());
    CHECK(sys.rows.size() == 4);  // two edges, meridian, longitude
    const ShapeAssignment s = solve_newton(sys, default_initial_shapes(tri.size()));
    CHECK(std::abs(s.z[0] - omega) < 1e-12);
    CHECK(std::abs(s.z[1] - 1.0 / omega) < 1e-12);
    CHECK(max_residual(sys, s) < 1e-12);
    CHECK(s.consistent());
}

TEST_CASE("edge rows of m004 read 2 log z + log z' - log y' - 2 log y'' = 2 pi i") {
    const auto tri = m004();
    const GluingSystem sys = build_gluing_system(tri, {}, tri.signs());
    // In the (L0, L1, L2) basis that is [2,1,0] on tet 0 and [0,-1,-2] on tet 1, up to the row sign.
    const auto& c = sys.rows[0].counts;
    const int s = c[0][0] > 0 ? 1 : -1;
    CHECK(std::array<int, 3>{s * c[0][0], s * c[0][1], s * c[0][2]} == std::array<int, 3>{2, 1, 0});
    CHECK(std::array<int, 3>{s * c[1][0], s * c[1][1], s * c[1][2]} == std::array<int, 3>{0, -1, -2});
    for (const GluingRow& r : sys.rows)
        if (r.kind == RowKind::edge) CHECK(std::abs(r.target - cplx(0.0, 2.0 * pi)) < 1e-15);
}

TEST_CASE("shapes from labels match the moved cross-ratios") {
    const auto lens = lens_space_class(4, 2);
    const auto& tri = lens.tri;
    const auto base = random_base_points(tri.vertex_count(), 17);
    const ShapeAssignment s = shapes_from_labels(tri, base);
    for (std::size_t t = 0; t < tri.size(); ++t) {
        std::array<cplx, 4> w{};
        for (int k = 0; k < 4; ++k)
            w[k] = mobius(tri.labels()[t][k], base[static_cast<std::size_t>(tri.vertex_of(static_cast<int>(t), k))].affine());
        const cplx expect = (w[2] - w[1]) * (w[3] - w[0]) / ((w[2] - w[0]) * (w[3] - w[1]));
        CHECK(std::abs(s.z[t] - expect) < 1e-10 * std::max(1.0, std::abs(expect)));
    }
}

TEST_CASE("make_filling completes to determinant one") {
    for (auto [a, b] : std::vector<std::pair<Int, Int>>{{5, 1}, {1, 2}, {6, 1}, {-3, 7}, {0, 1}, {1, 0}}) {
        const Filling f = make_filling(a, b);
        CHECK(f.alpha * f.delta - f.beta * f.gamma == 1);
    }
    CHECK(make_filling(5, 1).gamma == -1);
    CHECK(make_filling(5, 1).delta == 0);
    CHECK_THROWS_AS(make_filling(4, 2), DomainError);
    CHECK_THROWS_AS(make_filling(1, 2, 0, 0), DomainError);
}

TEST_CASE("filled structures satisfy the filling equation") {
    const auto tri = m004();
    const auto complete = run_pipeline(tri).complete;
    for (auto [a, b] : std::vector<std::pair<Int, Int>>{{5, 1}, {1, 2}, {6, 1}}) {
        const FillingSpec fs{make_filling(a, b)};
        const ShapeAssignment s = continue_to_filling(tri, complete, fs, tri.signs());
        CHECK(max_residual(build_gluing_system(tri, fs, tri.signs()), s) < 1e-10);
        CHECK(s.consistent());
        // Positively oriented all along.
        for (std::size_t t = 0; t < s.size(); ++t) CHECK(tri.signs()[t] * s.z[t].imag() > 0.0);
    }
}

TEST_CASE("complex length shifts by -2 pi i when (gamma, delta) moves by (alpha, beta)") {
    const auto tri = m004();
    const auto complete = run_pipeline(tri).complete;
    const Filling f = make_filling(5, 1);
    const ShapeAssignment s = continue_to_filling(tri, complete, {f}, tri.signs());
    const Filling g = make_filling(5, 1, f.gamma + 5, f.delta + 1);
    const cplx l1 = complex_length(tri, s, tri.signs(), {f}, 0);
    const cplx l2 = complex_length(tri, s, tri.signs(), {g}, 0);
    CHECK(std::abs(l2 - l1 + cplx(0.0, 2.0 * pi)) < 1e-10);
    // The core geodesic has positive length.
    CHECK(l1.real() > 0.0);
    CHECK_THROWS_AS(complex_length(tri, s, tri.signs(), {std::nullopt}, 0), DomainError);
}

TEST_CASE("coarse and fine continuation land on the same structure") {
    const auto tri = m004();
    const auto complete = run_pipeline(tri).complete;
    const FillingSpec fs{make_filling(6, 1)};
    const ShapeAssignment a = continue_to_filling(tri, complete, fs, tri.signs(), 1);
    const ShapeAssignment b = continue_to_filling(tri, complete, fs, tri.signs(), 64);
    for (std::size_t t = 0; t < a.size(); ++t) CHECK(std::abs(a.z[t] - b.z[t]) < 1e-10);
}

TEST_CASE("from_logs keeps log(1-z) on the nearest branch") {
    const cplx lz = std::log(cplx(0.3, 0.4));
    const cplx prev = std::log(cplx(0.7, -0.4)) + cplx(0.0, 2.0 * pi);
    const ShapeAssignment s = ShapeAssignment::from_logs({lz}, {prev});
    CHECK(std::abs(s.log1mz[0] - prev) < 1e-12);
    CHECK(s.consistent());
    CHECK_THROWS_AS(ShapeAssignment::principal({cplx(1.0, 0.0)}), DomainError);
}
