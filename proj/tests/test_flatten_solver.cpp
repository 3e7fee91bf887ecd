#include <doctest.h>

#include "extbloch/errors.hpp"
#include "extbloch/invariants.hpp"

using namespace extbloch;

namespace {

OrderedTriangulation m004() { return load_triangulation(std::string(EXTBLOCH_DATA_DIR) + "/m004.tri.json"); }

// Rows with the order of edges and the sign of each row forgotten.
std::vector<std::vector<long long>> normalized_rows(const FlatteningSystem& sys) {
    std::vector<std::vector<long long>> out;
    for (std::size_t i = 0; i < sys.A.rows(); ++i) {
        std::vector<long long> r;
        for (const BigInt& x : sys.A.row(i)) r.push_back(x.convert_to<long long>());
        r.push_back(sys.b[i].convert_to<long long>());
        for (long long x : r)
            if (x != 0) {
                if (x < 0)
                    for (auto& y : r) y = -y;
                break;
            }
        out.push_back(r);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("m004 complete: rows are the edge and cusp equations in (p, q, r, s)") {
    const auto tri = m004();
    const auto res = run_pipeline(tri);
    const FlatteningSystem sys = build_flattening_system(tri, res.complete, res.signs);
    // 2p+q+2r+s = 0 twice, p+q+r+s = 0, 4p+2q = -2 (variables p0 q0 p1 q1).
    const std::vector<std::vector<long long>> expect{
        {1, 1, 1, 1, 0}, {2, 1, 2, 1, 0}, {2, 1, 2, 1, 0}, {4, 2, 0, 0, -2}};
    CHECK(normalized_rows(sys) == expect);
    CHECK(sys.parity.size() == 5);
}

TEST_CASE("m004 complete: canonical flattening and the one-parameter family") {
    const auto tri = m004();
    const auto res = run_pipeline(tri);
    const FlatteningSolution& f = res.complete_flattening;
    CHECK(f.p == std::vector<Int>{0, 0});
    CHECK(f.q == std::vector<Int>{-1, 1});
    CHECK(f.parity_enforced);
    const FlatteningSystem sys = build_flattening_system(tri, res.complete, res.signs);
    CHECK(audit_flattening(sys, f));
    // Every solution has q = -1 - 2p and (r, s) = -(p, q).
    for (Int p = -4; p <= 4; ++p) {
        CHECK(sys.A.apply({p, -1 - 2 * p, -p, 1 + 2 * p}) == sys.b);
    }
    REQUIRE(f.kernel.size() == 1);
    const IntVector& k = f.kernel[0];
    CHECK(k[1] == -2 * k[0]);
    CHECK(k[2] == -k[0]);
    CHECK(k[3] == -k[1]);
}

TEST_CASE("m004 filled: the flattening lies in the filled family") {
    const auto tri = m004();
    for (auto [a, b] : std::vector<std::pair<Int, Int>>{{5, 1}, {1, 2}, {6, 1}, {-2, 3}, {7, 2}}) {
        const Filling fl = make_filling(a, b);
        const auto res = run_pipeline(tri, {fl});
        const FlatteningSolution f = solve_flattening(tri, *res.filled, res.signs, {fl});
        const Int p = f.p[0], q = f.q[0], r = f.p[1], s = f.q[1];
        CAPTURE(a);
        CAPTURE(b);
        CHECK(q == fl.gamma - 1 - 2 * p);
        CHECK(r == -2 * fl.delta - p);
        CHECK(s == -fl.gamma + 4 * fl.delta + 1 + 2 * p);
    }
}

TEST_CASE("kernel moves do not change the class") {
    const auto tri = m004();
    const auto res = run_pipeline(tri);
    const FlatteningSystem sys = build_flattening_system(tri, res.complete, res.signs);
    const ModPiSquared r0 = r_of_sum(beta_hat(res.complete, res.signs, res.complete_flattening));
    for (const IntVector& k : res.complete_flattening.kernel)
        for (Int m : {-3, -1, 1, 2, 5}) {
            FlatteningSolution g = res.complete_flattening;
            for (std::size_t t = 0; t < g.p.size(); ++t) {
                g.p[t] += m * k[2 * t].convert_to<Int>();
                g.q[t] += m * k[2 * t + 1].convert_to<Int>();
            }
            CHECK(audit_flattening(sys, g));
            CHECK(r_of_sum(beta_hat(res.complete, res.signs, g)).distance(r0) < 1e-9);
        }
}

TEST_CASE("audit rejects a broken flattening") {
    const auto tri = m004();
    const auto res = run_pipeline(tri);
    const FlatteningSystem sys = build_flattening_system(tri, res.complete, res.signs);
    FlatteningSolution g = res.complete_flattening;
    g.q[0] += 1;
    CHECK_FALSE(audit_flattening(sys, g));
}

TEST_CASE("shapes that do not solve the gluing equations are reported") {
    const auto tri = m004();
    const ShapeAssignment bad = ShapeAssignment::principal({cplx(0.3, 0.7), cplx(0.4, -0.2)});
    CHECK_THROWS_WITH_AS(solve_flattening(tri, bad, tri.signs()), doctest::Contains("edge"), FlatteningError);
}

TEST_CASE("lens flattenings meet every parity condition") {
    for (int n = 2; n <= 7; ++n) {
        const auto lens = lens_space_class(n, 11);
        const PipelineResult res = run_pipeline(lens.tri);
        const FlatteningSystem sys = build_flattening_system(lens.tri, res.complete, res.signs);
        CHECK(res.complete_flattening.parity_enforced);
        CHECK(audit_flattening(sys, res.complete_flattening));
    }
}
