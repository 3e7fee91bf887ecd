#include "extbloch/ebloch.hpp"

#include "extbloch/errors.hpp"
#include "extbloch/zsolve.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace extbloch {

void BlochSum::add(Int coef, const ExtParam& param) {
    if (coef == 0) return;
    auto it = std::find_if(terms_.begin(), terms_.end(),
                           [&](const BlochTerm& t) { return t.param == param; });
    if (it == terms_.end()) {
        terms_.push_back({coef, param});
        return;
    }
    it->coef += coef;
    if (it->coef == 0) terms_.erase(it);
}

BlochSum& BlochSum::operator+=(const BlochSum& o) {
    for (const auto& t : o.terms_) add(t.coef, t.param);
    return *this;
}

BlochSum& BlochSum::operator-=(const BlochSum& o) {
    for (const auto& t : o.terms_) add(-t.coef, t.param);
    return *this;
}

BlochSum operator-(const BlochSum& a) { return Int{-1} * a; }

BlochSum operator*(Int k, const BlochSum& a) {
    BlochSum out;
    for (const auto& t : a.terms_) out.add(k * t.coef, t.param);
    return out;
}

bool operator==(const BlochSum& a, const BlochSum& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    return std::all_of(a.terms_.begin(), a.terms_.end(), [&](const BlochTerm& t) {
        return std::find(b.terms_.begin(), b.terms_.end(), t) != b.terms_.end();
    });
}

cplx r_of_sum_raw(const BlochSum& s) {
    cplx acc{};
    for (const auto& t : s.terms()) acc += static_cast<double>(t.coef) * r_value(t.param);
    return acc;
}

ModPiSquared r_of_sum(const BlochSum& s) { return mod_pi2(r_of_sum_raw(s)); }

bool r_congruent(const BlochSum& a, const BlochSum& b, double tol) {
    return r_of_sum(a).congruent(r_of_sum(b), tol);
}

bool same_projection(const BlochSum& a, const BlochSum& b, double tol) {
    // Collect coefficient totals per shape; a minus b must vanish shape-wise.
    std::vector<std::pair<cplx, Int>> acc;
    auto push = [&](cplx z, Int c) {
        for (auto& [w, k] : acc)
            if (std::abs(w - z) <= tol * std::max(1.0, std::abs(z))) {
                k += c;
                return;
            }
        acc.emplace_back(z, c);
    };
    for (const auto& t : a.terms()) push(t.param.z, t.coef);
    for (const auto& t : b.terms()) push(t.param.z, -t.coef);
    return std::all_of(acc.begin(), acc.end(), [](const auto& e) { return e.second == 0; });
}

BlochSum chi(cplx w) {
    if (w == cplx(0.0, 0.0)) throw DomainError("chi: argument must be nonzero");
    BlochSum s;
    if (std::abs(w - 1.0) <= 1e-14) return s;
    const Side side = side_for(w, Side::upper);
    s.add(1, ExtParam(w, 0, 1, side));
    s.add(-1, ExtParam(w, 0, 0, side));
    return s;
}

BlochSum transfer_expand(const ExtParam& x) {
    const Int p = x.p;
    const Int q = x.q;
    const Int pq = p * q;
    BlochSum s;
    s.add(pq, ExtParam(x.z, 1, 1, x.side));
    s.add(-(pq - p), ExtParam(x.z, 1, 0, x.side));
    s.add(-(pq - q), ExtParam(x.z, 0, 1, x.side));
    s.add(pq - p - q + 1, ExtParam(x.z, 0, 0, x.side));
    return s;
}

// ---------------------------------------------------------------------------

BlochSum FiveTermInstance::alternating_sum() const {
    BlochSum s;
    for (int i = 0; i < 5; ++i) s.add(i % 2 == 0 ? 1 : -1, params[static_cast<std::size_t>(i)]);
    return s;
}

std::array<cplx, 5> five_term_shapes(cplx x, cplx y) {
    auto check = [](cplx z, int index) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) <= 1e-14 ||
            std::abs(z - 1.0) <= 1e-14)
            throw DegenerateError("five-term shape x" + std::to_string(index) + " is degenerate");
    };
    check(x, 0);
    check(y, 1);
    if (std::abs(x - y) <= 1e-14) throw DegenerateError("five-term relation requires x != y");
    const std::array<cplx, 5> s{x, y, y / x, (1.0 - 1.0 / x) / (1.0 - 1.0 / y),
                                (1.0 - x) / (1.0 - y)};
    for (int i = 2; i < 5; ++i) check(s[static_cast<std::size_t>(i)], i);
    return s;
}

FiveTermInstance five_term_instance_raw(cplx x, cplx y, const std::array<Int, 5>& p,
                                        const std::array<Int, 5>& q) {
    FiveTermInstance inst;
    inst.x = x;
    inst.y = y;
    inst.p = p;
    inst.q = q;
    const auto shapes = five_term_shapes(x, y);
    for (std::size_t i = 0; i < 5; ++i)
        inst.params[i] = ExtParam(shapes[i], p[i], q[i], side_for(shapes[i], Side::upper));
    return inst;
}

FiveTermInstance five_term_instance(cplx x, cplx y, Int p0, Int q0, Int p1, Int q1, Int q2) {
    const Int p2 = p1 - p0;
    const Int p3 = p1 - p0 + q1 - q0;
    const Int q3 = q2 - q1;
    const Int p4 = q1 - q0;
    const Int q4 = q2 - q1 - p0;
    return five_term_instance_raw(x, y, {p0, p1, p2, p3, p4}, {q0, q1, q2, q3, q4});
}

bool nu_vanishes(const FiveTermInstance& inst) {
    const auto& p = inst.p;
    const auto& q = inst.q;
    return q[0] - p[2] - q[2] + p[3] + q[3] == 0 && p[0] - q[3] + q[4] == 0 &&
           -q[1] + q[2] - q[3] == 0 && -p[1] + p[3] + q[3] - p[4] - q[4] == 0 &&
           p[2] - p[3] + p[4] == 0;
}

std::array<BoundaryPoint, 5> canonical_five_points(cplx x, cplx y) {
    return {BoundaryPoint::finite(1.0 - 1.0 / y), BoundaryPoint::finite(1.0 - 1.0 / x),
            BoundaryPoint::finite(0.0), BoundaryPoint::finite(1.0), BoundaryPoint::infinity()};
}

namespace {

// Vertices of the simplex omitting k, in increasing order.
std::array<int, 4> omit_one(int k) {
    std::array<int, 4> v{};
    int n = 0;
    for (int i = 0; i < 5; ++i)
        if (i != k) v[static_cast<std::size_t>(n++)] = i;
    return v;
}

int slot_of(const std::array<int, 4>& verts, int v) {
    return static_cast<int>(std::find(verts.begin(), verts.end(), v) - verts.begin());
}

// Component of the flattening of simplex k carried by the global edge (i, j).
int component_in_simplex(int k, int i, int j) {
    const auto verts = omit_one(k);
    return component_of_edge(slot_of(verts, i), slot_of(verts, j));
}

void require_match(const FlatTriple& flat, cplx shape, int k) {
    const ExtParam x = from_triple(flat, 1e-8);
    if (std::abs(x.z - shape) > 1e-8 * std::max(1.0, std::abs(shape)))
        throw DomainError("flattening " + std::to_string(k) + " does not match its simplex shape");
}

} // namespace

cplx omit_one_shape(const std::array<BoundaryPoint, 5>& pts, int k) {
    const auto v = omit_one(k);
    return cross_ratio(pts[static_cast<std::size_t>(v[0])], pts[static_cast<std::size_t>(v[1])],
                       pts[static_cast<std::size_t>(v[2])], pts[static_cast<std::size_t>(v[3])]);
}

bool verify_five_term_geometric(const std::array<BoundaryPoint, 5>& pts,
                                const std::array<FlatTriple, 5>& flats, double tol) {
    for (int k = 0; k < 5; ++k)
        require_match(flats[static_cast<std::size_t>(k)], omit_one_shape(pts, k), k);
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) {
            cplx sum{};
            for (int k = 0; k < 5; ++k) {
                if (k == i || k == j) continue;
                const double sign = k % 2 == 0 ? 1.0 : -1.0;
                sum += sign * flats[static_cast<std::size_t>(k)][component_in_simplex(k, i, j)];
            }
            if (std::abs(sum) > tol) return false;
        }
    return true;
}

std::array<FlatTriple, 5> extend_flattening(const std::array<BoundaryPoint, 5>& pts,
                                            const std::array<std::optional<FlatTriple>, 5>& known,
                                            double tol) {
    std::array<cplx, 5> shapes{};
    std::vector<int> unknown;
    for (int k = 0; k < 5; ++k) {
        shapes[static_cast<std::size_t>(k)] = omit_one_shape(pts, k);
        if (known[static_cast<std::size_t>(k)])
            require_match(*known[static_cast<std::size_t>(k)], shapes[static_cast<std::size_t>(k)], k);
        else
            unknown.push_back(k);
    }
    auto base_of = [&](int k) {
        const cplx z = shapes[static_cast<std::size_t>(k)];
        return ell(ExtParam(z, 0, 0, side_for(z, Side::upper)));
    };

    // Unknown simplex k contributes base + (p, q, -p-q) pi i; each edge sum is
    // linear in the unknown integers.
    IntMatrix a(0, 2 * unknown.size());
    IntVector b;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) {
            cplx constant{};
            IntVector row(2 * unknown.size());
            for (int k = 0; k < 5; ++k) {
                if (k == i || k == j) continue;
                const int sign = k % 2 == 0 ? 1 : -1;
                const int c = component_in_simplex(k, i, j);
                if (known[static_cast<std::size_t>(k)]) {
                    constant += static_cast<double>(sign) * (*known[static_cast<std::size_t>(k)])[c];
                    continue;
                }
                constant += static_cast<double>(sign) * base_of(k)[c];
                const auto u = static_cast<std::size_t>(
                    std::find(unknown.begin(), unknown.end(), k) - unknown.begin());
                if (c == 0) row[2 * u] += sign;
                if (c == 1) row[2 * u + 1] += sign;
                if (c == 2) {
                    row[2 * u] -= sign;
                    row[2 * u + 1] -= sign;
                }
            }
            const cplx target = -constant / i_pi;
            const double r = std::round(target.real());
            if (std::abs(target.real() - r) > tol || std::abs(target.imag()) > tol)
                throw FlatteningError("extend_flattening: edge " + std::to_string(i) +
                                      std::to_string(j) + " cannot be balanced");
            a.append_row(row);
            b.emplace_back(static_cast<long long>(r));
        }
    const auto sol = solve_integer(a, b);
    if (!sol) throw FlatteningError("extend_flattening: no integer completion exists");

    std::array<FlatTriple, 5> out{};
    for (int k = 0; k < 5; ++k)
        if (known[static_cast<std::size_t>(k)]) out[static_cast<std::size_t>(k)] = *known[static_cast<std::size_t>(k)];
    for (std::size_t u = 0; u < unknown.size(); ++u) {
        const int k = unknown[u];
        const cplx z = shapes[static_cast<std::size_t>(k)];
        const auto p = static_cast<Int>(sol->particular[2 * u]);
        const auto q = static_cast<Int>(sol->particular[2 * u + 1]);
        out[static_cast<std::size_t>(k)] = ell(ExtParam(z, p, q, side_for(z, Side::upper)));
    }
    return out;
}

FiveTermSweep five_term_sweep(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 3.0);
    std::uniform_real_distribution<double> v(0.1, 3.0);
    std::uniform_real_distribution<double> w(0.02, 0.96);
    std::uniform_int_distribution<int> branch(-3, 3);
    FiveTermSweep out;
    out.count = count;
    for (int k = 0; k < count; ++k) {
        const cplx y(u(rng), v(rng));
        double a = w(rng);
        double b = w(rng);
        if (a + b > 0.98) {
            a = std::max(0.01, 0.98 - a);
            b = std::max(0.01, 0.98 - b);
        }
        const cplx x = a + b * y;
        const FiveTermInstance inst = five_term_instance(x, y, branch(rng), branch(rng), branch(rng), branch(rng),
                                                         branch(rng));
        out.max_residual = std::max(out.max_residual, r_of_sum(inst.alternating_sum()).distance(mod_pi2(0.0)));

        auto flats = [](const FiveTermInstance& i) {
            std::array<FlatTriple, 5> f{};
            for (std::size_t j = 0; j < 5; ++j) f[j] = ell(i.params[j]);
            return f;
        };
        const auto pts = canonical_five_points(x, y);
        auto p = inst.p;
        auto q = inst.q;
        const auto idx = static_cast<std::size_t>(k % 5);
        if (k % 2) p[idx] += 1; else q[idx] -= 1;
        const FiveTermInstance bad = five_term_instance_raw(x, y, p, q);
        const bool good_ok = nu_vanishes(inst) && verify_five_term_geometric(pts, flats(inst));
        const bool bad_ok = !nu_vanishes(bad) && !verify_five_term_geometric(pts, flats(bad));
        if (good_ok && bad_ok) ++out.criteria_agree;
    }
    return out;
}

} // namespace extbloch
