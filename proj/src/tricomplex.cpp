#include "extbloch/tricomplex.hpp"

#include "extbloch/errors.hpp"
#include "extbloch/zsolve.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace extbloch {

using nlohmann::json;

namespace {

std::string where(int t, int f) {
    return "tet " + std::to_string(t) + " face " + std::to_string(f);
}

int perm_sign(const std::array<int, 4>& p) {
    int inv = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (p[i] > p[j]) ++inv;
    return inv % 2 ? -1 : 1;
}

// Slots of face f in increasing order.
std::array<int, 3> face_slots(int f) {
    std::array<int, 3> out{};
    int k = 0;
    for (int s = 0; s < 4; ++s)
        if (s != f) out[k++] = s;
    return out;
}

int edge_slot_index(int a, int b) { return static_cast<int>(edge_from_slots(a, b)); }

std::pair<int, int> edge_slots(int e) {
    static constexpr std::array<std::pair<int, int>, 6> table{
        {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
    return table[static_cast<std::size_t>(e)];
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

} // namespace

int Pass::sign() const { return perm_sign({corner, other(), enter, exit}); }

// ---------------------------------------------------------------------------

OrderedTriangulation::OrderedTriangulation(std::string name, std::vector<Tet> tets,
                                           std::optional<std::vector<Labels>> labels,
                                           std::vector<CuspCurves> cusps,
                                           std::optional<std::vector<int>> signs)
    : name_(std::move(name)), tets_(std::move(tets)), labels_(std::move(labels)),
      cusps_(std::move(cusps)) {
    if (tets_.empty()) throw TopologyError("triangulation has no tetrahedra");
    if (labels_ && labels_->size() != tets_.size())
        throw TopologyError("labels: expected one entry per tetrahedron");
    validate();
    compute_orientation(signs);
    compute_vertices();
    compute_edges();
    compute_links();
    for (const auto& c : cusps_) {
        if (c.vertex < 0 || c.vertex >= vertex_count_)
            throw TopologyError("cusp refers to unknown vertex " + std::to_string(c.vertex));
        for (const NormalCurve* curve : {&c.meridian, &c.longitude}) {
            validate_curve(*this, *curve);
            int v = -1;
            if (!in_vertex_star(*this, *curve, &v) || v != c.vertex)
                throw TopologyError("cusp curve does not run in the link of vertex " +
                                    std::to_string(c.vertex));
        }
        if (links_[static_cast<std::size_t>(c.vertex)].kind != LinkKind::cusp)
            throw TopologyError("vertex " + std::to_string(c.vertex) + " does not have a torus link");
        if (!generates_link_homology(*this, c.vertex, c.meridian, c.longitude))
            throw TopologyError("cusp curves at vertex " + std::to_string(c.vertex) +
                                " do not form a homology basis");
    }
}

const std::vector<Labels>& OrderedTriangulation::labels() const {
    if (!labels_) throw DomainError("triangulation carries no labels");
    return *labels_;
}

void OrderedTriangulation::validate() {
    const int n = static_cast<int>(tets_.size());
    for (int t = 0; t < n; ++t) {
        for (int f = 0; f < 4; ++f) {
            const int nb = tets_[t].neighbor[f];
            const Perm4& p = tets_[t].gluing[f];
            if (nb < 0 || nb >= n) throw TopologyError(where(t, f) + ": neighbor out of range");
            std::array<bool, 4> seen{};
            for (int s = 0; s < 4; ++s) {
                if (p[s] < 0 || p[s] > 3 || seen[p[s]])
                    throw TopologyError(where(t, f) + ": gluing is not a permutation");
                seen[p[s]] = true;
            }
            const auto fs = face_slots(f);
            if (!(p[fs[0]] < p[fs[1]] && p[fs[1]] < p[fs[2]]))
                throw TopologyError(where(t, f) + ": gluing does not respect the vertex order");
            if (nb == t && p[f] == f) throw TopologyError(where(t, f) + ": face glued to itself");
            const Tet& other = tets_[nb];
            if (other.neighbor[p[f]] != t)
                throw TopologyError(where(t, f) + ": gluing is not an involution");
            for (int s = 0; s < 4; ++s)
                if (other.gluing[p[f]][p[s]] != s)
                    throw TopologyError(where(t, f) + ": gluing is not an involution");
        }
    }
}

void OrderedTriangulation::compute_orientation(const std::optional<std::vector<int>>& given) {
    const std::size_t n = tets_.size();
    signs_.assign(n, 0);
    if (given) {
        if (given->size() != n) throw TopologyError("signs: expected one entry per tetrahedron");
        for (std::size_t t = 0; t < n; ++t) {
            if ((*given)[t] != 1 && (*given)[t] != -1) throw TopologyError("signs must be +1 or -1");
            signs_[t] = (*given)[t];
        }
        explicit_signs_ = true;
    } else {
        for (std::size_t start = 0; start < n; ++start) {
            if (signs_[start] != 0) continue;
            signs_[start] = 1;
            std::deque<int> queue{static_cast<int>(start)};
            while (!queue.empty()) {
                const int t = queue.front();
                queue.pop_front();
                for (int f = 0; f < 4; ++f) {
                    const int nb = tets_[t].neighbor[f];
                    const int g = tets_[t].gluing[f][f];
                    const int want = -signs_[t] * ((f + g) % 2 ? -1 : 1);
                    if (signs_[nb] == 0) {
                        signs_[nb] = want;
                        queue.push_back(nb);
                    }
                }
            }
        }
    }
    // Glued faces must carry opposite induced orientations.
    for (std::size_t t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            const int nb = tets_[t].neighbor[f];
            const int g = tets_[t].gluing[f][f];
            if (signs_[nb] != -signs_[t] * ((f + g) % 2 ? -1 : 1))
                throw TopologyError(where(static_cast<int>(t), f) + ": complex is not orientable");
        }
}

void OrderedTriangulation::compute_vertices() {
    const std::size_t n = tets_.size();
    UnionFind uf(4 * n);
    for (std::size_t t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f)
            for (int s : face_slots(f))
                uf.unite(static_cast<int>(4 * t) + s,
                         4 * tets_[t].neighbor[f] + tets_[t].gluing[f][s]);
    vertex_.assign(n, {});
    std::map<int, int> ids;
    for (std::size_t t = 0; t < n; ++t)
        for (int s = 0; s < 4; ++s) {
            const int root = uf.find(static_cast<int>(4 * t) + s);
            auto it = ids.find(root);
            if (it == ids.end()) it = ids.emplace(root, static_cast<int>(ids.size())).first;
            vertex_[t][s] = it->second;
        }
    vertex_count_ = static_cast<int>(ids.size());
}

void OrderedTriangulation::compute_edges() {
    const std::size_t n = tets_.size();
    edge_index_.assign(n, {-1, -1, -1, -1, -1, -1});
    edges_.clear();
    for (std::size_t t0 = 0; t0 < n; ++t0)
        for (int e0 = 0; e0 < 6; ++e0) {
            if (edge_index_[t0][e0] >= 0) continue;
            const int id = static_cast<int>(edges_.size());
            EdgeClass ec;
            auto [a, b] = edge_slots(e0);
            int t = static_cast<int>(t0);
            // enter through the smaller of the two slots outside {a, b}
            int enter = 0;
            for (int s = 0; s < 4; ++s)
                if (s != a && s != b) {
                    enter = s;
                    break;
                }
            const int start_t = t;
            const int start_a = a;
            const int start_enter = enter;
            ec.vertex_low = vertex_[t][a];
            ec.vertex_high = vertex_[t][b];
            for (std::size_t guard = 0;; ++guard) {
                if (guard > 6 * n) throw TopologyError("edge walk did not close");
                const int exit = 6 - a - b - enter;
                const int e = edge_slot_index(a, b);
                if (edge_index_[t][e] >= 0)
                    throw TopologyError("edge of tet " + std::to_string(t) +
                                        " is identified with itself in reverse");
                edge_index_[t][e] = id;
                ec.incidences.push_back({t, a, b});
                ec.loop.passes.push_back({t, a, enter, exit});
                const Perm4& p = tets_[t].gluing[exit];
                const int nt = tets_[t].neighbor[exit];
                const int na = p[a];
                const int nb = p[b];
                const int ne = p[exit];
                t = nt;
                a = na;
                b = nb;
                enter = ne;
                if (t == start_t && a == start_a && enter == start_enter) break;
            }
            ec.loop_sign = ec.loop.passes.front().sign() * signs_[ec.loop.passes.front().tet];
            for (const Pass& ps : ec.loop.passes)
                if (ps.sign() * signs_[ps.tet] != ec.loop_sign)
                    throw TopologyError("inconsistent orientation around edge " + std::to_string(id));
            edges_.push_back(std::move(ec));
        }
}

void OrderedTriangulation::compute_links() {
    links_.assign(static_cast<std::size_t>(vertex_count_), {});
    for (int v = 0; v < vertex_count_; ++v) links_[v].vertex = v;
    for (std::size_t t = 0; t < tets_.size(); ++t)
        for (int s = 0; s < 4; ++s)
            links_[vertex_[t][s]].corners.emplace_back(static_cast<int>(t), s);
    for (const EdgeClass& e : edges_) {
        ++links_[e.vertex_low].vertices;
        ++links_[e.vertex_high].vertices;
    }
    for (VertexLink& l : links_) {
        l.faces = static_cast<int>(l.corners.size());
        l.edges = 3 * l.faces / 2;
        l.euler = l.vertices - l.edges + l.faces;
        l.genus = (2 - l.euler) / 2;
        l.kind = l.euler == 2 ? LinkKind::material : (l.euler == 0 ? LinkKind::cusp : LinkKind::singular);
    }
}

int OrderedTriangulation::edge_of(int tet, int a, int b) const {
    return edge_index_.at(static_cast<std::size_t>(tet))[edge_slot_index(a, b)];
}

int OrderedTriangulation::vertex_of(int tet, int slot) const {
    return vertex_.at(static_cast<std::size_t>(tet)).at(static_cast<std::size_t>(slot));
}

std::vector<EdgeClass> compute_edges(const OrderedTriangulation& tri) { return tri.edges(); }
std::vector<VertexLink> compute_links(const OrderedTriangulation& tri) { return tri.links(); }

std::vector<int> orientation_signs(const OrderedTriangulation& tri, const std::vector<cplx>* shapes) {
    std::vector<int> s = tri.signs();
    if (tri.has_explicit_signs() || shapes == nullptr) return s;
    for (std::size_t t = 0; t < s.size() && t < shapes->size(); ++t) {
        const double im = (*shapes)[t].imag();
        if (im == 0.0) continue;
        if (s[t] * im < 0)
            for (int& x : s) x = -x;
        break;
    }
    return s;
}

// ---------------------------------------------------------------------------
// tri-json

namespace {

cplx complex_from(const json& j, const std::string& ctx) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError(ctx + ": expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

int int_from(const json& j, const std::string& ctx) {
    if (!j.is_number_integer()) throw ParseError(ctx + ": expected an integer");
    return j.get<int>();
}

NormalCurve curve_from(const json& j, const std::string& ctx) {
    if (!j.is_array() || j.empty()) throw ParseError(ctx + ": expected a non-empty list of passes");
    NormalCurve c;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const std::string here = ctx + " pass " + std::to_string(k);
        const json& p = j[k];
        if (!p.is_array() || p.size() != 4) throw ParseError(here + ": expected [tet, corner, enter, exit]");
        Pass ps{int_from(p[0], here), int_from(p[1], here), int_from(p[2], here), int_from(p[3], here)};
        std::array<int, 3> sl{ps.corner, ps.enter, ps.exit};
        for (int x : sl)
            if (x < 0 || x > 3) throw ParseError(here + ": slot out of range");
        if (ps.corner == ps.enter || ps.corner == ps.exit || ps.enter == ps.exit)
            throw ParseError(here + ": corner, enter and exit must differ");
        c.passes.push_back(ps);
    }
    return c;
}

json curve_to(const NormalCurve& c) {
    json out = json::array();
    for (const Pass& p : c.passes) out.push_back({p.tet, p.corner, p.enter, p.exit});
    return out;
}

} // namespace

OrderedTriangulation parse_triangulation(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("document must be an object");
    std::string name = "unnamed";
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) throw ParseError("name: expected a string");
        name = doc["name"].get<std::string>();
    }
    if (!doc.contains("tetrahedra") || !doc["tetrahedra"].is_array())
        throw ParseError("tetrahedra: expected a list");
    const json& jt = doc["tetrahedra"];
    const int n = static_cast<int>(jt.size());
    std::vector<Tet> tets(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
        const std::string ctx = "tet " + std::to_string(t);
        const json& e = jt[t];
        if (!e.is_object() || !e.contains("neighbors") || !e.contains("gluings"))
            throw ParseError(ctx + ": expected neighbors and gluings");
        const json& nb = e["neighbors"];
        const json& gl = e["gluings"];
        if (!nb.is_array() || nb.size() != 4) throw ParseError(ctx + ": neighbors must have 4 entries");
        if (!gl.is_array() || gl.size() != 4) throw ParseError(ctx + ": gluings must have 4 entries");
        for (int f = 0; f < 4; ++f) {
            const std::string here = where(t, f);
            const int other = int_from(nb[f], here);
            if (other < 0 || other >= n) throw ParseError(here + ": neighbor out of range");
            tets[t].neighbor[f] = other;
            const json& g = gl[f];
            if (!g.is_array() || g.size() != 3) throw ParseError(here + ": gluing must list 3 slots");
            Perm4 p{};
            const auto fs = face_slots(f);
            int used = 0;
            for (int k = 0; k < 3; ++k) {
                const int s = int_from(g[k], here);
                if (s < 0 || s > 3 || (used >> s & 1)) throw ParseError(here + ": invalid gluing slots");
                used |= 1 << s;
                p[fs[k]] = s;
            }
            for (int s = 0; s < 4; ++s)
                if (!(used >> s & 1)) p[f] = s;
            tets[t].gluing[f] = p;
        }
    }
    std::optional<std::vector<Labels>> labels;
    if (doc.contains("labels") && !doc["labels"].is_null()) {
        const json& jl = doc["labels"];
        if (!jl.is_array() || static_cast<int>(jl.size()) != n)
            throw ParseError("labels: expected one entry per tetrahedron");
        labels.emplace(static_cast<std::size_t>(n));
        for (int t = 0; t < n; ++t) {
            const std::string ctx = "labels of tet " + std::to_string(t);
            if (!jl[t].is_array() || jl[t].size() != 4) throw ParseError(ctx + ": expected 4 matrices");
            for (int s = 0; s < 4; ++s) {
                const json& m = jl[t][s];
                const std::string here = ctx + " slot " + std::to_string(s);
                if (!m.is_array() || m.size() != 4) throw ParseError(here + ": expected [a, b, c, d]");
                Mat2 g{complex_from(m[0], here), complex_from(m[1], here), complex_from(m[2], here),
                       complex_from(m[3], here)};
                if (std::abs(g.det() - 1.0) > 1e-8) throw ParseError(here + ": determinant is not 1");
                (*labels)[t][s] = g;
            }
        }
    }
    std::vector<CuspCurves> cusps;
    if (doc.contains("cusps") && !doc["cusps"].is_null()) {
        const json& jc = doc["cusps"];
        if (!jc.is_array()) throw ParseError("cusps: expected a list");
        for (std::size_t k = 0; k < jc.size(); ++k) {
            const std::string ctx = "cusp " + std::to_string(k);
            const json& c = jc[k];
            if (!c.is_object() || !c.contains("vertex") || !c.contains("meridian") || !c.contains("longitude"))
                throw ParseError(ctx + ": expected vertex, meridian and longitude");
            cusps.push_back({int_from(c["vertex"], ctx), curve_from(c["meridian"], ctx + " meridian"),
                             curve_from(c["longitude"], ctx + " longitude")});
            for (const NormalCurve* cv : {&cusps.back().meridian, &cusps.back().longitude})
                for (const Pass& p : cv->passes)
                    if (p.tet < 0 || p.tet >= n) throw ParseError(ctx + ": pass refers to unknown tet");
        }
    }
    std::optional<std::vector<int>> signs;
    if (doc.contains("signs") && !doc["signs"].is_null()) {
        const json& js = doc["signs"];
        if (!js.is_array() || static_cast<int>(js.size()) != n)
            throw ParseError("signs: expected one entry per tetrahedron");
        signs.emplace();
        for (int t = 0; t < n; ++t) signs->push_back(int_from(js[t], "signs"));
    }
    try {
        return {std::move(name), std::move(tets), std::move(labels), std::move(cusps), std::move(signs)};
    } catch (const TopologyError& e) {
        throw ParseError(e.what());
    }
}

OrderedTriangulation load_triangulation(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_triangulation(buf.str());
}

std::string serialize_triangulation(const OrderedTriangulation& tri) {
    // ordered_json keeps the documented key order.
    nlohmann::ordered_json doc;
    doc["name"] = tri.name();
    nlohmann::ordered_json tets = nlohmann::ordered_json::array();
    for (const Tet& t : tri.tets()) {
        nlohmann::ordered_json e;
        e["neighbors"] = t.neighbor;
        nlohmann::ordered_json g = nlohmann::ordered_json::array();
        for (int f = 0; f < 4; ++f) {
            std::vector<int> img;
            for (int s : face_slots(f)) img.push_back(t.gluing[f][s]);
            g.push_back(img);
        }
        e["gluings"] = g;
        tets.push_back(e);
    }
    doc["tetrahedra"] = tets;
    if (tri.has_labels()) {
        nlohmann::ordered_json labels = nlohmann::ordered_json::array();
        for (const Labels& l : tri.labels()) {
            nlohmann::ordered_json per = nlohmann::ordered_json::array();
            for (const Mat2& m : l) {
                nlohmann::ordered_json mm = nlohmann::ordered_json::array();
                for (cplx x : {m.a, m.b, m.c, m.d}) mm.push_back({x.real(), x.imag()});
                per.push_back(mm);
            }
            labels.push_back(per);
        }
        doc["labels"] = labels;
    }
    if (!tri.user_cusps().empty()) {
        nlohmann::ordered_json cusps = nlohmann::ordered_json::array();
        for (const CuspCurves& c : tri.user_cusps()) {
            nlohmann::ordered_json e;
            e["vertex"] = c.vertex;
            e["meridian"] = curve_to(c.meridian);
            e["longitude"] = curve_to(c.longitude);
            cusps.push_back(e);
        }
        doc["cusps"] = cusps;
    }
    if (tri.has_explicit_signs()) doc["signs"] = tri.signs();
    return doc.dump(2);
}

// ---------------------------------------------------------------------------
// normal curves

void validate_curve(const OrderedTriangulation& tri, const NormalCurve& c) {
    const auto n = static_cast<int>(tri.size());
    if (c.passes.empty()) throw TopologyError("normal curve is empty");
    for (std::size_t k = 0; k < c.passes.size(); ++k) {
        const Pass& p = c.passes[k];
        if (p.tet < 0 || p.tet >= n) throw TopologyError("normal curve refers to unknown tet");
        const Pass& q = c.passes[(k + 1) % c.passes.size()];
        const Tet& t = tri.tet(p.tet);
        if (t.neighbor[p.exit] != q.tet || t.gluing[p.exit][p.exit] != q.enter)
            throw TopologyError("normal curve breaks between pass " + std::to_string(k) + " and the next");
    }
}

bool in_vertex_star(const OrderedTriangulation& tri, const NormalCurve& c, int* vertex) {
    if (c.passes.empty()) return false;
    const int v = tri.vertex_of(c.passes.front().tet, c.passes.front().corner);
    for (std::size_t k = 0; k < c.passes.size(); ++k) {
        const Pass& p = c.passes[k];
        const Pass& q = c.passes[(k + 1) % c.passes.size()];
        if (tri.tet(p.tet).gluing[p.exit][p.corner] != q.corner) return false;
    }
    if (vertex) *vertex = v;
    return true;
}

NormalCurve reversed(const NormalCurve& c) {
    NormalCurve out;
    for (auto it = c.passes.rbegin(); it != c.passes.rend(); ++it)
        out.passes.push_back({it->tet, it->corner, it->exit, it->enter});
    return out;
}

std::vector<std::array<int, 3>> component_counts(const OrderedTriangulation& tri, const NormalCurve& c) {
    std::vector<std::array<int, 3>> out(tri.size(), {0, 0, 0});
    for (const Pass& p : c.passes) out[p.tet][component_of_edge(p.corner, p.other())] += p.sign();
    return out;
}

std::vector<std::array<int, 3>> component_hits(const OrderedTriangulation& tri, const NormalCurve& c) {
    std::vector<std::array<int, 3>> out(tri.size(), {0, 0, 0});
    for (const Pass& p : c.passes) out[p.tet][component_of_edge(p.corner, p.other())] += 1;
    return out;
}

cplx log_holonomy(const OrderedTriangulation& tri, const NormalCurve& c,
                  const std::vector<FlatTriple>& flats) {
    if (!in_vertex_star(tri, c)) throw DomainError("log_holonomy: curve does not run in a vertex star");
    cplx sum = 0.0;
    for (const Pass& p : c.passes)
        sum += static_cast<double>(p.sign()) * flats.at(p.tet)[component_of_edge(p.corner, p.other())];
    return sum;
}

int parity_along(const OrderedTriangulation&, const NormalCurve& c, const std::vector<FlatTriple>& flats) {
    int s = 0;
    for (const Pass& p : c.passes) s += parity_param(flats.at(p.tet), edge_from_slots(p.corner, p.other()));
    return s % 2;
}

// ---------------------------------------------------------------------------
// graph cycles

namespace {

// Undirected multigraph whose half-edges are (node, face) ports.
struct PortGraph {
    struct Half {
        int face;
        int other;
        int other_face;
    };
    std::vector<std::vector<Half>> adj;
};

struct Step {
    int node;
    int exit;        // face at node
    int next_enter;  // face at the following node
};

// Fundamental cycles of a BFS tree rooted at node 0, each as a simple closed
// walk, in order of discovery of the non-tree edges.
std::vector<std::vector<Step>> fundamental_cycles(const PortGraph& g) {
    const std::size_t n = g.adj.size();
    struct Up {
        int parent = -1;
        int face_here = -1;    // face at this node toward the parent
        int face_parent = -1;  // face at the parent toward this node
        int depth = 0;
    };
    std::vector<Up> up(n);
    std::vector<bool> seen(n, false);
    std::vector<std::vector<bool>> tree_port(n);
    for (std::size_t v = 0; v < n; ++v) tree_port[v].assign(4, false);
    for (std::size_t root = 0; root < n; ++root) {
        if (seen[root]) continue;
        seen[root] = true;
        std::deque<int> queue{static_cast<int>(root)};
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            for (const auto& h : g.adj[v]) {
                if (seen[h.other]) continue;
                seen[h.other] = true;
                up[h.other] = {v, h.other_face, h.face, up[v].depth + 1};
                tree_port[v][h.face] = true;
                tree_port[h.other][h.other_face] = true;
                queue.push_back(h.other);
            }
        }
    }
    std::vector<std::vector<Step>> cycles;
    for (std::size_t v = 0; v < n; ++v)
        for (const auto& h : g.adj[v]) {
            if (tree_port[v][h.face]) continue;
            // each non-tree edge once, from its smaller port
            if (std::make_pair(static_cast<int>(v), h.face) > std::make_pair(h.other, h.other_face)) continue;
            const int u = static_cast<int>(v);
            const int w = h.other;
            std::vector<int> pu{u};
            std::vector<int> pw{w};
            int a = u;
            int b = w;
            while (a != b) {
                if (up[a].depth >= up[b].depth) {
                    a = up[a].parent;
                    pu.push_back(a);
                } else {
                    b = up[b].parent;
                    pw.push_back(b);
                }
            }
            std::vector<Step> steps;
            // down from the common ancestor to u
            for (std::size_t k = pu.size() - 1; k > 0; --k) {
                const int child = pu[k - 1];
                steps.push_back({pu[k], up[child].face_parent, up[child].face_here});
            }
            steps.push_back({u, h.face, h.other_face});
            // up from w to the common ancestor
            for (std::size_t k = 0; k + 1 < pw.size(); ++k)
                steps.push_back({pw[k], up[pw[k]].face_here, up[pw[k]].face_parent});
            cycles.push_back(std::move(steps));
        }
    return cycles;
}

template <class CornerOf>
NormalCurve steps_to_curve(const std::vector<Step>& steps, CornerOf corner_of) {
    NormalCurve c;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const Step& prev = steps[(k + steps.size() - 1) % steps.size()];
        const int enter = prev.next_enter;
        const auto [tet, corner] = corner_of(steps[k].node, enter, steps[k].exit);
        c.passes.push_back({tet, corner, enter, steps[k].exit});
    }
    return c;
}

// The link of one vertex class as a port graph on its corners.
struct LinkGraph {
    std::vector<std::pair<int, int>> corners;
    std::map<std::pair<int, int>, int> index;
    PortGraph graph;
    // oriented dual edge id of the port (corner, face): +-(id + 1)
    std::map<std::tuple<int, int, int>, int> port_edge;
    int edge_count = 0;
};

LinkGraph link_graph(const OrderedTriangulation& tri, int vertex) {
    LinkGraph lg;
    lg.corners = tri.links().at(static_cast<std::size_t>(vertex)).corners;
    for (std::size_t k = 0; k < lg.corners.size(); ++k) lg.index[lg.corners[k]] = static_cast<int>(k);
    lg.graph.adj.resize(lg.corners.size());
    for (std::size_t k = 0; k < lg.corners.size(); ++k) {
        const auto [t, v] = lg.corners[k];
        for (int f = 0; f < 4; ++f) {
            if (f == v) continue;
            const Perm4& p = tri.tet(t).gluing[f];
            const int nt = tri.tet(t).neighbor[f];
            const int other = lg.index.at({nt, p[v]});
            lg.graph.adj[k].push_back({f, other, p[f]});
            const auto key = std::make_tuple(t, v, f);
            const auto okey = std::make_tuple(nt, p[v], p[f]);
            if (!lg.port_edge.count(key)) {
                const int id = lg.edge_count++;
                lg.port_edge[key] = id + 1;
                lg.port_edge[okey] = -(id + 1);
            }
        }
    }
    return lg;
}

IntVector cycle_vector(const LinkGraph& lg, const NormalCurve& c) {
    IntVector out(static_cast<std::size_t>(lg.edge_count));
    for (const Pass& p : c.passes) {
        const int e = lg.port_edge.at({p.tet, p.corner, p.exit});
        if (e > 0) out[e - 1] += 1;
        else out[-e - 1] -= 1;
    }
    return out;
}

NormalCurve with_corner_at(const NormalCurve& loop, bool high) {
    if (!high) return loop;
    NormalCurve c;
    for (const Pass& p : loop.passes) c.passes.push_back({p.tet, p.other(), p.enter, p.exit});
    return c;
}

std::vector<IntVector> boundary_vectors(const OrderedTriangulation& tri, const LinkGraph& lg, int vertex) {
    std::vector<IntVector> out;
    for (const EdgeClass& e : tri.edges()) {
        if (e.vertex_low == vertex) out.push_back(cycle_vector(lg, with_corner_at(e.loop, false)));
        if (e.vertex_high == vertex) out.push_back(cycle_vector(lg, with_corner_at(e.loop, true)));
    }
    return out;
}

IntMatrix nonzero_hermite(const std::vector<IntVector>& rows, std::size_t cols) {
    IntMatrix m(0, cols);
    for (const auto& r : rows) m.append_row(r);
    if (rows.empty()) return m;
    const HermiteForm h = hermite_normal_form(m);
    IntMatrix out(0, cols);
    for (std::size_t i = 0; i < h.rank; ++i) out.append_row(h.H.row(i));
    return out;
}

std::vector<NormalCurve> link_cycles(const LinkGraph& lg) {
    std::vector<NormalCurve> out;
    for (const auto& steps : fundamental_cycles(lg.graph))
        out.push_back(steps_to_curve(steps, [&](int node, int, int) { return lg.corners[node]; }));
    return out;
}

} // namespace

std::vector<NormalCurve> link_cycle_basis(const OrderedTriangulation& tri, int vertex) {
    return link_cycles(link_graph(tri, vertex));
}

bool generates_link_homology(const OrderedTriangulation& tri, int vertex, const NormalCurve& a,
                             const NormalCurve& b) {
    const LinkGraph lg = link_graph(tri, vertex);
    std::vector<IntVector> full;
    for (const NormalCurve& c : link_cycles(lg)) full.push_back(cycle_vector(lg, c));
    std::vector<IntVector> span = boundary_vectors(tri, lg, vertex);
    span.push_back(cycle_vector(lg, a));
    span.push_back(cycle_vector(lg, b));
    const auto cols = static_cast<std::size_t>(lg.edge_count);
    return nonzero_hermite(full, cols) == nonzero_hermite(span, cols);
}

CuspCurves cusp_basis(const OrderedTriangulation& tri, int vertex) {
    for (const CuspCurves& c : tri.user_cusps())
        if (c.vertex == vertex) return c;
    if (tri.links().at(static_cast<std::size_t>(vertex)).kind != LinkKind::cusp)
        throw TopologyError("vertex " + std::to_string(vertex) + " does not have a torus link");
    const LinkGraph lg = link_graph(tri, vertex);
    const std::vector<NormalCurve> cycles = link_cycles(lg);
    std::vector<IntVector> full;
    for (const NormalCurve& c : cycles) full.push_back(cycle_vector(lg, c));
    const auto cols = static_cast<std::size_t>(lg.edge_count);
    const IntMatrix target = nonzero_hermite(full, cols);
    const std::vector<IntVector> bnd = boundary_vectors(tri, lg, vertex);

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < cycles.size(); ++i)
        for (std::size_t j = i + 1; j < cycles.size(); ++j) pairs.emplace_back(i, j);
    std::stable_sort(pairs.begin(), pairs.end(), [&](auto x, auto y) {
        return cycles[x.first].passes.size() + cycles[x.second].passes.size() <
               cycles[y.first].passes.size() + cycles[y.second].passes.size();
    });
    for (auto [i, j] : pairs) {
        std::vector<IntVector> span = bnd;
        span.push_back(full[i]);
        span.push_back(full[j]);
        if (nonzero_hermite(span, cols) == target) {
            const bool swap = cycles[j].passes.size() < cycles[i].passes.size();
            return {vertex, cycles[swap ? j : i], cycles[swap ? i : j]};
        }
    }
    throw TopologyError("no pair of link cycles generates the homology of cusp " + std::to_string(vertex));
}

std::vector<CuspCurves> cusp_bases(const OrderedTriangulation& tri) {
    std::vector<CuspCurves> out;
    for (const VertexLink& l : tri.links())
        if (l.kind == LinkKind::cusp) out.push_back(cusp_basis(tri, l.vertex));
    return out;
}

std::vector<NormalCurve> normal_loop_basis(const OrderedTriangulation& tri) {
    PortGraph g;
    g.adj.resize(tri.size());
    for (std::size_t t = 0; t < tri.size(); ++t)
        for (int f = 0; f < 4; ++f)
            g.adj[t].push_back({f, tri.tet(static_cast<int>(t)).neighbor[f],
                                tri.tet(static_cast<int>(t)).gluing[f][f]});
    std::vector<NormalCurve> out;
    for (const auto& steps : fundamental_cycles(g))
        out.push_back(steps_to_curve(steps, [](int node, int enter, int exit) {
            int corner = 0;
            while (corner == enter || corner == exit) ++corner;
            return std::make_pair(node, corner);
        }));
    for (const EdgeClass& e : tri.edges()) out.push_back(e.loop);
    return out;
}

// ---------------------------------------------------------------------------
// homogeneous chains

OrderedTriangulation cycle_from_homogeneous_chain(const std::vector<ChainSimplex>& chain,
                                                  const std::string& name, double tol) {
    // Homogeneous simplices are orbits under left multiplication: drop pairs
    // that agree up to it and carry opposite signs.
    std::vector<ChainSimplex> kept;
    {
        std::vector<bool> gone(chain.size(), false);
        auto same = [&](const ChainSimplex& x, const ChainSimplex& y) {
            const Mat2 hx = x.labels[0].inverse();
            const Mat2 hy = y.labels[0].inverse();
            for (int k = 1; k < 4; ++k)
                if (psl_distance(hx * x.labels[k], hy * y.labels[k]) > tol) return false;
            return true;
        };
        for (std::size_t a = 0; a < chain.size(); ++a) {
            if (gone[a]) continue;
            for (std::size_t b = a + 1; b < chain.size(); ++b)
                if (!gone[b] && chain[a].sign + chain[b].sign == 0 && same(chain[a], chain[b])) {
                    gone[a] = gone[b] = true;
                    break;
                }
            if (!gone[a]) kept.push_back(chain[a]);
        }
    }
    if (kept.empty()) throw TopologyError("chain cancels to an empty complex");
    const std::vector<ChainSimplex>& chain_ = kept;
    const std::size_t n = chain_.size();
    struct FaceKey {
        Mat2 u, v;
        int sign;
    };
    std::vector<std::array<FaceKey, 4>> keys(n);
    for (std::size_t t = 0; t < n; ++t) {
        if (chain_[t].sign != 1 && chain_[t].sign != -1) throw TopologyError("chain signs must be +1 or -1");
        for (int f = 0; f < 4; ++f) {
            const auto fs = face_slots(f);
            const Mat2 inv = chain_[t].labels[fs[0]].inverse();
            keys[t][f] = {inv * chain_[t].labels[fs[1]], inv * chain_[t].labels[fs[2]],
                          chain_[t].sign * (f % 2 ? -1 : 1)};
        }
    }
    std::vector<Tet> tets(n);
    std::vector<std::array<bool, 4>> done(n, {false, false, false, false});
    for (std::size_t t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            if (done[t][f]) continue;
            bool found = false;
            for (std::size_t t2 = t; t2 < n && !found; ++t2)
                for (int f2 = 0; f2 < 4 && !found; ++f2) {
                    if (done[t2][f2] || (t2 == t && f2 == f)) continue;
                    const FaceKey& a = keys[t][f];
                    const FaceKey& b = keys[t2][f2];
                    if (a.sign + b.sign != 0) continue;
                    if (psl_distance(a.u, b.u) > tol || psl_distance(a.v, b.v) > tol) continue;
                    Perm4 p{};
                    Perm4 q{};
                    const auto s1 = face_slots(f);
                    const auto s2 = face_slots(f2);
                    for (int k = 0; k < 3; ++k) {
                        p[s1[k]] = s2[k];
                        q[s2[k]] = s1[k];
                    }
                    p[f] = f2;
                    q[f2] = f;
                    tets[t].neighbor[f] = static_cast<int>(t2);
                    tets[t].gluing[f] = p;
                    tets[t2].neighbor[f2] = static_cast<int>(t);
                    tets[t2].gluing[f2] = q;
                    done[t][f] = done[t2][f2] = true;
                    found = true;
                }
            if (!found)
                throw TopologyError("chain is not a cycle: " + where(static_cast<int>(t), f) + " is unmatched");
        }
    std::vector<Labels> labels;
    std::vector<int> signs;
    for (const auto& s : chain_) {
        labels.push_back(s.labels);
        signs.push_back(s.sign);
    }
    return {name, std::move(tets), std::move(labels), {}, std::move(signs)};
}

// ---------------------------------------------------------------------------
// Pachner moves

namespace {

// A face of a replaced tet that survives on the boundary of the new region.
struct FaceImage {
    int tet;
    int face;
    Perm4 slot;  // old slot -> new slot (meaningful on the face)
};

struct NewTet {
    std::array<int, 4> global;  // global vertex per slot (increasing)
    int sign;
};

// Rebuild after replacing `removed` by `fresh`; `image` maps every external
// face of a removed tet, keyed by (tet, face).
OrderedTriangulation rebuild(const OrderedTriangulation& tri, const std::vector<int>& removed,
                             const std::vector<NewTet>& fresh, const std::map<std::pair<int, int>, FaceImage>& image,
                             std::optional<std::array<Mat2, 5>> global_labels, const std::string& suffix) {
    const int n = static_cast<int>(tri.size());
    std::vector<int> renum(static_cast<std::size_t>(n), -1);
    int next = 0;
    for (int t = 0; t < n; ++t)
        if (std::find(removed.begin(), removed.end(), t) == removed.end()) renum[t] = next++;
    const int first_new = next;
    const std::size_t total = static_cast<std::size_t>(first_new) + fresh.size();
    std::vector<Tet> tets(total);
    std::vector<std::array<bool, 4>> set(total, {false, false, false, false});

    auto map_face = [&](int t, int f) -> FaceImage {
        if (renum[t] >= 0) return {renum[t], f, {0, 1, 2, 3}};
        auto it = image.find({t, f});
        if (it == image.end()) throw TopologyError("move: face " + where(t, f) + " has no image");
        return {it->second.tet + first_new, it->second.face, it->second.slot};
    };

    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            if (renum[t] < 0 && !image.count({t, f})) continue;  // internal to the region
            const FaceImage a = map_face(t, f);
            const int nt = tri.tet(t).neighbor[f];
            const Perm4& p = tri.tet(t).gluing[f];
            const FaceImage b = map_face(nt, p[f]);
            Perm4 q{};
            for (int s : face_slots(f)) q[a.slot[s]] = b.slot[p[s]];
            q[a.face] = b.face;
            tets[a.tet].neighbor[a.face] = b.tet;
            tets[a.tet].gluing[a.face] = q;
            set[a.tet][a.face] = true;
        }
    // Faces shared by two new tets.
    for (std::size_t i = 0; i < fresh.size(); ++i)
        for (std::size_t j = 0; j < fresh.size(); ++j) {
            if (i == j) continue;
            // common face: globals of i minus the one missing from j
            std::vector<int> common;
            for (int g : fresh[i].global)
                if (std::find(fresh[j].global.begin(), fresh[j].global.end(), g) != fresh[j].global.end())
                    common.push_back(g);
            if (common.size() != 3) continue;
            int fi = 0;
            int fj = 0;
            for (int s = 0; s < 4; ++s) {
                if (std::find(common.begin(), common.end(), fresh[i].global[s]) == common.end()) fi = s;
                if (std::find(common.begin(), common.end(), fresh[j].global[s]) == common.end()) fj = s;
            }
            Perm4 q{};
            for (int s = 0; s < 4; ++s) {
                if (s == fi) continue;
                for (int r = 0; r < 4; ++r)
                    if (fresh[j].global[r] == fresh[i].global[s]) q[s] = r;
            }
            q[fi] = fj;
            const auto ti = static_cast<std::size_t>(first_new) + i;
            tets[ti].neighbor[fi] = first_new + static_cast<int>(j);
            tets[ti].gluing[fi] = q;
            set[ti][fi] = true;
        }
    for (std::size_t t = 0; t < total; ++t)
        for (int f = 0; f < 4; ++f)
            if (!set[t][f]) throw TopologyError("move left " + where(static_cast<int>(t), f) + " unglued");

    std::optional<std::vector<Labels>> labels;
    if (tri.has_labels() && global_labels) {
        labels.emplace();
        for (int t = 0; t < n; ++t)
            if (renum[t] >= 0) labels->push_back(tri.labels()[t]);
        for (const NewTet& nt : fresh) {
            Labels l;
            for (int s = 0; s < 4; ++s) l[s] = (*global_labels)[nt.global[s]];
            labels->push_back(l);
        }
    }
    std::vector<int> signs;
    for (int t = 0; t < n; ++t)
        if (renum[t] >= 0) signs.push_back(tri.signs()[t]);
    for (const NewTet& nt : fresh) signs.push_back(nt.sign);
    std::optional<std::vector<int>> given;
    if (tri.has_explicit_signs()) given = signs;
    OrderedTriangulation out(tri.name() + suffix, std::move(tets), std::move(labels), {}, given);
    // Without stored signs the recomputed ones may differ by a global flip.
    if (!given && out.signs() != signs) {
        std::vector<int> flipped = signs;
        for (int& s : flipped) s = -s;
        if (out.signs() != flipped) throw TopologyError("move produced inconsistent orientation");
    }
    return out;
}

// All orders of 5 symbols compatible with the slot orders of the given
// tetrahedra (each a list of 4 symbols in slot order).
std::vector<std::array<int, 5>> compatible_orders(const std::vector<std::array<int, 4>>& tets) {
    std::vector<std::array<int, 5>> out;
    std::array<int, 5> perm{0, 1, 2, 3, 4};  // perm[pos] = symbol
    do {
        std::array<int, 5> pos{};
        for (int k = 0; k < 5; ++k) pos[perm[k]] = k;
        bool ok = true;
        for (const auto& t : tets)
            for (int s = 0; s < 3 && ok; ++s) ok = pos[t[s]] < pos[t[s + 1]];
        if (ok) out.push_back(pos);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

int slot_in(int omitted, int global) { return global < omitted ? global : global - 1; }

NewTet simplex_omitting(int k, int sign) {
    NewTet t{{}, sign};
    int s = 0;
    for (int g = 0; g < 5; ++g)
        if (g != k) t.global[s++] = g;
    return t;
}

} // namespace

OrderedTriangulation pachner_23(const OrderedTriangulation& tri, int tet, int face) {
    if (tet < 0 || tet >= static_cast<int>(tri.size()) || face < 0 || face > 3)
        throw TopologyError("2-3 move: no such face");
    const int A = tet;
    const int i = face;
    const int B = tri.tet(A).neighbor[i];
    const Perm4 pa = tri.tet(A).gluing[i];  // A slot -> B slot
    const int j = pa[i];
    if (B == A) throw TopologyError("2-3 move: the face is glued to its own tetrahedron");
    // Symbols: A slots 0..3, B apex 4.
    std::array<int, 4> b_sym{};
    for (int s = 0; s < 4; ++s)
        if (s != i) b_sym[pa[s]] = s;
    b_sym[j] = 4;
    auto orders = compatible_orders({std::array<int, 4>{0, 1, 2, 3}, b_sym});
    if (orders.empty()) throw TopologyError("2-3 move: vertex orders are incompatible");
    // Ties: A's apex first.
    auto it = std::find_if(orders.begin(), orders.end(), [&](const auto& pos) { return pos[i] < pos[4]; });
    const std::array<int, 5> pos = it != orders.end() ? *it : orders.front();
    const int a_pos = pos[i];
    const int b_pos = pos[4];
    const int s = tri.signs()[A] * (b_pos % 2 ? -1 : 1);
    if (tri.signs()[B] != s * (a_pos % 2 ? -1 : 1))
        throw TopologyError("2-3 move: orientations of the two tetrahedra disagree");

    std::vector<NewTet> fresh;
    std::map<int, int> index_of;  // omitted global -> new tet index
    for (int k = 0; k < 5; ++k) {
        if (k == a_pos || k == b_pos) continue;
        index_of[k] = static_cast<int>(fresh.size());
        fresh.push_back(simplex_omitting(k, -s * (k % 2 ? -1 : 1)));
    }
    std::map<std::pair<int, int>, FaceImage> image;
    for (int f = 0; f < 4; ++f) {
        if (f != i) {
            const int g = pos[f];
            FaceImage im{index_of.at(g), slot_in(g, b_pos), {}};
            for (int sl = 0; sl < 4; ++sl) im.slot[sl] = sl == f ? im.face : slot_in(g, pos[sl]);
            image[{A, f}] = im;
        }
        if (f != j) {
            const int g = pos[b_sym[f]];
            FaceImage im{index_of.at(g), slot_in(g, a_pos), {}};
            for (int sl = 0; sl < 4; ++sl) im.slot[sl] = sl == f ? im.face : slot_in(g, pos[b_sym[sl]]);
            image[{B, f}] = im;
        }
    }
    std::optional<std::array<Mat2, 5>> glabels;
    if (tri.has_labels()) {
        const Labels& la = tri.labels()[A];
        const Labels& lb = tri.labels()[B];
        const int s0 = face_slots(i)[0];
        const Mat2 h = la[s0] * lb[pa[s0]].inverse();
        glabels.emplace();
        for (int sl = 0; sl < 4; ++sl) (*glabels)[pos[sl]] = la[sl];
        (*glabels)[b_pos] = h * lb[j];
    }
    return rebuild(tri, {A, B}, fresh, image, glabels, "+23");
}

OrderedTriangulation pachner_32(const OrderedTriangulation& tri, int edge) {
    if (edge < 0 || edge >= static_cast<int>(tri.edges().size())) throw TopologyError("3-2 move: no such edge");
    const EdgeClass& e = tri.edges()[edge];
    if (e.valence() != 3) throw TopologyError("3-2 move: edge does not have valence 3");
    const auto& ps = e.loop.passes;
    std::array<int, 3> t{ps[0].tet, ps[1].tet, ps[2].tet};
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
        throw TopologyError("3-2 move: the tetrahedra around the edge are not distinct");
    // Symbols: P = 0, Q = 1, X_k = 2 + k where X_k sits at the enter slot of pass k
    // and X_{k-1} at its exit slot.
    std::vector<std::array<int, 4>> sym(3);
    for (int k = 0; k < 3; ++k) {
        const Pass& p = ps[k];
        sym[k][p.corner] = 0;
        sym[k][p.other()] = 1;
        sym[k][p.enter] = 2 + k;
        sym[k][p.exit] = 2 + (k + 2) % 3;
    }
    const auto orders = compatible_orders(sym);
    if (orders.empty()) throw TopologyError("3-2 move: vertex orders are incompatible");
    const std::array<int, 5> pos = orders.front();
    // T_k omits X_{k+1}.
    const int s0 = -tri.signs()[t[0]] * (pos[2 + 1] % 2 ? -1 : 1);
    for (int k = 0; k < 3; ++k)
        if (tri.signs()[t[k]] != -s0 * (pos[2 + (k + 1) % 3] % 2 ? -1 : 1))
            throw TopologyError("3-2 move: orientations around the edge disagree");
    const int gp = pos[0];
    const int gq = pos[1];
    std::vector<NewTet> fresh{simplex_omitting(gp, s0 * (gp % 2 ? -1 : 1)),
                              simplex_omitting(gq, s0 * (gq % 2 ? -1 : 1))};
    std::map<std::pair<int, int>, FaceImage> image;
    for (int k = 0; k < 3; ++k) {
        const Pass& p = ps[k];
        const int gx = pos[2 + (k + 1) % 3];
        for (int which = 0; which < 2; ++which) {
            const int f = which == 0 ? p.corner : p.other();
            const int g = which == 0 ? gp : gq;
            FaceImage im{which, slot_in(g, gx), {}};
            for (int sl = 0; sl < 4; ++sl) im.slot[sl] = sl == f ? im.face : slot_in(g, pos[sym[k][sl]]);
            image[{t[k], f}] = im;
        }
    }
    std::optional<std::array<Mat2, 5>> glabels;
    if (tri.has_labels()) {
        glabels.emplace();
        const Labels& l0 = tri.labels()[t[0]];
        for (int sl = 0; sl < 4; ++sl) (*glabels)[pos[sym[0][sl]]] = l0[sl];
        const Labels& l1 = tri.labels()[t[1]];
        const Mat2 h = l0[ps[0].corner] * l1[ps[1].corner].inverse();
        (*glabels)[pos[2 + 1]] = h * l1[ps[1].enter];
    }
    return rebuild(tri, {t[0], t[1], t[2]}, fresh, image, glabels, "-32");
}

} // namespace extbloch
