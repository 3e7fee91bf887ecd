#pragma once

// Quasi-simplicial ordered 3-cycles: tetrahedra with order-compatible face
// gluings, derived edge classes and vertex links, orientation signs, normal
// curves, construction from homogeneous chains, and 2-3 / 3-2 moves.

#include "extbloch/flattening.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace extbloch {

using Perm4 = std::array<int, 4>;
using Labels = std::array<Mat2, 4>;

/// One tetrahedron. Face i is opposite vertex slot i; gluing[i] maps every
/// slot of this tetrahedron to a slot of neighbor[i] (face i to the glued face).
struct Tet {
    std::array<int, 4> neighbor{};
    std::array<Perm4, 4> gluing{};
};

/// A normal arc inside a tetrahedron: it runs in the corner at `corner`,
/// enters through face `enter` and leaves through face `exit`, passing the
/// edge joining `corner` to the remaining slot.
struct Pass {
    int tet = 0;
    int corner = 0;
    int enter = 0;
    int exit = 0;

    [[nodiscard]] int other() const { return 6 - corner - enter - exit; }
    /// +1 or -1: sign of the permutation (corner, other, enter, exit).
    [[nodiscard]] int sign() const;
    friend bool operator==(const Pass&, const Pass&) = default;
};

struct NormalCurve {
    std::vector<Pass> passes;
    friend bool operator==(const NormalCurve&, const NormalCurve&) = default;
};

struct CuspCurves {
    int vertex = 0;
    NormalCurve meridian;
    NormalCurve longitude;
};

struct EdgeIncidence {
    int tet = 0;
    int a = 0;  ///< lower slot of the tet-edge
    int b = 0;  ///< higher slot
};

struct EdgeClass {
    std::vector<EdgeIncidence> incidences;  ///< cyclic order around the edge
    NormalCurve loop;                       ///< encircles the edge near its lower end
    int loop_sign = 1;                      ///< pass sign times epsilon, constant along the loop
    int vertex_low = 0;                     ///< vertex class of the lower end
    int vertex_high = 0;                    ///< vertex class of the higher end

    [[nodiscard]] std::size_t valence() const { return incidences.size(); }
};

enum class LinkKind { material, cusp, singular };

struct VertexLink {
    int vertex = 0;
    std::vector<std::pair<int, int>> corners;  ///< (tet, slot)
    int vertices = 0;
    int edges = 0;
    int faces = 0;
    int euler = 0;
    int genus = 0;
    LinkKind kind = LinkKind::material;
};

/// Tolerance-free combinatorial data plus optional PSL(2,C) labels.
class OrderedTriangulation {
public:
    OrderedTriangulation() = default;
    /// Validates involution, order compatibility and orientability, then
    /// computes edges, vertex classes and links. Throws TopologyError.
    OrderedTriangulation(std::string name, std::vector<Tet> tets,
                         std::optional<std::vector<Labels>> labels = std::nullopt,
                         std::vector<CuspCurves> cusps = {},
                         std::optional<std::vector<int>> signs = std::nullopt);

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] std::size_t size() const { return tets_.size(); }
    [[nodiscard]] const std::vector<Tet>& tets() const { return tets_; }
    [[nodiscard]] const Tet& tet(int t) const { return tets_[static_cast<std::size_t>(t)]; }
    [[nodiscard]] bool has_labels() const { return labels_.has_value(); }
    [[nodiscard]] const std::vector<Labels>& labels() const;
    [[nodiscard]] const std::vector<CuspCurves>& user_cusps() const { return cusps_; }
    [[nodiscard]] bool has_explicit_signs() const { return explicit_signs_; }

    [[nodiscard]] const std::vector<EdgeClass>& edges() const { return edges_; }
    /// Edge class index of a tet-edge given by two slots.
    [[nodiscard]] int edge_of(int tet, int a, int b) const;
    [[nodiscard]] int vertex_of(int tet, int slot) const;
    [[nodiscard]] int vertex_count() const { return vertex_count_; }
    [[nodiscard]] const std::vector<VertexLink>& links() const { return links_; }
    /// Orientation signs with tet 0 at +1 (or the stored chain signs).
    [[nodiscard]] const std::vector<int>& signs() const { return signs_; }

private:
    void validate();
    void compute_orientation(const std::optional<std::vector<int>>& given);
    void compute_vertices();
    void compute_edges();
    void compute_links();

    std::string name_;
    std::vector<Tet> tets_;
    std::optional<std::vector<Labels>> labels_;
    std::vector<CuspCurves> cusps_;
    bool explicit_signs_ = false;

    std::vector<int> signs_;
    std::vector<std::array<int, 4>> vertex_;
    int vertex_count_ = 0;
    std::vector<std::array<int, 6>> edge_index_;
    std::vector<EdgeClass> edges_;
    std::vector<VertexLink> links_;
};

/// Parse / serialize the tri-json document. Parse errors carry the location.
OrderedTriangulation parse_triangulation(const std::string& text);
OrderedTriangulation load_triangulation(const std::string& path);
std::string serialize_triangulation(const OrderedTriangulation& tri);

std::vector<EdgeClass> compute_edges(const OrderedTriangulation& tri);
std::vector<VertexLink> compute_links(const OrderedTriangulation& tri);

/// Orientation signs, normalized so that the first tet with a non-real shape
/// has eps * sign(Im z) = +1 when shapes are supplied. Stored chain signs are
/// returned unchanged.
std::vector<int> orientation_signs(const OrderedTriangulation& tri,
                                   const std::vector<cplx>* shapes = nullptr);

/// Throws TopologyError if consecutive passes are not glued face to face.
void validate_curve(const OrderedTriangulation& tri, const NormalCurve& c);
/// Whether every pass runs in the corner of one vertex class.
bool in_vertex_star(const OrderedTriangulation& tri, const NormalCurve& c, int* vertex = nullptr);

/// Meridian/longitude of a torus cusp: user curves take precedence, otherwise
/// the shortest pair of link cycles that generates first homology.
CuspCurves cusp_basis(const OrderedTriangulation& tri, int vertex);
/// All torus cusps in vertex order.
std::vector<CuspCurves> cusp_bases(const OrderedTriangulation& tri);
/// Fundamental cycles of the link of `vertex` as closed normal curves.
std::vector<NormalCurve> link_cycle_basis(const OrderedTriangulation& tri, int vertex);
/// Whether two closed curves in the link of `vertex` generate its first homology.
bool generates_link_homology(const OrderedTriangulation& tri, int vertex, const NormalCurve& a,
                             const NormalCurve& b);

/// Cycle basis of the face-pairing graph lifted to normal curves, followed by
/// one loop around each edge class.
std::vector<NormalCurve> normal_loop_basis(const OrderedTriangulation& tri);

/// Per-tet component counts of a curve: entry [t][k] is the signed number of
/// passes through tet t crossing an edge that carries component k.
std::vector<std::array<int, 3>> component_counts(const OrderedTriangulation& tri, const NormalCurve& c);
/// Unsigned version, used for parities.
std::vector<std::array<int, 3>> component_hits(const OrderedTriangulation& tri, const NormalCurve& c);

/// Signed sum of log-parameters along a curve in a vertex star.
cplx log_holonomy(const OrderedTriangulation& tri, const NormalCurve& c,
                  const std::vector<FlatTriple>& flats);
/// Sum of parity parameters along any normal curve, mod 2.
int parity_along(const OrderedTriangulation& tri, const NormalCurve& c,
                 const std::vector<FlatTriple>& flats);

/// The same curve traversed backwards.
NormalCurve reversed(const NormalCurve& c);

struct ChainSimplex {
    int sign = 1;
    Labels labels;
};

/// Builds a labeled ordered 3-cycle from a homogeneous chain, pairing faces
/// that agree up to left multiplication and carry opposite boundary signs.
OrderedTriangulation cycle_from_homogeneous_chain(const std::vector<ChainSimplex>& chain,
                                                  const std::string& name = "chain",
                                                  double tol = 1e-9);

/// 2-3 move on the face `face` of tet `tet`.
OrderedTriangulation pachner_23(const OrderedTriangulation& tri, int tet, int face);
/// 3-2 move on an edge class of valence 3.
OrderedTriangulation pachner_32(const OrderedTriangulation& tri, int edge);

} // namespace extbloch
