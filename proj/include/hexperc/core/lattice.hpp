#pragma once

// Honeycomb discretizations of planar Jordan domains.
//
// Faces are flat-top hexagons addressed by axial coordinates (q, r) with
// centers delta * (3/2 q, sqrt(3) (r + q/2)). Corner k of a face sits at
// angle k * 60 degrees from its center. Every lattice vertex is corner 0 or
// corner 1 of exactly one face, which gives the canonical VertexCoord.
//
// Directions around a vertex are multiples of 60 degrees, dir in 0..5.
// A type-0 vertex has edges at even directions and faces at odd ones; a
// type-1 vertex the other way round.

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "hexperc/core/error.hpp"

namespace hexperc {

using Complex = std::complex<double>;
using FaceIndex = std::int32_t;
using VertexIndex = std::int32_t;
inline constexpr std::int32_t kNone = -1;

struct FaceCoord {
    int q = 0;
    int r = 0;
    auto operator<=>(const FaceCoord&) const = default;
};

struct VertexCoord {
    int q = 0;
    int r = 0;
    int type = 0;  // 0: corner 0 of face (q, r); 1: corner 1
    auto operator<=>(const VertexCoord&) const = default;
};

// Infinite-lattice geometry.
Complex face_center(FaceCoord f, double delta);
VertexCoord corner_vertex(FaceCoord f, int corner);
Complex vertex_position(VertexCoord v, double delta);
// Neighbor across side k, i.e. the edge from corner k to corner k+1.
FaceCoord face_neighbor(FaceCoord f, int side);
bool is_edge_direction(VertexCoord v, int dir);
// Vertex one step from v in direction dir (dir must be an edge direction).
VertexCoord lattice_step(VertexCoord v, int dir);
// Face whose center lies in direction dir from v (dir of opposite parity).
FaceCoord face_around(VertexCoord v, int dir);
Complex unit_direction(int dir);

// ---------------------------------------------------------------------------
// Continuous domain description

struct Disc {
    Complex center{0.0, 0.0};
    double radius = 1.0;
};

// Simple polygon, vertices listed counterclockwise.
struct Polygon {
    std::vector<Complex> vertices;
};

using Shape = std::variant<Disc, Polygon>;

// A marked boundary point, given either directly or by a boundary parameter
// (angle in radians for a disc, perimeter fraction in [0, 1) from vertex 0
// for a polygon).
struct BoundaryMark {
    enum class Kind { point, parameter };
    Kind kind = Kind::parameter;
    Complex point{0.0, 0.0};
    double parameter = 0.0;

    static BoundaryMark at_point(Complex p) { return {Kind::point, p, 0.0}; }
    static BoundaryMark at_parameter(double t) { return {Kind::parameter, {}, t}; }
};

struct DomainSpec {
    Shape shape = Disc{};
    BoundaryMark l = BoundaryMark::at_parameter(3.14159265358979323846);
    BoundaryMark r = BoundaryMark::at_parameter(0.0);
    BoundaryMark w = BoundaryMark::at_parameter(3.14159265358979323846 / 2);
    double delta = 0.125;
};

// Closed-domain membership (boundary counts as inside).
bool shape_contains(const Shape& shape, Complex p);
Complex boundary_point(const Shape& shape, double parameter);
// Parameter of the boundary point closest to p.
double boundary_parameter(const Shape& shape, Complex p);
// Parameter period: 2 pi for discs, 1 for polygons.
double boundary_period(const Shape& shape);
Complex resolve_mark(const Shape& shape, const BoundaryMark& mark);
// Throws Error(invalid_argument) when the spec violates its invariants.
void validate_spec(const DomainSpec& spec);

// ---------------------------------------------------------------------------
// Discrete domain

struct OrientedEdge {
    VertexIndex tail = kNone;
    int dir = 0;
    auto operator<=>(const OrientedEdge&) const = default;
};

struct DualEdge {
    Complex vector;
    FaceIndex from_face = kNone;  // right of the primal edge
    FaceIndex to_face = kNone;    // left of the primal edge
};

struct BoundaryArcs {
    std::vector<std::pair<VertexIndex, VertexIndex>> u;
    std::vector<std::pair<VertexIndex, VertexIndex>> d;
};

class DiscreteDomain {
public:
    double delta() const { return delta_; }
    int face_count() const { return static_cast<int>(faces_.size()); }
    int vertex_count() const { return static_cast<int>(vertices_.size()); }

    FaceCoord face(FaceIndex f) const { return faces_[f]; }
    Complex center(FaceIndex f) const { return face_center(faces_[f], delta_); }
    FaceIndex find_face(FaceCoord c) const;
    // kNone where the neighbor is outside the domain.
    const std::array<FaceIndex, 6>& face_neighbors(FaceIndex f) const { return face_nbr_[f]; }
    const std::array<VertexIndex, 6>& face_corners(FaceIndex f) const { return face_corner_[f]; }

    VertexCoord vertex(VertexIndex v) const { return vertices_[v]; }
    Complex position(VertexIndex v) const { return vertex_position(vertices_[v], delta_); }
    VertexIndex find_vertex(VertexCoord c) const;
    // Neighbor in direction dir, kNone if that edge is not in the domain.
    VertexIndex neighbor(VertexIndex v, int dir) const { return vertex_nbr_[v][dir]; }
    // Face in direction dir, kNone if outside (or dir is an edge direction).
    FaceIndex face_at(VertexIndex v, int dir) const { return vertex_face_[v][dir]; }
    int degree(VertexIndex v) const;
    int incident_face_count(VertexIndex v) const;
    bool is_interior(VertexIndex v) const { return incident_face_count(v) == 3; }
    // Directions at v that carry an edge of the domain.
    std::vector<int> edge_directions(VertexIndex v) const;
    std::vector<FaceIndex> incident_faces(VertexIndex v) const;

    const std::vector<VertexIndex>& boundary_cycle() const { return boundary_; }
    // Index of v in the boundary cycle, or kNone.
    int boundary_position(VertexIndex v) const { return boundary_pos_[v]; }
    // Boundary edge i runs from boundary_cycle()[i] to the next cycle vertex.
    bool boundary_edge_on_u(int i) const { return boundary_on_u_[i] != 0; }
    FaceIndex boundary_edge_face(int i) const { return boundary_face_[i]; }

    VertexIndex l() const { return l_; }
    VertexIndex r() const { return r_; }
    VertexIndex w() const { return w_; }

    bool face_touches_u(FaceIndex f) const { return touches_u_[f] != 0; }
    bool face_touches_d(FaceIndex f) const { return touches_d_[f] != 0; }
    bool face_on_boundary(FaceIndex f) const;

    // Oriented-edge calculus.
    bool has_edge(OrientedEdge e) const;
    VertexIndex head(OrientedEdge e) const;
    FaceIndex left_face(OrientedEdge e) const { return vertex_face_[e.tail][(e.dir + 1) % 6]; }
    FaceIndex right_face(OrientedEdge e) const { return vertex_face_[e.tail][(e.dir + 5) % 6]; }
    // Complex displacement head - tail.
    Complex displacement(OrientedEdge e) const { return delta_ * unit_direction(e.dir); }
    OrientedEdge reversed(OrientedEdge e) const;
    // Both endpoints have three incident faces.
    bool is_interior_edge(OrientedEdge e) const;
    std::vector<OrientedEdge> oriented_edges() const;

    int edge_count() const;
    // V - E + F; equals 1 for every accepted discretization.
    int euler_characteristic() const;

    // Re-mark the domain (used to read cluster counts with other mark sets).
    DiscreteDomain with_marks(VertexIndex l, VertexIndex r, VertexIndex w) const;
    // Nearest boundary-cycle vertex; ties go to the earlier cycle position.
    VertexIndex nearest_boundary_vertex(Complex p) const;
    // Nearest vertex of any kind.
    VertexIndex nearest_vertex(Complex p) const;

private:
    friend DiscreteDomain discretize(const DomainSpec& spec);
    friend DiscreteDomain build_domain(std::vector<FaceCoord> faces, double delta);
    void set_marks(VertexIndex l, VertexIndex r, VertexIndex w);

    double delta_ = 1.0;
    std::vector<FaceCoord> faces_;
    std::unordered_map<std::uint64_t, FaceIndex> face_index_;
    std::vector<std::array<FaceIndex, 6>> face_nbr_;
    std::vector<std::array<VertexIndex, 6>> face_corner_;
    std::vector<VertexCoord> vertices_;
    std::unordered_map<std::uint64_t, VertexIndex> vertex_index_;
    std::vector<std::array<FaceIndex, 6>> vertex_face_;
    std::vector<std::array<VertexIndex, 6>> vertex_nbr_;
    std::vector<VertexIndex> boundary_;
    std::vector<int> boundary_pos_;
    std::vector<FaceIndex> boundary_face_;
    std::vector<std::uint8_t> boundary_on_u_;
    std::vector<std::uint8_t> touches_u_;
    std::vector<std::uint8_t> touches_d_;
    VertexIndex l_ = kNone;
    VertexIndex r_ = kNone;
    VertexIndex w_ = kNone;
};

// Maximal face-connected set of hexagons whose six corners lie in the closed
// domain, marks snapped to the nearest boundary-cycle vertex.
DiscreteDomain discretize(const DomainSpec& spec);

// Domain from an explicit face set (must be face-connected and simply
// connected). Marks are unset until with_marks() is called.
DiscreteDomain build_domain(std::vector<FaceCoord> faces, double delta);

OrientedEdge rotate_edge(const DiscreteDomain& dom, OrientedEdge e, int k);
DualEdge dual_edge(const DiscreteDomain& dom, OrientedEdge e);
BoundaryArcs boundary_arcs(const DiscreteDomain& dom);

}  // namespace hexperc
