#include <doctest.h>

#include <set>

#include "generators.hpp"
#include "hexperc/core/lattice.hpp"

using namespace hexperc;

namespace {

void check_domain(const DiscreteDomain& dom) {
    CHECK(dom.euler_characteristic() == 1);
    for (VertexIndex v = 0; v < dom.vertex_count(); ++v) {
        CHECK(dom.degree(v) >= 2);
        CHECK(dom.degree(v) <= 3);
        for (int d : dom.edge_directions(v)) {
            const VertexIndex y = dom.neighbor(v, d);
            REQUIRE(y != kNone);
            CHECK(dom.neighbor(y, (d + 3) % 6) == v);
        }
    }
    const auto& cyc = dom.boundary_cycle();
    std::set<VertexIndex> seen(cyc.begin(), cyc.end());
    CHECK(seen.size() == cyc.size());
    for (std::size_t i = 0; i < cyc.size(); ++i) {
        CHECK(dom.boundary_position(cyc[i]) == static_cast<int>(i));
        CHECK(std::abs(std::abs(dom.position(cyc[i]) - dom.position(cyc[(i + 1) % cyc.size()])) - dom.delta()) < 1e-9);
        CHECK_FALSE(dom.is_interior(cyc[i]));
    }
    CHECK(dom.l() != dom.r());
    CHECK(dom.l() != dom.w());
    CHECK(dom.boundary_position(dom.l()) >= 0);
    CHECK(dom.boundary_position(dom.w()) >= 0);
}

}  // namespace

TEST_CASE("infinite lattice geometry") {
    const double delta = 0.5;
    for (int corner = 0; corner < 6; ++corner) {
        const FaceCoord f{2, -1};
        const Complex p = vertex_position(corner_vertex(f, corner), delta);
        CHECK(std::abs(p - (face_center(f, delta) + delta * std::polar(1.0, corner * 3.14159265358979 / 3))) < 1e-12);
    }
    for (int side = 0; side < 6; ++side) {
        const FaceCoord f{0, 0};
        const FaceCoord g = face_neighbor(f, side);
        CHECK(face_neighbor(g, (side + 3) % 6) == f);
        CHECK(std::abs(std::abs(face_center(g, 1.0) - face_center(f, 1.0)) - std::sqrt(3.0)) < 1e-12);
    }
    const VertexCoord v{0, 0, 0};
    for (int d = 0; d < 6; ++d) {
        if (!is_edge_direction(v, d)) continue;
        const VertexCoord y = lattice_step(v, d);
        CHECK(std::abs(vertex_position(y, 1.0) - vertex_position(v, 1.0) - unit_direction(d)) < 1e-12);
        CHECK(lattice_step(y, (d + 3) % 6) == v);
    }
}

TEST_CASE("disc discretization") {
    DomainSpec s;
    s.delta = 1.0 / 8;
    const DiscreteDomain dom = discretize(s);
    check_domain(dom);
    for (FaceIndex f = 0; f < dom.face_count(); ++f) {
        for (VertexIndex v : dom.face_corners(f)) CHECK(std::abs(dom.position(v)) <= 1.0 + 1e-12);
    }
    // Marks snap to the nearest boundary vertex.
    CHECK(dom.l() == dom.nearest_boundary_vertex({-1.0, 0.0}));
    CHECK(dom.r() == dom.nearest_boundary_vertex({1.0, 0.0}));
}

TEST_CASE("property: random discs and polygons discretize to simply connected domains") {
    for (int i = 0; i < 12; ++i) {
        check_domain(discretize(gen::disc(gen::uniform(0.06, 0.2))));
        check_domain(discretize(gen::polygon(gen::uniform(0.06, 0.2))));
    }
}

TEST_CASE("oriented-edge calculus") {
    DomainSpec s;
    s.delta = 1.0 / 8;
    const DiscreteDomain dom = discretize(s);
    int interior = 0;
    for (const OrientedEdge& e : dom.oriented_edges()) {
        const OrientedEdge b = dom.reversed(e);
        CHECK(dom.head(b) == e.tail);
        CHECK(dom.left_face(b) == dom.right_face(e));
        CHECK(dom.right_face(b) == dom.left_face(e));
        CHECK(std::abs(dom.displacement(e) + dom.displacement(b)) < 1e-12);
        if (dom.left_face(e) == kNone || dom.right_face(e) == kNone) {
            CHECK_THROWS_AS(dual_edge(dom, e), Error);
        } else {
            const DualEdge d = dual_edge(dom, e);
            CHECK(std::abs(d.vector - Complex(0.0, std::sqrt(3.0)) * dom.displacement(e)) < 1e-12);
        }
        if (dom.is_interior_edge(e)) {
            ++interior;
            CHECK(rotate_edge(dom, e, 1).dir == (e.dir + 2) % 6);
            CHECK(rotate_edge(dom, e, 2).dir == (e.dir + 4) % 6);
        }
    }
    CHECK(interior > 0);
    CHECK(static_cast<int>(dom.oriented_edges().size()) == 2 * dom.edge_count());
    CHECK_THROWS_AS(rotate_edge(dom, dom.oriented_edges().front(), 3), Error);
}

TEST_CASE("boundary arcs split at the marks") {
    DomainSpec s;
    s.delta = 1.0 / 16;
    const DiscreteDomain dom = discretize(s);
    const BoundaryArcs arcs = boundary_arcs(dom);
    CHECK(arcs.u.size() + arcs.d.size() == dom.boundary_cycle().size());
    // u is the upper arc for l = pi, r = 0.
    for (auto [a, b] : arcs.u) CHECK(dom.position(a).imag() + dom.position(b).imag() >= -1e-9);
    for (auto [a, b] : arcs.d) CHECK(dom.position(a).imag() + dom.position(b).imag() <= 1e-9);
}

TEST_CASE("spec validation") {
    DomainSpec s;
    s.delta = 0.0;
    CHECK_THROWS_AS(validate_spec(s), Error);
    s.delta = 0.1;
    s.l = s.r;
    CHECK_THROWS_AS(discretize(s), Error);
    DomainSpec big;
    big.delta = 5.0;
    CHECK_THROWS_AS(discretize(big), Error);
}
