#include <doctest.h>

#include "generators.hpp"
#include "hexperc/core/field.hpp"
#include "hexperc/core/observables.hpp"

using namespace hexperc;

namespace {

DiscreteDomain small_disc() {
    DomainSpec s;
    s.delta = 1.0 / 8;
    return discretize(s);
}

}  // namespace

TEST_CASE("all-white and all-black colorings") {
    const DiscreteDomain dom = small_disc();
    SampleEvaluator eval(dom);
    const Coloring black = Coloring::uniform(dom.face_count(), Color::black);
    const SampleValues& v = eval.evaluate(black);
    for (VertexIndex z = 0; z < dom.vertex_count(); ++z) {
        CHECK(v.nl[z] == 0);
        CHECK(v.nr[z] == 0);
        CHECK(v.qu[z] == 0);
        CHECK(v.qd[z] == 0);
    }
    const Coloring white = Coloring::uniform(dom.face_count(), Color::white);
    eval.evaluate(white);
    CHECK(eval.left_traces().size() == 1);
    CHECK(eval.right_traces().size() == 1);
}

TEST_CASE("property: per-sample invariants") {
    const DiscreteDomain dom = small_disc();
    SampleEvaluator eval(dom);
    const auto arcs = boundary_arcs(dom);
    for (int trial = 0; trial < 200; ++trial) {
        const Coloring col = gen::coloring(dom.face_count());
        const SampleValues& v = eval.evaluate(col);
        // Normalization at w.
        CHECK(v.nl[dom.w()] == 0);
        CHECK(v.nr[dom.w()] == 0);
        // Neighbors differ by at most one boundary.
        for (const OrientedEdge& e : dom.oriented_edges()) {
            const VertexIndex y = dom.head(e);
            CHECK(std::abs(v.nl[y] - v.nl[e.tail]) <= 1);
            CHECK(std::abs(v.nr[y] - v.nr[e.tail]) <= 1);
        }
        // Q^u never holds on u, Q^d never on d.
        for (auto [a, b] : arcs.u) CHECK(v.qu[a] == 0);
        for (auto [a, b] : arcs.d) CHECK(v.qd[b] == 0);
        // Traces are disjoint and ordered from l.
        const auto& left = eval.left_traces();
        for (const auto& t : left) {
            CHECK(t.side == Side::left);
            CHECK(eval.labels().crossing(t.cluster));
            CHECK(!t.faces.empty());
            CHECK(dom.face_touches_u(t.faces.front()));
            CHECK(dom.face_touches_d(t.faces.back()));
        }
        // Fast Q against the direct event evaluation.
        for (VertexIndex z = 0; z < dom.vertex_count(); z += 3) {
            CHECK(static_cast<bool>(v.qu[z]) == event_qu(dom, eval.labels(), z));
            CHECK(static_cast<bool>(v.qd[z]) == event_qd(dom, eval.labels(), z));
        }
    }
}

TEST_CASE("property: crossing clusters have one left and one right trace each") {
    const DiscreteDomain dom = small_disc();
    for (int trial = 0; trial < 100; ++trial) {
        const Coloring col = gen::coloring(dom.face_count());
        const ClusterLabels lab = label_clusters(dom, col, Color::white);
        const std::vector<int> crossing = crossing_clusters(dom, lab);
        int expected = 0;
        for (int c = 0; c < lab.count(); ++c) expected += lab.crossing(c);
        CHECK(static_cast<int>(crossing.size()) == expected);
        for (int c : crossing) {
            for (Side side : {Side::left, Side::right}) {
                const BoundaryTrace t = trace_boundary(dom, lab, c, side);
                for (FaceIndex f : t.faces) CHECK(lab.label[f] == c);
                // Consecutive faces are neighbors; no face repeats.
                for (std::size_t i = 1; i < t.faces.size(); ++i) {
                    const auto& nb = dom.face_neighbors(t.faces[i - 1]);
                    CHECK(std::find(nb.begin(), nb.end(), t.faces[i]) != nb.end());
                    for (std::size_t j = 0; j < i; ++j) CHECK(t.faces[j] != t.faces[i]);
                }
            }
        }
    }
}

TEST_CASE("field accumulation is independent of the worker split") {
    const DiscreteDomain dom = small_disc();
    const ObservableField a = accumulate_field(dom, 5, 0, 600, 1);
    const ObservableField b = accumulate_field(dom, 5, 0, 600, 3);
    REQUIRE(a.samples() == 600);
    for (VertexIndex z = 0; z < dom.vertex_count(); ++z) {
        CHECK(a.sums(z).nl == b.sums(z).nl);
        CHECK(a.sums(z).nr2 == b.sums(z).nr2);
        CHECK(a.sums(z).qud == b.sums(z).qud);
        CHECK(a.h(z) == b.h(z));
    }
    // Splitting the index range and merging gives the same sums.
    ObservableField c = accumulate_field(dom, 5, 0, 250, 1);
    c.merge(accumulate_field(dom, 5, 250, 600, 2));
    for (VertexIndex z = 0; z < dom.vertex_count(); ++z) CHECK(c.sums(z).nlnr == a.sums(z).nlnr);
}

TEST_CASE("field estimates and moments") {
    const Moments m = moments(4, 6, 14);  // samples 0, 1, 2, 3
    CHECK(m.mean == doctest::Approx(1.5));
    CHECK(m.variance == doctest::Approx(5.0 / 3.0));
    CHECK(standard_error(4, 6, 14) == doctest::Approx(std::sqrt(5.0 / 12.0)));
    CHECK(standard_error(1, 1, 1) == 0.0);

    const DiscreteDomain dom = small_disc();
    const ObservableField f = accumulate_field(dom, 1, 0, 400, 1);
    for (VertexIndex z = 0; z < dom.vertex_count(); ++z) {
        const Complex h = f.h(z);
        CHECK(h.real() == doctest::Approx(f.hl(z) + f.hr(z)));
        CHECK(h.imag() == doctest::Approx(-kHalfSqrt3 * (f.hu(z) - f.hd(z))));
        CHECK(f.hu(z) >= 0.0);
        CHECK(f.hu(z) <= 1.0);
    }
}
