#include <doctest.h>

#include <set>

#include "generators.hpp"
#include "hexperc/core/analysis.hpp"

using namespace hexperc;

namespace {

DiscreteDomain disc(double delta) {
    DomainSpec s;
    s.delta = delta;
    return discretize(s);
}

}  // namespace

TEST_CASE("cr_residual arithmetic") {
    CrTerms<int> t{3, 1, 2, 5, 4, 1};
    // 2 (3 - 1) - ((5 - 2) - (1 - 4)) = 4 - 6
    CHECK(cr_residual(t) == -2);
    CrTerms<double> z{};
    CHECK(cr_residual(z) == 0.0);
}

TEST_CASE("admissible edges") {
    const DiscreteDomain dom = disc(1.0 / 8);
    const auto edges = admissible_edges(dom);
    CHECK(!edges.empty());
    for (const OrientedEdge& e : edges) {
        CHECK(is_admissible(dom, e));
        CHECK(dom.is_interior(e.tail));
        CHECK(dom.is_interior(dom.head(e)));
        CHECK(dom.is_interior(dom.neighbor(e.tail, (e.dir + 2) % 6)));
        CHECK(dom.is_interior(dom.neighbor(e.tail, (e.dir + 4) % 6)));
    }
}

TEST_CASE("property: derivative events agree with the indicators") {
    const DiscreteDomain dom = disc(1.0 / 8);
    SampleEvaluator eval(dom);
    const auto edges = admissible_edges(dom);
    for (int trial = 0; trial < 50; ++trial) {
        const SampleValues& v = eval.evaluate(gen::coloring(dom.face_count()));
        for (const OrientedEdge& e : edges) {
            const CrTerms<int> t = cr_indicators(dom, v, e);
            CHECK(t.lp == DerivativeEvent{e, Tag::l, +1}.holds(dom, v));
            CHECK(t.rm == DerivativeEvent{e, Tag::r, -1}.holds(dom, v));
            CHECK(t.qu_t == DerivativeEvent{rotate_edge(dom, e, 1), Tag::u, +1}.holds(dom, v));
            CHECK(t.qd_tt == DerivativeEvent{rotate_edge(dom, e, 2), Tag::d, +1}.holds(dom, v));
            // d+ and d- of the same edge are exclusive.
            CHECK(!(DerivativeEvent{e, Tag::l, +1}.holds(dom, v) && DerivativeEvent{e, Tag::l, -1}.holds(dom, v)));
        }
    }
    CHECK(DerivativeEvent{edges.front(), Tag::u, -1}.name() == "d-u");
}

TEST_CASE("CR accumulator merges exactly") {
    const DiscreteDomain dom = disc(1.0 / 8);
    const auto edges = admissible_edges(dom);
    struct Run {
        CrAccumulator acc;
        void add(const DiscreteDomain& d, const Coloring& c, SampleEvaluator& e) { acc.add(d, c, e); }
        void merge(const Run& o) { acc.merge(o.acc); }
    };
    auto make = [&] { return Run{CrAccumulator(edges)}; };
    const auto a = run_samples<Run>(dom, 3, 0, 500, 1, make).acc.rows();
    const auto b = run_samples<Run>(dom, 3, 0, 500, 4, make).acc.rows();
    REQUIRE(a.size() == edges.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].residual == b[i].residual);
        CHECK(a[i].se == b[i].se);
    }
}

TEST_CASE("Eisenstein arithmetic") {
    const double pi = 3.14159265358979323846;
    for (int d = 0; d < 6; ++d) CHECK(std::abs(eisenstein_direction(d).value() - std::polar(1.0, d * pi / 3)) < 1e-12);
    for (int trial = 0; trial < 200; ++trial) {
        const Eisenstein x{gen::integer(-20, 20), gen::integer(-20, 20)};
        const Eisenstein y{gen::integer(-20, 20), gen::integer(-20, 20)};
        CHECK(std::abs((x * y).value() - x.value() * y.value()) < 1e-9);
        CHECK((x + y) - y == x);
    }
}

TEST_CASE("geometric identity vanishes edge by edge") {
    const DiscreteDomain dom = disc(1.0 / 8);
    for (int d = 0; d < 6; ++d) CHECK(geometric_identity_term({0, d}) == Eisenstein{});
    const Contour c = discretize_circle(dom, {0.0, 0.0}, 0.5);
    const IdentitySum s = geometric_identity_sum(dom, interior_edges(dom, c));
    CHECK(s.total == Eisenstein{});
    CHECK(s.nonzero_terms == 0);
    CHECK(s.edges > 0);
}

TEST_CASE("property: discretized circles are simple counterclockwise lattice cycles") {
    for (int trial = 0; trial < 10; ++trial) {
        const double delta = gen::uniform(0.03, 0.1);
        const DiscreteDomain dom = disc(delta);
        const Complex center(gen::uniform(-0.2, 0.2), gen::uniform(-0.2, 0.2));
        const double radius = gen::uniform(0.25, 0.6);
        const Contour c = discretize_circle(dom, center, radius);
        const auto& cyc = c.cycle;
        REQUIRE(cyc.size() >= 6);
        CHECK(std::set<VertexIndex>(cyc.begin(), cyc.end()).size() == cyc.size());
        double area = 0.0;
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            const Complex a = dom.position(cyc[i]), b = dom.position(cyc[(i + 1) % cyc.size()]);
            CHECK(std::abs(std::abs(b - a) - delta) < 1e-9);
            CHECK(std::abs(std::abs(a - center) - radius) < 2 * delta);
            area += (std::conj(a) * b).imag() / 2;
        }
        CHECK(area > 0);
        CHECK(area == doctest::Approx(3.14159265358979 * radius * radius).epsilon(0.1 + 2 * delta / radius));
        CHECK(contour_edges(dom, c).size() == cyc.size());
    }
    const DiscreteDomain dom = disc(0.1);
    CHECK_THROWS_AS(discretize_circle(dom, {0.0, 0.0}, 0.99), Error);
}

TEST_CASE("morera sum integrates polynomials exactly and conj(z) to 2i area") {
    const DiscreteDomain dom = disc(1.0 / 16);
    const Contour c = discretize_circle(dom, {0.1, 0.0}, 0.5);
    auto at = [&](auto f) { return [&dom, f](VertexIndex v) { return f(dom.position(v)); }; };
    CHECK(std::abs(morera_sum(dom, c, at([](Complex) { return Complex(1.0, 0.0); }))) < 1e-12);
    CHECK(std::abs(morera_sum(dom, c, at([](Complex z) { return z; }))) < 1e-12);
    double area = 0.0;
    const auto& cyc = c.cycle;
    for (std::size_t i = 0; i < cyc.size(); ++i) {
        area += (std::conj(dom.position(cyc[i])) * dom.position(cyc[(i + 1) % cyc.size()])).imag() / 2;
    }
    const Complex m = morera_sum(dom, c, at([](Complex z) { return std::conj(z); }));
    CHECK(std::abs(m - Complex(0.0, 2 * area)) < 1e-9);
}

TEST_CASE("trend gates") {
    CHECK(decreasing_within({1.0, 0.9, 0.95}, {0.0, 0.02, 0.02}, 4));
    CHECK_FALSE(decreasing_within({1.0, 0.9, 1.2}, {0.0, 0.02, 0.02}, 4));
    CHECK(strictly_decreasing_within({1.0, 0.9, 0.95}, {0.0, 0.02, 0.02}, 4));
    CHECK_FALSE(strictly_decreasing_within({1.0, 1.0}, {0.1, 0.1}, 4));
    CHECK_FALSE(strictly_decreasing_within({1.0, 1.05}, {0.1, 0.1}, 4));
}

TEST_CASE("convergence comparison against a known field") {
    const DiscreteDomain dom = disc(1.0 / 8);
    const ObservableField f = accumulate_field(dom, 1, 0, 300, 1);
    const ConvergenceRow self = compare_to_reference(dom, f, [](Complex) { return Complex(0.0, 0.0); }, {0.0, 0.0}, 0.7);
    double sup = 0.0;
    for (VertexIndex v = 0; v < dom.vertex_count(); ++v) {
        if (std::abs(dom.position(v)) <= 0.7) sup = std::max(sup, std::abs(f.h(v)));
    }
    CHECK(self.supdist == doctest::Approx(sup));
    CHECK(self.samples == 300);
    CHECK(self.probes > 0);
}
