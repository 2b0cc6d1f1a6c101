#include <doctest.h>

#include <numeric>

#include "generators.hpp"
#include "hexperc/core/percolation.hpp"

using namespace hexperc;

TEST_CASE("philox4x32-10 known-answer vectors") {
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("sampling is a pure function of (seed, index)") {
    DomainSpec s;
    s.delta = 1.0 / 16;
    const DiscreteDomain dom = discretize(s);
    const Coloring a = sample_coloring(dom, {7, 123});
    const Coloring b = sample_coloring(dom, {7, 123});
    const Coloring c = sample_coloring(dom, {7, 124});
    const Coloring d = sample_coloring(dom, {8, 123});
    CHECK(a.white == b.white);
    CHECK(a.white != c.white);
    CHECK(a.white != d.white);
    Coloring e;
    sample_coloring_into(dom, {7, 123}, e);
    CHECK(e.white == a.white);
}

TEST_CASE("sampled faces are fair coins") {
    DomainSpec s;
    s.delta = 1.0 / 16;
    const DiscreteDomain dom = discretize(s);
    std::int64_t whites = 0, total = 0;
    for (std::uint64_t i = 0; i < 2000; ++i) {
        const Coloring c = sample_coloring(dom, {1, i});
        whites += std::accumulate(c.white.begin(), c.white.end(), std::int64_t{0});
        total += c.size();
    }
    const double p = static_cast<double>(whites) / total;
    CHECK(std::abs(p - 0.5) < 4 * 0.5 / std::sqrt(static_cast<double>(total)));
}

TEST_CASE("negation and masks") {
    const Coloring c = Coloring::from_mask(5, 0b10110);
    CHECK(c.white == std::vector<std::uint8_t>{0, 1, 1, 0, 1});
    CHECK(negate(negate(c)).white == c.white);
    CHECK(negate(c).white == std::vector<std::uint8_t>{1, 0, 0, 1, 0});
    CHECK(Coloring::uniform(3, Color::white).white == std::vector<std::uint8_t>{1, 1, 1});
}

TEST_CASE("union-find") {
    UnionFind uf(6);
    CHECK(uf.unite(0, 1));
    CHECK(uf.unite(2, 3));
    CHECK_FALSE(uf.unite(1, 0));
    CHECK(uf.unite(1, 3));
    CHECK(uf.find(0) == uf.find(2));
    CHECK(uf.find(4) != uf.find(0));
    CHECK(uf.size_of(3) == 4);
}

TEST_CASE("cluster labeling") {
    DomainSpec s;
    s.delta = 1.0 / 8;
    const DiscreteDomain dom = discretize(s);
    const ClusterLabels all = label_clusters(dom, Coloring::uniform(dom.face_count(), Color::white), Color::white);
    REQUIRE(all.count() == 1);
    CHECK(all.crossing(0));
    CHECK(all.clusters[0].size == dom.face_count());
    const ClusterLabels none = label_clusters(dom, Coloring::uniform(dom.face_count(), Color::black), Color::white);
    CHECK(none.count() == 0);
}

TEST_CASE("property: clusters are the connected components of their color") {
    DomainSpec s;
    s.delta = 1.0 / 8;
    const DiscreteDomain dom = discretize(s);
    for (int trial = 0; trial < 50; ++trial) {
        const Coloring col = gen::coloring(dom.face_count(), gen::uniform(0.3, 0.7));
        for (Color color : {Color::white, Color::black}) {
            const ClusterLabels lab = label_clusters(dom, col, color);
            int total = 0;
            for (int c = 0; c < lab.count(); ++c) {
                total += lab.clusters[c].size;
                if (c > 0) CHECK(lab.clusters[c - 1].first_face < lab.clusters[c].first_face);
            }
            int of_color = 0;
            for (FaceIndex f = 0; f < dom.face_count(); ++f) {
                const bool has = col.has(f, color);
                of_color += has;
                CHECK((lab.label[f] != kNone) == has);
                if (!has) continue;
                CHECK(lab.clusters[lab.label[f]].first_face <= f);
                if (dom.face_touches_u(f)) CHECK(lab.clusters[lab.label[f]].touches_u);
                if (dom.face_touches_d(f)) CHECK(lab.clusters[lab.label[f]].touches_d);
                for (FaceIndex g : dom.face_neighbors(f)) {
                    if (g != kNone && col.has(g, color)) CHECK(lab.label[g] == lab.label[f]);
                }
            }
            CHECK(total == of_color);
        }
    }
}
