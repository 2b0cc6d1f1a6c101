#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hexperc/core/studies.hpp"

using namespace hexperc;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string temp_dir(const std::string& name) {
    const auto p = std::filesystem::temp_directory_path() / ("hexperc_test_" + name);
    std::filesystem::remove_all(p);
    return p.string();
}

}  // namespace

TEST_CASE("key=value parsing") {
    const auto kv = parse_key_values("# comment\n\nshape = disc\nradius=2\nradius = 3\n");
    CHECK(kv.at("shape") == "disc");
    CHECK(kv.at("radius") == "3");
    CHECK_THROWS_AS(parse_key_values("novalue\n"), Error);
}

TEST_CASE("config values") {
    const RunConfig c = make_config({{"delta", "1/8, 1/16,1/32"}, {"samples", "500"}, {"l", "0.75pi"},
                                     {"w", "point:0,1"}, {"seed", "9"}});
    CHECK(c.deltas == std::vector<double>{0.125, 0.0625, 0.03125});
    CHECK(c.spec.delta == 0.03125);
    CHECK(c.samples == 500);
    CHECK(c.seed == 9);
    CHECK(c.spec.l.parameter == doctest::Approx(0.75 * 3.14159265358979));
    CHECK(c.spec.w.kind == BoundaryMark::Kind::point);
    const RunConfig p = make_config({{"shape", "polygon"}, {"vertices", "0,0; 2,0; 2,1; 0,1"}, {"delta", "0.1"}});
    CHECK(std::get<Polygon>(p.spec.shape).vertices.size() == 4);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(make_config({{"samples", "0"}}), Error);
    CHECK_THROWS_AS(make_config({{"deltas", "1/16,1/8"}}), Error);
    CHECK_THROWS_AS(make_config({{"deltas", "1/8,1/8"}}), Error);
    CHECK_THROWS_AS(make_config({{"radius", "abc"}}), Error);
    CHECK_THROWS_AS(make_config({{"shape", "square"}}), Error);
    CHECK_THROWS_AS(make_config({{"size_bound", "40"}}), Error);
    try {
        make_config({{"samples", "0"}});
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::invalid_argument);
    }
}

TEST_CASE("config hash and provenance") {
    const RunConfig a = make_config({{"samples", "100"}, {"out", "x"}, {"workers", "3"}});
    const RunConfig b = make_config({{"samples", "100"}, {"out", "y"}});
    const RunConfig c = make_config({{"samples", "101"}});
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a) != config_hash(c));
    CHECK(config_hash(a).size() == 16);
    CHECK(provenance_line(a, 0.125, 100) == "# config=" + config_hash(a) + " seed=1 delta=0.125 samples=100");
}

TEST_CASE("within gate") {
    CHECK(within(0.3, 0.1, 4));
    CHECK_FALSE(within(0.5, 0.1, 4));
    CHECK(within(0.0, 0.0, 4));
    CHECK_FALSE(within(1e-12, 0.0, 4));
}

TEST_CASE("probe sets") {
    const auto g = grid_probes({0.0, 0.0}, 0.7, 0.2);
    CHECK(g.size() == 37);
    for (Complex p : g) CHECK(std::abs(p) <= 0.7 + 1e-12);
    DomainSpec s;
    s.delta = 1.0 / 16;
    const DiscreteDomain dom = discretize(s);
    const BoundaryProbes bp = boundary_probes(dom, s);
    CHECK(bp.u.size() == 5);
    for (VertexIndex v : bp.u) CHECK(dom.position(v).imag() > 0.3);
    for (VertexIndex v : bp.d) CHECK(dom.position(v).imag() < -0.3);
}

TEST_CASE("field study output is deterministic and worker independent") {
    const std::string d1 = temp_dir("field1"), d2 = temp_dir("field2");
    const StudyResult a = cmd_field(make_config({{"delta", "1/8"}, {"samples", "300"}, {"out", d1}, {"workers", "1"}}));
    const StudyResult b = cmd_field(make_config({{"delta", "1/8"}, {"samples", "300"}, {"out", d2}, {"workers", "3"}}));
    const std::string x = slurp(d1 + "/field.csv"), y = slurp(d2 + "/field.csv");
    CHECK(x == y);
    std::istringstream is(x);
    std::string line;
    std::getline(is, line);
    CHECK(line.rfind("# config=", 0) == 0);
    std::getline(is, line);
    CHECK(line == "vx,vy,n,Hl,Hr,Hu,Hd,HRe,HIm,seRe,seIm");
    int rows = 0;
    while (std::getline(is, line)) {
        ++rows;
        CHECK(line.find(",300,") != std::string::npos);
    }
    DomainSpec s;
    s.delta = 0.125;
    CHECK(rows == discretize(s).vertex_count());
    CHECK(a.files.size() == 2);
}

TEST_CASE("formula study") {
    const StudyResult r = cmd_formulas(make_config({{"out", temp_dir("formulas")}}));
    CHECK(r.all_pass());
    CHECK(r.verdicts.size() == 3);
}

TEST_CASE("oracle study") {
    const StudyResult r = run_study("oracle", make_config({{"radius", "4"}, {"delta", "1"}, {"l", "3.3"}, {"r", "0.2"},
                                                            {"w", "1.5"}, {"out", temp_dir("oracle")}}));
    REQUIRE(r.verdicts.size() == 5);
    CHECK(r.verdicts[0].pass);
    CHECK(r.verdicts[1].pass);
    CHECK(r.verdicts[2].pass);
    CHECK_FALSE(r.verdicts[3].pass);
    CHECK(r.verdicts[4].pass);
    const std::string json = slurp(r.files.front());
    CHECK(json.rfind("# config=", 0) == 0);
    CHECK(json.find("/2^13") != std::string::npos);
}

TEST_CASE("weighted cluster count") {
    DomainSpec s;
    s.delta = 1.0 / 8;
    const DiscreteDomain dom = discretize(s);
    std::array<VertexIndex, 4> marks;
    for (int k = 0; k < 4; ++k) marks[k] = dom.nearest_boundary_vertex(std::polar(1.0, 0.785398 + k * 1.570796));
    const ClusterCountResult r = cluster_count(dom, marks, 1, 2000, 2);
    CHECK(r.samples == 2000);
    CHECK(r.mean > 0.0);
    CHECK(r.mean < 2.0);
    std::swap(marks[1], marks[2]);
    CHECK_THROWS_AS(cluster_count(dom, marks, 1, 10, 1), Error);
}

TEST_CASE("unknown study") { CHECK_THROWS_AS(run_study("nope", make_config({})), Error); }
