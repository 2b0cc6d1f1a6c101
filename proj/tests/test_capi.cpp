#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "hexperc/hexperc.h"

TEST_CASE("version and error names") {
    CHECK(std::strlen(hexperc_version()) > 0);
    CHECK(std::string(hexperc_error_name(HEXPERC_OK)) == "Ok");
    CHECK(std::string(hexperc_error_name(HEXPERC_INVALID_ARGUMENT)) == "InvalidArgument");
}

TEST_CASE("domain and field round trip") {
    hexperc_config* cfg = nullptr;
    REQUIRE(hexperc_config_new(&cfg) == HEXPERC_OK);
    CHECK(hexperc_config_set(cfg, "delta", "1/8") == HEXPERC_OK);
    char hash[17];
    CHECK(hexperc_config_hash(cfg, hash, sizeof hash) == HEXPERC_OK);
    CHECK(std::strlen(hash) == 16);

    hexperc_domain* dom = nullptr;
    REQUIRE(hexperc_domain_new(cfg, &dom) == HEXPERC_OK);
    const int nv = hexperc_domain_vertex_count(dom);
    CHECK(nv > 0);
    CHECK(hexperc_domain_face_count(dom) > 0);
    int l = -1, r = -1, w = -1;
    CHECK(hexperc_domain_marks(dom, &l, &r, &w) == HEXPERC_OK);
    double x = 0, y = 0;
    CHECK(hexperc_domain_vertex_position(dom, l, &x, &y) == HEXPERC_OK);
    CHECK(x < -0.8);
    CHECK(hexperc_domain_vertex_position(dom, nv, &x, &y) == HEXPERC_INVALID_ARGUMENT);

    hexperc_field* f = nullptr;
    REQUIRE(hexperc_field_sample(dom, 1, 200, 2, &f) == HEXPERC_OK);
    CHECK(hexperc_field_samples(f) == 200);
    double v[4];
    CHECK(hexperc_field_value(f, w, v) == HEXPERC_OK);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == 0.0);
    double re = 0, im = 0, sre = -1, sim = -1;
    CHECK(hexperc_field_h(f, 0, &re, &im, &sre, &sim) == HEXPERC_OK);
    CHECK(hexperc_field_value(f, 0, v) == HEXPERC_OK);
    CHECK(re == doctest::Approx(v[0] + v[1]));
    CHECK(sre >= 0.0);
    hexperc_field_free(f);
    hexperc_domain_free(dom);
    hexperc_config_free(cfg);
}

TEST_CASE("errors are reported through codes and the last message") {
    hexperc_config* cfg = nullptr;
    REQUIRE(hexperc_config_new(&cfg) == HEXPERC_OK);
    CHECK(hexperc_config_set(cfg, "samples", "0") == HEXPERC_OK);
    hexperc_result* res = nullptr;
    CHECK(hexperc_run_study(cfg, "field", &res) == HEXPERC_INVALID_ARGUMENT);
    CHECK(res == nullptr);
    CHECK(std::strlen(hexperc_last_error()) > 0);
    CHECK(hexperc_config_set(cfg, "samples", "10") == HEXPERC_OK);
    CHECK(hexperc_run_study(cfg, "nope", &res) == HEXPERC_INVALID_ARGUMENT);
    CHECK(hexperc_config_load_file(cfg, "/nonexistent/file") == HEXPERC_IO_ERROR);
    CHECK(hexperc_config_set(nullptr, "a", "b") == HEXPERC_INVALID_ARGUMENT);
    hexperc_config_free(cfg);
    hexperc_config_free(nullptr);
    hexperc_result_free(nullptr);
}

TEST_CASE("study results") {
    hexperc_config* cfg = nullptr;
    REQUIRE(hexperc_config_new(&cfg) == HEXPERC_OK);
    CHECK(hexperc_config_set(cfg, "out", "hexperc_capi_out") == HEXPERC_OK);
    hexperc_result* res = nullptr;
    REQUIRE(hexperc_run_study(cfg, "formulas", &res) == HEXPERC_OK);
    CHECK(hexperc_result_all_pass(res) == 1);
    CHECK(hexperc_result_verdict_count(res) == 3);
    const char* name = nullptr;
    int pass = 0;
    CHECK(hexperc_result_verdict(res, 0, &name, &pass, nullptr) == HEXPERC_OK);
    CHECK(pass == 1);
    CHECK(std::string(name).find("hyp2f1") != std::string::npos);
    CHECK(hexperc_result_file_count(res) == 1);
    CHECK(hexperc_result_file(res, 5) == nullptr);
    hexperc_result_free(res);
    hexperc_config_free(cfg);
}

TEST_CASE("special functions") {
    double v = 0;
    CHECK(hexperc_hyp2f1(1, 1, 2, 0.5, &v) == HEXPERC_OK);
    CHECK(std::abs(v - 2 * std::log(2.0)) < 1e-10);
    CHECK(hexperc_cardy(0.5, &v) == HEXPERC_OK);
    CHECK(std::abs(v - 0.5) < 1e-8);
}
