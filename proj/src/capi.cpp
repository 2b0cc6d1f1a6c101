#include "hexperc/hexperc.h"

#include <cstring>
#include <map>
#include <string>

#include "hexperc/core/field.hpp"
#include "hexperc/core/reference.hpp"
#include "hexperc/core/studies.hpp"

struct hexperc_config {
    std::map<std::string, std::string> values;
};

struct hexperc_domain {
    hexperc::DiscreteDomain dom;
};

struct hexperc_field {
    hexperc::ObservableField field;
};

struct hexperc_result {
    hexperc::StudyResult result;
};

namespace {

thread_local std::string last_error;

int fail(int code, const std::string& msg) {
    last_error = msg;
    return code;
}

template <class F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const hexperc::Error& e) {
        return fail(static_cast<int>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(HEXPERC_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(HEXPERC_INTERNAL, e.what());
    }
}

#define HEXPERC_REQUIRE(cond, msg) \
    if (!(cond)) return fail(HEXPERC_INVALID_ARGUMENT, msg)

}  // namespace

extern "C" {

const char* hexperc_version(void) { return "0.1.0"; }

const char* hexperc_error_name(int code) {
    return hexperc::error_code_name(static_cast<hexperc::ErrorCode>(code));
}

const char* hexperc_last_error(void) { return last_error.c_str(); }

int hexperc_config_new(hexperc_config** out) {
    HEXPERC_REQUIRE(out, "null output pointer");
    return guarded([&] {
        *out = new hexperc_config;
        return HEXPERC_OK;
    });
}

void hexperc_config_free(hexperc_config* cfg) { delete cfg; }

int hexperc_config_set(hexperc_config* cfg, const char* key, const char* value) {
    HEXPERC_REQUIRE(cfg && key && value, "null argument");
    HEXPERC_REQUIRE(*key, "empty key");
    return guarded([&] {
        cfg->values[key] = value;
        return HEXPERC_OK;
    });
}

int hexperc_config_load_file(hexperc_config* cfg, const char* path) {
    HEXPERC_REQUIRE(cfg && path, "null argument");
    return guarded([&] {
        for (auto& [k, v] : hexperc::read_key_values(path)) cfg->values.emplace(k, v);
        return HEXPERC_OK;
    });
}

int hexperc_config_hash(const hexperc_config* cfg, char* buf, size_t len) {
    HEXPERC_REQUIRE(cfg && buf, "null argument");
    HEXPERC_REQUIRE(len >= 17, "buffer shorter than 17 bytes");
    return guarded([&] {
        const std::string h = hexperc::config_hash(hexperc::make_config(cfg->values));
        std::memcpy(buf, h.c_str(), h.size() + 1);
        return HEXPERC_OK;
    });
}

int hexperc_domain_new(const hexperc_config* cfg, hexperc_domain** out) {
    HEXPERC_REQUIRE(cfg && out, "null argument");
    return guarded([&] {
        const hexperc::RunConfig rc = hexperc::make_config(cfg->values);
        *out = new hexperc_domain{hexperc::discretize(rc.spec)};
        return HEXPERC_OK;
    });
}

void hexperc_domain_free(hexperc_domain* dom) { delete dom; }

int hexperc_domain_face_count(const hexperc_domain* dom) { return dom ? dom->dom.face_count() : -1; }

int hexperc_domain_vertex_count(const hexperc_domain* dom) { return dom ? dom->dom.vertex_count() : -1; }

int hexperc_domain_vertex_position(const hexperc_domain* dom, int vertex, double* x, double* y) {
    HEXPERC_REQUIRE(dom && x && y, "null argument");
    HEXPERC_REQUIRE(vertex >= 0 && vertex < dom->dom.vertex_count(), "vertex index out of range");
    const hexperc::Complex p = dom->dom.position(vertex);
    *x = p.real();
    *y = p.imag();
    return HEXPERC_OK;
}

int hexperc_domain_marks(const hexperc_domain* dom, int* l, int* r, int* w) {
    HEXPERC_REQUIRE(dom, "null domain");
    if (l) *l = dom->dom.l();
    if (r) *r = dom->dom.r();
    if (w) *w = dom->dom.w();
    return HEXPERC_OK;
}

int hexperc_field_sample(const hexperc_domain* dom, uint64_t seed, int64_t samples, int workers,
                         hexperc_field** out) {
    HEXPERC_REQUIRE(dom && out, "null argument");
    HEXPERC_REQUIRE(samples >= 1, "sample count must be at least 1");
    HEXPERC_REQUIRE(workers >= 1, "worker count must be at least 1");
    return guarded([&] {
        *out = new hexperc_field{
            hexperc::accumulate_field(dom->dom, seed, 0, static_cast<std::uint64_t>(samples), workers)};
        return HEXPERC_OK;
    });
}

void hexperc_field_free(hexperc_field* field) { delete field; }

int64_t hexperc_field_samples(const hexperc_field* field) { return field ? field->field.samples() : -1; }

int hexperc_field_value(const hexperc_field* field, int vertex, double out[4]) {
    HEXPERC_REQUIRE(field && out, "null argument");
    HEXPERC_REQUIRE(vertex >= 0 && vertex < field->field.vertex_count(), "vertex index out of range");
    const auto& f = field->field;
    out[0] = f.hl(vertex);
    out[1] = f.hr(vertex);
    out[2] = f.hu(vertex);
    out[3] = f.hd(vertex);
    return HEXPERC_OK;
}

int hexperc_field_h(const hexperc_field* field, int vertex, double* re, double* im, double* se_re, double* se_im) {
    HEXPERC_REQUIRE(field, "null field");
    HEXPERC_REQUIRE(vertex >= 0 && vertex < field->field.vertex_count(), "vertex index out of range");
    const hexperc::Complex h = field->field.h(vertex), se = field->field.h_se(vertex);
    if (re) *re = h.real();
    if (im) *im = h.imag();
    if (se_re) *se_re = se.real();
    if (se_im) *se_im = se.imag();
    return HEXPERC_OK;
}

int hexperc_run_study(const hexperc_config* cfg, const char* study, hexperc_result** out) {
    HEXPERC_REQUIRE(cfg && study && out, "null argument");
    return guarded([&] {
        const hexperc::RunConfig rc = hexperc::make_config(cfg->values);
        *out = new hexperc_result{hexperc::run_study(study, rc)};
        return HEXPERC_OK;
    });
}

void hexperc_result_free(hexperc_result* res) { delete res; }

int hexperc_result_all_pass(const hexperc_result* res) { return res && res->result.all_pass() ? 1 : 0; }

int hexperc_result_verdict_count(const hexperc_result* res) {
    return res ? static_cast<int>(res->result.verdicts.size()) : -1;
}

int hexperc_result_verdict(const hexperc_result* res, int index, const char** name, int* pass,
                           const char** detail) {
    HEXPERC_REQUIRE(res, "null result");
    HEXPERC_REQUIRE(index >= 0 && index < static_cast<int>(res->result.verdicts.size()), "verdict index out of range");
    const hexperc::Verdict& v = res->result.verdicts[index];
    if (name) *name = v.name.c_str();
    if (pass) *pass = v.pass ? 1 : 0;
    if (detail) *detail = v.detail.c_str();
    return HEXPERC_OK;
}

int hexperc_result_file_count(const hexperc_result* res) {
    return res ? static_cast<int>(res->result.files.size()) : -1;
}

const char* hexperc_result_file(const hexperc_result* res, int index) {
    if (!res || index < 0 || index >= static_cast<int>(res->result.files.size())) return nullptr;
    return res->result.files[index].c_str();
}

int hexperc_hyp2f1(double a, double b, double c, double x, double* out) {
    HEXPERC_REQUIRE(out, "null output pointer");
    return guarded([&] {
        *out = hexperc::hyp2f1(a, b, c, x);
        return HEXPERC_OK;
    });
}

int hexperc_cardy(double lambda, double* out) {
    HEXPERC_REQUIRE(out, "null output pointer");
    return guarded([&] {
        *out = hexperc::cardy(lambda);
        return HEXPERC_OK;
    });
}

}  // extern "C"
