// Command-line front end over the C interface.

#include <CLI11.hpp>

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "hexperc/hexperc.h"

namespace {

struct Handle {
    hexperc_config* cfg = nullptr;
    hexperc_result* res = nullptr;
    ~Handle() {
        hexperc_result_free(res);
        hexperc_config_free(cfg);
    }
};

int report_error(int code) {
    std::fprintf(stderr, "error (%s): %s\n", hexperc_error_name(code), hexperc_last_error());
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Percolation observables on the hexagonal lattice"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string spec, config, delta, out;
    std::map<std::string, std::string> numeric;
    std::vector<std::string> extra;
    app.add_option("--spec", spec, "key=value domain and run file");
    app.add_option("--config", config, "key=value file overriding --spec");
    app.add_option("--delta", delta, "mesh size, or a decreasing comma list for ladder studies");
    for (const char* name : {"samples", "seed", "workers", "compact-radius", "size-bound"}) {
        app.add_option(std::string("--") + name, numeric[name]);
    }
    app.add_option("--out", out, "output directory");
    app.add_option("--set", extra, "extra key=value override, repeatable");

    const std::vector<std::pair<const char*, const char*>> studies = {
        {"field", "per-vertex observables and boundary diagnostics"},
        {"crcheck", "Monte Carlo Cauchy-Riemann residuals"},
        {"oracle", "exact enumeration and identity checks"},
        {"morera", "contour sums along the delta ladder"},
        {"converge", "convergence to the reference map and boundary trends"},
        {"formulas", "crossing and cluster-count formulas"},
        {"clusters", "weighted cluster count against the log-term limit"},
        {"invariance", "disc against its Moebius image"},
    };
    for (const auto& [name, desc] : studies) app.add_subcommand(name, desc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    const std::string study = app.get_subcommands().front()->get_name();

    Handle h;
    int rc = hexperc_config_new(&h.cfg);
    if (rc != HEXPERC_OK) return report_error(rc);
    auto set = [&](const std::string& k, const std::string& v) {
        return hexperc_config_set(h.cfg, k.c_str(), v.c_str());
    };
    // Flags first; files only fill keys that are still unset.
    std::vector<std::pair<std::string, std::string>> flags;
    for (const std::string& kv : extra) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
            return 2;
        }
        flags.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!delta.empty()) flags.emplace_back("delta", delta);
    if (!out.empty()) flags.emplace_back("out", out);
    for (const auto& [name, value] : numeric) {
        if (value.empty()) continue;
        std::string key = name;
        for (char& c : key) c = c == '-' ? '_' : c;
        flags.emplace_back(key, value);
    }
    for (const auto& [k, v] : flags) {
        if ((rc = set(k, v)) != HEXPERC_OK) return report_error(rc);
    }
    for (const std::string& path : {config, spec}) {
        if (path.empty()) continue;
        if ((rc = hexperc_config_load_file(h.cfg, path.c_str())) != HEXPERC_OK) return report_error(rc);
    }

    if ((rc = hexperc_run_study(h.cfg, study.c_str(), &h.res)) != HEXPERC_OK) return report_error(rc);
    const int n = hexperc_result_verdict_count(h.res);
    for (int i = 0; i < n; ++i) {
        const char* name = nullptr;
        const char* detail = nullptr;
        int pass = 0;
        hexperc_result_verdict(h.res, i, &name, &pass, &detail);
        std::printf("%s: %s", name, pass ? "PASS" : "FAIL");
        if (detail && *detail) std::printf("  [%s]", detail);
        std::printf("\n");
    }
    for (int i = 0; i < hexperc_result_file_count(h.res); ++i) std::printf("wrote %s\n", hexperc_result_file(h.res, i));
    return hexperc_result_all_pass(h.res) ? 0 : 1;
}
