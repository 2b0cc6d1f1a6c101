// Runs the ten acceptance criteria and prints one PASS/FAIL line per criterion.
// Usage: hexperc_acceptance [out_dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "hexperc/core/studies.hpp"

using namespace hexperc;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string out_dir = "acceptance_out";
int workers = 1;

RunConfig config(std::map<std::string, std::string> kv, const std::string& sub) {
    kv["out"] = out_dir + "/" + sub;
    kv["workers"] = std::to_string(workers);
    std::filesystem::create_directories(kv["out"]);
    return make_config(kv);
}

// Small domains for enumeration: a disc, an off-center disc and an L-shaped polygon.
std::vector<std::pair<std::string, std::map<std::string, std::string>>> exact_domains() {
    return {
        {"disc", {{"radius", "4"}, {"delta", "1"}, {"l", "3.3"}, {"r", "0.2"}, {"w", "1.5"}}},
        {"offset-disc", {{"center", "0.3,0"}, {"radius", "4.3"}, {"delta", "1"}, {"l", "3.3"}, {"r", "0.2"}, {"w", "1.5"}}},
        {"L-polygon",
         {{"shape", "polygon"},
          {"vertices", "-5,-5; 5,-5; 5,0.5; 0.5,0.5; 0.5,5; -5,5"},
          {"delta", "1"},
          {"l", "0.55"},
          {"r", "0.05"},
          {"w", "0.3"}}},
    };
}

std::vector<std::pair<std::string, StudyResult>> oracle_runs;

const std::vector<std::pair<std::string, StudyResult>>& oracles() {
    if (oracle_runs.empty()) {
        for (const auto& [name, kv] : exact_domains()) oracle_runs.emplace_back(name, cmd_oracle(config(kv, "oracle_" + name)));
    }
    return oracle_runs;
}

Outcome oracle_verdict(int index) {
    Outcome o{true, ""};
    for (const auto& [name, r] : oracles()) {
        const Verdict& v = r.verdicts[index];
        o.pass &= v.pass;
        o.detail += (o.detail.empty() ? "" : "; ") + name + " " + v.detail;
    }
    return o;
}

// Disc ladder at 10^5 samples, with the contour sums.
const std::map<std::string, std::string> kLadder = {
    {"delta", "1/8,1/16,1/32,1/64"}, {"samples", "100000"}, {"seed", "1"}};

std::vector<LadderStep> ladder_steps;
const std::vector<LadderStep>& ladder() {
    if (ladder_steps.empty()) ladder_steps = run_ladder(config(kLadder, "ladder"), true);
    return ladder_steps;
}

Outcome join(const StudyResult& r, std::size_t first, std::size_t last) {
    Outcome o{true, ""};
    for (std::size_t i = first; i < last && i < r.verdicts.size(); ++i) {
        o.pass &= r.verdicts[i].pass;
        o.detail += (o.detail.empty() ? "" : "; ") + r.verdicts[i].name + ": " + r.verdicts[i].detail;
    }
    return o;
}

Outcome criterion1() { return oracle_verdict(0); }
Outcome criterion2() {
    Outcome a = oracle_verdict(1), b = oracle_verdict(2);
    return {a.pass && b.pass, a.detail + "; negation symmetry " + (b.pass ? "holds" : "fails")};
}

Outcome criterion3() {
    Outcome exact = oracle_verdict(3);
    const RunConfig cfg = config(kLadder, "ladder");
    const LadderStep& s = ladder().back();
    const Verdict mc = hl_hr_verdict(cfg, s.dom, s.field);
    return {exact.pass && mc.pass, "exact: " + exact.detail + "; delta 1/64: " + mc.detail};
}

StudyResult converge_result;
const StudyResult& converge() {
    if (converge_result.verdicts.empty()) {
        const RunConfig cfg = config(kLadder, "ladder");
        converge_result = converge_study(cfg, ladder());
    }
    return converge_result;
}

Outcome criterion4() { return join(converge(), 2, 5); }
Outcome criterion5() { return join(converge(), 0, 2); }
Outcome criterion6() { return join(morera_study(config(kLadder, "ladder"), ladder()), 0, 2); }

Outcome criterion7() {
    const StudyResult r = cmd_clusters(config({{"delta", "1/64"}, {"samples", "100000"}, {"seed", "1"}}, "clusters"));
    return join(r, 0, r.verdicts.size());
}

Outcome criterion8() {
    const StudyResult r = cmd_invariance(config({{"delta", "1/32"}, {"samples", "100000"}, {"seed", "1"}}, "invariance"));
    return join(r, 0, r.verdicts.size());
}

// Monte Carlo against enumeration for the four fields and every derivative event.
struct BridgeAcc {
    const std::vector<ExactEdge>* edges = nullptr;
    ObservableField field;
    std::vector<std::array<std::int64_t, kSlotCount>> hits;
    void add(const DiscreteDomain& dom, const Coloring& col, SampleEvaluator& eval) {
        const SampleValues& v = eval.evaluate(col);
        field.add(v);
        static constexpr Tag tags[4] = {Tag::l, Tag::r, Tag::u, Tag::d};
        for (std::size_t j = 0; j < edges->size(); ++j) {
            for (int k = 0; k < kSlotCount; ++k) {
                hits[j][k] += DerivativeEvent{(*edges)[j].e, tags[k / 2], k % 2 ? -1 : +1}.holds(dom, v);
            }
        }
    }
    void merge(const BridgeAcc& o) {
        field.merge(o.field);
        for (std::size_t j = 0; j < hits.size(); ++j) {
            for (int k = 0; k < kSlotCount; ++k) hits[j][k] += o.hits[j][k];
        }
    }
};

Outcome criterion9() {
    const RunConfig cfg = config({{"radius", "4"}, {"delta", "1"}, {"l", "3.3"}, {"r", "0.2"}, {"w", "1.5"},
                                  {"samples", "100000"}, {"seed", "1"}},
                                 "bridge");
    const DiscreteDomain dom = discretize(cfg.spec);
    EnumerateOptions opt;
    opt.expansions = false;
    const ExactReport rep = enumerate(dom, opt);
    const BridgeAcc acc = run_samples<BridgeAcc>(dom, cfg.seed, 0, cfg.samples, cfg.workers, [&] {
        BridgeAcc a;
        a.edges = &rep.edges;
        a.field = ObservableField(dom.vertex_count());
        a.hits.assign(rep.edges.size(), {});
        return a;
    });
    const double n = static_cast<double>(cfg.samples);
    int checks = 0, bad = 0;
    double worst = 0.0;
    auto check = [&](double diff, double se) {
        ++checks;
        if (!within(diff, se, cfg.threshold)) ++bad;
        if (se > 0.0) worst = std::max(worst, std::abs(diff) / se);
    };
    const ObservableField& f = acc.field;
    for (VertexIndex z = 0; z < dom.vertex_count(); ++z) {
        const ExactVertex& x = rep.vertices[z];
        check(f.hl(z) - x.hl.value(), f.hl_se(z));
        check(f.hr(z) - x.hr.value(), f.hr_se(z));
        check(f.hu(z) - x.hu.value(), f.hu_se(z));
        check(f.hd(z) - x.hd.value(), f.hd_se(z));
    }
    // Indicator events: binomial standard error at the exact probability.
    for (std::size_t j = 0; j < rep.edges.size(); ++j) {
        for (int k = 0; k < kSlotCount; ++k) {
            const double p = rep.edges[j].events[k].value();
            check(acc.hits[j][k] / n - p, std::sqrt(p * (1 - p) / n));
        }
    }
    const std::string path = cfg.out_dir + "/bridge.txt";
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (fp) {
        std::fprintf(fp, "%s\nchecks %d beyond %d max |z| %.3f\n",
                     provenance_line(cfg, cfg.spec.delta, cfg.samples).c_str(), checks, bad, worst);
        std::fclose(fp);
    }
    return {bad == 0, "F=" + std::to_string(rep.faces) + ", " + std::to_string(checks) + " comparisons, " +
                          std::to_string(bad) + " beyond 4 SE, max |z| " + std::to_string(worst).substr(0, 5)};
}

Outcome criterion10() {
    const StudyResult r = cmd_formulas(config({}, "formulas"));
    return join(r, 0, r.verdicts.size());
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) out_dir = argv[1];
    workers = std::max(1u, std::thread::hardware_concurrency());
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"exact CR residual", criterion1},
        {"exact expansion chains", criterion2},
        {"H^l = H^r", criterion3},
        {"disc boundary conditions", criterion4},
        {"convergence on the compact", criterion5},
        {"discrete Morera sums", criterion6},
        {"cluster count log term", criterion7},
        {"conformal invariance", criterion8},
        {"Monte Carlo against enumeration", criterion9},
        {"special functions", criterion10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::printf("criterion %zu %s: %s  [%s] (%.0f s)\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                    o.detail.c_str(), sec);
        std::fflush(stdout);
    }
    std::printf("%zu of %zu criteria pass\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
