#pragma once

// Run configuration and the end-to-end studies behind the CLI subcommands.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hexperc/core/analysis.hpp"
#include "hexperc/core/exact.hpp"
#include "hexperc/core/field.hpp"
#include "hexperc/core/lattice.hpp"

namespace hexperc {

// Flat key=value text. Blank lines and lines starting with '#' are skipped;
// later keys override earlier ones.
std::map<std::string, std::string> parse_key_values(const std::string& text);
std::map<std::string, std::string> read_key_values(const std::string& path);

// Domain keys:
//   shape     disc | polygon
//   center    x,y                  (disc, default 0,0)
//   radius    r                    (disc, default 1)
//   vertices  x1,y1; x2,y2; ...    (polygon, counterclockwise)
//   l, r, w   boundary parameter (radians for a disc, perimeter fraction for
//             a polygon) or "point:x,y"
//   delta     mesh size
DomainSpec domain_spec_from(const std::map<std::string, std::string>& kv);

struct RunConfig {
    std::map<std::string, std::string> values;  // every effective key, for hashing
    DomainSpec spec;
    std::vector<double> deltas;  // convergence ladder, strictly decreasing
    std::int64_t samples = 10000;
    std::uint64_t seed = 1;
    int workers = 1;
    double compact_radius = 0.7;
    double contour_radius = 0.5;
    double threshold = 4.0;  // standard errors
    int size_bound = kDefaultSizeBound;
    std::string out_dir = ".";
    double probe_spacing = 0.2;  // interior probe grid, in units of the disc radius
    double mobius_a = 0.3;       // invariance: z -> (z - a) / (1 - a z) on the unit disc
    std::array<double, 4> quad{0.78539816339744831, 2.3561944901923449, 3.9269908169872414,
                               5.4977871437821382};  // clusters: a1..a4 boundary parameters
};

// Recognised run keys besides the domain keys: deltas (comma list), samples,
// seed, workers, compact_radius, contour_radius, threshold, size_bound, out,
// probe_spacing, mobius_a, quad (four boundary parameters). Numbers may be
// written as fractions ("1/64") or with a "pi" suffix ("0.25pi"). A comma
// list under "delta" sets the ladder and leaves its last value as delta.
// Throws parse_error or invalid_argument.
RunConfig make_config(const std::map<std::string, std::string>& kv);

// 64-bit FNV-1a of the sorted key=value lines, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);
// "# config=<hash> seed=<seed> delta=<delta> samples=<n>"
std::string provenance_line(const RunConfig& cfg, double delta, std::int64_t samples);

struct Verdict {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct StudyResult {
    std::vector<Verdict> verdicts;
    std::vector<std::string> files;
    bool all_pass() const;
};

// Standard-error gate: |diff| <= k se, or diff == 0 exactly when se == 0.
bool within(double diff, double se, double k);

// Disc boundary probes: boundary vertices nearest the parameters at
// 1/4, 3/8, 1/2, 5/8, 3/4 of the way along each arc.
struct BoundaryProbes {
    std::vector<VertexIndex> u, d;
};
BoundaryProbes boundary_probes(const DiscreteDomain& dom, const DomainSpec& spec);

// Interior probe points: square grid of the given spacing inside the disc
// of radius `radius` about `center`.
std::vector<Complex> grid_probes(Complex center, double radius, double spacing);

// One pass over a delta ladder: the field and the contour sums share samples.
struct LadderStep {
    DomainSpec spec;
    DiscreteDomain dom;
    ObservableField field;
    MoreraAccumulator::Summary morera;
    IdentitySum identity;
    int contour_edges = 0;
};
std::vector<LadderStep> run_ladder(const RunConfig& cfg, bool with_contour);

// Weighted count of white clusters joining arc a1a2 to arc a3a4: weight 2,
// minus one for each of the arcs a4a1, a2a3 the cluster also touches.
struct ClusterCountResult {
    double mean = 0.0, se = 0.0;
    std::int64_t samples = 0;
    double lambda = 0.0;
};
ClusterCountResult cluster_count(const DiscreteDomain& dom, const std::array<VertexIndex, 4>& marks,
                                 std::uint64_t seed, std::int64_t samples, int workers);

// Subcommands. Each writes its files under cfg.out_dir.
StudyResult cmd_field(const RunConfig& cfg);
StudyResult cmd_crcheck(const RunConfig& cfg);
StudyResult cmd_oracle(const RunConfig& cfg);
StudyResult cmd_morera(const RunConfig& cfg);
StudyResult cmd_converge(const RunConfig& cfg);
StudyResult cmd_formulas(const RunConfig& cfg);
StudyResult cmd_clusters(const RunConfig& cfg);
StudyResult cmd_invariance(const RunConfig& cfg);

// Verdicts on precomputed ladders and fields, shared by the subcommands and
// the acceptance run.
StudyResult morera_study(const RunConfig& cfg, const std::vector<LadderStep>& steps);
StudyResult converge_study(const RunConfig& cfg, const std::vector<LadderStep>& steps);
Verdict hl_hr_verdict(const RunConfig& cfg, const DiscreteDomain& dom, const ObservableField& f);

// Dispatch by subcommand name; throws invalid_argument for unknown names.
StudyResult run_study(const std::string& name, const RunConfig& cfg);

}  // namespace hexperc
