#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hexperc/core/lattice.hpp"
#include "hexperc/core/observables.hpp"
#include "hexperc/core/percolation.hpp"

namespace hexperc {

inline constexpr int kDefaultSizeBound = 20;
inline constexpr int kMaxSizeBound = 24;

// Exact probability num / 2^bits.
struct ExactProb {
    std::int64_t num = 0;
    int bits = 0;

    double value() const;
    std::string str() const;  // "num/2^bits"
    ExactProb operator+(const ExactProb& o) const { return {num + o.num, bits}; }
    ExactProb operator-(const ExactProb& o) const { return {num - o.num, bits}; }
    bool operator==(const ExactProb& o) const = default;
};

// One bit per subset of the faces (bit i of the index is face i).
class SubsetTable {
public:
    SubsetTable() = default;
    explicit SubsetTable(int bits);

    int bits() const { return bits_; }
    bool test(std::uint64_t s) const { return (w_[s >> 6] >> (s & 63)) & 1u; }
    void set(std::uint64_t s) { w_[s >> 6] |= std::uint64_t{1} << (s & 63); }
    // T[S] |= T[S'] for all S' subset of S.
    void close_upward();
    // Table indexed by complement: out[S] = this[~S].
    SubsetTable complemented_index() const;
    SubsetTable& operator&=(const SubsetTable& o);
    SubsetTable& operator|=(const SubsetTable& o);
    std::int64_t count() const;

private:
    int bits_ = 0;
    std::vector<std::uint64_t> w_;
};

enum class Arc { u, d };

// Minimal witnesses (as face masks) for "f is joined to the arc by a path
// inside the mask": simple paths from f that stop at their first face touching
// the arc.
std::vector<std::uint64_t> arc_witnesses(const DiscreteDomain& dom, FaceIndex f, Arc arc);

// Requirement on one face of a triple event: its color and which arcs it must
// be joined to by paths of that color.
struct FaceReq {
    Color color = Color::white;
    bool u = false;
    bool d = false;
};

// Event X_a o Y_b o Z_c on the faces (I, L, R): disjoint witnesses of each.
struct TripleEvent {
    FaceReq i, l, r;
    std::string name() const;
};

// Faces around the tail x of e = <x, y>: L on the left of e (between e and
// tau e), R on the right (between tau^2 e and e), I opposite e (between tau e
// and tau^2 e); T is the third face at y.
struct TripleFaces {
    FaceIndex i = kNone, l = kNone, r = kNone, t = kNone;
};
TripleFaces triple_faces(const DiscreteDomain& dom, OrientedEdge e);

class WitnessCache {
public:
    explicit WitnessCache(const DiscreteDomain& dom) : dom_(&dom) {}
    const std::vector<std::uint64_t>& get(FaceIndex f, bool u, bool d);
    const DiscreteDomain& domain() const { return *dom_; }

private:
    const DiscreteDomain* dom_;
    std::map<std::tuple<FaceIndex, bool, bool>, std::vector<std::uint64_t>> cache_;
};

// Indicator table over white sets.
SubsetTable triple_event_table(WitnessCache& cache, const TripleFaces& faces, const TripleEvent& ev);

// Literal Q^u (for_u) or Q^d: some simple white path inside W_u (the white
// clusters touching u) runs from a side on d to another side on d and leaves
// z in the pocket it cuts off, the region bounded by the path (through face
// centers and side midpoints) and the d-subarc between its end sides that
// avoids l. Vertices on that subarc are inside. Tables are indexed by W_u.
class DefinitionalQ {
public:
    DefinitionalQ(const DiscreteDomain& dom, bool for_u);
    bool holds(VertexIndex z, std::uint64_t wall) const { return tables_[z].test(wall); }
    std::int64_t path_count() const { return paths_; }

private:
    std::vector<SubsetTable> tables_;
    std::int64_t paths_ = 0;
};

// Mask of the white faces in clusters touching u (for_u) or d.
std::uint64_t wall_mask(const ClusterLabels& labels, bool for_u);

// Closed-hexagon separation of vertex z from vertex m by the face set mask.
bool separates(const DiscreteDomain& dom, std::uint64_t mask, VertexIndex z, VertexIndex m);


// ---------------------------------------------------------------------------
// Six-term expansions

// Events of the displayed chains at one edge, in the order of
// expansion_event_names(): the split of the two outer derivative events
// (Br, Cr, Dr, Bl, Cl, Dl), the six flipped forms (A..F), and the three-way
// splits Y, Z, W of the four Q events (u1, d1 for tau e; u2, d2 for tau^2 e).
const std::vector<std::string>& expansion_event_names();
const std::vector<TripleEvent>& expansion_events();
// Colour-swapped event: every face requirement with the other colour.
TripleEvent negated(const TripleEvent& ev);

class ExpansionTables {
public:
    // Throws too_large above size_bound faces, outside_domain for edges
    // without the three faces I, L, R.
    ExpansionTables(WitnessCache& cache, OrientedEdge e, int size_bound = kDefaultSizeBound);
    OrientedEdge edge() const { return e_; }
    const SubsetTable& table(int k) const { return tables_[k]; }
    std::int64_t count(int k) const { return counts_[k]; }
    // Indicator of every expansion event on a coloring.
    std::vector<std::uint8_t> indicators(const Coloring& col) const;

private:
    OrientedEdge e_;
    std::vector<SubsetTable> tables_;
    std::vector<std::int64_t> counts_;
};

// Indicator vector at e for one coloring (builds the tables).
std::vector<std::uint8_t> six_term_expansions(const DiscreteDomain& dom, OrientedEdge e, const Coloring& col,
                                              int size_bound = kDefaultSizeBound);

// ---------------------------------------------------------------------------
// Full enumeration

// Order of the eight derivative events per oriented edge.
enum DerivativeSlot { kLPlus, kLMinus, kRPlus, kRMinus, kUPlus, kUMinus, kDPlus, kDMinus, kSlotCount };
const char* derivative_slot_name(int slot);

struct ChainCheck {
    std::string name;
    ExactProb lhs, rhs;
    bool holds = false;
    bool printed = false;  // the display exactly as printed, where it differs
};

struct ExactEdge {
    OrientedEdge e;
    std::array<ExactProb, kSlotCount> events;
    bool admissible = false;
    // For admissible edges.
    std::array<ExactProb, 6> cr_terms;  // lp, rm, qu_t, qd_t, qu_tt, qd_tt
    ExactProb cr_residual;              // numerator may be any integer
    std::vector<ChainCheck> chains;
    // Per-coloring agreement of outer events with their expansion (counts of
    // disagreeing colorings).
    std::int64_t pointwise_mismatches = 0;
};

struct ExactVertex {
    ExactProb hl, hr, hu, hd;  // numerators are sums of integer counts
    std::int64_t q_reading_disagreements_u = 0;
    std::int64_t q_reading_disagreements_d = 0;
};

struct EnumerateOptions {
    int size_bound = kDefaultSizeBound;
    int workers = 1;
    bool expansions = true;  // six-term chains at admissible edges
};

struct ExactReport {
    int faces = 0;
    std::vector<ExactVertex> vertices;
    std::vector<ExactEdge> edges;
    // Verdicts.
    bool hl_equals_hr = false;
    int hl_hr_mismatched_vertices = 0;
    bool cr_all_zero = false;
    int admissible_edges = 0;
    bool chains_hold = false;          // every corrected chain
    bool printed_chains_hold = false;  // the Q displays exactly as printed
    std::int64_t max_jump = 0;         // max |N(y) - N(x)| over edges and colorings
    std::int64_t q_reading_disagreements = 0;
    std::int64_t pointwise_mismatches = 0;
    bool negation_symmetric = false;  // P[A] = P[negated A] for every expansion event
};

ExactReport enumerate(const DiscreteDomain& dom, const EnumerateOptions& opt = {});

// Structured text: a JSON object with every probability written "num/2^F".
void write_exact_report(std::ostream& os, const DiscreteDomain& dom, const ExactReport& rep,
                        const std::string& provenance);

// ---------------------------------------------------------------------------
// Definitional checks

enum class Claim { left_boundary, separation, qu, qd };

// Brute-force checks straight from the definitions, for one coloring:
//   left_boundary: every traced left and right boundary is a simple white
//     cluster path from u to d that no simple u-to-d path of the cluster
//     separates from l (resp. r); paths containing every face at the mark
//     are skipped, since they separate everything trivially;
//   separation: at every vertex off the trace faces, the region index equals
//     the number of traces separating it from l (resp. r);
//   qu, qd: the fast criterion equals DefinitionalQ at every vertex.
class DefinitionalOracle {
public:
    explicit DefinitionalOracle(const DiscreteDomain& dom, int size_bound = kDefaultSizeBound);
    bool check(const Coloring& col, Claim claim);

private:
    const DiscreteDomain* dom_;
    DefinitionalQ qu_, qd_;
};

bool definitional_check(const DiscreteDomain& dom, const Coloring& col, Claim claim,
                        int size_bound = kDefaultSizeBound);

}  // namespace hexperc
