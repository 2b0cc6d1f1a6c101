#pragma once

#include <cstdint>
#include <vector>

#include "hexperc/core/lattice.hpp"
#include "hexperc/core/percolation.hpp"

namespace hexperc {

enum class Side { left, right };

struct BoundaryTrace {
    std::vector<FaceIndex> faces;  // from the u end to the d end
    Side side = Side::left;
    int cluster = kNone;
    int entry_side = -1;  // side of the first face lying on u
    int exit_side = -1;   // side of the last face lying on d
};

// Crossing white clusters ordered by their first contact with u, walking u
// from l toward r.
std::vector<int> crossing_clusters(const DiscreteDomain& dom, const ClusterLabels& labels);

// Side-extremal simple u-to-d path of a crossing cluster: wall-following walk
// with the l-side (or r-side) region kept on the outer hand, from the u edge
// nearest the mark to the first d edge it meets, then loop-erased.
BoundaryTrace trace_boundary(const DiscreteDomain& dom, const ClusterLabels& labels, int cluster, Side side);

// k(face) = number of traces with the face on their r side. Each trace is cut
// along the curve through its face centers, so faces of the i-th trace
// (0-based, ordered from l) get k = i.
struct RegionIndex {
    Side side = Side::left;
    std::vector<int> face_k;
    std::vector<std::uint8_t> on_trace;
    int traces = 0;
};

RegionIndex region_index(const DiscreteDomain& dom, const std::vector<BoundaryTrace>& traces);
int vertex_k(const DiscreteDomain& dom, const RegionIndex& region, VertexIndex z);
// k(z) - k(w).
int n_count(const DiscreteDomain& dom, const RegionIndex& region, VertexIndex z);

// Per-configuration values of N^l, N^r, Q^u, Q^d at every vertex.
struct SampleValues {
    std::vector<int> nl;
    std::vector<int> nr;
    std::vector<std::uint8_t> qu;
    std::vector<std::uint8_t> qd;
};

// Work buffers for the Q^u / Q^d evaluation.
struct QScratch {
    std::vector<int> head, next, to, primal, disc, low, estack;
    std::vector<std::uint8_t> blocked;
    struct Frame {
        int node, parent_edge, it;
    };
    std::vector<Frame> frames;
    std::vector<VertexIndex> vstack;
};

class SampleEvaluator {
public:
    explicit SampleEvaluator(const DiscreteDomain& dom) : dom_(&dom) {}
    const SampleValues& evaluate(const Coloring& col);
    const ClusterLabels& labels() const { return white_; }
    const std::vector<BoundaryTrace>& left_traces() const { return left_; }
    const std::vector<BoundaryTrace>& right_traces() const { return right_; }

private:
    void compute_q(bool for_u);

    const DiscreteDomain* dom_;
    ClusterLabels white_;
    std::vector<BoundaryTrace> left_;
    std::vector<BoundaryTrace> right_;
    SampleValues values_;
    QScratch q_;
};

bool event_qu(const DiscreteDomain& dom, const ClusterLabels& labels, VertexIndex z);
bool event_qd(const DiscreteDomain& dom, const ClusterLabels& labels, VertexIndex z);

// Component reading of Q^u (for_u) or Q^d: with W the white clusters touching
// u (d), true when every face of W-complement reachable from z's incident
// faces stays off u (d) and off the marks l, r, or when z is engulfed by W.
// Disagrees with event_qu / event_qd where a circuit of W encloses z.
void component_q_field(const DiscreteDomain& dom, const ClusterLabels& labels, bool for_u,
                       std::vector<std::uint8_t>& out);

}  // namespace hexperc
