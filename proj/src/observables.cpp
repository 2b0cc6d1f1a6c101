#include "hexperc/core/observables.hpp"

#include <algorithm>

namespace hexperc {

std::vector<int> crossing_clusters(const DiscreteDomain& dom, const ClusterLabels& labels) {
    std::vector<int> out;
    if (labels.color != Color::white) return out;
    const auto& cyc = dom.boundary_cycle();
    const int n = static_cast<int>(cyc.size());
    std::vector<char> seen(labels.count(), 0);
    // u runs counterclockwise from r to l, so walk it backwards from l.
    const int pl = dom.boundary_position(dom.l());
    for (int s = 1; s <= n; ++s) {
        const int i = ((pl - s) % n + n) % n;
        if (!dom.boundary_edge_on_u(i)) break;
        const int c = labels.label[dom.boundary_edge_face(i)];
        if (c != kNone && !seen[c] && labels.crossing(c)) {
            seen[c] = 1;
            out.push_back(c);
        }
    }
    return out;
}

namespace {

int side_towards(const DiscreteDomain& dom, FaceIndex f, FaceIndex g) {
    const auto& nb = dom.face_neighbors(f);
    for (int s = 0; s < 6; ++s) {
        if (nb[s] == g) return s;
    }
    throw Error(ErrorCode::internal, "trace faces not adjacent");
}

int side_of_edge(const DiscreteDomain& dom, FaceIndex f, VertexIndex t, VertexIndex h) {
    const auto& c = dom.face_corners(f);
    for (int s = 0; s < 6; ++s) {
        const VertexIndex a = c[s], b = c[(s + 1) % 6];
        if ((a == t && b == h) || (a == h && b == t)) return s;
    }
    throw Error(ErrorCode::internal, "edge is not a side of the face");
}

}  // namespace

BoundaryTrace trace_boundary(const DiscreteDomain& dom, const ClusterLabels& labels, int cluster, Side side) {
    if (cluster < 0 || cluster >= labels.count() || !labels.crossing(cluster)) {
        throw Error(ErrorCode::invalid_argument, "trace_boundary needs a crossing cluster");
    }
    auto in_k = [&](FaceIndex f) { return f != kNone && labels.label[f] == cluster; };
    const auto& cyc = dom.boundary_cycle();
    const int n = static_cast<int>(cyc.size());
    const bool left = side == Side::left;

    // Boundary edge of the cluster's u-contact nearest l (left) or r (right).
    int start = -1;
    if (left) {
        const int pl = dom.boundary_position(dom.l());
        for (int s = 1; s <= n && start < 0; ++s) {
            const int i = ((pl - s) % n + n) % n;
            if (in_k(dom.boundary_edge_face(i))) start = i;
        }
    } else {
        const int pr = dom.boundary_position(dom.r());
        for (int s = 0; s < n && start < 0; ++s) {
            const int i = (pr + s) % n;
            if (in_k(dom.boundary_edge_face(i))) start = i;
        }
    }
    // Boundary edges run counterclockwise with the domain on their left. The
    // left walk keeps the cluster on its left hand; the right walk on its right.
    VertexIndex tail = cyc[start];
    int dir = -1;
    {
        const VertexIndex head = cyc[(start + 1) % n];
        for (int d = 0; d < 6; ++d) {
            if (dom.neighbor(tail, d) == head) dir = d;
        }
        if (!left) {
            tail = head;
            dir = (dir + 3) % 6;
        }
    }

    std::vector<FaceIndex> walk;
    auto cluster_face = [&](VertexIndex t, int d) {
        return left ? dom.face_at(t, (d + 1) % 6) : dom.face_at(t, (d + 5) % 6);
    };
    // The walk ends on the first boundary edge of d it runs along.
    auto on_d_boundary = [&](VertexIndex t, int d) {
        const VertexIndex h = dom.neighbor(t, d);
        const FaceIndex outer = left ? dom.face_at(t, (d + 5) % 6) : dom.face_at(t, (d + 1) % 6);
        if (outer != kNone) return false;
        const int i = dom.boundary_position(left ? t : h);
        return !dom.boundary_edge_on_u(i);
    };
    walk.push_back(cluster_face(tail, dir));
    const int entry_side = side_of_edge(dom, walk.front(), tail, dom.neighbor(tail, dir));
    const int max_steps = 12 * dom.face_count() + 12;
    for (int step = 0; !on_d_boundary(tail, dir); ++step) {
        if (step > max_steps) throw Error(ErrorCode::internal, "boundary walk did not reach d");
        const VertexIndex head = dom.neighbor(tail, dir);
        const FaceIndex ahead = dom.face_at(head, dir);
        int next;
        if (in_k(ahead)) {
            next = left ? (dir + 5) % 6 : (dir + 1) % 6;
        } else {
            next = left ? (dir + 1) % 6 : (dir + 5) % 6;
        }
        tail = head;
        dir = next;
        const FaceIndex f = cluster_face(tail, dir);
        if (f != walk.back()) walk.push_back(f);
    }

    const int exit_side = side_of_edge(dom, walk.back(), tail, dom.neighbor(tail, dir));

    // Chronological loop erasure.
    std::vector<FaceIndex> path;
    std::vector<int> pos(dom.face_count(), -1);
    for (FaceIndex f : walk) {
        if (pos[f] >= 0) {
            while (path.back() != f) {
                pos[path.back()] = -1;
                path.pop_back();
            }
        } else {
            pos[f] = static_cast<int>(path.size());
            path.push_back(f);
        }
    }
    BoundaryTrace out;
    out.faces = std::move(path);
    out.side = side;
    out.cluster = cluster;
    out.entry_side = entry_side;
    out.exit_side = exit_side;
    return out;
}

RegionIndex region_index(const DiscreteDomain& dom, const std::vector<BoundaryTrace>& traces) {
    const int nf = dom.face_count();
    RegionIndex out;
    out.side = traces.empty() ? Side::left : traces.front().side;
    out.traces = static_cast<int>(traces.size());
    std::vector<int> on_trace(nf, -1);
    for (int i = 0; i < out.traces; ++i) {
        for (FaceIndex f : traces[i].faces) {
            if (on_trace[f] >= 0) throw Error(ErrorCode::overlapping_traces, "traces share a face");
            on_trace[f] = i;
        }
    }
    // Walking a trace from u to d, l lies on the right hand: the sides passed
    // counterclockwise from the entry side to the exit side face l.
    std::vector<int> want(nf, -1);
    auto require = [&](FaceIndex g, int k) {
        if (g == kNone || on_trace[g] >= 0) return;
        if (want[g] >= 0 && want[g] != k) throw Error(ErrorCode::internal, "face on both sides of a trace");
        want[g] = k;
    };
    for (int i = 0; i < out.traces; ++i) {
        const auto& fs = traces[i].faces;
        const int m = static_cast<int>(fs.size());
        for (int j = 0; j < m; ++j) {
            const int a = j == 0 ? traces[i].entry_side : side_towards(dom, fs[j], fs[j - 1]);
            const int b = j == m - 1 ? traces[i].exit_side : side_towards(dom, fs[j], fs[j + 1]);
            const auto& nb = dom.face_neighbors(fs[j]);
            bool l_side = true;
            for (int t = 1; t < 6; ++t) {
                const int s = (a + t) % 6;
                if (s == b) {
                    l_side = false;
                    continue;
                }
                require(nb[s], l_side ? i : i + 1);
            }
        }
    }
    out.face_k.assign(nf, -1);
    std::vector<FaceIndex> stack;
    for (FaceIndex s = 0; s < nf; ++s) {
        if (out.face_k[s] >= 0 || on_trace[s] >= 0) continue;
        std::vector<FaceIndex> comp{s};
        out.face_k[s] = 0;
        int k = -1;
        stack.assign(1, s);
        while (!stack.empty()) {
            const FaceIndex f = stack.back();
            stack.pop_back();
            if (want[f] >= 0) {
                if (k >= 0 && k != want[f]) throw Error(ErrorCode::internal, "region meets a trace from both sides");
                k = want[f];
            }
            for (FaceIndex g : dom.face_neighbors(f)) {
                if (g == kNone || out.face_k[g] >= 0 || on_trace[g] >= 0) continue;
                out.face_k[g] = 0;
                comp.push_back(g);
                stack.push_back(g);
            }
        }
        for (FaceIndex f : comp) out.face_k[f] = std::max(k, 0);
    }
    out.on_trace.assign(nf, 0);
    for (FaceIndex f = 0; f < nf; ++f) {
        if (on_trace[f] >= 0) {
            out.face_k[f] = on_trace[f];
            out.on_trace[f] = 1;
        }
    }
    return out;
}

int vertex_k(const DiscreteDomain& dom, const RegionIndex& region, VertexIndex z) {
    // Minimum over the incident faces off the traces. A vertex surrounded by
    // trace faces goes with the cluster: the r side of a left trace, the l
    // side of a right trace.
    int k_free = -1;
    int k_trace = -1;
    for (int d = 0; d < 6; ++d) {
        const FaceIndex f = dom.face_at(z, d);
        if (f == kNone) continue;
        int& k = region.on_trace[f] ? k_trace : k_free;
        k = k < 0 ? region.face_k[f] : std::min(k, region.face_k[f]);
    }
    if (k_free >= 0) return k_free;
    return k_trace + (region.side == Side::left ? 1 : 0);
}

int n_count(const DiscreteDomain& dom, const RegionIndex& region, VertexIndex z) {
    return vertex_k(dom, region, z) - vertex_k(dom, region, dom.w());
}

namespace {

// Q^u(z) holds when some simple white path P inside W_u (the white clusters
// touching u) runs from d to d with z on the side away from u. Such paths are
// the cycles through the exterior node O of the graph H whose nodes are the
// faces of W_u plus O, with one edge per shared side and one O-edge per side
// on d. By planarity every vertex cut off from l by some block of H at O is
// cut off by one of its cycles through O, so Q^u holds exactly off the
// l-component of the primal graph minus the edges crossed by the blocks at O.
// Q^d swaps the arcs.
void q_field(const DiscreteDomain& dom, const ClusterLabels& labels, bool for_u, QScratch& q,
             std::vector<std::uint8_t>& out) {
    const int nf = dom.face_count();
    const int n = static_cast<int>(dom.boundary_cycle().size());
    auto in_wall = [&](FaceIndex f) {
        const int c = labels.label[f];
        if (c == kNone) return false;
        return for_u ? labels.clusters[c].touches_u : labels.clusters[c].touches_d;
    };
    // H edges: (a, b, primal id). Primal ids: 6 * face + side for shared sides
    // (stored on the smaller face), 6 * nf + i for boundary edge i.
    const int o = nf;
    q.head.assign(nf + 1, -1);
    q.next.clear();
    q.to.clear();
    q.primal.clear();
    auto add = [&](int a, int b, int id) {
        for (int k = 0; k < 2; ++k) {
            q.to.push_back(b);
            q.primal.push_back(id);
            q.next.push_back(q.head[a]);
            q.head[a] = static_cast<int>(q.to.size()) - 1;
            std::swap(a, b);
        }
    };
    for (FaceIndex f = 0; f < nf; ++f) {
        if (!in_wall(f)) continue;
        const auto& nb = dom.face_neighbors(f);
        for (int side = 0; side < 6; ++side) {
            if (nb[side] != kNone && nb[side] > f && in_wall(nb[side])) add(f, nb[side], 6 * f + side);
        }
    }
    for (int i = 0; i < n; ++i) {
        if (dom.boundary_edge_on_u(i) == for_u) continue;
        const FaceIndex f = dom.boundary_edge_face(i);
        if (in_wall(f)) add(f, o, 6 * nf + i);
    }
    // Biconnected components through O (iterative Tarjan, edges on a stack).
    q.blocked.assign(6 * nf + n, 0);
    q.disc.assign(nf + 1, -1);
    q.low.assign(nf + 1, 0);
    q.estack.clear();
    std::vector<QScratch::Frame>& st = q.frames;
    st.clear();
    int time = 0;
    q.disc[o] = q.low[o] = time++;
    st.push_back({o, -1, q.head[o]});
    while (!st.empty()) {
        QScratch::Frame& fr = st.back();
        if (fr.it >= 0) {
            const int e = fr.it;
            fr.it = q.next[e];
            if ((e ^ 1) == fr.parent_edge) continue;
            const int v = q.to[e];
            if (q.disc[v] < 0) {
                q.estack.push_back(e);
                q.disc[v] = q.low[v] = time++;
                st.push_back({v, e, q.head[v]});
            } else if (q.disc[v] < q.disc[fr.node]) {
                q.estack.push_back(e);
                q.low[fr.node] = std::min(q.low[fr.node], q.disc[v]);
            }
            continue;
        }
        const int v = fr.node;
        const int pe = fr.parent_edge;
        st.pop_back();
        if (st.empty()) break;
        const int u = st.back().node;
        q.low[u] = std::min(q.low[u], q.low[v]);
        if (q.low[v] >= q.disc[u]) {
            // Pop the block hanging below the tree edge pe.
            while (true) {
                const int e = q.estack.back();
                q.estack.pop_back();
                if (u == o) q.blocked[q.primal[e]] = 1;
                if (e == pe) break;
            }
        }
    }
    // Flood the primal graph from l across unblocked edges.
    const auto& cyc = dom.boundary_cycle();
    auto edge_blocked = [&](VertexIndex v, int d, VertexIndex h) {
        const FaceIndex lf = dom.face_at(v, (d + 1) % 6);
        const FaceIndex rf = dom.face_at(v, (d + 5) % 6);
        if (lf != kNone && rf != kNone) {
            const FaceIndex f = std::min(lf, rf), g = std::max(lf, rf);
            const auto& nb = dom.face_neighbors(f);
            for (int side = 0; side < 6; ++side) {
                if (nb[side] == g) return q.blocked[6 * f + side] != 0;
            }
            return false;
        }
        const int pv = dom.boundary_position(v);
        const int i = cyc[(pv + 1) % n] == h ? pv : dom.boundary_position(h);
        return q.blocked[6 * nf + i] != 0;
    };
    out.assign(dom.vertex_count(), 1);
    std::vector<VertexIndex>& stack = q.vstack;
    stack.assign(1, dom.l());
    out[dom.l()] = 0;
    while (!stack.empty()) {
        const VertexIndex v = stack.back();
        stack.pop_back();
        for (int d = 0; d < 6; ++d) {
            const VertexIndex h = dom.neighbor(v, d);
            if (h == kNone || !out[h] || edge_blocked(v, d, h)) continue;
            out[h] = 0;
            stack.push_back(h);
        }
    }
}

}  // namespace

void SampleEvaluator::compute_q(bool for_u) {
    q_field(*dom_, white_, for_u, q_, for_u ? values_.qu : values_.qd);
}

const SampleValues& SampleEvaluator::evaluate(const Coloring& col) {
    const DiscreteDomain& dom = *dom_;
    label_clusters_into(dom, col, Color::white, white_);
    const std::vector<int> crossing = crossing_clusters(dom, white_);
    left_.clear();
    right_.clear();
    for (int c : crossing) {
        left_.push_back(trace_boundary(dom, white_, c, Side::left));
        right_.push_back(trace_boundary(dom, white_, c, Side::right));
    }
    const RegionIndex kl = region_index(dom, left_);
    const RegionIndex kr = region_index(dom, right_);
    const int nv = dom.vertex_count();
    values_.nl.resize(nv);
    values_.nr.resize(nv);
    for (VertexIndex z = 0; z < nv; ++z) {
        values_.nl[z] = n_count(dom, kl, z);
        values_.nr[z] = n_count(dom, kr, z);
    }
    compute_q(true);
    compute_q(false);
    return values_;
}

bool event_qu(const DiscreteDomain& dom, const ClusterLabels& labels, VertexIndex z) {
    std::vector<std::uint8_t> q;
    QScratch scratch;
    q_field(dom, labels, true, scratch, q);
    return q[z] != 0;
}

bool event_qd(const DiscreteDomain& dom, const ClusterLabels& labels, VertexIndex z) {
    std::vector<std::uint8_t> q;
    QScratch scratch;
    q_field(dom, labels, false, scratch, q);
    return q[z] != 0;
}

void component_q_field(const DiscreteDomain& dom, const ClusterLabels& labels, bool for_u,
                       std::vector<std::uint8_t>& out) {
    const int nf = dom.face_count();
    auto in_wall = [&](FaceIndex f) {
        const int c = labels.label[f];
        if (c == kNone) return false;
        return for_u ? labels.clusters[c].touches_u : labels.clusters[c].touches_d;
    };
    // Faces that disqualify a component: a side on the wall's own arc, or a
    // corner at l or r.
    std::vector<std::uint8_t> bad(nf, 0);
    const auto& cyc = dom.boundary_cycle();
    for (int i = 0; i < static_cast<int>(cyc.size()); ++i) {
        if (dom.boundary_edge_on_u(i) == for_u) bad[dom.boundary_edge_face(i)] = 1;
    }
    for (VertexIndex m : {dom.l(), dom.r()}) {
        for (FaceIndex f : dom.incident_faces(m)) bad[f] = 1;
    }
    std::vector<int> comp(nf, kNone);
    std::vector<std::uint8_t> comp_ok;
    std::vector<FaceIndex> stack;
    for (FaceIndex s = 0; s < nf; ++s) {
        if (in_wall(s) || comp[s] != kNone) continue;
        const int id = static_cast<int>(comp_ok.size());
        comp_ok.push_back(1);
        comp[s] = id;
        stack.assign(1, s);
        while (!stack.empty()) {
            const FaceIndex f = stack.back();
            stack.pop_back();
            if (bad[f]) comp_ok[id] = 0;
            for (FaceIndex g : dom.face_neighbors(f)) {
                if (g == kNone || in_wall(g) || comp[g] != kNone) continue;
                comp[g] = id;
                stack.push_back(g);
            }
        }
    }
    out.assign(dom.vertex_count(), 0);
    for (VertexIndex z = 0; z < dom.vertex_count(); ++z) {
        bool ok = true;
        for (FaceIndex f : dom.incident_faces(z)) {
            if (comp[f] != kNone && !comp_ok[comp[f]]) ok = false;
        }
        out[z] = ok;
    }
}

}  // namespace hexperc
