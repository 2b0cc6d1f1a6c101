#include "hexperc/core/percolation.hpp"

#include <algorithm>
#include <ostream>

namespace hexperc {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline PhiloxCounter philox_round(PhiloxCounter c, PhiloxKey k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
    return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
            static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
}

}  // namespace

PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kPhiloxW0;
            key[1] += kPhiloxW1;
        }
        ctr = philox_round(ctr, key);
    }
    return ctr;
}

Coloring Coloring::uniform(int faces, Color c) {
    Coloring out;
    out.white.assign(faces, c == Color::white ? 1 : 0);
    return out;
}

Coloring Coloring::from_mask(int faces, std::uint64_t mask) {
    Coloring out;
    out.white.resize(faces);
    for (int f = 0; f < faces; ++f) out.white[f] = f < 64 ? ((mask >> f) & 1u) : 0;
    return out;
}

void sample_coloring_into(const DiscreteDomain& dom, SampleKey key, Coloring& out) {
    const int n = dom.face_count();
    out.white.resize(n);
    const PhiloxKey k{static_cast<std::uint32_t>(key.seed), static_cast<std::uint32_t>(key.seed >> 32)};
    for (int block = 0; block * 128 < n; ++block) {
        const PhiloxCounter ctr{static_cast<std::uint32_t>(key.index),
                                static_cast<std::uint32_t>(key.index >> 32),
                                static_cast<std::uint32_t>(block), 0u};
        const PhiloxCounter bits = philox4x32(ctr, k);
        const int base = block * 128;
        const int stop = std::min(n - base, 128);
        for (int i = 0; i < stop; ++i) out.white[base + i] = (bits[i >> 5] >> (i & 31)) & 1u;
    }
}

Coloring sample_coloring(const DiscreteDomain& dom, SampleKey key) {
    Coloring out;
    sample_coloring_into(dom, key, out);
    return out;
}

Coloring negate(const Coloring& col) {
    Coloring out = col;
    for (auto& b : out.white) b ^= 1u;
    return out;
}

void write_coloring(std::ostream& os, const DiscreteDomain& dom, const Coloring& col) {
    for (FaceIndex f = 0; f < dom.face_count(); ++f) {
        const FaceCoord c = dom.face(f);
        os << c.q << ' ' << c.r << ' ' << int(col.white[f]) << '\n';
    }
}

void UnionFind::reset(int n) {
    parent_.resize(n);
    size_.assign(n, 1);
    for (int i = 0; i < n; ++i) parent_[i] = i;
}

int UnionFind::find(int x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

bool UnionFind::unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
}

void label_clusters_into(const DiscreteDomain& dom, const Coloring& col, Color color, ClusterLabels& out) {
    const int n = dom.face_count();
    thread_local UnionFind uf;
    uf.reset(n);
    // Sides 0..2 cover each adjacent pair once.
    for (FaceIndex f = 0; f < n; ++f) {
        if (!col.has(f, color)) continue;
        const auto& nb = dom.face_neighbors(f);
        for (int s = 0; s < 3; ++s) {
            if (nb[s] != kNone && col.has(nb[s], color)) uf.unite(f, nb[s]);
        }
    }
    out.color = color;
    out.label.assign(n, kNone);
    out.clusters.clear();
    thread_local std::vector<int> root_label;
    root_label.assign(n, kNone);
    for (FaceIndex f = 0; f < n; ++f) {
        if (!col.has(f, color)) continue;
        const int root = uf.find(f);
        if (root_label[root] == kNone) {
            root_label[root] = static_cast<int>(out.clusters.size());
            out.clusters.push_back({0, false, false, f});
        }
        Cluster& c = out.clusters[root_label[root]];
        out.label[f] = root_label[root];
        ++c.size;
        c.touches_u = c.touches_u || dom.face_touches_u(f);
        c.touches_d = c.touches_d || dom.face_touches_d(f);
    }
}

ClusterLabels label_clusters(const DiscreteDomain& dom, const Coloring& col, Color color) {
    ClusterLabels out;
    label_clusters_into(dom, col, color, out);
    return out;
}

}  // namespace hexperc
