#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hexperc/core/lattice.hpp"

namespace hexperc {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;
PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key);

struct SampleKey {
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
};

enum class Color : std::uint8_t { black = 0, white = 1 };

struct Coloring {
    std::vector<std::uint8_t> white;  // one entry per face, 1 = white

    int size() const { return static_cast<int>(white.size()); }
    bool is_white(FaceIndex f) const { return white[f] != 0; }
    bool has(FaceIndex f, Color c) const { return (white[f] != 0) == (c == Color::white); }

    static Coloring uniform(int faces, Color c);
    // Bit i of mask is face i (faces >= 64 are black).
    static Coloring from_mask(int faces, std::uint64_t mask);
};

// Face f takes bit (f mod 128) of philox(counter = (index, f / 128, 0), key = seed).
Coloring sample_coloring(const DiscreteDomain& dom, SampleKey key);
void sample_coloring_into(const DiscreteDomain& dom, SampleKey key, Coloring& out);
Coloring negate(const Coloring& col);

// ASCII dump, one "q r bit" row per face.
void write_coloring(std::ostream& os, const DiscreteDomain& dom, const Coloring& col);

struct Cluster {
    int size = 0;
    bool touches_u = false;
    bool touches_d = false;
    FaceIndex first_face = kNone;  // smallest face index in the cluster
};

struct ClusterLabels {
    Color color = Color::white;
    std::vector<int> label;  // per face; kNone for faces of the other color
    std::vector<Cluster> clusters;

    int count() const { return static_cast<int>(clusters.size()); }
    bool crossing(int id) const { return clusters[id].touches_u && clusters[id].touches_d; }
};

// Union-find labeling; cluster ids are assigned in order of first face index.
ClusterLabels label_clusters(const DiscreteDomain& dom, const Coloring& col, Color color);
void label_clusters_into(const DiscreteDomain& dom, const Coloring& col, Color color, ClusterLabels& out);

class UnionFind {
public:
    explicit UnionFind(int n = 0) { reset(n); }
    void reset(int n);
    int find(int x);
    bool unite(int a, int b);
    int size_of(int x) { return size_[find(x)]; }

private:
    std::vector<int> parent_;
    std::vector<int> size_;
};

}  // namespace hexperc
