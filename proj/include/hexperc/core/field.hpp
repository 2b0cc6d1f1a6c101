#pragma once

// Streaming estimates of the four observables at every vertex, and the
// parallel sampling driver shared by all Monte Carlo studies.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <thread>
#include <vector>

#include "hexperc/core/lattice.hpp"
#include "hexperc/core/observables.hpp"
#include "hexperc/core/percolation.hpp"

namespace hexperc {

inline constexpr double kHalfSqrt3 = 0.86602540378443864676;

// Exact integer moment sums: every per-sample observable is an integer, so
// merges are exact and independent of the worker split.
struct VertexSums {
    std::int64_t nl = 0, nl2 = 0, nr = 0, nr2 = 0, nlnr = 0;
    std::int64_t qu = 0, qd = 0, qud = 0;
};

struct Moments {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
};
Moments moments(std::int64_t n, std::int64_t sum, std::int64_t sum_sq);
double standard_error(std::int64_t n, std::int64_t sum, std::int64_t sum_sq);

class ObservableField {
public:
    ObservableField() = default;
    explicit ObservableField(int vertex_count) : sums_(vertex_count) {}

    void add(const SampleValues& v);
    void merge(const ObservableField& o);

    int vertex_count() const { return static_cast<int>(sums_.size()); }
    std::int64_t samples() const { return n_; }
    const VertexSums& sums(VertexIndex z) const { return sums_[z]; }

    double hl(VertexIndex z) const;
    double hr(VertexIndex z) const;
    double hu(VertexIndex z) const;
    double hd(VertexIndex z) const;
    // (H^l + H^r) - (sqrt(3)/2) i (H^u - H^d)
    Complex h(VertexIndex z) const;
    // Standard errors of Re H and Im H.
    Complex h_se(VertexIndex z) const;
    double hl_se(VertexIndex z) const;
    double hr_se(VertexIndex z) const;
    double hu_se(VertexIndex z) const;
    double hd_se(VertexIndex z) const;
    // Paired standard error of H^l - H^r.
    double hl_minus_hr_se(VertexIndex z) const;

private:
    std::int64_t n_ = 0;
    std::vector<VertexSums> sums_;
};

// Contiguous split of [begin, end) over workers; each worker owns an
// accumulator built by make() and fed through acc.add(dom, col, eval).
// Accumulators are merged in worker order.
template <class Acc, class Make>
Acc run_samples(const DiscreteDomain& dom, std::uint64_t seed, std::uint64_t begin, std::uint64_t end, int workers,
                Make make) {
    if (workers < 1) workers = 1;
    const std::uint64_t total = end > begin ? end - begin : 0;
    if (static_cast<std::uint64_t>(workers) > total) workers = total > 0 ? static_cast<int>(total) : 1;
    std::vector<Acc> parts;
    parts.reserve(workers);
    for (int i = 0; i < workers; ++i) parts.push_back(make());
    auto body = [&](int w) {
        const std::uint64_t lo = begin + total * w / workers;
        const std::uint64_t hi = begin + total * (w + 1) / workers;
        SampleEvaluator eval(dom);
        Coloring col;
        for (std::uint64_t i = lo; i < hi; ++i) {
            sample_coloring_into(dom, {seed, i}, col);
            parts[w].add(dom, col, eval);
        }
    };
    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(body, w);
        for (auto& t : pool) t.join();
    }
    for (int i = 1; i < workers; ++i) parts[0].merge(parts[i]);
    return std::move(parts[0]);
}

int default_workers();

ObservableField accumulate_field(const DiscreteDomain& dom, std::uint64_t seed, std::uint64_t begin,
                                 std::uint64_t end, int workers);

// "vx,vy,n,Hl,Hr,Hu,Hd,HRe,HIm,seRe,seIm" after the provenance line.
void write_field_csv(std::ostream& os, const DiscreteDomain& dom, const ObservableField& field,
                     const std::string& provenance);

}  // namespace hexperc
