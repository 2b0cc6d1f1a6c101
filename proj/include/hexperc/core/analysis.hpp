#pragma once

// Discrete derivatives, the Cauchy-Riemann residual, contour sums and
// convergence tables.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hexperc/core/field.hpp"
#include "hexperc/core/lattice.hpp"
#include "hexperc/core/observables.hpp"

namespace hexperc {

enum class Tag { l, r, u, d };

// tag l/r: +event {N(y) = N(x) + 1}, -event {N(y) = N(x) - 1};
// tag u/d: +event Q(y) \ Q(x), -event Q(x) \ Q(y).
struct DerivativeEvent {
    OrientedEdge e;
    Tag tag = Tag::l;
    int sign = +1;

    bool holds(const DiscreteDomain& dom, const SampleValues& v) const;
    std::string name() const;
};

// Edges <x, y> whose endpoints x, y, tau y, tau^2 y are all interior.
std::vector<OrientedEdge> admissible_edges(const DiscreteDomain& dom);
bool is_admissible(const DiscreteDomain& dom, OrientedEdge e);

// The six probabilities entering the identity at e.
template <class T>
struct CrTerms {
    T lp{};     // d+_e H^l
    T rm{};     // d-_e H^r
    T qu_t{};   // d+_{tau e} H^u
    T qd_t{};   // d+_{tau e} H^d
    T qu_tt{};  // d+_{tau^2 e} H^u
    T qd_tt{};  // d+_{tau^2 e} H^d
};

// 2 (d+_e H^l - d-_e H^r) - (d+_{tau e} - d+_{tau^2 e}) (H^d - H^u)
template <class T>
T cr_residual(const CrTerms<T>& p) {
    return 2 * (p.lp - p.rm) - ((p.qd_t - p.qu_t) - (p.qd_tt - p.qu_tt));
}

CrTerms<int> cr_indicators(const DiscreteDomain& dom, const SampleValues& v, OrientedEdge e);

// Shared-sample estimates at a list of admissible edges.
class CrAccumulator {
public:
    CrAccumulator() = default;
    explicit CrAccumulator(std::vector<OrientedEdge> edges);
    void add(const DiscreteDomain& dom, const Coloring& col, SampleEvaluator& eval);
    void add_values(const DiscreteDomain& dom, const SampleValues& v);
    void merge(const CrAccumulator& o);

    struct Row {
        OrientedEdge e;
        CrTerms<double> p;
        double residual = 0.0;
        double se = 0.0;
    };
    std::vector<Row> rows() const;
    std::int64_t samples() const { return n_; }

private:
    std::vector<OrientedEdge> edges_;
    std::vector<CrTerms<std::int64_t>> counts_;
    std::vector<std::int64_t> rsum_, rsq_;
    std::int64_t n_ = 0;
};

// "ex,ey,dir,residual,se" with the tail position as (ex, ey).
void write_residual_csv(std::ostream& os, const DiscreteDomain& dom, const std::vector<CrAccumulator::Row>& rows,
                        const std::string& provenance);

// ---------------------------------------------------------------------------
// Contours

// Closed simple counterclockwise cycle of lattice vertices (first vertex not
// repeated at the end).
struct Contour {
    std::vector<VertexIndex> cycle;
};

// Consecutive cycle edges, including the closing one.
std::vector<OrientedEdge> contour_edges(const DiscreteDomain& dom, const Contour& contour);

// Nearest lattice vertices along the circle, counterclockwise, with gaps
// bridged by shortest lattice paths and backtracks and loops erased.
Contour discretize_circle(const DiscreteDomain& dom, Complex center, double radius);

// Oriented edges, both orientations, strictly inside the contour.
std::vector<OrientedEdge> interior_edges(const DiscreteDomain& dom, const Contour& contour);

// sum over contour edges of e (F(x) + F(y)) / 2.
Complex morera_sum(const DiscreteDomain& dom, const Contour& contour, const std::function<Complex(VertexIndex)>& f);
Complex morera_sum(const DiscreteDomain& dom, const Contour& contour, const ObservableField& field);
// sum over interior oriented edges of e* d+_e H.
Complex interior_dual_sum(const DiscreteDomain& dom, const std::vector<OrientedEdge>& interior,
                          const std::function<Complex(OrientedEdge)>& d_plus);

// Exact arithmetic in Z[omega], omega = exp(i pi / 3), omega^2 = omega - 1.
struct Eisenstein {
    std::int64_t a = 0, b = 0;
    Eisenstein operator+(Eisenstein o) const { return {a + o.a, b + o.b}; }
    Eisenstein operator-(Eisenstein o) const { return {a - o.a, b - o.b}; }
    Eisenstein operator*(Eisenstein o) const { return {a * o.a - b * o.b, a * o.b + b * o.a + b * o.b}; }
    bool operator==(const Eisenstein&) const = default;
    Complex value() const;
};
Eisenstein eisenstein_direction(int dir);
// sqrt(3) i e* + (tau^2 e)* - (tau e)* in units of delta^2.
Eisenstein geometric_identity_term(OrientedEdge e);

struct IdentitySum {
    Eisenstein total;
    int edges = 0;
    int nonzero_terms = 0;
};
IdentitySum geometric_identity_sum(const DiscreteDomain& dom, const std::vector<OrientedEdge>& edges);

// Per-sample contour sum and interior dual sum, accumulated for standard errors.
class MoreraAccumulator {
public:
    MoreraAccumulator() = default;
    MoreraAccumulator(const DiscreteDomain& dom, const Contour& contour);
    void add(const DiscreteDomain& dom, const Coloring& col, SampleEvaluator& eval);
    void add_values(const DiscreteDomain& dom, const SampleValues& v);
    void merge(const MoreraAccumulator& o);

    struct Summary {
        Complex morera, dual;
        double morera_abs = 0.0, morera_abs_se = 0.0;
        double difference_abs = 0.0;  // |morera - dual|
        std::int64_t samples = 0;
    };
    Summary summary() const;

private:
    std::vector<OrientedEdge> boundary_;
    std::vector<OrientedEdge> interior_;
    struct Sums {
        double re = 0, im = 0, re2 = 0, im2 = 0, reim = 0;
        void add(Complex z);
        void merge(const Sums& o);
    };
    Sums m_, d_;
    std::int64_t n_ = 0;
};

// ---------------------------------------------------------------------------
// Convergence against a reference map

struct ConvergenceRow {
    double delta = 0.0;
    std::int64_t samples = 0;
    double supdist = 0.0;
    double se = 0.0;       // of |H - h| at the maximizing vertex
    Complex center_value;  // H at the vertex nearest the compact center
    Complex center_se;
    int probes = 0;
};

ConvergenceRow compare_to_reference(const DiscreteDomain& dom, const ObservableField& field,
                                    const std::function<Complex(Complex)>& h, Complex center, double radius);

// Runs one field per spec (same shape and marks, decreasing delta).
std::vector<ConvergenceRow> convergence_report(const std::vector<DomainSpec>& specs,
                                               const std::function<Complex(Complex)>& h, Complex center,
                                               double radius, std::uint64_t samples, std::uint64_t seed,
                                               int workers);

// Each value no larger than its predecessor plus k combined standard errors.
bool decreasing_within(const std::vector<double>& v, const std::vector<double>& se, double k);
bool strictly_decreasing_within(const std::vector<double>& v, const std::vector<double>& se, double k);

// "delta,nsamples,supdist,se" after the provenance line.
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows, const std::string& provenance);

}  // namespace hexperc
