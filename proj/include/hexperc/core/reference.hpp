#pragma once

// Limit objects: the strip map, cross-ratios, hypergeometric functions and
// the crossing / cluster-count formulas.

#include <complex>
#include <vector>

#include "hexperc/core/lattice.hpp"

namespace hexperc {

// Half-width of the target strip {|Im| < sqrt(3)/4}.
inline constexpr double kStripHalfWidth = 0.43301270189221932338;  // sqrt(3)/4
// Constant of the log term, from the strip-map derivation: sqrt(3) / (2 pi).
inline constexpr double kLogTermConstant = 0.27566444771089600;
// The two constants printed for the log term, kept for reporting.
inline constexpr double kPrintedConstantA = 2.72069904635132;  // sqrt(3) pi / 2
inline constexpr double kPrintedConstantB = 0.13783222385544800;  // sqrt(3) / (4 pi), half count

double gamma_fn(double x);

// Series with term-ratio truncation. For x > 1/2, hyp2f1 switches to the
// 1 - x connection formula (c - a - b not an integer) or to its Euler
// integral; for x > 0.9, hyp3f2 uses the Euler integral over 2F1. The
// integrals use tanh-sinh quadrature, which absorbs the endpoint
// singularity at x = 1. x = 1 is accepted when the series converges there.
double hyp2f1(double a, double b, double c, double x);
double hyp3f2(double a1, double a2, double a3, double b1, double b2, double x);
// Same analytic strategy with terms summed smallest-first (compensated).
double hyp2f1_reverse(double a, double b, double c, double x);
double hyp3f2_reverse(double a1, double a2, double a3, double b1, double b2, double x);

double cardy(double lambda);
double watts(double lambda);
double cluster_count_limit(double lambda);
double expected_clusters(double lambda);

struct CrossRatioQuad {
    Complex a1, a2, a3, a4;
};

struct CrossRatio {
    Complex raw;    // (a1 - a3)(a2 - a4) / ((a1 - a4)(a2 - a3))
    double lambda;  // 1 - 1 / raw, in (0, 1) for counterclockwise concyclic points
};
CrossRatio cross_ratio(const CrossRatioQuad& quad);

// h for a disc: Moebius map z -> -((z - l)(w - r)) / ((z - r)(w - l)) onto
// the upper half-plane (l -> 0, r -> infinity, w -> -1), then
// sqrt(3)/(2 pi) log(.) - i sqrt(3)/4.
Complex strip_map_points(Complex l, Complex r, Complex w, Complex z);
// Throws unsupported_domain for polygons.
Complex strip_map(const DomainSpec& spec, Complex z);

class ReferenceMap {
public:
    explicit ReferenceMap(const DomainSpec& spec);
    Complex operator()(Complex z) const { return strip_map_points(l_, r_, w_, z); }
    const DomainSpec& spec() const { return spec_; }

private:
    DomainSpec spec_;
    Complex l_, r_, w_;
};

// Grid solution of the Dirichlet problem for Im h (+sqrt(3)/4 on u,
// -sqrt(3)/4 on d) on the nodes strictly inside the shape, with
// Shortley-Weller stencils at the boundary; Re h is integrated from the
// discrete gradient and shifted so that Re h(w) = 0.
class DirichletField {
public:
    DirichletField(const DomainSpec& spec, double spacing);

    // Bilinear where the four surrounding nodes are inside, nearest inside
    // node otherwise.
    Complex value(Complex z) const;
    double spacing() const { return h_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    bool inside(int i, int j) const { return id_[j * nx_ + i] >= 0; }
    Complex node(int i, int j) const { return origin_ + Complex(i * h_, j * h_); }
    Complex node_value(int i, int j) const { return vals_[id_[j * nx_ + i]]; }

private:
    Complex origin_;
    double h_;
    int nx_ = 0, ny_ = 0;
    std::vector<int> id_;
    std::vector<Complex> vals_;
};

}  // namespace hexperc
