#include "hexperc/core/reference.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace hexperc {

namespace {

constexpr double kSeriesTol = 1e-17;
constexpr int kMaxTerms = 200000;

bool is_nonpositive_integer(double x) { return x <= 0.0 && std::floor(x) == x; }

bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-12; }

// 1 / Gamma(x), zero at the poles.
double rgamma(double x) { return is_nonpositive_integer(x) ? 0.0 : 1.0 / std::tgamma(x); }

// Terms of a generalized hypergeometric series until they fall below
// tolerance relative to the running sum.
template <std::size_t P, std::size_t Q>
std::vector<double> series_terms(const std::array<double, P>& a, const std::array<double, Q>& b, double x) {
    std::vector<double> terms{1.0};
    double t = 1.0;
    double s = 1.0;
    for (int n = 0; n < kMaxTerms; ++n) {
        double ratio = x / (n + 1.0);
        for (double ai : a) ratio *= ai + n;
        for (double bi : b) ratio /= bi + n;
        t *= ratio;
        if (t == 0.0) return terms;
        terms.push_back(t);
        s += t;
        if (std::abs(t) <= kSeriesTol * std::abs(s)) return terms;
    }
    throw Error(ErrorCode::not_converged, "hypergeometric series did not converge");
    return terms;
}

double sum_forward(const std::vector<double>& t) {
    double s = 0.0;
    for (double v : t) s += v;
    return s;
}

double sum_reverse(const std::vector<double>& t) {
    double s = 0.0, c = 0.0;
    for (auto it = t.rbegin(); it != t.rend(); ++it) {
        const double y = *it - c;
        const double u = s + y;
        c = (u - s) - y;
        s = u;
    }
    return s;
}

template <std::size_t P, std::size_t Q>
double direct(const std::array<double, P>& a, const std::array<double, Q>& b, double x, bool reverse) {
    const auto t = series_terms(a, b, x);
    return reverse ? sum_reverse(t) : sum_forward(t);
}

void check_c(double c) {
    if (is_nonpositive_integer(c)) throw Error(ErrorCode::domain_error, "lower parameter is a nonpositive integer");
}

// y = 1 - x, passed separately to keep its precision near x = 1.
double hyp2f1_impl(double a, double b, double c, double x, double y, bool reverse) {
    check_c(c);
    if (!(x >= -1.0 && x <= 1.0)) throw Error(ErrorCode::domain_error, "hyp2f1 argument outside [-1, 1]");
    if (x == 0.0) return 1.0;
    const double s = c - a - b;
    if (y == 0.0) {
        if (s <= 0.0) throw Error(ErrorCode::domain_error, "hyp2f1 diverges at 1");
        return std::tgamma(c) * std::tgamma(s) * rgamma(c - a) * rgamma(c - b);
    }
    const std::array<double, 2> num{a, b};
    const std::array<double, 1> den{c};
    if (x <= 0.5) return direct(num, den, x, reverse);
    if (!is_integer(s)) {
        const double a1 = std::tgamma(c) * std::tgamma(s) * rgamma(c - a) * rgamma(c - b);
        const double b1 = std::tgamma(c) * std::tgamma(-s) * rgamma(a) * rgamma(b);
        double f = 0.0;
        if (a1 != 0.0) f += a1 * direct(num, std::array<double, 1>{1.0 - s}, y, reverse);
        if (b1 != 0.0) f += b1 * std::pow(y, s) * direct(std::array<double, 2>{c - a, c - b}, std::array<double, 1>{1.0 + s}, y, reverse);
        return f;
    }
    // Euler integral Gamma(c) / (Gamma(p) Gamma(c - p)) int t^(p - 1) (1 - t)^(c - p - 1) (1 - x t)^(-q) dt,
    // with (p, q) = (b, a) or (a, b).
    double p = b, q = a;
    if (!(c > p && p > 0.0)) std::swap(p, q);
    if (!(c > p && p > 0.0)) throw Error(ErrorCode::not_converged, "no convergent representation near 1");
    boost::math::quadrature::tanh_sinh<double> quad;
    const double v = quad.integrate(
        [&](double t, double tc) {
            const double one_minus = t > 0.5 ? tc : 1.0 - t;
            return std::pow(t, p - 1.0) * std::pow(one_minus, c - p - 1.0) * std::pow(y + x * one_minus, -q);
        },
        0.0, 1.0, 1e-14);
    return std::tgamma(c) * rgamma(p) * rgamma(c - p) * v;
}

double hyp3f2_impl(double a1, double a2, double a3, double b1, double b2, double x, bool reverse) {
    check_c(b1);
    check_c(b2);
    if (!(x >= -1.0 && x <= 1.0)) throw Error(ErrorCode::domain_error, "hyp3f2 argument outside [-1, 1]");
    if (x == 0.0) return 1.0;
    if (x == 1.0 && b1 + b2 - a1 - a2 - a3 <= 0.0) throw Error(ErrorCode::domain_error, "hyp3f2 diverges at 1");
    const std::array<double, 3> num{a1, a2, a3};
    const std::array<double, 2> den{b1, b2};
    if (x <= 0.9) return direct(num, den, x, reverse);
    // Euler integral over a pair b_j > a_i > 0:
    // Gamma(b_j) / (Gamma(a_i) Gamma(b_j - a_i)) int t^(a_i - 1) (1 - t)^(b_j - a_i - 1) 2F1(rest; x t) dt.
    // The two variants take the first and the last admissible pair.
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 2; ++j) {
            if (den[j] > num[i] && num[i] > 0.0) pairs.emplace_back(i, j);
        }
    }
    if (pairs.empty()) throw Error(ErrorCode::not_converged, "no convergent representation near 1");
    const auto [i, j] = reverse ? pairs.back() : pairs.front();
    const double ai = num[i], bj = den[j];
    std::array<double, 2> rest_a{};
    for (int k = 0, m = 0; k < 3; ++k) {
        if (k != i) rest_a[m++] = num[k];
    }
    const double rest_c = den[1 - j];
    boost::math::quadrature::tanh_sinh<double> quad;
    const double v = quad.integrate(
        [&](double t, double tc) {
            const double one_minus = t > 0.5 ? tc : 1.0 - t;
            return std::pow(t, ai - 1.0) * std::pow(one_minus, bj - ai - 1.0) *
                   hyp2f1_impl(rest_a[0], rest_a[1], rest_c, x * t, (1.0 - x) + x * one_minus, reverse);
        },
        0.0, 1.0, 1e-14);
    return std::tgamma(bj) * rgamma(ai) * rgamma(bj - ai) * v;
}

void check_unit(double lambda, bool allow_one) {
    if (!(lambda >= 0.0 && (allow_one ? lambda <= 1.0 : lambda < 1.0)))
        throw Error(ErrorCode::domain_error, "cross-ratio outside the unit interval");
}

}  // namespace

double gamma_fn(double x) {
    if (is_nonpositive_integer(x)) throw Error(ErrorCode::domain_error, "gamma pole");
    return std::tgamma(x);
}

double hyp2f1(double a, double b, double c, double x) { return hyp2f1_impl(a, b, c, x, 1.0 - x, false); }
double hyp2f1_reverse(double a, double b, double c, double x) { return hyp2f1_impl(a, b, c, x, 1.0 - x, true); }
double hyp3f2(double a1, double a2, double a3, double b1, double b2, double x) {
    return hyp3f2_impl(a1, a2, a3, b1, b2, x, false);
}
double hyp3f2_reverse(double a1, double a2, double a3, double b1, double b2, double x) {
    return hyp3f2_impl(a1, a2, a3, b1, b2, x, true);
}

double cardy(double lambda) {
    check_unit(lambda, true);
    if (lambda == 0.0) return 0.0;
    const double g = gamma_fn(1.0 / 3.0);
    const double pref = 2.0 * std::numbers::pi * std::numbers::sqrt3 / (g * g * g);
    return pref * std::cbrt(lambda) * hyp2f1(1.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0, lambda);
}

double watts(double lambda) {
    check_unit(lambda, true);
    return std::numbers::sqrt3 / (2.0 * std::numbers::pi) * lambda * hyp3f2(1.0, 1.0, 4.0 / 3.0, 5.0 / 3.0, 2.0, lambda);
}

double cluster_count_limit(double lambda) {
    check_unit(lambda, false);
    return kLogTermConstant * std::log(1.0 / (1.0 - lambda));
}

double expected_clusters(double lambda) {
    check_unit(lambda, false);
    return cardy(lambda) - 0.5 * watts(lambda) + 0.5 * cluster_count_limit(lambda);
}

CrossRatio cross_ratio(const CrossRatioQuad& q) {
    const std::array<Complex, 4> p{q.a1, q.a2, q.a3, q.a4};
    double scale = 0.0;
    for (const auto& z : p) scale = std::max(scale, std::abs(z));
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            if (std::abs(p[i] - p[j]) <= 1e-14 * std::max(scale, 1.0))
                throw Error(ErrorCode::degenerate_points, "cross-ratio of coincident points");
        }
    }
    const Complex raw = (q.a1 - q.a3) * (q.a2 - q.a4) / ((q.a1 - q.a4) * (q.a2 - q.a3));
    return {raw, (1.0 - 1.0 / raw).real()};
}

Complex strip_map_points(Complex l, Complex r, Complex w, Complex z) {
    const Complex m = -((z - l) * (w - r)) / ((z - r) * (w - l));
    return kLogTermConstant * std::log(m) - Complex(0.0, kStripHalfWidth);
}

Complex strip_map(const DomainSpec& spec, Complex z) { return ReferenceMap(spec)(z); }

ReferenceMap::ReferenceMap(const DomainSpec& spec) : spec_(spec) {
    if (!std::holds_alternative<Disc>(spec.shape))
        throw Error(ErrorCode::unsupported_domain, "closed-form strip map needs a disc");
    l_ = resolve_mark(spec.shape, spec.l);
    r_ = resolve_mark(spec.shape, spec.r);
    w_ = resolve_mark(spec.shape, spec.w);
    if (std::abs(l_ - r_) < 1e-12) throw Error(ErrorCode::invalid_argument, "l and r coincide");
}

DirichletField::DirichletField(const DomainSpec& spec, double spacing) : h_(spacing) {
    if (!(spacing > 0.0)) throw Error(ErrorCode::invalid_argument, "grid spacing must be positive");
    const Shape& shape = spec.shape;
    const Complex l = resolve_mark(shape, spec.l);
    const Complex r = resolve_mark(shape, spec.r);
    const Complex w = resolve_mark(shape, spec.w);
    if (std::abs(l - r) < 1e-12) throw Error(ErrorCode::invalid_argument, "l and r coincide");
    const double period = boundary_period(shape);
    const double tl = boundary_parameter(shape, l);
    const double tr = boundary_parameter(shape, r);
    auto wrap = [&](double t) { return t - period * std::floor(t / period); };
    auto on_u = [&](Complex p) { return wrap(boundary_parameter(shape, p) - tr) < wrap(tl - tr); };

    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    if (const auto* d = std::get_if<Disc>(&shape)) {
        x0 = d->center.real() - d->radius;
        x1 = d->center.real() + d->radius;
        y0 = d->center.imag() - d->radius;
        y1 = d->center.imag() + d->radius;
    } else {
        for (const Complex& v : std::get<Polygon>(shape).vertices) {
            x0 = std::min(x0, v.real());
            x1 = std::max(x1, v.real());
            y0 = std::min(y0, v.imag());
            y1 = std::max(y1, v.imag());
        }
    }
    origin_ = Complex(x0 - h_, y0 - h_);
    nx_ = static_cast<int>(std::ceil((x1 - x0) / h_)) + 3;
    ny_ = static_cast<int>(std::ceil((y1 - y0) / h_)) + 3;
    id_.assign(static_cast<std::size_t>(nx_) * ny_, -1);
    std::vector<std::pair<int, int>> nodes;
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            if (shape_contains(shape, node(i, j))) {
                id_[j * nx_ + i] = static_cast<int>(nodes.size());
                nodes.emplace_back(i, j);
            }
        }
    }
    const int n = static_cast<int>(nodes.size());
    if (n == 0) throw Error(ErrorCode::empty_discretization, "no grid node inside the domain");

    // Per node and direction (E, W, N, S): arm length and, at the boundary,
    // the Dirichlet value.
    static constexpr int kDi[4] = {1, -1, 0, 0};
    static constexpr int kDj[4] = {0, 0, 1, -1};
    struct Arm {
        double len;
        int nb;  // neighbor unknown, or -1
        double value;
    };
    std::vector<std::array<Arm, 4>> arms(n);
    for (int k = 0; k < n; ++k) {
        const auto [i, j] = nodes[k];
        const Complex p = node(i, j);
        for (int d = 0; d < 4; ++d) {
            const int ii = i + kDi[d], jj = j + kDj[d];
            const int nb = (ii >= 0 && ii < nx_ && jj >= 0 && jj < ny_) ? id_[jj * nx_ + ii] : -1;
            if (nb >= 0) {
                arms[k][d] = {h_, nb, 0.0};
                continue;
            }
            const Complex dir(kDi[d], kDj[d]);
            double lo = 0.0, hi = h_;
            for (int it = 0; it < 50; ++it) {
                const double mid = 0.5 * (lo + hi);
                (shape_contains(shape, p + mid * dir) ? lo : hi) = mid;
            }
            const double len = std::max(lo, 1e-6 * h_);
            const Complex b = p + len * dir;
            arms[k][d] = {len, -1, on_u(b) ? kStripHalfWidth : -kStripHalfWidth};
        }
    }

    Eigen::SparseMatrix<double> a(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(5 * static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        double diag = 0.0;
        for (int axis = 0; axis < 2; ++axis) {
            const Arm& p = arms[k][2 * axis];
            const Arm& m = arms[k][2 * axis + 1];
            const double cp = 2.0 / (p.len * (p.len + m.len));
            const double cm = 2.0 / (m.len * (p.len + m.len));
            diag -= cp + cm;
            for (const auto& [arm, c] : {std::pair{p, cp}, std::pair{m, cm}}) {
                if (arm.nb >= 0)
                    trip.emplace_back(k, arm.nb, c);
                else
                    rhs[k] -= c * arm.value;
            }
        }
        trip.emplace_back(k, k, diag);
    }
    a.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) throw Error(ErrorCode::solver_diverged, "Dirichlet factorization failed");
    const Eigen::VectorXd phi = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !phi.allFinite())
        throw Error(ErrorCode::solver_diverged, "Dirichlet solve failed");

    // Gradient of Im h from three-point stencils with unequal arms.
    auto arm_value = [&](const Arm& arm) { return arm.nb >= 0 ? phi[arm.nb] : arm.value; };
    std::vector<Complex> grad(n);
    for (int k = 0; k < n; ++k) {
        double g[2];
        for (int axis = 0; axis < 2; ++axis) {
            const Arm& p = arms[k][2 * axis];
            const Arm& m = arms[k][2 * axis + 1];
            const double fp = arm_value(p), fm = arm_value(m), f0 = phi[k];
            g[axis] = (m.len * m.len * (fp - f0) + p.len * p.len * (f0 - fm)) / (p.len * m.len * (p.len + m.len));
        }
        grad[k] = Complex(g[0], g[1]);
    }
    // Re h from psi_x = phi_y, psi_y = -phi_x, trapezoid steps along a BFS tree.
    auto dpsi = [&](int k) { return Complex(grad[k].imag(), -grad[k].real()); };
    std::vector<double> psi(n, 0.0);
    std::vector<std::uint8_t> seen(n, 0);
    Complex centroid(0.0, 0.0);
    for (const auto& [i, j] : nodes) centroid += node(i, j);
    centroid /= static_cast<double>(n);
    int root = 0;
    for (int k = 1; k < n; ++k) {
        if (std::abs(node(nodes[k].first, nodes[k].second) - centroid) <
            std::abs(node(nodes[root].first, nodes[root].second) - centroid))
            root = k;
    }
    std::queue<int> bfs;
    bfs.push(root);
    seen[root] = 1;
    while (!bfs.empty()) {
        const int k = bfs.front();
        bfs.pop();
        for (int d = 0; d < 4; ++d) {
            const int nb = arms[k][d].nb;
            if (nb < 0 || seen[nb]) continue;
            seen[nb] = 1;
            const Complex avg = 0.5 * (dpsi(k) + dpsi(nb));
            psi[nb] = psi[k] + h_ * (avg.real() * kDi[d] + avg.imag() * kDj[d]);
            bfs.push(nb);
        }
    }
    int near_w = root;
    for (int k = 0; k < n; ++k) {
        if (seen[k] && std::abs(node(nodes[k].first, nodes[k].second) - w) <
                           std::abs(node(nodes[near_w].first, nodes[near_w].second) - w))
            near_w = k;
    }
    const Complex off = w - node(nodes[near_w].first, nodes[near_w].second);
    const double psi_w = psi[near_w] + dpsi(near_w).real() * off.real() + dpsi(near_w).imag() * off.imag();
    vals_.resize(n);
    for (int k = 0; k < n; ++k) vals_[k] = Complex(psi[k] - psi_w, phi[k]);
}

Complex DirichletField::value(Complex z) const {
    const Complex t = (z - origin_) / h_;
    const int i = static_cast<int>(std::floor(t.real()));
    const int j = static_cast<int>(std::floor(t.imag()));
    const double fx = t.real() - i, fy = t.imag() - j;
    auto id = [&](int a, int b) { return (a >= 0 && a < nx_ && b >= 0 && b < ny_) ? id_[b * nx_ + a] : -1; };
    const int c00 = id(i, j), c10 = id(i + 1, j), c01 = id(i, j + 1), c11 = id(i + 1, j + 1);
    if (c00 >= 0 && c10 >= 0 && c01 >= 0 && c11 >= 0) {
        return (1 - fx) * (1 - fy) * vals_[c00] + fx * (1 - fy) * vals_[c10] + (1 - fx) * fy * vals_[c01] +
               fx * fy * vals_[c11];
    }
    int best = -1;
    double bd = 1e300;
    for (int b = j - 2; b <= j + 3; ++b) {
        for (int a = i - 2; a <= i + 3; ++a) {
            const int c = id(a, b);
            if (c < 0) continue;
            const double dd = std::abs(node(a, b) - z);
            if (dd < bd) {
                bd = dd;
                best = c;
            }
        }
    }
    if (best < 0) throw Error(ErrorCode::outside_domain, "point outside the solved grid");
    return vals_[best];
}

}  // namespace hexperc
