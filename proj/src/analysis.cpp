#include "hexperc/core/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <queue>
#include <set>
#include <unordered_map>

namespace hexperc {

bool DerivativeEvent::holds(const DiscreteDomain& dom, const SampleValues& v) const {
    const VertexIndex x = e.tail;
    const VertexIndex y = dom.head(e);
    if (y == kNone) throw Error(ErrorCode::outside_domain, "edge not in domain");
    switch (tag) {
        case Tag::l: return v.nl[y] == v.nl[x] + sign;
        case Tag::r: return v.nr[y] == v.nr[x] + sign;
        case Tag::u: return sign > 0 ? (v.qu[y] && !v.qu[x]) : (v.qu[x] && !v.qu[y]);
        case Tag::d: return sign > 0 ? (v.qd[y] && !v.qd[x]) : (v.qd[x] && !v.qd[y]);
    }
    return false;
}

std::string DerivativeEvent::name() const {
    static const char* tags = "lrud";
    return std::string("d") + (sign > 0 ? "+" : "-") + tags[static_cast<int>(tag)];
}

bool is_admissible(const DiscreteDomain& dom, OrientedEdge e) {
    if (!dom.has_edge(e) || !dom.is_interior(e.tail)) return false;
    for (int k = 0; k < 3; ++k) {
        const VertexIndex y = dom.neighbor(e.tail, (e.dir + 2 * k) % 6);
        if (y == kNone || !dom.is_interior(y)) return false;
    }
    return true;
}

std::vector<OrientedEdge> admissible_edges(const DiscreteDomain& dom) {
    std::vector<OrientedEdge> out;
    for (const OrientedEdge& e : dom.oriented_edges()) {
        if (is_admissible(dom, e)) out.push_back(e);
    }
    return out;
}

CrTerms<int> cr_indicators(const DiscreteDomain& dom, const SampleValues& v, OrientedEdge e) {
    const VertexIndex x = e.tail;
    const VertexIndex y = dom.neighbor(x, e.dir);
    const VertexIndex ty = dom.neighbor(x, (e.dir + 2) % 6);
    const VertexIndex tty = dom.neighbor(x, (e.dir + 4) % 6);
    CrTerms<int> t;
    t.lp = v.nl[y] == v.nl[x] + 1;
    t.rm = v.nr[y] == v.nr[x] - 1;
    t.qu_t = v.qu[ty] && !v.qu[x];
    t.qd_t = v.qd[ty] && !v.qd[x];
    t.qu_tt = v.qu[tty] && !v.qu[x];
    t.qd_tt = v.qd[tty] && !v.qd[x];
    return t;
}

CrAccumulator::CrAccumulator(std::vector<OrientedEdge> edges)
    : edges_(std::move(edges)), counts_(edges_.size()), rsum_(edges_.size()), rsq_(edges_.size()) {}

void CrAccumulator::add(const DiscreteDomain& dom, const Coloring& col, SampleEvaluator& eval) {
    add_values(dom, eval.evaluate(col));
}

void CrAccumulator::add_values(const DiscreteDomain& dom, const SampleValues& v) {
    ++n_;
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        const CrTerms<int> t = cr_indicators(dom, v, edges_[k]);
        CrTerms<std::int64_t>& c = counts_[k];
        c.lp += t.lp;
        c.rm += t.rm;
        c.qu_t += t.qu_t;
        c.qd_t += t.qd_t;
        c.qu_tt += t.qu_tt;
        c.qd_tt += t.qd_tt;
        const std::int64_t r = cr_residual(t);
        rsum_[k] += r;
        rsq_[k] += r * r;
    }
}

void CrAccumulator::merge(const CrAccumulator& o) {
    n_ += o.n_;
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        CrTerms<std::int64_t>& c = counts_[k];
        const CrTerms<std::int64_t>& d = o.counts_[k];
        c.lp += d.lp;
        c.rm += d.rm;
        c.qu_t += d.qu_t;
        c.qd_t += d.qd_t;
        c.qu_tt += d.qu_tt;
        c.qd_tt += d.qd_tt;
        rsum_[k] += o.rsum_[k];
        rsq_[k] += o.rsq_[k];
    }
}

std::vector<CrAccumulator::Row> CrAccumulator::rows() const {
    std::vector<Row> out;
    const double n = n_ > 0 ? static_cast<double>(n_) : 1.0;
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        const CrTerms<std::int64_t>& c = counts_[k];
        Row r;
        r.e = edges_[k];
        r.p = {c.lp / n, c.rm / n, c.qu_t / n, c.qd_t / n, c.qu_tt / n, c.qd_tt / n};
        r.residual = rsum_[k] / n;
        r.se = standard_error(n_, rsum_[k], rsq_[k]);
        out.push_back(r);
    }
    return out;
}

void write_residual_csv(std::ostream& os, const DiscreteDomain& dom, const std::vector<CrAccumulator::Row>& rows,
                        const std::string& provenance) {
    os << provenance << '\n' << "ex,ey,dir,residual,se\n";
    char buf[256];
    for (const auto& r : rows) {
        const Complex p = dom.position(r.e.tail);
        std::snprintf(buf, sizeof buf, "%.10g,%.10g,%d,%.10g,%.6g\n", p.real(), p.imag(), r.e.dir, r.residual, r.se);
        os << buf;
    }
}

// ---------------------------------------------------------------------------

namespace {

int direction_to(const DiscreteDomain& dom, VertexIndex a, VertexIndex b) {
    for (int d = 0; d < 6; ++d) {
        if (dom.neighbor(a, d) == b) return d;
    }
    return -1;
}

std::vector<VertexIndex> shortest_path(const DiscreteDomain& dom, VertexIndex a, VertexIndex b) {
    std::unordered_map<VertexIndex, VertexIndex> parent{{a, a}};
    std::queue<VertexIndex> q;
    q.push(a);
    while (!q.empty()) {
        const VertexIndex v = q.front();
        q.pop();
        if (v == b) break;
        for (int d = 0; d < 6; ++d) {
            const VertexIndex w = dom.neighbor(v, d);
            if (w == kNone || parent.count(w)) continue;
            parent[w] = v;
            q.push(w);
        }
    }
    if (!parent.count(b)) throw Error(ErrorCode::contour_leaves_domain, "contour gap cannot be bridged");
    std::vector<VertexIndex> path;
    for (VertexIndex v = b; v != a; v = parent[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;  // excludes a, ends at b
}

bool inside_polygon(const std::vector<Complex>& poly, Complex p) {
    bool in = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Complex a = poly[i], b = poly[j];
        if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
            const double x = a.real() + (p.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
            if (p.real() < x) in = !in;
        }
    }
    return in;
}

std::uint64_t edge_key(VertexIndex a, VertexIndex b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

Complex sample_h(const SampleValues& v, VertexIndex z) {
    return {static_cast<double>(v.nl[z] + v.nr[z]), -kHalfSqrt3 * (v.qu[z] - v.qd[z])};
}

Complex sample_d_plus(const DiscreteDomain& dom, const SampleValues& v, OrientedEdge e) {
    const VertexIndex x = e.tail, y = dom.neighbor(e.tail, e.dir);
    const int l = v.nl[y] == v.nl[x] + 1;
    const int r = v.nr[y] == v.nr[x] + 1;
    const int u = v.qu[y] && !v.qu[x];
    const int d = v.qd[y] && !v.qd[x];
    return {static_cast<double>(l + r), -kHalfSqrt3 * (u - d)};
}

Complex dual_vector(const DiscreteDomain& dom, OrientedEdge e) {
    return Complex(0.0, std::numbers::sqrt3) * dom.displacement(e);
}

}  // namespace

Contour discretize_circle(const DiscreteDomain& dom, Complex center, double radius) {
    if (!(radius > 0.0)) throw Error(ErrorCode::invalid_argument, "contour radius must be positive");
    const int samples = std::max(64, static_cast<int>(std::ceil(16.0 * std::numbers::pi * radius / dom.delta())));
    std::vector<VertexIndex> walk;
    for (int k = 0; k <= samples; ++k) {
        const double t = 2.0 * std::numbers::pi * k / samples;
        const VertexIndex v = dom.nearest_vertex(center + std::polar(radius, t));
        if (v == kNone) throw Error(ErrorCode::contour_leaves_domain, "no lattice vertex near the contour");
        if (!walk.empty() && walk.back() == v) continue;
        if (!walk.empty() && direction_to(dom, walk.back(), v) < 0) {
            for (VertexIndex p : shortest_path(dom, walk.back(), v)) walk.push_back(p);
        } else {
            walk.push_back(v);
        }
    }
    // The walk returns to its start; erase backtracks and loops.
    std::vector<VertexIndex> cyc;
    std::unordered_map<VertexIndex, std::size_t> at;
    for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
        const VertexIndex v = walk[i];
        auto it = at.find(v);
        if (it != at.end()) {
            for (std::size_t j = it->second + 1; j < cyc.size(); ++j) at.erase(cyc[j]);
            cyc.resize(it->second + 1);
            continue;
        }
        at[v] = cyc.size();
        cyc.push_back(v);
    }
    if (walk.back() != walk.front()) throw Error(ErrorCode::internal, "contour walk did not close");
    if (cyc.size() < 6) throw Error(ErrorCode::contour_leaves_domain, "contour collapsed");
    for (VertexIndex v : cyc) {
        if (!dom.is_interior(v)) throw Error(ErrorCode::contour_leaves_domain, "contour touches the boundary");
    }
    double area = 0.0;
    for (std::size_t i = 0; i < cyc.size(); ++i) {
        const Complex a = dom.position(cyc[i]), b = dom.position(cyc[(i + 1) % cyc.size()]);
        area += a.real() * b.imag() - b.real() * a.imag();
    }
    if (area < 0.0) std::reverse(cyc.begin(), cyc.end());
    Contour c;
    c.cycle = std::move(cyc);
    return c;
}

std::vector<OrientedEdge> contour_edges(const DiscreteDomain& dom, const Contour& contour) {
    std::vector<OrientedEdge> out;
    const std::size_t n = contour.cycle.size();
    for (std::size_t i = 0; i < n; ++i) {
        const VertexIndex a = contour.cycle[i], b = contour.cycle[(i + 1) % n];
        const int d = direction_to(dom, a, b);
        if (d < 0) throw Error(ErrorCode::invalid_argument, "contour vertices not adjacent");
        out.push_back({a, d});
    }
    return out;
}

std::vector<OrientedEdge> interior_edges(const DiscreteDomain& dom, const Contour& contour) {
    std::vector<Complex> poly;
    std::set<std::uint64_t> on_contour;
    const std::size_t n = contour.cycle.size();
    for (std::size_t i = 0; i < n; ++i) {
        poly.push_back(dom.position(contour.cycle[i]));
        on_contour.insert(edge_key(contour.cycle[i], contour.cycle[(i + 1) % n]));
    }
    std::vector<OrientedEdge> out;
    for (const OrientedEdge& e : dom.oriented_edges()) {
        const VertexIndex y = dom.head(e);
        if (on_contour.count(edge_key(e.tail, y))) continue;
        if (inside_polygon(poly, 0.5 * (dom.position(e.tail) + dom.position(y)))) out.push_back(e);
    }
    return out;
}

Complex morera_sum(const DiscreteDomain& dom, const Contour& contour, const std::function<Complex(VertexIndex)>& f) {
    Complex s(0.0, 0.0);
    for (const OrientedEdge& e : contour_edges(dom, contour)) {
        s += dom.displacement(e) * 0.5 * (f(e.tail) + f(dom.head(e)));
    }
    return s;
}

Complex morera_sum(const DiscreteDomain& dom, const Contour& contour, const ObservableField& field) {
    return morera_sum(dom, contour, [&](VertexIndex z) { return field.h(z); });
}

Complex interior_dual_sum(const DiscreteDomain& dom, const std::vector<OrientedEdge>& interior,
                          const std::function<Complex(OrientedEdge)>& d_plus) {
    Complex s(0.0, 0.0);
    for (const OrientedEdge& e : interior) s += dual_vector(dom, e) * d_plus(e);
    return s;
}

Complex Eisenstein::value() const {
    return Complex(static_cast<double>(a), 0.0) + static_cast<double>(b) * unit_direction(1);
}

Eisenstein eisenstein_direction(int dir) {
    static constexpr Eisenstein kDirs[6] = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};
    return kDirs[((dir % 6) + 6) % 6];
}

Eisenstein geometric_identity_term(OrientedEdge e) {
    const Eisenstein i_sqrt3{-1, 2};  // 2 omega - 1
    auto dual = [&](int dir) { return i_sqrt3 * eisenstein_direction(dir); };
    return i_sqrt3 * dual(e.dir) + dual(e.dir + 4) - dual(e.dir + 2);
}

IdentitySum geometric_identity_sum(const DiscreteDomain& dom, const std::vector<OrientedEdge>& edges) {
    IdentitySum s;
    for (const OrientedEdge& e : edges) {
        if (!dom.is_interior(e.tail)) continue;
        const Eisenstein t = geometric_identity_term(e);
        s.total = s.total + t;
        ++s.edges;
        if (!(t == Eisenstein{})) ++s.nonzero_terms;
    }
    return s;
}

void MoreraAccumulator::Sums::add(Complex z) {
    re += z.real();
    im += z.imag();
    re2 += z.real() * z.real();
    im2 += z.imag() * z.imag();
    reim += z.real() * z.imag();
}

void MoreraAccumulator::Sums::merge(const Sums& o) {
    re += o.re;
    im += o.im;
    re2 += o.re2;
    im2 += o.im2;
    reim += o.reim;
}

MoreraAccumulator::MoreraAccumulator(const DiscreteDomain& dom, const Contour& contour)
    : boundary_(contour_edges(dom, contour)), interior_(interior_edges(dom, contour)) {}

void MoreraAccumulator::add(const DiscreteDomain& dom, const Coloring& col, SampleEvaluator& eval) {
    add_values(dom, eval.evaluate(col));
}

void MoreraAccumulator::add_values(const DiscreteDomain& dom, const SampleValues& v) {
    ++n_;
    Complex m(0.0, 0.0);
    for (const OrientedEdge& e : boundary_) {
        m += dom.displacement(e) * 0.5 * (sample_h(v, e.tail) + sample_h(v, dom.head(e)));
    }
    Complex d(0.0, 0.0);
    for (const OrientedEdge& e : interior_) d += dual_vector(dom, e) * sample_d_plus(dom, v, e);
    m_.add(m);
    d_.add(d);
}

void MoreraAccumulator::merge(const MoreraAccumulator& o) {
    n_ += o.n_;
    m_.merge(o.m_);
    d_.merge(o.d_);
}

MoreraAccumulator::Summary MoreraAccumulator::summary() const {
    Summary s;
    s.samples = n_;
    if (n_ == 0) return s;
    const double n = static_cast<double>(n_);
    s.morera = {m_.re / n, m_.im / n};
    s.dual = {d_.re / n, d_.im / n};
    s.morera_abs = std::abs(s.morera);
    s.difference_abs = std::abs(s.morera - s.dual);
    if (n_ > 1) {
        const double vr = (m_.re2 - m_.re * m_.re / n) / (n - 1);
        const double vi = (m_.im2 - m_.im * m_.im / n) / (n - 1);
        const double cv = (m_.reim - m_.re * m_.im / n) / (n - 1);
        if (s.morera_abs > 0.0) {
            const double cr = s.morera.real() / s.morera_abs, ci = s.morera.imag() / s.morera_abs;
            s.morera_abs_se = std::sqrt(std::max(0.0, cr * cr * vr + ci * ci * vi + 2 * cr * ci * cv) / n);
        } else {
            s.morera_abs_se = std::sqrt(std::max(0.0, vr + vi) / n);
        }
    }
    return s;
}

// ---------------------------------------------------------------------------

ConvergenceRow compare_to_reference(const DiscreteDomain& dom, const ObservableField& field,
                                    const std::function<Complex(Complex)>& h, Complex center, double radius) {
    ConvergenceRow row;
    row.delta = dom.delta();
    row.samples = field.samples();
    VertexIndex nearest = kNone;
    double nearest_d = 1e300;
    for (VertexIndex z = 0; z < dom.vertex_count(); ++z) {
        const Complex p = dom.position(z);
        const double dc = std::abs(p - center);
        if (dc < nearest_d) {
            nearest_d = dc;
            nearest = z;
        }
        if (dc > radius) continue;
        ++row.probes;
        const Complex diff = field.h(z) - h(p);
        const double dist = std::abs(diff);
        if (dist > row.supdist || row.probes == 1) {
            const Complex se = field.h_se(z);
            row.supdist = dist;
            row.se = dist > 0.0 ? std::hypot(diff.real() * se.real(), diff.imag() * se.imag()) / dist
                                : std::abs(se);
        }
    }
    if (nearest != kNone) {
        row.center_value = field.h(nearest);
        row.center_se = field.h_se(nearest);
    }
    return row;
}

std::vector<ConvergenceRow> convergence_report(const std::vector<DomainSpec>& specs,
                                               const std::function<Complex(Complex)>& h, Complex center,
                                               double radius, std::uint64_t samples, std::uint64_t seed,
                                               int workers) {
    std::vector<ConvergenceRow> rows;
    for (const DomainSpec& s : specs) {
        const DiscreteDomain dom = discretize(s);
        const ObservableField f = accumulate_field(dom, seed, 0, samples, workers);
        rows.push_back(compare_to_reference(dom, f, h, center, radius));
    }
    return rows;
}

bool decreasing_within(const std::vector<double>& v, const std::vector<double>& se, double k) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[i - 1] + k * std::hypot(se[i], se[i - 1])) return false;
    }
    return true;
}

bool strictly_decreasing_within(const std::vector<double>& v, const std::vector<double>& se, double k) {
    if (v.size() < 2) return true;
    return decreasing_within(v, se, k) && v.back() < v.front();
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows, const std::string& provenance) {
    os << provenance << '\n' << "delta,nsamples,supdist,se\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.10g,%lld,%.10g,%.6g\n", r.delta, static_cast<long long>(r.samples),
                      r.supdist, r.se);
        os << buf;
    }
}

}  // namespace hexperc
