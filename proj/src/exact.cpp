#include "hexperc/core/exact.hpp"

#include "hexperc/core/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <thread>
#include <unordered_set>

#include <json.hpp>

namespace hexperc {

double ExactProb::value() const { return std::ldexp(static_cast<double>(num), -bits); }

std::string ExactProb::str() const { return std::to_string(num) + "/2^" + std::to_string(bits); }

SubsetTable::SubsetTable(int bits) : bits_(bits) {
    if (bits < 0 || bits > kMaxSizeBound + 8) throw Error(ErrorCode::too_large, "subset table too large");
    const std::size_t words = bits >= 6 ? (std::size_t{1} << (bits - 6)) : 1;
    w_.assign(words, 0);
}

void SubsetTable::close_upward() {
    static constexpr std::uint64_t kLow[6] = {0x5555555555555555ull, 0x3333333333333333ull,
                                              0x0F0F0F0F0F0F0F0Full, 0x00FF00FF00FF00FFull,
                                              0x0000FFFF0000FFFFull, 0x00000000FFFFFFFFull};
    for (int i = 0; i < std::min(bits_, 6); ++i) {
        for (auto& x : w_) x |= (x & kLow[i]) << (1u << i);
    }
    for (int i = 6; i < bits_; ++i) {
        const std::size_t step = std::size_t{1} << (i - 6);
        for (std::size_t j = 0; j < w_.size(); ++j) {
            if (!(j & step)) w_[j | step] |= w_[j];
        }
    }
}

SubsetTable SubsetTable::complemented_index() const {
    SubsetTable out(bits_);
    if (bits_ >= 6) {
        const std::size_t n = w_.size();
        for (std::size_t j = 0; j < n; ++j) {
            std::uint64_t x = w_[n - 1 - j];
            // Bit reversal of a 64-bit word.
            x = ((x >> 1) & 0x5555555555555555ull) | ((x & 0x5555555555555555ull) << 1);
            x = ((x >> 2) & 0x3333333333333333ull) | ((x & 0x3333333333333333ull) << 2);
            x = ((x >> 4) & 0x0F0F0F0F0F0F0F0Full) | ((x & 0x0F0F0F0F0F0F0F0Full) << 4);
            x = ((x >> 8) & 0x00FF00FF00FF00FFull) | ((x & 0x00FF00FF00FF00FFull) << 8);
            x = ((x >> 16) & 0x0000FFFF0000FFFFull) | ((x & 0x0000FFFF0000FFFFull) << 16);
            x = (x >> 32) | (x << 32);
            out.w_[j] = x;
        }
    } else {
        const std::uint64_t full = (std::uint64_t{1} << bits_) - 1;
        for (std::uint64_t s = 0; s <= full; ++s) {
            if (test(full ^ s)) out.set(s);
        }
    }
    return out;
}

SubsetTable& SubsetTable::operator&=(const SubsetTable& o) {
    for (std::size_t j = 0; j < w_.size(); ++j) w_[j] &= o.w_[j];
    return *this;
}

SubsetTable& SubsetTable::operator|=(const SubsetTable& o) {
    for (std::size_t j = 0; j < w_.size(); ++j) w_[j] |= o.w_[j];
    return *this;
}

std::int64_t SubsetTable::count() const {
    std::int64_t c = 0;
    if (bits_ < 6) {
        const std::uint64_t valid = (std::uint64_t{1} << (std::uint64_t{1} << bits_)) - 1;
        return std::popcount(w_[0] & valid);
    }
    for (auto x : w_) c += std::popcount(x);
    return c;
}

namespace {

bool touches(const DiscreteDomain& dom, FaceIndex f, Arc arc) {
    return arc == Arc::u ? dom.face_touches_u(f) : dom.face_touches_d(f);
}

void require_small(const DiscreteDomain& dom) {
    if (dom.face_count() > kMaxSizeBound) throw Error(ErrorCode::too_large, "domain too large for enumeration");
}

template <class Fn>
void simple_paths(const DiscreteDomain& dom, FaceIndex start, Fn&& visit) {
    // visit(mask, last_face) returns true to keep extending past last_face.
    struct Frame {
        FaceIndex face;
        int side;
    };
    std::vector<Frame> stack{{start, 0}};
    std::uint64_t mask = std::uint64_t{1} << start;
    if (!visit(mask, start)) return;
    while (!stack.empty()) {
        Frame& top = stack.back();
        if (top.side == 6) {
            mask &= ~(std::uint64_t{1} << top.face);
            stack.pop_back();
            continue;
        }
        const FaceIndex g = dom.face_neighbors(top.face)[top.side++];
        if (g == kNone || (mask >> g) & 1u) continue;
        mask |= std::uint64_t{1} << g;
        if (visit(mask, g)) {
            stack.push_back({g, 0});
        } else {
            mask &= ~(std::uint64_t{1} << g);
        }
    }
}

// Faces reachable from m's incident faces without entering mask.
std::uint64_t component_from(const DiscreteDomain& dom, std::uint64_t mask, VertexIndex m) {
    std::uint64_t seen = 0;
    std::vector<FaceIndex> stack;
    for (int d = 0; d < 6; ++d) {
        const FaceIndex f = dom.face_at(m, d);
        if (f != kNone && !((mask >> f) & 1u) && !((seen >> f) & 1u)) {
            seen |= std::uint64_t{1} << f;
            stack.push_back(f);
        }
    }
    while (!stack.empty()) {
        const FaceIndex f = stack.back();
        stack.pop_back();
        for (FaceIndex g : dom.face_neighbors(f)) {
            if (g == kNone || ((mask | seen) >> g) & 1u) continue;
            seen |= std::uint64_t{1} << g;
            stack.push_back(g);
        }
    }
    return seen;
}

std::uint64_t incident_mask(const DiscreteDomain& dom, VertexIndex z) {
    std::uint64_t m = 0;
    for (int d = 0; d < 6; ++d) {
        const FaceIndex f = dom.face_at(z, d);
        if (f != kNone) m |= std::uint64_t{1} << f;
    }
    return m;
}

}  // namespace

bool separates(const DiscreteDomain& dom, std::uint64_t mask, VertexIndex z, VertexIndex m) {
    require_small(dom);
    return (component_from(dom, mask, m) & incident_mask(dom, z)) == 0;
}

std::vector<std::uint64_t> arc_witnesses(const DiscreteDomain& dom, FaceIndex f, Arc arc) {
    require_small(dom);
    std::unordered_set<std::uint64_t> out;
    simple_paths(dom, f, [&](std::uint64_t mask, FaceIndex last) {
        if (touches(dom, last, arc)) {
            out.insert(mask);
            return false;
        }
        return true;
    });
    std::vector<std::uint64_t> v(out.begin(), out.end());
    std::sort(v.begin(), v.end());
    return v;
}

const std::vector<std::uint64_t>& WitnessCache::get(FaceIndex f, bool u, bool d) {
    const auto key = std::make_tuple(f, u, d);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<std::uint64_t> out;
    if (u && d) {
        const auto& pu = get(f, true, false);
        const auto& pd = get(f, false, true);
        std::unordered_set<std::uint64_t> s;
        for (auto a : pu) {
            for (auto b : pd) s.insert(a | b);
        }
        out.assign(s.begin(), s.end());
        std::sort(out.begin(), out.end());
    } else if (u) {
        out = arc_witnesses(*dom_, f, Arc::u);
    } else if (d) {
        out = arc_witnesses(*dom_, f, Arc::d);
    } else {
        out = {std::uint64_t{1} << f};
    }
    return cache_.emplace(key, std::move(out)).first->second;
}

std::string TripleEvent::name() const {
    auto one = [](char face, const FaceReq& q) {
        std::string s(1, face);
        const char c = q.color == Color::white ? 'w' : 'b';
        if (q.d) s += std::string("_") + c;
        if (q.u) s += std::string("^") + c;
        if (!q.u && !q.d) s += std::string("[") + c + "]";
        return s;
    };
    return one('I', i) + " o " + one('L', l) + " o " + one('R', r);
}

TripleFaces triple_faces(const DiscreteDomain& dom, OrientedEdge e) {
    TripleFaces t;
    t.l = dom.face_at(e.tail, (e.dir + 1) % 6);
    t.r = dom.face_at(e.tail, (e.dir + 5) % 6);
    t.i = dom.face_at(e.tail, (e.dir + 3) % 6);
    const VertexIndex y = dom.neighbor(e.tail, e.dir);
    if (y != kNone) t.t = dom.face_at(y, e.dir);
    return t;
}

SubsetTable triple_event_table(WitnessCache& cache, const TripleFaces& faces, const TripleEvent& ev) {
    const DiscreteDomain& dom = cache.domain();
    require_small(dom);
    const int bits = dom.face_count();
    const std::array<std::pair<FaceIndex, FaceReq>, 3> parts{
        {{faces.i, ev.i}, {faces.l, ev.l}, {faces.r, ev.r}}};
    for (const auto& p : parts) {
        if (p.first == kNone) throw Error(ErrorCode::outside_domain, "triple event needs all three faces");
    }
    SubsetTable result(bits);
    bool first = true;
    for (Color color : {Color::white, Color::black}) {
        std::vector<const std::vector<std::uint64_t>*> lists;
        for (const auto& p : parts) {
            if (p.second.color == color) lists.push_back(&cache.get(p.first, p.second.u, p.second.d));
        }
        if (lists.empty()) continue;
        SubsetTable t(bits);
        if (lists.size() == 1) {
            for (auto a : *lists[0]) t.set(a);
        } else if (lists.size() == 2) {
            for (auto a : *lists[0]) {
                for (auto b : *lists[1]) {
                    if (!(a & b)) t.set(a | b);
                }
            }
        } else {
            std::unordered_set<std::uint64_t> ab;
            for (auto a : *lists[0]) {
                for (auto b : *lists[1]) {
                    if (!(a & b)) ab.insert(a | b);
                }
            }
            for (auto a : ab) {
                for (auto c : *lists[2]) {
                    if (!(a & c)) t.set(a | c);
                }
            }
        }
        t.close_upward();
        // Tables are indexed by the white set; black witnesses live in its complement.
        if (color == Color::black) t = t.complemented_index();
        if (first) {
            result = std::move(t);
            first = false;
        } else {
            result &= t;
        }
    }
    return result;
}

std::uint64_t wall_mask(const ClusterLabels& labels, bool for_u) {
    std::uint64_t m = 0;
    for (std::size_t f = 0; f < labels.label.size() && f < 64; ++f) {
        const int c = labels.label[f];
        if (c == kNone) continue;
        if (for_u ? labels.clusters[c].touches_u : labels.clusters[c].touches_d) m |= std::uint64_t{1} << f;
    }
    return m;
}

namespace {

double winding(const std::vector<Complex>& poly, Complex p) {
    double w = 0.0;
    for (std::size_t k = 0; k < poly.size(); ++k) {
        w += std::arg((poly[(k + 1) % poly.size()] - p) / (poly[k] - p));
    }
    return w;
}

}  // namespace

DefinitionalQ::DefinitionalQ(const DiscreteDomain& dom, bool for_u) {
    require_small(dom);
    const int nf = dom.face_count();
    const int nv = dom.vertex_count();
    tables_.assign(nv, SubsetTable(nf));
    const auto& cyc = dom.boundary_cycle();
    const int n = static_cast<int>(cyc.size());
    // Q^u paths end on d, Q^d paths on u.
    auto on_end = [&](int i) { return dom.boundary_edge_on_u(i) != for_u; };
    std::vector<std::vector<int>> end_sides(nf);
    for (int i = 0; i < n; ++i) {
        if (on_end(i)) end_sides[dom.boundary_edge_face(i)].push_back(i);
    }
    const int start = dom.boundary_position(for_u ? dom.l() : dom.r());
    auto offset = [&](int i) { return ((i - start) % n + n) % n; };
    auto midpoint = [&](int i) { return 0.5 * (dom.position(cyc[i]) + dom.position(cyc[(i + 1) % n])); };

    std::vector<FaceIndex> path;
    std::vector<Complex> poly;
    std::vector<std::uint8_t> on_arc(n);
    auto pockets = [&](std::uint64_t mask) {
        const FaceIndex f0 = path.front(), f1 = path.back();
        for (int a : end_sides[f0]) {
            for (int b : end_sides[f1]) {
                if (a == b) continue;
                poly.assign(1, midpoint(a));
                for (std::size_t j = 0; j < path.size(); ++j) {
                    poly.push_back(dom.center(path[j]));
                    if (j + 1 < path.size()) poly.push_back(0.5 * (dom.center(path[j]) + dom.center(path[j + 1])));
                }
                poly.push_back(midpoint(b));
                std::fill(on_arc.begin(), on_arc.end(), 0);
                if (offset(a) < offset(b)) {
                    for (int p = b; p != a; p = (p - 1 + n) % n) {
                        poly.push_back(dom.position(cyc[p]));
                        on_arc[p] = 1;
                    }
                } else {
                    for (int p = (b + 1) % n;; p = (p + 1) % n) {
                        poly.push_back(dom.position(cyc[p]));
                        on_arc[p] = 1;
                        if (p == a) break;
                    }
                }
                for (VertexIndex z = 0; z < nv; ++z) {
                    const int bp = dom.boundary_position(z);
                    const bool in = (!dom.is_interior(z) && bp >= 0) ? on_arc[bp] != 0
                                                                       : std::abs(winding(poly, dom.position(z))) > 3.0;
                    if (in) tables_[z].set(mask);
                }
                ++paths_;
            }
        }
    };
    for (FaceIndex s0 = 0; s0 < nf; ++s0) {
        if (end_sides[s0].empty()) continue;
        path.assign(1, s0);
        struct Frame {
            FaceIndex face;
            int side;
        };
        std::vector<Frame> stack{{s0, 0}};
        std::uint64_t mask = std::uint64_t{1} << s0;
        pockets(mask);
        while (!stack.empty()) {
            Frame& top = stack.back();
            if (top.side == 6) {
                mask &= ~(std::uint64_t{1} << top.face);
                stack.pop_back();
                path.pop_back();
                continue;
            }
            const FaceIndex g = dom.face_neighbors(top.face)[top.side++];
            if (g == kNone || (mask >> g) & 1u) continue;
            mask |= std::uint64_t{1} << g;
            path.push_back(g);
            stack.push_back({g, 0});
            if (!end_sides[g].empty()) pockets(mask);
        }
    }
    for (auto& t : tables_) t.close_upward();
}

// ---------------------------------------------------------------------------

namespace {

constexpr FaceReq W(bool u, bool d) { return {Color::white, u, d}; }
constexpr FaceReq B(bool u, bool d) { return {Color::black, u, d}; }

enum Ev {
    kBr, kCr, kDr, kBl, kCl, kDl, kA, kB, kC, kD, kE, kF,
    kYu1, kZu1, kWu1, kYu2, kZu2, kWu2, kYd1, kZd1, kWd1, kYd2, kZd2, kWd2, kEvCount
};

}  // namespace

const std::vector<std::string>& expansion_event_names() {
    static const std::vector<std::string> names = {
        "Br", "Cr", "Dr", "Bl", "Cl", "Dl", "A", "B", "C", "D", "E", "F",
        "Yu1", "Zu1", "Wu1", "Yu2", "Zu2", "Wu2", "Yd1", "Zd1", "Wd1", "Yd2", "Zd2", "Wd2"};
    return names;
}

const std::vector<TripleEvent>& expansion_events() {
    // (I, L, R); FaceReq(u, d).
    static const std::vector<TripleEvent> evs = {
        {B(1, 1), W(0, 1), W(1, 0)},  // Br
        {B(1, 1), W(0, 1), W(1, 1)},  // Cr
        {B(1, 1), W(1, 1), W(1, 0)},  // Dr
        {B(1, 1), W(1, 0), W(0, 1)},  // Bl
        {B(1, 1), W(1, 1), W(0, 1)},  // Cl
        {B(1, 1), B(1, 0), W(1, 1)},  // Dl
        {W(1, 1), B(0, 1), W(1, 1)},  // A
        {W(1, 1), W(1, 1), B(1, 0)},  // B
        {W(1, 1), W(1, 1), B(0, 1)},  // C
        {W(1, 1), B(1, 0), W(1, 1)},  // D
        {B(0, 1), W(1, 1), W(1, 1)},  // E
        {B(1, 0), W(1, 1), W(1, 1)},  // F
        {W(1, 1), W(1, 1), B(1, 0)},  // Yu1
        {W(1, 1), W(0, 1), B(1, 1)},  // Zu1
        {W(0, 1), W(1, 1), B(1, 1)},  // Wu1
        {W(1, 1), B(1, 0), W(1, 1)},  // Yu2
        {W(1, 1), B(1, 1), W(0, 1)},  // Zu2
        {W(0, 1), B(1, 1), W(1, 1)},  // Wu2
        {W(1, 1), W(1, 1), B(0, 1)},  // Yd1
        {W(1, 1), W(1, 0), B(1, 1)},  // Zd1
        {W(1, 0), W(1, 1), B(1, 1)},  // Wd1
        {W(1, 1), B(0, 1), W(1, 1)},  // Yd2
        {W(1, 1), B(1, 1), W(1, 0)},  // Zd2
        {W(1, 0), B(1, 1), W(1, 1)},  // Wd2
    };
    return evs;
}

TripleEvent negated(const TripleEvent& ev) {
    auto flip = [](FaceReq q) {
        q.color = q.color == Color::white ? Color::black : Color::white;
        return q;
    };
    return {flip(ev.i), flip(ev.l), flip(ev.r)};
}

ExpansionTables::ExpansionTables(WitnessCache& cache, OrientedEdge e, int size_bound) : e_(e) {
    const DiscreteDomain& dom = cache.domain();
    if (dom.face_count() > std::min(size_bound, kMaxSizeBound)) {
        throw Error(ErrorCode::too_large, "domain exceeds the enumeration size bound");
    }
    const TripleFaces tf = triple_faces(dom, e);
    for (const TripleEvent& ev : expansion_events()) {
        tables_.push_back(triple_event_table(cache, tf, ev));
        counts_.push_back(tables_.back().count());
    }
}

std::vector<std::uint8_t> ExpansionTables::indicators(const Coloring& col) const {
    std::uint64_t mask = 0;
    for (int f = 0; f < col.size(); ++f) {
        if (col.is_white(f)) mask |= std::uint64_t{1} << f;
    }
    std::vector<std::uint8_t> out;
    for (const auto& t : tables_) out.push_back(t.test(mask));
    return out;
}

std::vector<std::uint8_t> six_term_expansions(const DiscreteDomain& dom, OrientedEdge e, const Coloring& col,
                                              int size_bound) {
    if (dom.face_count() > std::min(size_bound, kMaxSizeBound)) {
        throw Error(ErrorCode::too_large, "domain exceeds the enumeration size bound");
    }
    WitnessCache cache(dom);
    return ExpansionTables(cache, e, size_bound).indicators(col);
}

// ---------------------------------------------------------------------------

const char* derivative_slot_name(int slot) {
    static const char* names[kSlotCount] = {"d+l", "d-l", "d+r", "d-r", "d+u", "d-u", "d+d", "d-d"};
    return slot >= 0 && slot < kSlotCount ? names[slot] : "?";
}

namespace {

struct EnumAcc {
    std::vector<std::array<std::int64_t, 4>> vsum;    // nl, nr, qu, qd
    std::vector<std::array<std::int64_t, 2>> qdiff;   // component reading vs fast, u and d
    std::vector<std::array<std::int64_t, kSlotCount>> esum;
    std::vector<std::int64_t> pointwise;
    std::int64_t max_jump = 0;
};

struct EdgeTau {
    std::size_t index;  // into the oriented edge list
    VertexIndex y, ty, tty;
};

}  // namespace

ExactReport enumerate(const DiscreteDomain& dom, const EnumerateOptions& opt) {
    const int nf = dom.face_count();
    const int bound = std::min(opt.size_bound, kMaxSizeBound);
    if (nf > bound) throw Error(ErrorCode::too_large, "domain exceeds the enumeration size bound");
    const int nv = dom.vertex_count();
    const std::vector<OrientedEdge> edges = dom.oriented_edges();
    std::vector<std::size_t> adm;
    for (std::size_t k = 0; k < edges.size(); ++k) {
        if (is_admissible(dom, edges[k])) adm.push_back(k);
    }
    WitnessCache cache(dom);
    std::vector<ExpansionTables> tables;
    if (opt.expansions) {
        for (std::size_t k : adm) tables.emplace_back(cache, edges[k], bound);
    }

    const std::uint64_t total = std::uint64_t{1} << nf;
    const int workers = std::max(1, std::min<int>(opt.workers, static_cast<int>(std::min<std::uint64_t>(total, 64))));
    std::vector<EnumAcc> parts(workers);
    auto body = [&](int w) {
        EnumAcc& acc = parts[w];
        acc.vsum.assign(nv, {});
        acc.qdiff.assign(nv, {});
        acc.esum.assign(edges.size(), {});
        acc.pointwise.assign(adm.size(), 0);
        SampleEvaluator eval(dom);
        std::vector<std::uint8_t> cu, cd;
        const std::uint64_t lo = total * w / workers, hi = total * (w + 1) / workers;
        for (std::uint64_t s = lo; s < hi; ++s) {
            const SampleValues& v = eval.evaluate(Coloring::from_mask(nf, s));
            component_q_field(dom, eval.labels(), true, cu);
            component_q_field(dom, eval.labels(), false, cd);
            for (VertexIndex z = 0; z < nv; ++z) {
                auto& a = acc.vsum[z];
                a[0] += v.nl[z];
                a[1] += v.nr[z];
                a[2] += v.qu[z];
                a[3] += v.qd[z];
                acc.qdiff[z][0] += cu[z] != v.qu[z];
                acc.qdiff[z][1] += cd[z] != v.qd[z];
            }
            for (std::size_t k = 0; k < edges.size(); ++k) {
                const VertexIndex x = edges[k].tail, y = dom.head(edges[k]);
                auto& a = acc.esum[k];
                const int dl = v.nl[y] - v.nl[x], dr = v.nr[y] - v.nr[x];
                acc.max_jump = std::max<std::int64_t>(acc.max_jump, std::max(std::abs(dl), std::abs(dr)));
                a[kLPlus] += dl == 1;
                a[kLMinus] += dl == -1;
                a[kRPlus] += dr == 1;
                a[kRMinus] += dr == -1;
                a[kUPlus] += v.qu[y] && !v.qu[x];
                a[kUMinus] += v.qu[x] && !v.qu[y];
                a[kDPlus] += v.qd[y] && !v.qd[x];
                a[kDMinus] += v.qd[x] && !v.qd[y];
            }
            for (std::size_t j = 0; j < tables.size(); ++j) {
                const ExpansionTables& t = tables[j];
                const CrTerms<int> c = cr_indicators(dom, v, t.edge());
                auto one = [&](int k) { return t.table(k).test(s); };
                auto any = [&](int k) { return one(k) || one(k + 1) || one(k + 2); };
                const bool ok = c.lp == one(kBl) && c.rm == one(kBr) && c.qu_t == any(kYu1) &&
                                c.qu_tt == any(kYu2) && c.qd_t == any(kYd1) && c.qd_tt == any(kYd2);
                acc.pointwise[j] += !ok;
            }
        }
    };
    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(body, w);
        for (auto& t : pool) t.join();
    }
    EnumAcc& acc = parts[0];
    for (int w = 1; w < workers; ++w) {
        for (VertexIndex z = 0; z < nv; ++z) {
            for (int i = 0; i < 4; ++i) acc.vsum[z][i] += parts[w].vsum[z][i];
            for (int i = 0; i < 2; ++i) acc.qdiff[z][i] += parts[w].qdiff[z][i];
        }
        for (std::size_t k = 0; k < edges.size(); ++k) {
            for (int i = 0; i < kSlotCount; ++i) acc.esum[k][i] += parts[w].esum[k][i];
        }
        for (std::size_t j = 0; j < adm.size(); ++j) acc.pointwise[j] += parts[w].pointwise[j];
        acc.max_jump = std::max(acc.max_jump, parts[w].max_jump);
    }

    auto P = [&](std::int64_t n) { return ExactProb{n, nf}; };
    ExactReport rep;
    rep.faces = nf;
    rep.max_jump = acc.max_jump;
    rep.hl_equals_hr = true;
    for (VertexIndex z = 0; z < nv; ++z) {
        ExactVertex ev;
        ev.hl = P(acc.vsum[z][0]);
        ev.hr = P(acc.vsum[z][1]);
        ev.hu = P(acc.vsum[z][2]);
        ev.hd = P(acc.vsum[z][3]);
        ev.q_reading_disagreements_u = acc.qdiff[z][0];
        ev.q_reading_disagreements_d = acc.qdiff[z][1];
        rep.q_reading_disagreements += acc.qdiff[z][0] + acc.qdiff[z][1];
        if (!(ev.hl == ev.hr)) {
            rep.hl_equals_hr = false;
            ++rep.hl_hr_mismatched_vertices;
        }
        rep.vertices.push_back(ev);
    }
    std::map<OrientedEdge, std::size_t> at;
    for (std::size_t k = 0; k < edges.size(); ++k) {
        ExactEdge ee;
        ee.e = edges[k];
        for (int i = 0; i < kSlotCount; ++i) ee.events[i] = P(acc.esum[k][i]);
        at[edges[k]] = k;
        rep.edges.push_back(ee);
    }
    rep.admissible_edges = static_cast<int>(adm.size());
    rep.cr_all_zero = true;
    rep.chains_hold = true;
    rep.printed_chains_hold = true;
    rep.negation_symmetric = true;
    for (std::size_t j = 0; j < adm.size(); ++j) {
        ExactEdge& ee = rep.edges[adm[j]];
        ee.admissible = true;
        const OrientedEdge e = ee.e;
        const std::size_t kt = at.at({e.tail, (e.dir + 2) % 6});
        const std::size_t ktt = at.at({e.tail, (e.dir + 4) % 6});
        CrTerms<std::int64_t> t;
        t.lp = acc.esum[adm[j]][kLPlus];
        t.rm = acc.esum[adm[j]][kRMinus];
        t.qu_t = acc.esum[kt][kUPlus];
        t.qd_t = acc.esum[kt][kDPlus];
        t.qu_tt = acc.esum[ktt][kUPlus];
        t.qd_tt = acc.esum[ktt][kDPlus];
        ee.cr_terms = {P(t.lp), P(t.rm), P(t.qu_t), P(t.qd_t), P(t.qu_tt), P(t.qd_tt)};
        ee.cr_residual = P(cr_residual(t));
        if (ee.cr_residual.num != 0) rep.cr_all_zero = false;
        if (tables.empty()) continue;
        ee.pointwise_mismatches = acc.pointwise[j];
        rep.pointwise_mismatches += acc.pointwise[j];
        const ExpansionTables& tb = tables[j];
        auto c = [&](int k) { return tb.count(k); };
        auto add = [&](const std::string& name, std::int64_t lhs, std::int64_t rhs, bool printed = false) {
            ee.chains.push_back({name, P(lhs), P(rhs), lhs == rhs, printed});
            if (lhs != rhs) (printed ? rep.printed_chains_hold : rep.chains_hold) = false;
        };
        add("d-H^r = Br", t.rm, c(kBr));
        add("Br = Cr + Dr", c(kBr), c(kCr) + c(kDr));
        add("Cr = A", c(kCr), c(kA));
        add("Dr = B", c(kDr), c(kB));
        add("d+H^l = Bl", t.lp, c(kBl));
        add("Bl = Cl + Dl", c(kBl), c(kCl) + c(kDl));
        add("Cl = C", c(kCl), c(kC));
        add("Dl = D", c(kDl), c(kD));
        add("d+(tau e)H^u = Yu1 + Zu1 + Wu1", t.qu_t, c(kYu1) + c(kZu1) + c(kWu1));
        add("Yu1 = B", c(kYu1), c(kB));
        add("Zu1 = A", c(kZu1), c(kA));
        add("Wu1 = E", c(kWu1), c(kE));
        add("d+(tau2 e)H^u = Yu2 + Zu2 + Wu2", t.qu_tt, c(kYu2) + c(kZu2) + c(kWu2));
        add("Yu2 = D", c(kYu2), c(kD));
        add("Zu2 = C", c(kZu2), c(kC));
        add("Wu2 = E", c(kWu2), c(kE));
        add("d+(tau e)H^d = Yd1 + Zd1 + Wd1", t.qd_t, c(kYd1) + c(kZd1) + c(kWd1));
        add("Yd1 = C", c(kYd1), c(kC));
        add("Zd1 = D", c(kZd1), c(kD));
        add("Wd1 = F", c(kWd1), c(kF));
        add("d+(tau2 e)H^d = Yd2 + Zd2 + Wd2", t.qd_tt, c(kYd2) + c(kZd2) + c(kWd2));
        add("Yd2 = A", c(kYd2), c(kA));
        add("Zd2 = B", c(kZd2), c(kB));
        add("Wd2 = F", c(kWd2), c(kF));
        add("printed: Wd1 = E", c(kWd1), c(kE), true);
        add("printed: Wu2 = F", c(kWu2), c(kF), true);
        add("(d+H^l - d-H^r) = (C + D) - (A + B)", t.lp - t.rm, c(kC) + c(kD) - c(kA) - c(kB));
        const TripleFaces tf = triple_faces(dom, e);
        for (int k = 0; k < kEvCount; ++k) {
            if (triple_event_table(cache, tf, negated(expansion_events()[k])).count() != c(k)) {
                rep.negation_symmetric = false;
            }
        }
    }
    // Pointwise expansion agreement is part of chain validity.
    if (rep.pointwise_mismatches != 0) rep.chains_hold = false;
    return rep;
}

void write_exact_report(std::ostream& os, const DiscreteDomain& dom, const ExactReport& rep,
                        const std::string& provenance) {
    using nlohmann::json;
    json j;
    j["faces"] = rep.faces;
    j["colorings"] = "2^" + std::to_string(rep.faces);
    j["verdicts"] = {{"hl_equals_hr", rep.hl_equals_hr},
                     {"hl_hr_mismatched_vertices", rep.hl_hr_mismatched_vertices},
                     {"cr_all_zero", rep.cr_all_zero},
                     {"admissible_edges", rep.admissible_edges},
                     {"chains_hold", rep.chains_hold},
                     {"printed_chains_hold", rep.printed_chains_hold},
                     {"pointwise_mismatches", rep.pointwise_mismatches},
                     {"max_jump", rep.max_jump},
                     {"q_reading_disagreements", rep.q_reading_disagreements},
                     {"negation_symmetric", rep.negation_symmetric}};
    json vs = json::array();
    for (VertexIndex z = 0; z < static_cast<VertexIndex>(rep.vertices.size()); ++z) {
        const ExactVertex& v = rep.vertices[z];
        const Complex p = dom.position(z);
        vs.push_back({{"x", p.real()},
                      {"y", p.imag()},
                      {"Hl", v.hl.str()},
                      {"Hr", v.hr.str()},
                      {"Hu", v.hu.str()},
                      {"Hd", v.hd.str()},
                      {"q_reading_disagreements", {v.q_reading_disagreements_u, v.q_reading_disagreements_d}}});
    }
    j["vertices"] = vs;
    json es = json::array();
    for (const ExactEdge& e : rep.edges) {
        const Complex p = dom.position(e.e.tail);
        json o = {{"x", p.real()}, {"y", p.imag()}, {"dir", e.e.dir}};
        json ev;
        for (int i = 0; i < kSlotCount; ++i) ev[derivative_slot_name(i)] = e.events[i].str();
        o["events"] = ev;
        if (e.admissible) {
            static const char* terms[6] = {"lp", "rm", "qu_t", "qd_t", "qu_tt", "qd_tt"};
            json ct;
            for (int i = 0; i < 6; ++i) ct[terms[i]] = e.cr_terms[i].str();
            o["cr_terms"] = ct;
            o["cr_residual"] = e.cr_residual.str();
            json ch = json::array();
            for (const ChainCheck& c : e.chains) {
                ch.push_back({{"name", c.name}, {"lhs", c.lhs.str()}, {"rhs", c.rhs.str()}, {"holds", c.holds},
                              {"printed", c.printed}});
            }
            o["chains"] = ch;
            o["pointwise_mismatches"] = e.pointwise_mismatches;
        }
        es.push_back(o);
    }
    j["edges"] = es;
    os << provenance << '\n' << j.dump(1) << '\n';
}

// ---------------------------------------------------------------------------

namespace {

const DiscreteDomain& within_bound(const DiscreteDomain& dom, int size_bound) {
    if (dom.face_count() > std::min(size_bound, kMaxSizeBound)) {
        throw Error(ErrorCode::too_large, "domain exceeds the enumeration size bound");
    }
    return dom;
}

}  // namespace

DefinitionalOracle::DefinitionalOracle(const DiscreteDomain& dom, int size_bound)
    : dom_(&dom), qu_(within_bound(dom, size_bound), true), qd_(dom, false) {}

namespace {

std::uint64_t faces_mask(const std::vector<FaceIndex>& faces) {
    std::uint64_t m = 0;
    for (FaceIndex f : faces) m |= std::uint64_t{1} << f;
    return m;
}

// Boundary edge index of side `side` of face f.
int boundary_edge_of(const DiscreteDomain& dom, FaceIndex f, int side) {
    const auto& corners = dom.face_corners(f);
    const VertexIndex a = corners[side], b = corners[(side + 1) % 6];
    const auto& cyc = dom.boundary_cycle();
    const int n = static_cast<int>(cyc.size());
    for (VertexIndex v : {a, b}) {
        const int p = dom.boundary_position(v);
        if (p < 0) continue;
        if (cyc[(p + 1) % n] == (v == a ? b : a)) return p;
    }
    throw Error(ErrorCode::internal, "trace end side is not a boundary edge");
}

// Vertices on l's side of the crosscut drawn through the trace: entry side
// midpoint, face centers and shared side midpoints, exit side midpoint.
std::vector<std::uint8_t> l_side_of_crosscut(const DiscreteDomain& dom, const BoundaryTrace& t) {
    const auto& cyc = dom.boundary_cycle();
    const int n = static_cast<int>(cyc.size());
    const int a = boundary_edge_of(dom, t.faces.front(), t.entry_side);
    const int b = boundary_edge_of(dom, t.faces.back(), t.exit_side);
    auto midpoint = [&](int i) { return 0.5 * (dom.position(cyc[i]) + dom.position(cyc[(i + 1) % n])); };
    std::vector<Complex> poly{midpoint(a)};
    for (std::size_t j = 0; j < t.faces.size(); ++j) {
        poly.push_back(dom.center(t.faces[j]));
        if (j + 1 < t.faces.size()) poly.push_back(0.5 * (dom.center(t.faces[j]) + dom.center(t.faces[j + 1])));
    }
    poly.push_back(midpoint(b));
    // Forward arc from b to a is cyc[b+1..a]; otherwise take cyc[b..a+1] backward.
    std::vector<int> arc;
    bool has_l = false;
    for (int p = (b + 1) % n;; p = (p + 1) % n) {
        arc.push_back(p);
        has_l |= cyc[p] == dom.l();
        if (p == a) break;
    }
    if (!has_l) {
        arc.clear();
        for (int p = b; p != a; p = (p - 1 + n) % n) arc.push_back(p);
    }
    std::vector<std::uint8_t> on_arc(n, 0);
    for (int p : arc) {
        poly.push_back(dom.position(cyc[p]));
        on_arc[p] = 1;
    }
    std::vector<std::uint8_t> out(dom.vertex_count(), 0);
    for (VertexIndex z = 0; z < dom.vertex_count(); ++z) {
        const int bp = dom.boundary_position(z);
        out[z] = (!dom.is_interior(z) && bp >= 0) ? on_arc[bp] : std::abs(winding(poly, dom.position(z))) > 3.0;
    }
    return out;
}

bool trace_well_formed(const DiscreteDomain& dom, const ClusterLabels& labels, const BoundaryTrace& t) {
    if (t.faces.empty()) return false;
    std::uint64_t seen = 0;
    for (std::size_t k = 0; k < t.faces.size(); ++k) {
        const FaceIndex f = t.faces[k];
        if ((seen >> f) & 1u) return false;
        seen |= std::uint64_t{1} << f;
        if (labels.label[f] != t.cluster) return false;
        if (k > 0) {
            const auto& nb = dom.face_neighbors(t.faces[k - 1]);
            if (std::find(nb.begin(), nb.end(), f) == nb.end()) return false;
        }
    }
    return dom.face_touches_u(t.faces.front()) && dom.face_touches_d(t.faces.back());
}

}  // namespace

bool DefinitionalOracle::check(const Coloring& col, Claim claim) {
    const DiscreteDomain& dom = *dom_;
    SampleEvaluator eval(dom);
    const SampleValues& v = eval.evaluate(col);
    const ClusterLabels& labels = eval.labels();
    switch (claim) {
        case Claim::qu:
        case Claim::qd: {
            const bool for_u = claim == Claim::qu;
            const std::uint64_t wall = wall_mask(labels, for_u);
            const DefinitionalQ& q = for_u ? qu_ : qd_;
            for (VertexIndex z = 0; z < dom.vertex_count(); ++z) {
                if (q.holds(z, wall) != ((for_u ? v.qu[z] : v.qd[z]) != 0)) return false;
            }
            return true;
        }
        case Claim::separation: {
            for (const auto* traces : {&eval.left_traces(), &eval.right_traces()}) {
                const RegionIndex region = region_index(dom, *traces);
                std::uint64_t on_trace = 0;
                for (const BoundaryTrace& t : *traces) on_trace |= faces_mask(t.faces);
                std::vector<std::vector<std::uint8_t>> sides;
                for (const BoundaryTrace& t : *traces) sides.push_back(l_side_of_crosscut(dom, t));
                for (VertexIndex z = 0; z < dom.vertex_count(); ++z) {
                    if (incident_mask(dom, z) & on_trace) continue;
                    int count = 0;
                    for (const auto& side : sides) count += !side[z];
                    if (vertex_k(dom, region, z) != count) return false;
                }
            }
            return true;
        }
        case Claim::left_boundary: {
            const std::vector<int> crossing = crossing_clusters(dom, labels);
            for (std::size_t c = 0; c < crossing.size(); ++c) {
                const int id = crossing[c];
                std::vector<std::uint64_t> paths;
                for (FaceIndex s0 = 0; s0 < dom.face_count(); ++s0) {
                    if (labels.label[s0] != id || !dom.face_touches_u(s0)) continue;
                    simple_paths(dom, s0, [&](std::uint64_t mask, FaceIndex last) {
                        if (labels.label[last] != id) return false;
                        if (dom.face_touches_d(last)) paths.push_back(mask);
                        return true;
                    });
                }
                for (Side side : {Side::left, Side::right}) {
                    const BoundaryTrace& t = side == Side::left ? eval.left_traces()[c] : eval.right_traces()[c];
                    if (t.cluster != id || !trace_well_formed(dom, labels, t)) return false;
                    const VertexIndex mark = side == Side::left ? dom.l() : dom.r();
                    const std::uint64_t at_mark = incident_mask(dom, mark);
                    const std::uint64_t trace = faces_mask(t.faces);
                    for (std::uint64_t p : paths) {
                        if ((p & at_mark) == at_mark) continue;
                        const std::uint64_t reach = component_from(dom, p, mark);
                        if (trace & ~p & ~reach) return false;
                    }
                }
            }
            return true;
        }
    }
    return false;
}

bool definitional_check(const DiscreteDomain& dom, const Coloring& col, Claim claim, int size_bound) {
    DefinitionalOracle oracle(dom, size_bound);
    return oracle.check(col, claim);
}

}  // namespace hexperc
