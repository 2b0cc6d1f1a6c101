#include "hexperc/core/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

namespace hexperc {

namespace {

constexpr double kSqrt3 = 1.7320508075688772935;

constexpr std::array<std::array<int, 2>, 6> kSideOffsets{{
    {1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1},
}};

std::uint64_t face_key(FaceCoord c) {
    constexpr std::int64_t bias = 1 << 20;
    return (static_cast<std::uint64_t>(c.q + bias) << 32) | static_cast<std::uint64_t>(c.r + bias);
}

std::uint64_t vertex_key(VertexCoord c) {
    constexpr std::int64_t bias = 1 << 20;
    return (static_cast<std::uint64_t>(c.q + bias) << 33) |
           (static_cast<std::uint64_t>(c.r + bias) << 1) | static_cast<std::uint64_t>(c.type);
}

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

double segment_distance(Complex p, Complex a, Complex b, double* t_out) {
    const Complex ab = b - a;
    const double len2 = std::norm(ab);
    double t = len2 > 0 ? ((p - a) * std::conj(ab)).real() / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    if (t_out) *t_out = t;
    return std::abs(p - (a + t * ab));
}

double polygon_perimeter(const Polygon& poly) {
    double total = 0;
    const auto& v = poly.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) total += std::abs(v[(i + 1) % v.size()] - v[i]);
    return total;
}

double signed_area(const Polygon& poly) {
    double a = 0;
    const auto& v = poly.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
    return a / 2;
}

bool segments_intersect(Complex a, Complex b, Complex c, Complex d) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
           d4 != 0;
}

double shape_scale(const Shape& shape) {
    if (const auto* disc = std::get_if<Disc>(&shape)) return disc->radius;
    const auto& poly = std::get<Polygon>(shape);
    return polygon_perimeter(poly);
}

}  // namespace

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::ok: return "Ok";
        case ErrorCode::invalid_argument: return "InvalidArgument";
        case ErrorCode::empty_discretization: return "EmptyDiscretization";
        case ErrorCode::mark_collision: return "MarkCollision";
        case ErrorCode::outside_domain: return "OutsideDomain";
        case ErrorCode::boundary_edge: return "BoundaryEdge";
        case ErrorCode::overlapping_traces: return "OverlappingTraces";
        case ErrorCode::too_large: return "TooLarge";
        case ErrorCode::not_converged: return "NotConverged";
        case ErrorCode::domain_error: return "DomainError";
        case ErrorCode::degenerate_points: return "DegeneratePoints";
        case ErrorCode::unsupported_domain: return "UnsupportedDomain";
        case ErrorCode::solver_diverged: return "SolverDiverged";
        case ErrorCode::contour_leaves_domain: return "ContourLeavesDomain";
        case ErrorCode::io_error: return "IoError";
        case ErrorCode::parse_error: return "ParseError";
        case ErrorCode::not_simply_connected: return "NotSimplyConnected";
        case ErrorCode::verdict_failed: return "VerdictFailed";
        case ErrorCode::internal: return "Internal";
    }
    return "Unknown";
}

// ---------------------------------------------------------------------------
// Infinite lattice

Complex unit_direction(int dir) {
    static const std::array<Complex, 6> dirs = [] {
        std::array<Complex, 6> out{};
        for (int k = 0; k < 6; ++k) out[k] = std::polar(1.0, k * std::numbers::pi / 3);
        out[0] = {1.0, 0.0};
        out[3] = {-1.0, 0.0};
        out[1] = {0.5, kSqrt3 / 2};
        out[2] = {-0.5, kSqrt3 / 2};
        out[4] = {-0.5, -kSqrt3 / 2};
        out[5] = {0.5, -kSqrt3 / 2};
        return out;
    }();
    return dirs[((dir % 6) + 6) % 6];
}

Complex face_center(FaceCoord f, double delta) {
    return delta * Complex(1.5 * f.q, kSqrt3 * (f.r + 0.5 * f.q));
}

VertexCoord corner_vertex(FaceCoord f, int corner) {
    switch (((corner % 6) + 6) % 6) {
        case 0: return {f.q, f.r, 0};
        case 1: return {f.q, f.r, 1};
        case 2: return {f.q - 1, f.r + 1, 0};
        case 3: return {f.q - 1, f.r, 1};
        case 4: return {f.q - 1, f.r, 0};
        default: return {f.q, f.r - 1, 1};
    }
}

Complex vertex_position(VertexCoord v, double delta) {
    return face_center({v.q, v.r}, delta) + delta * unit_direction(v.type == 0 ? 0 : 1);
}

FaceCoord face_neighbor(FaceCoord f, int side) {
    const auto& o = kSideOffsets[((side % 6) + 6) % 6];
    return {f.q + o[0], f.r + o[1]};
}

bool is_edge_direction(VertexCoord v, int dir) { return ((dir % 2) == 0) == (v.type == 0); }

VertexCoord lattice_step(VertexCoord v, int dir) {
    dir = ((dir % 6) + 6) % 6;
    if (v.type == 0) {
        switch (dir) {
            case 0: return {v.q + 1, v.r - 1, 1};
            case 2: return {v.q, v.r, 1};
            case 4: return {v.q, v.r - 1, 1};
            default: break;
        }
    } else {
        switch (dir) {
            case 1: return {v.q, v.r + 1, 0};
            case 3: return {v.q - 1, v.r + 1, 0};
            case 5: return {v.q, v.r, 0};
            default: break;
        }
    }
    throw Error(ErrorCode::invalid_argument, "lattice_step: not an edge direction");
}

FaceCoord face_around(VertexCoord v, int dir) {
    dir = ((dir % 6) + 6) % 6;
    if (v.type == 0) {
        switch (dir) {
            case 1: return {v.q + 1, v.r};
            case 3: return {v.q, v.r};
            case 5: return {v.q + 1, v.r - 1};
            default: break;
        }
    } else {
        switch (dir) {
            case 0: return {v.q + 1, v.r};
            case 2: return {v.q, v.r + 1};
            case 4: return {v.q, v.r};
            default: break;
        }
    }
    throw Error(ErrorCode::invalid_argument, "face_around: not a face direction");
}

// ---------------------------------------------------------------------------
// Continuous shapes

bool shape_contains(const Shape& shape, Complex p) {
    const double eps = 1e-12 * std::max(1.0, shape_scale(shape));
    if (const auto* disc = std::get_if<Disc>(&shape)) {
        return std::abs(p - disc->center) <= disc->radius + eps;
    }
    const auto& v = std::get<Polygon>(shape).vertices;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (segment_distance(p, v[i], v[(i + 1) % n], nullptr) <= eps) return true;
    }
    // Winding number.
    int winding = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = v[i];
        const Complex b = v[(i + 1) % n];
        if (a.imag() <= p.imag()) {
            if (b.imag() > p.imag() && cross(b - a, p - a) > 0) ++winding;
        } else if (b.imag() <= p.imag() && cross(b - a, p - a) < 0) {
            --winding;
        }
    }
    return winding != 0;
}

double boundary_period(const Shape& shape) {
    return std::holds_alternative<Disc>(shape) ? 2 * std::numbers::pi : 1.0;
}

Complex boundary_point(const Shape& shape, double parameter) {
    if (const auto* disc = std::get_if<Disc>(&shape)) {
        return disc->center + std::polar(disc->radius, parameter);
    }
    const auto& poly = std::get<Polygon>(shape);
    const auto& v = poly.vertices;
    double t = parameter - std::floor(parameter);
    double remaining = t * polygon_perimeter(poly);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Complex a = v[i];
        const Complex b = v[(i + 1) % v.size()];
        const double len = std::abs(b - a);
        if (remaining <= len || i + 1 == v.size()) {
            return a + (b - a) * (len > 0 ? std::min(remaining / len, 1.0) : 0.0);
        }
        remaining -= len;
    }
    return v.front();
}

double boundary_parameter(const Shape& shape, Complex p) {
    if (const auto* disc = std::get_if<Disc>(&shape)) {
        double a = std::arg(p - disc->center);
        if (a < 0) a += 2 * std::numbers::pi;
        return a;
    }
    const auto& poly = std::get<Polygon>(shape);
    const auto& v = poly.vertices;
    double best = std::numeric_limits<double>::infinity();
    double best_s = 0;
    double walked = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Complex a = v[i];
        const Complex b = v[(i + 1) % v.size()];
        double t = 0;
        const double dist = segment_distance(p, a, b, &t);
        if (dist < best) {
            best = dist;
            best_s = walked + t * std::abs(b - a);
        }
        walked += std::abs(b - a);
    }
    return best_s / walked;
}

Complex resolve_mark(const Shape& shape, const BoundaryMark& mark) {
    if (mark.kind == BoundaryMark::Kind::point) return mark.point;
    return boundary_point(shape, mark.parameter);
}

void validate_spec(const DomainSpec& spec) {
    if (!(spec.delta > 0) || !std::isfinite(spec.delta)) {
        throw Error(ErrorCode::invalid_argument, "delta must be positive");
    }
    if (const auto* disc = std::get_if<Disc>(&spec.shape)) {
        if (!(disc->radius > 0)) throw Error(ErrorCode::invalid_argument, "disc radius must be positive");
    } else {
        const auto& poly = std::get<Polygon>(spec.shape);
        const auto& v = poly.vertices;
        if (v.size() < 3) throw Error(ErrorCode::invalid_argument, "polygon needs at least 3 vertices");
        if (signed_area(poly) <= 0) {
            throw Error(ErrorCode::invalid_argument, "polygon must be listed counterclockwise");
        }
        const std::size_t n = v.size();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (j == i + 1 || (i == 0 && j == n - 1)) continue;
                if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) {
                    throw Error(ErrorCode::invalid_argument, "polygon is not simple");
                }
            }
        }
    }
    const double period = boundary_period(spec.shape);
    const double tl = boundary_parameter(spec.shape, resolve_mark(spec.shape, spec.l));
    const double tr = boundary_parameter(spec.shape, resolve_mark(spec.shape, spec.r));
    const double tw = boundary_parameter(spec.shape, resolve_mark(spec.shape, spec.w));
    const double eps = 1e-12 * period;
    auto ccw_from_r = [&](double t) {
        double s = std::fmod(t - tr, period);
        if (s < 0) s += period;
        return s;
    };
    if (std::abs(ccw_from_r(tl)) < eps || std::abs(ccw_from_r(tl) - period) < eps) {
        throw Error(ErrorCode::invalid_argument, "marks l and r coincide");
    }
    const double sw = ccw_from_r(tw);
    if (!(sw > eps && sw < ccw_from_r(tl) - eps)) {
        throw Error(ErrorCode::invalid_argument, "mark w must lie on the open arc from r to l");
    }
}

// ---------------------------------------------------------------------------
// Discrete domain

FaceIndex DiscreteDomain::find_face(FaceCoord c) const {
    auto it = face_index_.find(face_key(c));
    return it == face_index_.end() ? kNone : it->second;
}

VertexIndex DiscreteDomain::find_vertex(VertexCoord c) const {
    auto it = vertex_index_.find(vertex_key(c));
    return it == vertex_index_.end() ? kNone : it->second;
}

int DiscreteDomain::degree(VertexIndex v) const {
    int n = 0;
    for (int d = 0; d < 6; ++d) n += vertex_nbr_[v][d] != kNone;
    return n;
}

int DiscreteDomain::incident_face_count(VertexIndex v) const {
    int n = 0;
    for (int d = 0; d < 6; ++d) n += vertex_face_[v][d] != kNone;
    return n;
}

std::vector<int> DiscreteDomain::edge_directions(VertexIndex v) const {
    std::vector<int> out;
    for (int d = 0; d < 6; ++d) {
        if (vertex_nbr_[v][d] != kNone) out.push_back(d);
    }
    return out;
}

std::vector<FaceIndex> DiscreteDomain::incident_faces(VertexIndex v) const {
    std::vector<FaceIndex> out;
    for (int d = 0; d < 6; ++d) {
        if (vertex_face_[v][d] != kNone) out.push_back(vertex_face_[v][d]);
    }
    return out;
}

bool DiscreteDomain::face_on_boundary(FaceIndex f) const {
    for (FaceIndex n : face_nbr_[f]) {
        if (n == kNone) return true;
    }
    return false;
}

bool DiscreteDomain::has_edge(OrientedEdge e) const {
    return e.tail >= 0 && e.tail < vertex_count() && e.dir >= 0 && e.dir < 6 &&
           vertex_nbr_[e.tail][e.dir] != kNone;
}

VertexIndex DiscreteDomain::head(OrientedEdge e) const {
    if (!has_edge(e)) throw Error(ErrorCode::outside_domain, "edge not in domain");
    return vertex_nbr_[e.tail][e.dir];
}

OrientedEdge DiscreteDomain::reversed(OrientedEdge e) const { return {head(e), (e.dir + 3) % 6}; }

bool DiscreteDomain::is_interior_edge(OrientedEdge e) const {
    return has_edge(e) && is_interior(e.tail) && is_interior(head(e));
}

std::vector<OrientedEdge> DiscreteDomain::oriented_edges() const {
    std::vector<OrientedEdge> out;
    for (VertexIndex v = 0; v < vertex_count(); ++v) {
        for (int d = 0; d < 6; ++d) {
            if (vertex_nbr_[v][d] != kNone) out.push_back({v, d});
        }
    }
    return out;
}

int DiscreteDomain::edge_count() const {
    int twice = 0;
    for (VertexIndex v = 0; v < vertex_count(); ++v) twice += degree(v);
    return twice / 2;
}

int DiscreteDomain::euler_characteristic() const {
    return vertex_count() - edge_count() + face_count();
}

VertexIndex DiscreteDomain::nearest_boundary_vertex(Complex p) const {
    VertexIndex best = kNone;
    double best_d = std::numeric_limits<double>::infinity();
    for (VertexIndex v : boundary_) {
        const double d = std::abs(position(v) - p);
        if (d < best_d - 1e-12 * delta_) {
            best_d = d;
            best = v;
        }
    }
    return best;
}

VertexIndex DiscreteDomain::nearest_vertex(Complex p) const {
    VertexIndex best = kNone;
    double best_d = std::numeric_limits<double>::infinity();
    for (VertexIndex v = 0; v < vertex_count(); ++v) {
        const double d = std::abs(position(v) - p);
        if (d < best_d - 1e-12 * delta_) {
            best_d = d;
            best = v;
        }
    }
    return best;
}

void DiscreteDomain::set_marks(VertexIndex l, VertexIndex r, VertexIndex w) {
    for (VertexIndex m : {l, r, w}) {
        if (m < 0 || m >= vertex_count() || boundary_pos_[m] == kNone) {
            throw Error(ErrorCode::invalid_argument, "marks must be boundary-cycle vertices");
        }
    }
    if (l == r || l == w || r == w) throw Error(ErrorCode::mark_collision, "two marks snap to the same vertex");
    const int n = static_cast<int>(boundary_.size());
    const int pl = boundary_pos_[l];
    const int pr = boundary_pos_[r];
    const int pw = boundary_pos_[w];
    auto steps_from_r = [&](int p) { return ((p - pr) % n + n) % n; };
    if (steps_from_r(pw) >= steps_from_r(pl)) {
        throw Error(ErrorCode::invalid_argument, "mark w is not on arc u");
    }
    boundary_on_u_.assign(n, 0);
    for (int i = pr; i != pl; i = (i + 1) % n) boundary_on_u_[i] = 1;
    touches_u_.assign(faces_.size(), 0);
    touches_d_.assign(faces_.size(), 0);
    for (int i = 0; i < n; ++i) {
        (boundary_on_u_[i] ? touches_u_ : touches_d_)[boundary_face_[i]] = 1;
    }
    l_ = l;
    r_ = r;
    w_ = w;
}

DiscreteDomain DiscreteDomain::with_marks(VertexIndex l, VertexIndex r, VertexIndex w) const {
    DiscreteDomain out = *this;
    out.set_marks(l, r, w);
    return out;
}

DiscreteDomain build_domain(std::vector<FaceCoord> faces, double delta) {
    if (faces.empty()) throw Error(ErrorCode::empty_discretization, "no hexagon fits in the domain");
    std::sort(faces.begin(), faces.end());
    faces.erase(std::unique(faces.begin(), faces.end()), faces.end());

    DiscreteDomain dom;
    dom.delta_ = delta;
    dom.faces_ = std::move(faces);
    const int nf = static_cast<int>(dom.faces_.size());
    dom.face_index_.reserve(nf * 2);
    for (int i = 0; i < nf; ++i) dom.face_index_[face_key(dom.faces_[i])] = i;

    dom.face_nbr_.resize(nf);
    for (int i = 0; i < nf; ++i) {
        for (int s = 0; s < 6; ++s) dom.face_nbr_[i][s] = dom.find_face(face_neighbor(dom.faces_[i], s));
    }

    std::vector<VertexCoord> verts;
    verts.reserve(nf * 3);
    for (const auto& f : dom.faces_) {
        for (int k = 0; k < 6; ++k) verts.push_back(corner_vertex(f, k));
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    dom.vertices_ = std::move(verts);
    const int nv = static_cast<int>(dom.vertices_.size());
    dom.vertex_index_.reserve(nv * 2);
    for (int i = 0; i < nv; ++i) dom.vertex_index_[vertex_key(dom.vertices_[i])] = i;

    dom.face_corner_.resize(nf);
    for (int i = 0; i < nf; ++i) {
        for (int k = 0; k < 6; ++k) dom.face_corner_[i][k] = dom.find_vertex(corner_vertex(dom.faces_[i], k));
    }

    dom.vertex_face_.assign(nv, {kNone, kNone, kNone, kNone, kNone, kNone});
    dom.vertex_nbr_.assign(nv, {kNone, kNone, kNone, kNone, kNone, kNone});
    for (int v = 0; v < nv; ++v) {
        const VertexCoord c = dom.vertices_[v];
        for (int d = 0; d < 6; ++d) {
            if (!is_edge_direction(c, d)) dom.vertex_face_[v][d] = dom.find_face(face_around(c, d));
        }
    }
    for (int v = 0; v < nv; ++v) {
        const VertexCoord c = dom.vertices_[v];
        for (int d = 0; d < 6; ++d) {
            if (!is_edge_direction(c, d)) continue;
            const bool present =
                dom.vertex_face_[v][(d + 1) % 6] != kNone || dom.vertex_face_[v][(d + 5) % 6] != kNone;
            if (present) dom.vertex_nbr_[v][d] = dom.find_vertex(lattice_step(c, d));
        }
    }

    // Face connectivity.
    {
        std::vector<char> seen(nf, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            const int f = stack.back();
            stack.pop_back();
            for (int n : dom.face_nbr_[f]) {
                if (n != kNone && !seen[n]) {
                    seen[n] = 1;
                    ++count;
                    stack.push_back(n);
                }
            }
        }
        if (count != nf) throw Error(ErrorCode::invalid_argument, "face set is not connected");
    }

    // Boundary: ccw edges of faces whose neighbor across the side is absent.
    std::unordered_map<int, std::pair<int, int>> next;  // tail -> (head, face)
    int boundary_edges = 0;
    for (int i = 0; i < nf; ++i) {
        for (int s = 0; s < 6; ++s) {
            if (dom.face_nbr_[i][s] != kNone) continue;
            const int a = dom.face_corner_[i][s];
            const int b = dom.face_corner_[i][(s + 1) % 6];
            next[a] = {b, i};
            ++boundary_edges;
        }
    }
    int start = kNone;
    for (const auto& [tail, _] : next) {
        if (start == kNone || dom.vertices_[tail] < dom.vertices_[start]) start = tail;
    }
    dom.boundary_pos_.assign(nv, kNone);
    int v = start;
    do {
        dom.boundary_pos_[v] = static_cast<int>(dom.boundary_.size());
        dom.boundary_.push_back(v);
        const auto [h, f] = next.at(v);
        dom.boundary_face_.push_back(f);
        v = h;
    } while (v != start && static_cast<int>(dom.boundary_.size()) <= boundary_edges);
    if (static_cast<int>(dom.boundary_.size()) != boundary_edges) {
        throw Error(ErrorCode::not_simply_connected, "discretization has holes");
    }
    dom.boundary_on_u_.assign(dom.boundary_.size(), 0);
    dom.touches_u_.assign(nf, 0);
    dom.touches_d_.assign(nf, 0);
    return dom;
}

DiscreteDomain discretize(const DomainSpec& spec) {
    validate_spec(spec);
    const double delta = spec.delta;
    double xmin, xmax, ymin, ymax;
    if (const auto* disc = std::get_if<Disc>(&spec.shape)) {
        xmin = disc->center.real() - disc->radius;
        xmax = disc->center.real() + disc->radius;
        ymin = disc->center.imag() - disc->radius;
        ymax = disc->center.imag() + disc->radius;
    } else {
        const auto& v = std::get<Polygon>(spec.shape).vertices;
        xmin = ymin = std::numeric_limits<double>::infinity();
        xmax = ymax = -xmin;
        for (Complex p : v) {
            xmin = std::min(xmin, p.real());
            xmax = std::max(xmax, p.real());
            ymin = std::min(ymin, p.imag());
            ymax = std::max(ymax, p.imag());
        }
    }
    const double span = std::max(xmax - xmin, ymax - ymin);
    if (span / delta > 1e5) throw Error(ErrorCode::too_large, "mesh too fine for this domain");

    const int qlo = static_cast<int>(std::floor(xmin / (1.5 * delta))) - 1;
    const int qhi = static_cast<int>(std::ceil(xmax / (1.5 * delta))) + 1;
    std::vector<FaceCoord> inside;
    for (int q = qlo; q <= qhi; ++q) {
        const int rlo = static_cast<int>(std::floor(ymin / (kSqrt3 * delta) - 0.5 * q)) - 1;
        const int rhi = static_cast<int>(std::ceil(ymax / (kSqrt3 * delta) - 0.5 * q)) + 1;
        for (int r = rlo; r <= rhi; ++r) {
            const FaceCoord f{q, r};
            bool ok = true;
            for (int k = 0; k < 6 && ok; ++k) {
                ok = shape_contains(spec.shape, vertex_position(corner_vertex(f, k), delta));
            }
            if (ok) inside.push_back(f);
        }
    }
    if (inside.empty()) throw Error(ErrorCode::empty_discretization, "no hexagon fits in the domain");

    // Largest face-connected component; ties by smallest member coordinate.
    std::sort(inside.begin(), inside.end());
    std::unordered_map<std::uint64_t, int> idx;
    for (int i = 0; i < static_cast<int>(inside.size()); ++i) idx[face_key(inside[i])] = i;
    std::vector<int> comp(inside.size(), -1);
    std::vector<FaceCoord> best;
    for (int seed = 0; seed < static_cast<int>(inside.size()); ++seed) {
        if (comp[seed] != -1) continue;
        std::vector<FaceCoord> members;
        std::deque<int> queue{seed};
        comp[seed] = seed;
        while (!queue.empty()) {
            const int f = queue.front();
            queue.pop_front();
            members.push_back(inside[f]);
            for (int s = 0; s < 6; ++s) {
                auto it = idx.find(face_key(face_neighbor(inside[f], s)));
                if (it != idx.end() && comp[it->second] == -1) {
                    comp[it->second] = seed;
                    queue.push_back(it->second);
                }
            }
        }
        // Seeds are visited in lexicographic order, so a strictly larger
        // size is needed to displace an earlier component.
        if (members.size() > best.size()) best = std::move(members);
    }

    DiscreteDomain dom = build_domain(std::move(best), delta);
    const VertexIndex l = dom.nearest_boundary_vertex(resolve_mark(spec.shape, spec.l));
    const VertexIndex r = dom.nearest_boundary_vertex(resolve_mark(spec.shape, spec.r));
    const VertexIndex w = dom.nearest_boundary_vertex(resolve_mark(spec.shape, spec.w));
    dom.set_marks(l, r, w);
    return dom;
}

OrientedEdge rotate_edge(const DiscreteDomain& dom, OrientedEdge e, int k) {
    if (k != 1 && k != 2) throw Error(ErrorCode::invalid_argument, "rotation index must be 1 or 2");
    if (!dom.has_edge(e)) throw Error(ErrorCode::outside_domain, "edge not in domain");
    const OrientedEdge out{e.tail, (e.dir + 2 * k) % 6};
    if (!dom.has_edge(out)) throw Error(ErrorCode::outside_domain, "rotated edge leaves the domain");
    return out;
}

DualEdge dual_edge(const DiscreteDomain& dom, OrientedEdge e) {
    if (!dom.has_edge(e)) throw Error(ErrorCode::outside_domain, "edge not in domain");
    const FaceIndex left = dom.left_face(e);
    const FaceIndex right = dom.right_face(e);
    if (left == kNone || right == kNone) throw Error(ErrorCode::boundary_edge, "edge lacks a face on one side");
    return {dom.center(left) - dom.center(right), right, left};
}

BoundaryArcs boundary_arcs(const DiscreteDomain& dom) {
    BoundaryArcs arcs;
    const auto& cyc = dom.boundary_cycle();
    const int n = static_cast<int>(cyc.size());
    // Start at r so that u is listed from r to l and d from l to r.
    const int pr = dom.boundary_position(dom.r());
    for (int s = 0; s < n; ++s) {
        const int i = (pr + s) % n;
        const std::pair<VertexIndex, VertexIndex> edge{cyc[i], cyc[(i + 1) % n]};
        (dom.boundary_edge_on_u(i) ? arcs.u : arcs.d).push_back(edge);
    }
    return arcs;
}

}  // namespace hexperc
