#include "hexperc/core/field.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace hexperc {

Moments moments(std::int64_t n, std::int64_t sum, std::int64_t sum_sq) {
    if (n <= 0) return {};
    const double mean = static_cast<double>(sum) / n;
    // Sum of squared deviations from the integer moment sums.
    const double m2 = (static_cast<double>(sum_sq) * n - static_cast<double>(sum) * sum) / n;
    return {mean, n > 1 ? std::max(m2, 0.0) / (n - 1) : 0.0};
}

double standard_error(std::int64_t n, std::int64_t sum, std::int64_t sum_sq) {
    if (n <= 1) return 0.0;
    return std::sqrt(moments(n, sum, sum_sq).variance / n);
}

void ObservableField::add(const SampleValues& v) {
    ++n_;
    const int nv = vertex_count();
    for (int z = 0; z < nv; ++z) {
        VertexSums& s = sums_[z];
        const std::int64_t a = v.nl[z], b = v.nr[z], u = v.qu[z], d = v.qd[z];
        s.nl += a;
        s.nl2 += a * a;
        s.nr += b;
        s.nr2 += b * b;
        s.nlnr += a * b;
        s.qu += u;
        s.qd += d;
        s.qud += u * d;
    }
}

void ObservableField::merge(const ObservableField& o) {
    if (o.vertex_count() != vertex_count()) throw Error(ErrorCode::invalid_argument, "field size mismatch");
    n_ += o.n_;
    for (int z = 0; z < vertex_count(); ++z) {
        VertexSums& s = sums_[z];
        const VertexSums& t = o.sums_[z];
        s.nl += t.nl;
        s.nl2 += t.nl2;
        s.nr += t.nr;
        s.nr2 += t.nr2;
        s.nlnr += t.nlnr;
        s.qu += t.qu;
        s.qd += t.qd;
        s.qud += t.qud;
    }
}

namespace {
double mean_of(std::int64_t n, std::int64_t s) { return n > 0 ? static_cast<double>(s) / n : 0.0; }
}  // namespace

double ObservableField::hl(VertexIndex z) const { return mean_of(n_, sums_[z].nl); }
double ObservableField::hr(VertexIndex z) const { return mean_of(n_, sums_[z].nr); }
double ObservableField::hu(VertexIndex z) const { return mean_of(n_, sums_[z].qu); }
double ObservableField::hd(VertexIndex z) const { return mean_of(n_, sums_[z].qd); }

Complex ObservableField::h(VertexIndex z) const {
    return {hl(z) + hr(z), -kHalfSqrt3 * (hu(z) - hd(z))};
}

double ObservableField::hl_se(VertexIndex z) const { return standard_error(n_, sums_[z].nl, sums_[z].nl2); }
double ObservableField::hr_se(VertexIndex z) const { return standard_error(n_, sums_[z].nr, sums_[z].nr2); }
double ObservableField::hu_se(VertexIndex z) const { return standard_error(n_, sums_[z].qu, sums_[z].qu); }
double ObservableField::hd_se(VertexIndex z) const { return standard_error(n_, sums_[z].qd, sums_[z].qd); }

Complex ObservableField::h_se(VertexIndex z) const {
    const VertexSums& s = sums_[z];
    const double re = standard_error(n_, s.nl + s.nr, s.nl2 + 2 * s.nlnr + s.nr2);
    // (qu - qd)^2 = qu + qd - 2 qu qd for indicators.
    const double im = kHalfSqrt3 * standard_error(n_, s.qu - s.qd, s.qu + s.qd - 2 * s.qud);
    return {re, im};
}

double ObservableField::hl_minus_hr_se(VertexIndex z) const {
    const VertexSums& s = sums_[z];
    return standard_error(n_, s.nl - s.nr, s.nl2 - 2 * s.nlnr + s.nr2);
}

int default_workers() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

namespace {

struct FieldAcc {
    ObservableField field;
    void add(const DiscreteDomain&, const Coloring& col, SampleEvaluator& eval) { field.add(eval.evaluate(col)); }
    void merge(const FieldAcc& o) { field.merge(o.field); }
};

}  // namespace

ObservableField accumulate_field(const DiscreteDomain& dom, std::uint64_t seed, std::uint64_t begin,
                                 std::uint64_t end, int workers) {
    if (end <= begin) return ObservableField(dom.vertex_count());
    return run_samples<FieldAcc>(dom, seed, begin, end, workers, [&] {
               return FieldAcc{ObservableField(dom.vertex_count())};
           }).field;
}

void write_field_csv(std::ostream& os, const DiscreteDomain& dom, const ObservableField& field,
                     const std::string& provenance) {
    os << provenance << '\n' << "vx,vy,n,Hl,Hr,Hu,Hd,HRe,HIm,seRe,seIm\n";
    char buf[512];
    for (VertexIndex z = 0; z < field.vertex_count(); ++z) {
        const Complex p = dom.position(z);
        const Complex h = field.h(z);
        const Complex se = field.h_se(z);
        std::snprintf(buf, sizeof buf, "%.10g,%.10g,%lld,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.6g,%.6g\n", p.real(),
                      p.imag(), static_cast<long long>(field.samples()), field.hl(z), field.hr(z), field.hu(z),
                      field.hd(z), h.real(), h.imag(), se.real(), se.imag());
        os << buf;
    }
}

}  // namespace hexperc
