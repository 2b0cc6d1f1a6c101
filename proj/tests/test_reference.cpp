#include <doctest.h>

#include <boost/math/special_functions/expm1.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_pFq.hpp>
#include <cmath>
#include <numbers>

#include "hexperc/core/reference.hpp"

using namespace hexperc;

namespace {

double pfq(std::initializer_list<double> a, std::initializer_list<double> b, double x) {
    return boost::math::hypergeometric_pFq(a, b, x);
}

}  // namespace

TEST_CASE("hyp2f1 closed forms") {
    CHECK(std::abs(hyp2f1(1, 1, 2, 0.5) - 2 * std::log(2.0)) < 1e-10);
    for (double x : {-0.9, -0.3, 0.1, 0.45, 0.7, 0.95}) {
        CHECK(hyp2f1(1, 1, 2, x) == doctest::Approx(-std::log1p(-x) / x).epsilon(1e-12));
        CHECK(hyp2f1(0.5, 1, 1.5, x * x) == doctest::Approx(std::atanh(x) / x).epsilon(1e-12));
    }
    // Gauss value at x = 1.
    CHECK(hyp2f1(1.0 / 3, 2.0 / 3, 2.0, 1.0) ==
          doctest::Approx(gamma_fn(2.0) * gamma_fn(1.0) / (gamma_fn(5.0 / 3) * gamma_fn(4.0 / 3))).epsilon(1e-12));
    CHECK_THROWS_AS(hyp2f1(1, 1, 2, 1.0), Error);
}

TEST_CASE("hypergeometric functions against an independent implementation") {
    const double xs[] = {0.05, 0.3, 0.5, 0.62, 0.8, 0.93, 0.99};
    for (double x : xs) {
        CAPTURE(x);
        CHECK(hyp2f1(1.0 / 3, 2.0 / 3, 4.0 / 3, x) == doctest::Approx(pfq({1.0 / 3, 2.0 / 3}, {4.0 / 3}, x)).epsilon(1e-10));
        CHECK(hyp2f1(0.25, 0.75, 1.5, x) == doctest::Approx(pfq({0.25, 0.75}, {1.5}, x)).epsilon(1e-10));
        CHECK(hyp2f1_reverse(1.0 / 3, 2.0 / 3, 4.0 / 3, x) == doctest::Approx(hyp2f1(1.0 / 3, 2.0 / 3, 4.0 / 3, x)).epsilon(1e-12));
        CHECK(hyp3f2(1, 1, 4.0 / 3, 2, 5.0 / 3, x) == doctest::Approx(pfq({1, 1, 4.0 / 3}, {2, 5.0 / 3}, x)).epsilon(1e-9));
        CHECK(hyp3f2_reverse(1, 1, 4.0 / 3, 2, 5.0 / 3, x) == doctest::Approx(hyp3f2(1, 1, 4.0 / 3, 2, 5.0 / 3, x)).epsilon(1e-12));
    }
}

TEST_CASE("gamma") {
    CHECK(gamma_fn(5.0) == doctest::Approx(24.0));
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)));
    CHECK(gamma_fn(1.0 / 3) == doctest::Approx(std::tgamma(1.0 / 3)));
}

TEST_CASE("cardy formula") {
    CHECK(std::abs(cardy(0.5) - 0.5) < 1e-8);
    CHECK(cardy(0.0) == 0.0);
    CHECK(cardy(1.0) == doctest::Approx(1.0));
    double prev = 0.0;
    for (int i = 1; i < 200; ++i) {
        const double l = i / 200.0;
        const double c = cardy(l);
        CHECK(c > prev);
        // Self-duality.
        CHECK(c + cardy(1.0 - l) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(watts(l) <= c + 1e-12);
        CHECK(watts(l) >= 0.0);
        prev = c;
    }
    CHECK_THROWS_AS(cardy(1.5), Error);
}

TEST_CASE("cluster-count limit") {
    CHECK(kLogTermConstant == doctest::Approx(std::sqrt(3.0) / (2 * std::numbers::pi)));
    CHECK(kPrintedConstantA == doctest::Approx(std::sqrt(3.0) * std::numbers::pi / 2));
    CHECK(2 * kPrintedConstantB == doctest::Approx(kLogTermConstant));
    CHECK(cluster_count_limit(0.5) == doctest::Approx(kLogTermConstant * std::log(2.0)));
    CHECK(cluster_count_limit(0.5) == doctest::Approx(0.19107603));
}

TEST_CASE("cross-ratio of a symmetric quad") {
    CrossRatioQuad q;
    q.a1 = std::polar(1.0, std::numbers::pi / 4);
    q.a2 = std::polar(1.0, 3 * std::numbers::pi / 4);
    q.a3 = std::polar(1.0, 5 * std::numbers::pi / 4);
    q.a4 = std::polar(1.0, 7 * std::numbers::pi / 4);
    CHECK(cross_ratio(q).lambda == doctest::Approx(0.5));
    q.a2 = q.a1;
    CHECK_THROWS_AS(cross_ratio(q), Error);
}

TEST_CASE("strip map on the disc") {
    DomainSpec s;  // l = pi, r = 0, w = pi/2
    const ReferenceMap h(s);
    CHECK(std::abs(h({0.0, 0.0})) < 1e-12);
    CHECK(h(std::polar(1.0, 2.0)).imag() == doctest::Approx(kStripHalfWidth));
    CHECK(h(std::polar(1.0, -2.0)).imag() == doctest::Approx(-kStripHalfWidth));
    CHECK(std::abs(h(std::polar(1.0, std::numbers::pi / 2)).real()) < 1e-12);
    // Conformal invariance under disc automorphisms: moving all points
    // together leaves h unchanged.
    const double a = 0.3;
    auto phi = [&](Complex z) { return (z - a) / (1.0 - a * z); };
    const Complex l = -1.0, r = 1.0, w = Complex(0.0, 1.0);
    for (Complex z : {Complex(0.1, 0.2), Complex(-0.5, 0.1), Complex(0.3, -0.6)}) {
        CHECK(std::abs(strip_map_points(phi(l), phi(r), phi(w), phi(z)) - strip_map_points(l, r, w, z)) < 1e-12);
    }
}

TEST_CASE("grid Dirichlet solver matches the strip map on a disc") {
    DomainSpec s;
    const ReferenceMap h(s);
    const DirichletField f(s, 0.01);
    for (Complex z : {Complex(0.0, 0.0), Complex(0.3, 0.2), Complex(-0.4, -0.3), Complex(0.1, 0.6)}) {
        CAPTURE(z);
        CHECK(std::abs(f.value(z) - h(z)) < 0.01);
    }
}
