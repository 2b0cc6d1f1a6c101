#pragma once

// Hand-rolled generators for the property tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hexperc/core/lattice.hpp"
#include "hexperc/core/percolation.hpp"

namespace gen {

inline std::mt19937_64& rng() {
    static std::mt19937_64 r(20240611);
    return r;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }
inline int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng()); }

// Disc with random center, radius and well-separated marks.
inline hexperc::DomainSpec disc(double delta) {
    hexperc::DomainSpec s;
    s.shape = hexperc::Disc{{uniform(-0.3, 0.3), uniform(-0.3, 0.3)}, uniform(0.8, 1.2)};
    const double t = uniform(0.0, 6.283185307179586);
    s.r = hexperc::BoundaryMark::at_parameter(t);
    s.l = hexperc::BoundaryMark::at_parameter(t + uniform(2.4, 3.9));
    s.w = hexperc::BoundaryMark::at_parameter(t + uniform(0.6, 1.8));
    s.delta = delta;
    return s;
}

// Star-shaped polygon with random radii, counterclockwise.
inline hexperc::DomainSpec polygon(double delta) {
    hexperc::DomainSpec s;
    hexperc::Polygon p;
    const int n = integer(5, 9);
    for (int i = 0; i < n; ++i) {
        const double a = 6.283185307179586 * (i + uniform(-0.2, 0.2)) / n;
        p.vertices.push_back(std::polar(uniform(0.7, 1.3), a));
    }
    s.shape = p;
    s.r = hexperc::BoundaryMark::at_parameter(0.02);
    s.l = hexperc::BoundaryMark::at_parameter(0.5);
    s.w = hexperc::BoundaryMark::at_parameter(0.26);
    s.delta = delta;
    return s;
}

inline hexperc::Coloring coloring(int faces, double p_white = 0.5) {
    hexperc::Coloring c;
    c.white.resize(faces);
    std::bernoulli_distribution b(p_white);
    for (auto& x : c.white) x = b(rng()) ? 1 : 0;
    return c;
}

}  // namespace gen
