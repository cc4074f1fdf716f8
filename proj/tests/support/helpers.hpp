#pragma once

#include "echoloc/geometry.hpp"

#include <cmath>
#include <random>

namespace testing_support {

inline std::mt19937_64& rng()
{
    static std::mt19937_64 g(20261016);
    return g;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline echoloc::HPoint random_hpoint()
{
    return echoloc::make_hpoint(uniform(-3.0, 3.0), std::exp(uniform(-2.0, 2.0)));
}

/// Point at parameter theta in (0, pi) on the axis of a hyperbolic element g.
inline echoloc::HPoint axis_point(const echoloc::MobiusElement& g, double theta)
{
    // Fixed points solve c z^2 + (d - a) z - b = 0.
    const double A = g.c, B = g.d - g.a, C = -g.b;
    if (std::abs(A) < 1e-14) {
        // Axis is vertical through -C/B.
        return echoloc::make_hpoint(-C / B, std::exp(theta));
    }
    const double disc = std::sqrt(B * B - 4 * A * C);
    const double r1 = (-B + disc) / (2 * A), r2 = (-B - disc) / (2 * A);
    const double center = 0.5 * (r1 + r2), radius = 0.5 * std::abs(r1 - r2);
    return echoloc::make_hpoint(center + radius * std::cos(theta), radius * std::sin(theta));
}

} // namespace testing_support
