#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nashdual/sharp.hpp"

namespace nashdual {

// Named battery profiles. The same constructors feed the CLI and the test
// batteries, so golden values never drift between the two.
struct FamilySpec {
    std::string name;      // gaussian | triangle | smoothed_indicator | poly_bump | optimizer
    double sigma = 1.0;    // gaussian
    double width = 0.25;   // smoothed_indicator transition width

    std::string label() const
    {
        if (name == "gaussian") return name + "(sigma=" + std::to_string(sigma) + ")";
        if (name == "smoothed_indicator") return name + "(width=" + std::to_string(width) + ")";
        return name;
    }
};

inline RadialProfile build_family(const FamilySpec& spec, int n, double p, int cells)
{
    if (spec.name == "gaussian") {
        const double s = spec.sigma;
        if (!(s > 0.0)) throw input_error("gaussian family: sigma must be positive");
        // truncation at 9 sigma leaves relative tail mass below 1e-12
        const RadialGrid grid = make_grid(n, 9.0 * s, cells);
        return sample_profile(grid, [s](double r) { return std::exp(-0.5 * r * r / (s * s)); });
    }
    if (spec.name == "triangle") {
        const RadialGrid grid = make_grid(n, 2.0, cells);
        return sample_profile(grid, [](double r) { return std::max(1.0 - r, 0.0); });
    }
    if (spec.name == "smoothed_indicator") {
        const double d = spec.width;
        if (!(d > 0.0) || !(d < 1.0))
            throw input_error("smoothed_indicator family: width must lie in (0,1)");
        const RadialGrid grid = make_grid(n, 2.0, cells);
        return sample_profile(grid, [d](double r) {
            if (r <= 1.0 - d) return 1.0;
            if (r >= 1.0) return 0.0;
            const double s = (r - (1.0 - d)) / d;
            return 1.0 - s * s * (3.0 - 2.0 * s);
        });
    }
    if (spec.name == "poly_bump") {
        const RadialGrid grid = make_grid(n, 2.0, cells);
        return sample_profile(grid, [](double r) {
            const double t = std::max(1.0 - r * r, 0.0);
            return t * t;
        });
    }
    if (spec.name == "optimizer") {
        if (p == 0.0) return build_unweighted_optimizer(n, cells).g;
        if (p == 2.0) return build_weighted_optimizer(n, WeightedVariant::auto_select, cells).g;
        throw input_error("optimizer family: p must be 0 or 2");
    }
    throw input_error("unknown profile family '" + spec.name + "'");
}

inline std::vector<FamilySpec> default_battery_families()
{
    return {{"gaussian", 1.0, 0.25},
            {"triangle", 1.0, 0.25},
            {"smoothed_indicator", 1.0, 0.25},
            {"poly_bump", 1.0, 0.25},
            {"optimizer", 1.0, 0.25}};
}

} // namespace nashdual
