#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "nashdual/errors.hpp"

namespace nashdual {

inline constexpr double pi = 3.14159265358979323846264338327950288;

// Surface measure of the unit sphere in R^n, omega_{n-1} = 2 pi^{n/2} / Gamma(n/2).
// n = 1 gives omega_0 = 2, which realizes the even-extension convention for
// functions on the line.
inline double surface_area(int n)
{
    return 2.0 * std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n);
}

inline double ball_volume(int n, double r = 1.0)
{
    return surface_area(n) * std::pow(r, n) / n;
}

enum class GridScheme { uniform, graded };

// Radial quadrature grid for integrals of the form
//     integral_0^{r_max} f(r) r^{n-1} dr.
// The weights integrate the piecewise-linear interpolant of the samples
// exactly against r^{n-1}, so node data that is exactly piecewise linear
// (indicators with a node on the jump, triangles, ...) is integrated exactly.
struct RadialGrid {
    int dim = 0;
    std::vector<double> nodes;    // r_0 = 0 < r_1 < ... < r_M
    std::vector<double> weights;  // nonnegative, for r^{n-1} dr
    double surface_factor = 0.0;  // omega_{n-1}

    std::size_t size() const { return nodes.size(); }
    double r_max() const { return nodes.back(); }
};

namespace detail {

// Node weights for exact integration of the piecewise-linear interpolant
// against r^q dr, q > -1 real. On a cell [a,b]:
//   integral hat_left  r^q dr = (b I0 - I1) / (b - a)
//   integral hat_right r^q dr = (I1 - a I0) / (b - a)
// with I0 = integral r^q, I1 = integral r^{q+1}.
inline std::vector<double> linear_weights(const std::vector<double>& nodes, double q)
{
    const std::size_t m = nodes.size();
    std::vector<double> w(m, 0.0);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double a = nodes[i], b = nodes[i + 1];
        const double i0 = (std::pow(b, q + 1) - std::pow(a, q + 1)) / (q + 1);
        const double i1 = (std::pow(b, q + 2) - std::pow(a, q + 2)) / (q + 2);
        w[i] += (b * i0 - i1) / (b - a);
        w[i + 1] += (i1 - a * i0) / (b - a);
    }
    return w;
}

// integral_a^b t^alpha dt for integer alpha (alpha = -1 handled via log).
inline double power_integral(int alpha, double a, double b)
{
    if (alpha == -1) return std::log(b / a);
    return (std::pow(b, alpha + 1) - std::pow(a, alpha + 1)) / (alpha + 1);
}

} // namespace detail

inline RadialGrid grid_from_nodes(int n, std::vector<double> nodes)
{
    RadialGrid g;
    g.dim = n;
    g.weights = detail::linear_weights(nodes, n - 1.0);
    g.nodes = std::move(nodes);
    g.surface_factor = surface_area(n);
    return g;
}

// Builds a radial grid with m cells (m+1 nodes). The graded scheme clusters
// nodes near r = 0 and near r = 1 (where the optimizer profiles kink).
inline RadialGrid make_grid(int n, double r_max, int m, GridScheme scheme = GridScheme::uniform)
{
    if (n < 1) throw input_error("make_grid: dimension must be >= 1");
    if (!(r_max > 0.0) || !std::isfinite(r_max))
        throw input_error("make_grid: r_max must be finite and positive");
    if (m < 16) throw input_error("make_grid: need at least 16 cells");

    std::vector<double> nodes;
    nodes.reserve(static_cast<std::size_t>(m) + 1);
    if (scheme == GridScheme::uniform) {
        for (int i = 0; i <= m; ++i) nodes.push_back(r_max * i / m);
    } else if (r_max <= 1.0) {
        // Chebyshev-extrema map clusters at both ends of [0, r_max].
        for (int i = 0; i <= m; ++i)
            nodes.push_back(r_max * 0.5 * (1.0 - std::cos(pi * i / m)));
    } else {
        // Two segments: [0,1] clustered at both ends, [1, r_max] clustered at 1.
        const int m1 = m / 2, m2 = m - m1;
        for (int i = 0; i < m1; ++i)
            nodes.push_back(0.5 * (1.0 - std::cos(pi * i / m1)));
        for (int i = 0; i <= m2; ++i)
            nodes.push_back(1.0 + (r_max - 1.0) * (1.0 - std::cos(0.5 * pi * i / m2)));
    }
    nodes.front() = 0.0;
    nodes.back() = r_max;
    return grid_from_nodes(n, std::move(nodes));
}

} // namespace nashdual
