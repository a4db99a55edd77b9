#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "nashdual/bessel.hpp"
#include "nashdual/radial_profile.hpp"
#include "nashdual/roots.hpp"

namespace nashdual {

enum class EigenKind { neumann, robin, consistency };
enum class ConsistencyVariant { printed, rederived };

// A resolved radial eigenvalue problem on the unit ball. lambda is the
// frequency (eigenvalue of -Delta is lambda^2); the profile samples
// r -> J(lambda r) on [0,1]; the bracket encloses the root to <= 1e-12.
struct EigenSolution {
    int dim = 0;
    double lambda = 0.0;
    RadialProfile profile;
    double boundary_value = 0.0;  // J(lambda)
    double boundary_slope = 0.0;  // lambda J'(lambda)
    EigenKind kind = EigenKind::neumann;
    double rho = 0.0;                                           // Robin ratio target
    ConsistencyVariant variant = ConsistencyVariant::printed;   // consistency kind only
    Bracket bracket;
    bool beyond_primary_bracket = false;  // consistency: root found past sqrt(2n)

    double mu() const { return lambda * lambda; }
};

namespace detail {

inline void require_dim_range(int n, const char* where)
{
    if (n < 1 || n > 10)
        throw input_error(std::string(where) + ": dimension must be in 1..10");
}

// zeros of J below lmax (poles of the ratio lambda J'/J)
inline std::vector<double> bessel_j_zeros(int n, double lmax)
{
    std::vector<double> zeros;
    const auto f = [n](double x) { return radial_bessel(n, x).j; };
    double a = 0.05;
    while (a < lmax) {
        double root;
        Bracket cert;
        if (!scan_first_root(f, a, lmax, 0.05, root, cert)) break;
        zeros.push_back(root);
        a = root + 0.05;
    }
    return zeros;
}

inline RadialProfile unit_ball_bessel_profile(int n, double lambda, int cells)
{
    RadialGrid grid = make_grid(n, 1.0, cells, GridScheme::uniform);
    std::vector<double> radii(grid.nodes);
    for (double& r : radii) r *= lambda;
    const auto vals = radial_bessel_path(n, radii);
    RadialProfile p;
    p.grid = std::move(grid);
    p.values.reserve(vals.size());
    for (const auto& v : vals) p.values.push_back(v.j);
    p.decreasing = is_nonincreasing(p.values);
    return p;
}

inline EigenSolution finish_solution(int n, double lambda, EigenKind kind, int cells)
{
    EigenSolution s;
    s.dim = n;
    s.lambda = lambda;
    s.kind = kind;
    const BesselValue bv = radial_bessel(n, lambda);
    s.boundary_value = bv.j;
    s.boundary_slope = lambda * bv.jp;
    s.profile = unit_ball_bessel_profile(n, lambda, cells);
    return s;
}

} // namespace detail

// Principal nonzero Neumann eigenvalue of -Delta on the unit ball:
// lambda = first positive root of J'(lambda), mu_1 = lambda^2.
inline EigenSolution neumann_mu1(int n, int cells = 2048)
{
    detail::require_dim_range(n, "neumann_mu1");
    const auto fp = [n](double x) { return radial_bessel(n, x).jp; };
    double root;
    Bracket cert;
    // J' ~ -r/n near 0, strictly negative until the first interior minimum of J
    if (!detail::scan_first_root(fp, 0.2, 6.0 * pi, 0.05, root, cert))
        throw solver_error("neumann_mu1: no root of J' found in (0.2, 6*pi)");
    EigenSolution s = detail::finish_solution(n, root, EigenKind::neumann, cells);
    s.bracket = cert;
    return s;
}

// Smallest lambda > 0 with lambda J'(lambda) / J(lambda) = rho. The ratio has
// poles at the zeros of J, so the scan runs branch by branch between
// consecutive poles and never brackets across one. With lambda_max = 0 the
// search extends over the first few branches (enough for every real rho).
inline EigenSolution robin_eigen(int n, double rho, double lambda_max = 0.0, int cells = 2048)
{
    detail::require_dim_range(n, "robin_eigen");
    const double lmax = lambda_max > 0.0 ? lambda_max : 6.0 * pi;
    const auto target = [n, rho](double x) {
        const BesselValue v = radial_bessel(n, x);
        return x * v.jp - rho * v.j;  // zero iff lambda J'/J = rho away from poles
    };
    auto poles = detail::bessel_j_zeros(n, lmax);
    poles.push_back(lmax);
    double lo = 1e-3;
    for (double hi : poles) {
        if (hi <= lo) continue;
        const double eps = 1e-9 * std::max(1.0, hi);
        double root;
        Bracket cert;
        if (detail::scan_first_root(target, lo + eps, hi - eps, 0.01, root, cert)) {
            // discard spurious zeros sitting on a pole of the ratio
            if (std::abs(radial_bessel(n, root).j) > 1e-8) {
                EigenSolution s = detail::finish_solution(n, root, EigenKind::robin, cells);
                s.rho = rho;
                s.bracket = cert;
                return s;
            }
        }
        lo = hi;
    }
    throw solver_error("robin_eigen: no root with lambda J'/J = " + std::to_string(rho) +
                       " in (0, " + std::to_string(lmax) + ")");
}

// Consistency equation of the |x|^2-weighted optimizer. The two variants are
// first-class because the source displays are mutually inconsistent:
//   printed    lambda J'(lambda)/J(lambda) =   lambda^2 / (lambda^2 - 2n)
//   rederived  lambda J'(lambda)/J(lambda) = 2 lambda^2 / (lambda^2 - 2n)
// (the rederived right side is the Robin ratio rho = 2/(1 - 2nC) with
// C = 1/lambda^2). Which one the optimizer actually satisfies is decided
// downstream by the Euler-Lagrange residual, not here.
inline EigenSolution consistency_root(int n, ConsistencyVariant variant, int cells = 2048)
{
    if (n < 1) throw input_error("consistency_root: dimension must be >= 1");
    detail::require_dim_range(n, "consistency_root");
    const double v = (variant == ConsistencyVariant::printed) ? 1.0 : 2.0;
    const double split = std::sqrt(2.0 * n);
    const auto target = [n, v](double x) {
        const BesselValue b = radial_bessel(n, x);
        return x * b.jp / b.j - v * x * x / (x * x - 2.0 * n);
    };
    const double lmax = 4.0 * pi;
    auto poles = detail::bessel_j_zeros(n, lmax);
    poles.push_back(split);
    poles.push_back(lmax);
    std::sort(poles.begin(), poles.end());

    double lo = 0.05;
    for (double hi : poles) {
        if (hi <= lo) continue;
        const double eps = 1e-7 * std::max(1.0, hi);
        double root;
        Bracket cert;
        if (detail::scan_first_root(target, lo + eps, hi - eps, 0.005, root, cert)) {
            EigenSolution s = detail::finish_solution(n, root, EigenKind::consistency, cells);
            s.kind = EigenKind::consistency;
            s.variant = variant;
            s.rho = v * root * root / (root * root - 2.0 * n);
            s.bracket = cert;
            s.beyond_primary_bracket = root > split;
            return s;
        }
        lo = hi;
    }
    throw solver_error("consistency_root: no root found below 4*pi");
}

} // namespace nashdual
