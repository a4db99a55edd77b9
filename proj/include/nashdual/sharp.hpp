#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "nashdual/eigen.hpp"
#include "nashdual/infconv.hpp"

namespace nashdual {

// Extremal profiles and sharp constants of the dual Nash inequality
//   L_n ||g||_2^{(2n+4)/(n+4)} >= G(g)
// and its |x|^2-weighted generalization.

struct Exponents {
    double gamma = 0.0;  // Nash form:  ||f||_2^{2+gamma} <= C ||grad f||_2^2 |||x|^p f||_1^gamma
    double beta = 0.0;   // dual form:  L ||g||_2^{2 beta} >= G_w(g)
};

// Unique exponents making both inequalities scale-invariant. gamma follows
// from f -> f(lambda x); beta from g -> lambda^{n+2+p} g(lambda x), under
// which both terms of the weighted infimal convolution pick up
// lambda^{n+2+2p} while ||g||_2^2 picks up lambda^{n+4+2p}.
inline Exponents exponents(int n, double p)
{
    if (n < 1) throw input_error("exponents: dimension must be >= 1");
    if (p < 0.0) throw input_error("exponents: weight power must be >= 0");
    return {4.0 / (n + 2.0 * p), (n + 2.0 + 2.0 * p) / (n + 4.0 + 2.0 * p)};
}

namespace detail {

// composite-Simpson quadrature of F over [0, inf) via r = tan(theta);
// the theta = pi/2 endpoint is evaluated at a huge radius so integrands whose
// substituted form tends to a nonzero constant are handled correctly
inline double halfline_integral(const std::function<double(double)>& F, int panels = 4000)
{
    const double h = 0.5 * pi / panels;
    double s = 0.0;
    for (int k = 0; k <= panels; ++k) {
        const double t = k == panels ? 1e12 : std::tan(k * h);
        const double v = F(t) * (1.0 + t * t);
        const double w = (k == 0 || k == panels) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        s += w * v;
    }
    return s * h / 3.0;
}

} // namespace detail

// Sharp constant C_{n,1} of ||u||_{2n/(n-2)}^2 <= C_{n,1} ||grad u||_2^2
// (equivalently of the inverse-Laplacian HLS bound used by the sub-optimal
// chain). The closed form is validated on first use by evaluating the
// quotient on the extremal profile (1+r^2)^{-(n-2)/2}; a mismatch beyond
// 1e-3 relative aborts.
inline double sobolev_constant(int n)
{
    if (n < 3) throw input_error("sobolev_constant: defined for n >= 3");
    if (n > 10) throw input_error("sobolev_constant: dimension must be <= 10");
    static const std::array<double, 11> cache = [] {
        std::array<double, 11> c{};
        for (int d = 3; d <= 10; ++d) {
            const double sphere = 2.0 * std::pow(pi, 0.5 * (d + 1)) / std::tgamma(0.5 * (d + 1));
            const double closed = 4.0 / (d * (d - 2.0)) * std::pow(sphere, -2.0 / d);
            const double omega = surface_area(d);
            const double num = omega * detail::halfline_integral([d](double r) {
                                   return std::pow(1.0 + r * r, -d) * std::pow(r, d - 1);
                               });
            const double den = (d - 2.0) * (d - 2.0) * omega *
                               detail::halfline_integral([d](double r) {
                                   return std::pow(r, d + 1) * std::pow(1.0 + r * r, -d);
                               });
            const double numeric = std::pow(num, (d - 2.0) / d) / den;
            if (std::abs(numeric - closed) > 1e-3 * closed)
                throw solver_error("sobolev_constant: numeric Sobolev quotient " +
                                   std::to_string(numeric) + " disagrees with closed form " +
                                   std::to_string(closed) + " for n = " + std::to_string(d));
            c[d] = closed;
        }
        return c;
    }();
    return cache[n];
}

struct OptimizerProfile {
    RadialProfile g;
    double support_radius = 1.0;
    // unweighted metadata
    double mu1 = 0.0;
    double coeff_a = 0.0;   // amplitude of the eigenfunction part
    double mean_g = 0.0;    // <g> over the supporting ball
    double ball_vol = 0.0;
    // weighted (|x|^2) metadata
    bool weighted = false;
    double lambda0 = 0.0;
    double rho0 = 0.0;
    double alpha = 0.0;     // <g>/<r^2>, the bound multiplier of the model h
    double C = 0.0;         // 1/lambda0^2
    ConsistencyVariant variant = ConsistencyVariant::rederived;
    double el_residual = 0.0;           // relative EL defect of this profile
    double el_residual_rejected = 0.0;  // the other variant's defect (auto only)
    double lambda0_printed = 0.0;
    double lambda0_rederived = 0.0;
};

// quadrature mean over the supporting ball, so that g - <g> 1_B is exactly
// mass-free in the grid's own arithmetic
inline double ball_mean(const RadialProfile& g, double R)
{
    return integrate(g) / integrate(ball_indicator(g.grid, R));
}

// Unweighted extremal profile: g = a psi_1 + <g> on B(R), zero outside, with
// psi_1(r) = J(sqrt(mu_1) r / R) the principal radial Neumann eigenfunction,
// <g> = mu_1(R)/|B(R)| (which makes the potential integral equal 1) and
// a = -<g>/psi_1(R) (which makes g vanish at the boundary).
inline OptimizerProfile build_unweighted_optimizer(int n, int cells = 2048, double support_radius = 1.0)
{
    detail::require_dim_range(n, "build_unweighted_optimizer");
    if (!(support_radius > 0.0)) throw input_error("build_unweighted_optimizer: radius must be positive");
    const EigenSolution eig = neumann_mu1(n, 64);
    const double lam = eig.lambda;
    const double mu1_R = lam * lam / (support_radius * support_radius);
    const double R = support_radius;

    const RadialGrid grid = R == 1.0 ? make_grid(n, 2.0, cells, GridScheme::graded)
                                     : make_grid(n, 2.0 * R, cells, GridScheme::uniform);
    const double ballv = ball_volume(n, R);
    const double c = mu1_R / ballv;
    const double psi1_R = radial_bessel(n, lam).j;
    const double a = -c / psi1_R;

    std::vector<double> radii;
    radii.reserve(grid.size());
    for (double r : grid.nodes) radii.push_back(std::min(r, R) * lam / R);
    const auto jvals = radial_bessel_path(n, radii);

    RadialProfile g;
    g.grid = grid;
    g.values.assign(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.nodes[i];
        if (r < R) g.values[i] = a * jvals[i].j + c;
        else if (r == R) g.values[i] = 0.0;
    }
    g.decreasing = is_nonincreasing(g.values);

    OptimizerProfile out;
    out.g = std::move(g);
    out.support_radius = R;
    out.mu1 = mu1_R;
    out.coeff_a = a;
    out.mean_g = c;
    out.ball_vol = ballv;
    return out;
}

// L_n from the closed chain G(ghat) = (||ghat||_2^2 / mu_1 + <ghat>) / 2,
// cross-checked against the infimal-convolution solver.
inline double sharp_constant_L(int n, int cells = 2048, double support_radius = 1.0,
                               bool cross_check = true)
{
    const OptimizerProfile opt = build_unweighted_optimizer(n, cells, support_radius);
    const double l2sq = lp_norm(opt.g, 2.0) * lp_norm(opt.g, 2.0);
    const double gval = 0.5 * (l2sq / opt.mu1 + opt.mean_g);
    const double L = gval * std::pow(std::sqrt(l2sq), -2.0 * (n + 2.0) / (n + 4.0));
    if (cross_check) {
        const InfConvSolution sol = infconv_value(opt.g, 0.0);
        if (std::abs(sol.g_value - gval) > 5e-4 * gval)
            throw solver_error("sharp_constant_L: infimal-convolution cross-check failed ("
                               + std::to_string(sol.g_value) + " vs " + std::to_string(gval) +
                               "); the grid is too coarse");
    }
    return L;
}

// Sub-optimal constant from the HLS/Chebyshev chain:
// A_g(c) <= C_{n,1} (||g||_2^2)^{(n+2)/n} c^{-4/n}, minimized in closed form.
inline double suboptimal_K(int n)
{
    if (n < 3)
        throw input_error("suboptimal_K: the chain is carried out for n >= 3 only");
    const double C = sobolev_constant(n);
    return (std::pow(4.0 / n, n / (n + 4.0)) + std::pow(n / 4.0, 4.0 / (n + 4.0))) *
           std::pow(C, n / (n + 4.0));
}

enum class WeightedVariant { printed, rederived, auto_select };

namespace detail {

// Euler-Lagrange defect of the weighted candidate, relative to the scale of
// the right-hand side: || C (-Delta) g - (g - alpha r^2 1_B) ||_inf over the
// interior of the supporting ball, away from the boundary kink.
inline double weighted_el_residual(const RadialProfile& g, double C, double alpha, double R)
{
    const RadialProfile lap = radial_laplacian(g);
    std::size_t jR = g.size() - 1;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.grid.nodes[i] >= R) { jR = i; break; }
    double resid = 0.0, scale = 0.0;
    for (std::size_t i = 0; i + 3 < jR; ++i) {
        const double r = g.grid.nodes[i];
        const double rhs = g.values[i] - alpha * r * r;
        scale = std::max(scale, std::abs(rhs));
        resid = std::max(resid, std::abs(-C * lap.values[i] - rhs));
    }
    return resid / std::max(scale, 1e-300);
}

struct WeightedBuild {
    OptimizerProfile opt;
    double unnormalized_weighted_integral = 0.0;
};

inline WeightedBuild build_weighted_variant(int n, ConsistencyVariant variant, int cells)
{
    const EigenSolution eig = consistency_root(n, variant, 64);
    const double lam = eig.lambda;
    const double v = variant == ConsistencyVariant::printed ? 1.0 : 2.0;
    const double rho0 = v * lam * lam / (lam * lam - 2.0 * n);
    const double C = 1.0 / (lam * lam);
    const double f1 = 2.0 / rho0;  // boundary value of the eigenfunction part
    const double A = f1 / radial_bessel(n, lam).j;

    const RadialGrid grid = make_grid(n, 2.0, cells, GridScheme::graded);
    std::vector<double> radii;
    radii.reserve(grid.size());
    for (double r : grid.nodes) radii.push_back(std::min(r, 1.0) * lam);
    const auto jvals = radial_bessel_path(n, radii);

    RadialProfile g;
    g.grid = grid;
    g.values.assign(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.nodes[i];
        if (r < 1.0) g.values[i] = A * jvals[i].j - (r * r - 1.0 + f1);
        else if (r == 1.0) g.values[i] = 0.0;
    }
    // The boundary normalization f(1) = 2/rho_0 produces the negative of the
    // nonnegative representative; optimizers are closed under scalar
    // multiples, so flip to the sign with positive mass.
    if (integrate(g) < 0.0)
        for (double& x : g.values) x = -x;

    // alpha = <g>/<r^2> with quadrature means, so g - alpha r^2 1_B is
    // exactly mass-free; then rescale so that integral phi |x|^2 dx = 1 with
    // phi the potential of the model pair (the elC normalization)
    const RadialProfile indicator = ball_indicator(grid, 1.0);
    double alpha = 0.0;
    {
        RadialProfile wball = indicator;
        for (std::size_t i = 0; i < wball.size(); ++i)
            wball.values[i] *= grid.nodes[i] * grid.nodes[i];
        alpha = integrate(g) / integrate(wball);
    }
    RadialProfile u = g;
    for (std::size_t i = 0; i < u.size(); ++i)
        u.values[i] -= alpha * grid.nodes[i] * grid.nodes[i] * indicator.values[i];
    const PotentialResult pot = newton_potential(u);
    const double I = pot.weighted_phi_integral(2.0);
    if (!(std::abs(I) > 0.0) || !std::isfinite(I))
        throw solver_error("build_weighted_optimizer: degenerate elC normalization integral");
    const double t = 1.0 / std::abs(I);
    for (double& x : g.values) x *= t;
    alpha *= t;
    g.decreasing = is_nonincreasing(g.values);

    WeightedBuild out;
    out.opt.g = std::move(g);
    out.opt.support_radius = 1.0;
    out.opt.weighted = true;
    out.opt.lambda0 = lam;
    out.opt.rho0 = rho0;
    out.opt.alpha = alpha;
    out.opt.C = C;
    out.opt.variant = variant;
    out.opt.ball_vol = ball_volume(n, 1.0);
    out.opt.mean_g = ball_mean(out.opt.g, 1.0);
    out.opt.el_residual = weighted_el_residual(out.opt.g, C, alpha, 1.0);
    out.unnormalized_weighted_integral = I;
    return out;
}

} // namespace detail

// |x|^2-weighted extremal profile (p = 2). `auto_select` builds both
// consistency variants and keeps the one with the smaller Euler-Lagrange
// defect; trusting either formula blindly is not an option because the two
// source displays disagree by a factor of 2.
inline OptimizerProfile build_weighted_optimizer(int n, WeightedVariant variant = WeightedVariant::auto_select,
                                                 int cells = 2048)
{
    detail::require_dim_range(n, "build_weighted_optimizer");
    if (variant != WeightedVariant::auto_select) {
        const ConsistencyVariant cv = variant == WeightedVariant::printed
                                          ? ConsistencyVariant::printed
                                          : ConsistencyVariant::rederived;
        auto b = detail::build_weighted_variant(n, cv, cells);
        b.opt.lambda0_printed = cv == ConsistencyVariant::printed ? b.opt.lambda0 : 0.0;
        b.opt.lambda0_rederived = cv == ConsistencyVariant::rederived ? b.opt.lambda0 : 0.0;
        return b.opt;
    }
    auto printed = detail::build_weighted_variant(n, ConsistencyVariant::printed, cells);
    auto rederived = detail::build_weighted_variant(n, ConsistencyVariant::rederived, cells);
    auto& win = rederived.opt.el_residual <= printed.opt.el_residual ? rederived : printed;
    auto& lose = rederived.opt.el_residual <= printed.opt.el_residual ? printed : rederived;
    if (win.opt.el_residual > 1e-3)
        throw solver_error("build_weighted_optimizer: neither consistency variant satisfies the "
                           "Euler-Lagrange equation (residuals " +
                           std::to_string(printed.opt.el_residual) + " printed, " +
                           std::to_string(rederived.opt.el_residual) + " rederived)");
    win.opt.el_residual_rejected = lose.opt.el_residual;
    win.opt.lambda0_printed = printed.opt.lambda0;
    win.opt.lambda0_rederived = rederived.opt.lambda0;
    return win.opt;
}

// ---------------------------------------------------------------------------
// constants report
// ---------------------------------------------------------------------------

struct ConstantsReport {
    int n = 0;
    double p = 0.0;
    double L = 0.0;                // sharp dual constant L_n or L_{n,p}
    double K = 0.0;                // sub-optimal constant (p = 0, n >= 3); 0 = absent
    double mu1 = 0.0;              // p = 0
    double lambda0 = 0.0;          // p = 2, chosen variant
    double lambda0_printed = 0.0;  // p = 2
    double lambda0_rederived = 0.0;
    double rho0 = 0.0;
    std::string variant;           // p = 2: "printed" | "rederived"
    double gamma = 0.0, beta = 0.0;
    double hls_constant = 0.0;     // C_{n,1} used by K (p = 0, n >= 3)
    double el_residual = 0.0, el_residual_rejected = 0.0;
    std::vector<std::string> discrepancy_notes;  // always present, possibly empty
};

namespace detail {

inline std::string fmt(double x, int digits = 8)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

inline void weighted_notes(int n, const OptimizerProfile& opt, std::vector<std::string>& notes)
{
    const auto ratio_gap = [n](double lam, double v) {
        const BesselValue b = radial_bessel(n, lam);
        return std::abs(lam * b.jp / b.j - v * lam * lam / (lam * lam - 2.0 * n));
    };
    notes.push_back("consistency equation has two circulating forms: lambda J'/J = lambda^2/(lambda^2-2n) "
                    "(root " + fmt(opt.lambda0_printed) + ") and the Robin-ratio form "
                    "lambda J'/J = 2 lambda^2/(lambda^2-2n) (root " + fmt(opt.lambda0_rederived) +
                    "); the Euler-Lagrange residual selects the " +
                    std::string(opt.variant == ConsistencyVariant::printed ? "printed" : "rederived") +
                    " variant (defects " + fmt(opt.el_residual, 3) + " accepted vs " +
                    fmt(opt.el_residual_rejected, 3) + " rejected)");
    if (n == 3) {
        const double legacy = 1.60412258;
        notes.push_back("reference value lambda0 = 1.60412258 satisfies neither form "
                        "(equation gaps " + fmt(ratio_gap(legacy, 1.0), 3) + " and " +
                        fmt(ratio_gap(legacy, 2.0), 3) + "); quarantined, not used");
    }
}

} // namespace detail

// Weighted closed chain: for the normalized optimizer the model pair gives
// G_w(ghat) = (C ||ghat||_2^2 + alpha) / 2 with C = 1/lambda0^2 and
// alpha = <g>/<r^2>, mirroring the unweighted (||g||_2^2/mu_1 + <g>)/2.
inline double weighted_g_closed(const OptimizerProfile& opt)
{
    const double l2 = lp_norm(opt.g, 2.0);
    return 0.5 * (opt.C * l2 * l2 + opt.alpha);
}

// Weighted sharp constant L_{n,2} = G_w(ghat)/||ghat||_2^{2 beta} from the
// closed chain, cross-checked against the infimal-convolution solver.
inline ConstantsReport weighted_constant_L(int n, int cells = 2048)
{
    const OptimizerProfile opt = build_weighted_optimizer(n, WeightedVariant::auto_select, cells);
    const InfConvSolution sol = infconv_value(opt.g, 2.0);
    const Exponents ex = exponents(n, 2.0);

    const double gval = weighted_g_closed(opt);
    if (std::abs(sol.g_value - gval) > 5e-4 * gval)
        throw solver_error("weighted_constant_L: infimal-convolution cross-check failed (" +
                           std::to_string(sol.g_value) + " vs closed chain " +
                           std::to_string(gval) + "); the grid is too coarse");

    ConstantsReport rep;
    rep.n = n;
    rep.p = 2.0;
    rep.L = gval / std::pow(lp_norm(opt.g, 2.0), 2.0 * ex.beta);
    rep.lambda0 = opt.lambda0;
    rep.lambda0_printed = opt.lambda0_printed;
    rep.lambda0_rederived = opt.lambda0_rederived;
    rep.rho0 = opt.rho0;
    rep.variant = opt.variant == ConsistencyVariant::printed ? "printed" : "rederived";
    rep.gamma = ex.gamma;
    rep.beta = ex.beta;
    rep.el_residual = opt.el_residual;
    rep.el_residual_rejected = opt.el_residual_rejected;
    detail::weighted_notes(n, opt, rep.discrepancy_notes);
    rep.discrepancy_notes.push_back(
        "gamma = 4/(n+2p) is the scale-invariant exponent; the circulating n/(4+2p) fails the "
        "p = 0 reduction and is not used");
    return rep;
}

inline ConstantsReport constants_report(int n, double p, int cells = 2048)
{
    if (p == 0.0) {
        ConstantsReport rep;
        rep.n = n;
        rep.p = 0.0;
        const OptimizerProfile opt = build_unweighted_optimizer(n, cells);
        rep.mu1 = opt.mu1;
        rep.L = sharp_constant_L(n, cells);
        const Exponents ex = exponents(n, 0.0);
        rep.gamma = ex.gamma;
        rep.beta = ex.beta;
        if (n >= 3) {
            rep.hls_constant = sobolev_constant(n);
            rep.K = suboptimal_K(n);
        } else {
            rep.discrepancy_notes.push_back(
                "sub-optimal constant K_n omitted for n < 3: the HLS/Chebyshev chain needs the "
                "zero-mean modification that is out of scope here");
        }
        return rep;
    }
    if (p == 2.0) return weighted_constant_L(n, cells);
    throw input_error("constants_report: only p = 0 and p = 2 are supported");
}

} // namespace nashdual
