#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "nashdual/potential.hpp"
#include "oracles.hpp"

using namespace nashdual;

TEST(RadialGrid, BallVolumes)
{
    // uniform n=3: |B(1)| = 4 pi / 3
    auto g3 = make_grid(3, 2.0, 2048);
    EXPECT_NEAR(integrate(ball_indicator(g3)), 4.0 * pi / 3.0, 1e-5);
    // n=1 even-extension convention: |B(1)| = 2
    auto g1 = make_grid(1, 1.0, 1024);
    EXPECT_NEAR(integrate(ball_indicator(g1)), 2.0, 1e-10);
    // graded n=4: |B(1)| = omega_3 / 4 = pi^2 / 2
    auto g4 = make_grid(4, 1.0, 4096, GridScheme::graded);
    EXPECT_NEAR(integrate(ball_indicator(g4)), pi * pi / 2.0, 1e-6);
}

TEST(RadialGrid, Invariants)
{
    for (auto scheme : {GridScheme::uniform, GridScheme::graded}) {
        auto g = make_grid(3, 2.5, 64, scheme);
        ASSERT_EQ(g.nodes.front(), 0.0);
        for (std::size_t i = 0; i + 1 < g.size(); ++i)
            ASSERT_LT(g.nodes[i], g.nodes[i + 1]);
        for (double w : g.weights) ASSERT_GE(w, 0.0);
    }
    EXPECT_NEAR(surface_area(1), 2.0, 1e-15);
    EXPECT_NEAR(surface_area(2), 2.0 * pi, 1e-12);
    EXPECT_NEAR(surface_area(3), 4.0 * pi, 1e-12);
}

TEST(RadialGrid, RejectsBadArguments)
{
    EXPECT_THROW(make_grid(3, 1.0, 15), input_error);
    EXPECT_THROW(make_grid(3, 0.0, 64), input_error);
    EXPECT_THROW(make_grid(3, std::nan(""), 64), input_error);
    EXPECT_THROW(make_grid(0, 1.0, 64), input_error);
}

TEST(Integrate, WeightedBallMoments)
{
    // graded grid: the jump cell at r = 1 is tiny, so indicator moments are
    // sharp for every weight power, not just the mass the jump value fixes
    auto grid = make_grid(3, 2.0, 2048, GridScheme::graded);
    auto ind = ball_indicator(grid);
    EXPECT_NEAR(integrate(ind, 0.0), 4.0 * pi / 3.0, 1e-12);
    // integral_{B(1)} |x|^2 dx = 4 pi integral_0^1 r^4 dr = 4 pi / 5
    EXPECT_NEAR(integrate(ind, 2.0), 4.0 * pi / 5.0, 1e-9);
    EXPECT_EQ(integrate(zero_profile(grid)), 0.0);
}

TEST(Integrate, PolynomialMomentsSecondOrder)
{
    // integrate r^k 1_{B(1)} for k <= 2: O(h^2) agreement with omega/(n+k),
    // the residual coming entirely from the one-cell jump representation
    for (int n : {1, 2, 3}) {
        for (int k = 0; k <= 2; ++k) {
            const auto err = [n, k](int cells) {
                auto grid = make_grid(n, 2.0, cells, GridScheme::graded);
                auto f = sample_profile(grid, [k](double r) {
                    return r <= 1.0 ? std::pow(r, k) : 0.0;
                });
                return std::abs(integrate(f) - surface_area(n) / (n + k));
            };
            const double e1 = err(512), e2 = err(1024);
            EXPECT_LE(e2, 1e-4) << "n=" << n << " k=" << k;
            EXPECT_GE(e1 / e2, 3.0) << "n=" << n << " k=" << k;
        }
    }
}

TEST(Integrate, DivergentTailRejected)
{
    auto grid = make_grid(3, 4.0, 64);
    auto f = sample_profile(grid, [](double r) { return 1.0 / (1.0 + r * r); },
                            Tail{TailKind::power, 2.0});
    EXPECT_THROW(integrate(f), input_error);             // q = 2 <= n
    EXPECT_THROW(integrate(f, 2.0), input_error);        // worse with the weight
    f.tail.exponent = 6.0;
    EXPECT_NO_THROW(integrate(f, 2.0));                  // q = 6 > n + p
}

TEST(LpNorm, ClosedForms)
{
    auto grid = make_grid(3, 2.0, 2048, GridScheme::graded);
    auto ind = ball_indicator(grid);
    EXPECT_NEAR(lp_norm(ind, 2.0), std::sqrt(4.0 * pi / 3.0), 1e-5);
    auto scaled = ind;
    for (double& v : scaled.values) v *= 0.37;
    EXPECT_NEAR(lp_norm(scaled, std::numeric_limits<double>::infinity()), 0.37, 1e-15);

    // Gaussian mass: integral e^{-r^2/2} dx = (2 pi)^{3/2}; cross-checked by
    // an independent half-line quadrature
    auto gg = make_grid(3, 10.0, 4096);
    auto gauss = sample_profile(gg, [](double r) { return std::exp(-0.5 * r * r); });
    const double closed = std::pow(2.0 * pi, 1.5);
    const double indep = 4.0 * pi * oracle::simpson_halfline([](double r) {
        return std::exp(-0.5 * r * r) * r * r;
    });
    EXPECT_NEAR(indep, closed, 1e-9);
    EXPECT_NEAR(lp_norm(gauss, 1.0), closed, 1e-4);
}

TEST(Rescale, ChangeOfVariables)
{
    auto grid = make_grid(3, 2.0, 512);
    auto f = sample_profile(grid, [](double r) { return std::exp(-3.0 * r * r); });
    auto id = rescale(f, 1.0);
    for (std::size_t i = 0; i < f.size(); ++i) ASSERT_EQ(id.values[i], f.values[i]);

    const int n = 3;
    for (double lam : {0.5, 2.0}) {
        const double a = n + 2.0;
        auto fl = rescale(f, lam, a);
        const double l2 = lp_norm(f, 2.0), l2l = lp_norm(fl, 2.0);
        EXPECT_NEAR(l2l * l2l, std::pow(lam, 2.0 * a - n) * l2 * l2, 1e-10 * l2 * l2);
        EXPECT_NEAR(lp_norm(fl, std::numeric_limits<double>::infinity()),
                    std::pow(lam, a) * lp_norm(f, std::numeric_limits<double>::infinity()), 1e-12);
    }
    EXPECT_THROW(rescale(f, -1.0), input_error);
}

TEST(NewtonPotential, BallClosedForm)
{
    // phi(0) = 1/2, phi(r<=1) = 1/2 - r^2/6, phi(r>=1) = 1/(3r)
    auto grid = make_grid(3, 2.0, 2048, GridScheme::graded);
    auto ind = ball_indicator(grid);
    auto pot = newton_potential(ind);
    EXPECT_NEAR(pot.phi.values[0], 0.5, 1e-9);
    // compare at grid nodes (interpolating between nodes would add O(h^2))
    for (std::size_t i = 0; i < grid.size(); i += 37) {
        const double r = grid.nodes[i];
        const double exact = r <= 1.0 ? 0.5 - r * r / 6.0 : 1.0 / (3.0 * r);
        ASSERT_NEAR(pot.phi.values[i], exact, 1e-9);
    }
    EXPECT_NEAR(pot.total_mass, 4.0 * pi / 3.0, 1e-10);
    // phi'(r) = -r^{1-n} M(r) discretely
    for (std::size_t i = 200; i < 1200; i += 111) {
        const double dr = grid.nodes[i + 1] - grid.nodes[i - 1];
        const double dphi = (pot.phi.values[i + 1] - pot.phi.values[i - 1]) / dr;
        const double expected = -std::pow(grid.nodes[i], -2.0) * pot.cumulative_mass[i];
        EXPECT_NEAR(dphi, expected, 1e-4 * (1.0 + std::abs(expected)));
    }
}

TEST(NewtonPotential, ZeroAndStep)
{
    auto grid = make_grid(3, 2.0, 256);
    auto pot0 = newton_potential(zero_profile(grid));
    for (double v : pot0.phi.values) ASSERT_EQ(v, 0.0);

    // n=1 balanced step: f = 1 on [0,1/2), -1 on (1/2,1]; phi(0) = 1/4 by
    // double integration of the step (independent closed form). Midpoint
    // samples at both jumps keep the piecewise-linear mass exactly zero.
    auto g1 = make_grid(1, 2.0, 2048);
    auto step = sample_profile(g1, [](double r) {
        if (r == 0.5) return 0.0;
        if (r == 1.0) return -0.5;
        return r < 0.5 ? 1.0 : (r < 1.0 ? -1.0 : 0.0);
    });
    auto pot = newton_potential(step);
    const double phi0_closed = 0.25;  // int_0^1 M, M = r then 1-r
    EXPECT_NEAR(pot.phi.values[0], phi0_closed, 1e-6);
    EXPECT_NEAR(interp_value(pot.phi, 1.3), 0.0, 1e-12);  // vanishes beyond support
    EXPECT_LT(std::abs(pot.total_mass), 1e-12);
}

TEST(NewtonPotential, MassObstructionLowDimensions)
{
    auto g1 = make_grid(1, 2.0, 256);
    auto f = sample_profile(g1, [](double r) { return std::max(1.0 - r, 0.0); });
    try {
        newton_potential(f);
        FAIL() << "expected input_error";
    } catch (const input_error& e) {
        EXPECT_NE(std::string(e.what()).find("zero-mean"), std::string::npos);
    }
    auto g2 = make_grid(2, 2.0, 256);
    EXPECT_THROW(newton_potential(sample_profile(g2, [](double) { return 1.0; })), input_error);
}

TEST(NewtonPotential, TinyMassProjectedAndReported)
{
    // an imbalance below 1e-10 ||f||_1 is projected out on the support
    // indicator and its magnitude reported
    auto g1 = make_grid(1, 2.0, 1024);
    auto f = sample_profile(g1, [](double r) {
        if (r == 0.5) return 0.0;
        if (r == 1.0) return -0.5;
        return r < 0.5 ? 1.0 : (r < 1.0 ? -1.0 : 0.0);
    });
    const double bump = 1e-12;
    for (double& v : f.values)
        if (v != 0.0) v += bump;  // mass ~ 2e-12 << 1e-10 ||f||_1
    const auto pot = newton_potential(f);
    EXPECT_GT(pot.mass_correction, 0.0);
    EXPECT_LT(pot.mass_correction, 1e-10);
    EXPECT_NEAR(interp_value(pot.phi, 1.5), 0.0, 1e-10);  // still flat beyond support
}

TEST(Hminus1, BallValueAndScaling)
{
    auto grid = make_grid(3, 2.0, 2048, GridScheme::graded);
    auto ind = ball_indicator(grid);
    EXPECT_NEAR(hminus1_sq(ind), 8.0 * pi / 15.0, 1e-6);
    EXPECT_EQ(hminus1_sq(zero_profile(grid)), 0.0);

    auto f = sample_profile(make_grid(3, 2.0, 1024), [](double r) {
        const double t = std::max(1.0 - r * r, 0.0);
        return t * t;
    });
    const double base = hminus1_sq(f);
    EXPECT_GT(base, 0.0);
    for (double lam : {0.5, 2.0}) {
        const double scaled = hminus1_sq(rescale(f, lam));
        EXPECT_NEAR(scaled / base, std::pow(lam, 5.0), 1e-8 * std::pow(lam, 5.0));
    }
}

TEST(Hminus1, PositivityAcrossShapes)
{
    // > 0 for every nonzero profile, including sign-changing zero-mean data
    auto g3 = make_grid(3, 3.0, 512);
    for (auto f : {sample_profile(g3, [](double r) { return std::exp(-2.0 * r * r); }),
                   sample_profile(g3, [](double r) { return std::max(1.0 - r, 0.0); }),
                   sample_profile(g3, [](double r) {
                       return r <= 1.0 ? std::cos(2.0 * pi * r) * (1.0 - r) : 0.0;
                   })})
        EXPECT_GT(hminus1_sq(f), 0.0);
}

TEST(RadialLaplacian, ClosedForms)
{
    auto grid = make_grid(3, 2.0, 2048);
    auto r2 = sample_profile(grid, [](double r) { return r * r; });
    auto lap = radial_laplacian(r2);
    for (std::size_t i = 0; i + 1 < lap.size(); i += 97)
        EXPECT_NEAR(lap.values[i], 6.0, 1e-9);  // Delta |x|^2 = 2n

    auto cst = sample_profile(grid, [](double) { return 3.7; });
    auto lap0 = radial_laplacian(cst);
    for (std::size_t i = 0; i + 1 < lap0.size(); i += 97) EXPECT_NEAR(lap0.values[i], 0.0, 1e-12);

    // free-particle identity: Delta (sin r / r) = -(sin r / r)
    auto sinc = sample_profile(grid, [](double r) { return r == 0.0 ? 1.0 : std::sin(r) / r; });
    auto lap1 = radial_laplacian(sinc);
    for (std::size_t i = 1; i + 1 < lap1.size(); i += 97)
        EXPECT_NEAR(lap1.values[i], -sinc.values[i], 1e-5);
}

TEST(RadialLaplacian, PotentialConsistencyConvergence)
{
    // -Delta phi = f at O(h^2): halving h cuts the interior residual >= 3x
    auto residual = [](int cells) {
        auto grid = make_grid(3, 2.0, cells);
        auto f = sample_profile(grid, [](double r) {
            const double t = std::max(1.0 - r * r, 0.0);
            return t * t;
        });
        auto pot = newton_potential(f);
        auto lap = radial_laplacian(pot.phi);
        double worst = 0.0;
        for (std::size_t i = 0; i + 2 < grid.size(); ++i)
            worst = std::max(worst, std::abs(lap.values[i] + f.values[i]));
        return worst;
    };
    const double r1 = residual(512), r2 = residual(1024);
    EXPECT_GT(r1 / r2, 3.0);
    EXPECT_LT(r2, 1e-4);
}

TEST(Csv, RoundTripAndErrors)
{
    auto grid = make_grid(3, 2.0, 128);
    auto f = sample_profile(grid, [](double r) { return std::exp(-r); });
    std::ostringstream out;
    write_profile_csv(out, f);
    std::istringstream in(out.str());
    auto data = read_profile_csv(in);
    auto back = resample_onto(grid, data.nodes, data.values);
    for (std::size_t i = 0; i < f.size(); ++i)
        ASSERT_NEAR(back.values[i], f.values[i], 1e-14);

    std::istringstream bad_header("radius,value\n0,1\n1,0\n");
    EXPECT_THROW(read_profile_csv(bad_header), input_error);
    std::istringstream bad_row("r,value\n0,1\n0.5;0.2\n");
    try {
        read_profile_csv(bad_row);
        FAIL() << "expected input_error";
    } catch (const input_error& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
    std::istringstream not_increasing("r,value\n0,1\n0.5,0.8\n0.5,0.7\n");
    EXPECT_THROW(read_profile_csv(not_increasing), input_error);
    std::istringstream not_zero("r,value\n0.1,1\n0.5,0.8\n");
    EXPECT_THROW(read_profile_csv(not_zero), input_error);
}
