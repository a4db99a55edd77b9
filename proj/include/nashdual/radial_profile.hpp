#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nashdual/radial_grid.hpp"

namespace nashdual {

enum class TailKind { zero, power };

// Declared behavior beyond the last grid node. Profiles are compactly
// supported by default; a power tail f(r) ~ f(r_M) (r/r_M)^{-exponent} is
// admitted for inputs like truncated Gaussians or Talenti profiles.
struct Tail {
    TailKind kind = TailKind::zero;
    double exponent = 0.0;
};

struct RadialProfile {
    RadialGrid grid;
    std::vector<double> values;
    Tail tail{};
    bool decreasing = false;  // caller-declared monotonicity flag

    int dim() const { return grid.dim; }
    std::size_t size() const { return values.size(); }
};

inline void check_finite(const RadialProfile& f, const char* where)
{
    if (f.values.size() != f.grid.nodes.size())
        throw input_error(std::string(where) + ": profile length does not match grid");
    for (double v : f.values)
        if (!std::isfinite(v)) throw input_error(std::string(where) + ": non-finite sample");
}

inline bool is_nonincreasing(const std::vector<double>& v)
{
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (v[i + 1] > v[i]) return false;
    return true;
}

inline RadialProfile sample_profile(const RadialGrid& grid,
                                    const std::function<double(double)>& f,
                                    Tail tail = {})
{
    RadialProfile p;
    p.grid = grid;
    p.values.reserve(grid.size());
    for (double r : grid.nodes) p.values.push_back(f(r));
    p.tail = tail;
    p.decreasing = is_nonincreasing(p.values);
    return p;
}

inline RadialProfile zero_profile(const RadialGrid& grid)
{
    RadialProfile p;
    p.grid = grid;
    p.values.assign(grid.size(), 0.0);
    p.decreasing = true;
    return p;
}

namespace detail {

inline double tail_amplitude(const RadialProfile& f)
{
    // f(r) ~ A r^{-q} beyond r_M, matched to the last sample.
    return f.values.back() * std::pow(f.grid.r_max(), f.tail.exponent);
}

// integral_{r_M}^inf A r^{-q} r^{n-1+p} dr, requires q > n + p.
inline double power_tail_integral(double amplitude, double q, double n_plus_p, double r_M)
{
    if (amplitude == 0.0) return 0.0;
    if (!(q > n_plus_p))
        throw input_error("integrate: declared power tail has divergent weighted integral");
    return amplitude * std::pow(r_M, n_plus_p - q) / (q - n_plus_p);
}

} // namespace detail

// integral_{R^n} f(x) |x|^p dx = omega_{n-1} integral f(r) r^{n-1+p} dr,
// including the declared-tail contribution.
inline double integrate(const RadialProfile& f, double weight_power = 0.0)
{
    check_finite(f, "integrate");
    if (weight_power < 0.0) throw input_error("integrate: weight power must be >= 0");
    const int n = f.dim();
    const auto w = detail::linear_weights(f.grid.nodes, n - 1.0 + weight_power);
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * f.values[i];
    if (f.tail.kind == TailKind::power)
        s += detail::power_tail_integral(detail::tail_amplitude(f), f.tail.exponent,
                                         n + weight_power, f.grid.r_max());
    return f.grid.surface_factor * s;
}

// L^p norm with respect to Lebesgue measure on R^n; p in {1, 2, inf}.
inline double lp_norm(const RadialProfile& f, double p)
{
    check_finite(f, "lp_norm");
    if (p == std::numeric_limits<double>::infinity()) {
        double m = 0.0;
        for (double v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    if (p == 1.0) {
        RadialProfile a = f;
        for (double& v : a.values) v = std::abs(v);
        return integrate(a);
    }
    if (p == 2.0) {
        RadialProfile a = f;
        for (double& v : a.values) v = v * v;
        if (a.tail.kind == TailKind::power) a.tail.exponent *= 2.0;
        return std::sqrt(integrate(a));
    }
    throw input_error("lp_norm: only p = 1, 2, inf are supported");
}

// x -> lam^a f(lam x) on the rescaled grid {r_i / lam}.
// Default a = n+2 is the scaling under which both terms of the unweighted
// infimal convolution transform with the same power; use a = n+2+p for the
// |x|^p-weighted functional.
inline RadialProfile rescale(const RadialProfile& f, double lam, double a)
{
    check_finite(f, "rescale");
    if (!(lam > 0.0)) throw input_error("rescale: lambda must be positive");
    std::vector<double> nodes(f.grid.nodes);
    for (double& r : nodes) r /= lam;
    RadialProfile out;
    out.grid = grid_from_nodes(f.dim(), std::move(nodes));
    out.values = f.values;
    const double s = std::pow(lam, a);
    for (double& v : out.values) v *= s;
    out.tail = f.tail;
    out.decreasing = f.decreasing;
    return out;
}

inline RadialProfile rescale(const RadialProfile& f, double lam)
{
    return rescale(f, lam, f.dim() + 2.0);
}

// Second-order conservative discretization of r^{1-n} (r^{n-1} f')' with the
// symmetry condition f'(0) = 0. The last node carries a one-sided copy; tests
// use interior nodes only.
inline RadialProfile radial_laplacian(const RadialProfile& f)
{
    check_finite(f, "radial_laplacian");
    const std::size_t m = f.size();
    if (m < 3) throw input_error("radial_laplacian: need at least 3 nodes");
    const int n = f.dim();
    const auto& r = f.grid.nodes;
    const auto& v = f.values;

    std::vector<double> flux(m, 0.0);  // flux[i] = r_{i+1/2}^{n-1} f' at cell i midpoint
    std::vector<double> rmid(m, 0.0);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        rmid[i] = 0.5 * (r[i] + r[i + 1]);
        flux[i] = std::pow(rmid[i], n - 1) * (v[i + 1] - v[i]) / (r[i + 1] - r[i]);
    }

    RadialProfile out;
    out.grid = f.grid;
    out.values.assign(m, 0.0);
    // control volume around node 0 is [0, r_{1/2}] with zero flux at r = 0
    out.values[0] = flux[0] / (std::pow(rmid[0], n) / n);
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const double vol = (std::pow(rmid[i], n) - std::pow(rmid[i - 1], n)) / n;
        out.values[i] = (flux[i] - flux[i - 1]) / vol;
    }
    out.values[m - 1] = out.values[m - 2];
    return out;
}

// Indicator of the centered ball B(R). R must be a grid node; the sample at
// the jump node is chosen so that the quadrature mass equals |B(R)| exactly
// (the best piecewise-linear representative of the indicator in mass).
inline RadialProfile ball_indicator(const RadialGrid& grid, double R = 1.0)
{
    std::size_t jR = grid.size();
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid.nodes[i] == R) jR = i;
    if (jR == grid.size()) throw input_error("ball_indicator: R must be a grid node");
    RadialProfile p = zero_profile(grid);
    for (std::size_t i = 0; i < jR; ++i) p.values[i] = 1.0;
    p.values[jR] = 0.5;
    const double excess = integrate(p) - ball_volume(grid.dim, R);
    p.values[jR] -= excess / (grid.surface_factor * grid.weights[jR]);
    p.decreasing = true;
    return p;
}

// Linear interpolation of (nodes, values) data at radius r; zero or declared
// tail beyond the last node.
inline double interp_value(const std::vector<double>& nodes, const std::vector<double>& values,
                           const Tail& tail, double r)
{
    if (r <= nodes.front()) return values.front();
    if (r >= nodes.back()) {
        if (tail.kind == TailKind::power)
            return values.back() * std::pow(r / nodes.back(), -tail.exponent);
        return r == nodes.back() ? values.back() : 0.0;
    }
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
    const std::size_t j = static_cast<std::size_t>(it - nodes.begin());
    const double t = (r - nodes[j - 1]) / (nodes[j] - nodes[j - 1]);
    return (1.0 - t) * values[j - 1] + t * values[j];
}

inline double interp_value(const RadialProfile& f, double r)
{
    return interp_value(f.grid.nodes, f.values, f.tail, r);
}

// Resamples arbitrary (r, value) data onto a grid by monotone linear
// interpolation. Used by the CSV readers.
inline RadialProfile resample_onto(const RadialGrid& grid, const std::vector<double>& nodes,
                                   const std::vector<double>& values, Tail tail = {})
{
    RadialProfile p;
    p.grid = grid;
    p.values.reserve(grid.size());
    for (double r : grid.nodes) p.values.push_back(interp_value(nodes, values, tail, r));
    p.tail = tail;
    p.decreasing = is_nonincreasing(p.values);
    return p;
}

// Extends a compactly supported profile to a larger radius by appending
// uniform cells; the original nodes (and samples) are preserved exactly.
inline RadialProfile extend_profile(const RadialProfile& f, double new_r_max)
{
    if (new_r_max <= f.grid.r_max()) return f;
    if (f.tail.kind != TailKind::zero)
        throw input_error("extend_profile: only zero-tail profiles can be extended");
    std::vector<double> nodes = f.grid.nodes;
    const double h = nodes.back() - nodes[nodes.size() - 2];
    double r = nodes.back();
    while (r < new_r_max - 0.5 * h) {
        r += h;
        nodes.push_back(r);
    }
    nodes.back() = std::max(nodes.back(), new_r_max);
    RadialProfile out;
    out.grid = grid_from_nodes(f.dim(), std::move(nodes));
    out.values = f.values;
    out.values.resize(out.grid.size(), 0.0);
    out.tail = f.tail;
    out.decreasing = f.decreasing && f.values.back() >= 0.0;
    return out;
}

// ---- CSV profile format: header "r,value", strictly increasing radii from 0.

struct CsvData {
    std::vector<double> nodes;
    std::vector<double> values;
};

inline CsvData read_profile_csv(std::istream& in)
{
    CsvData data;
    std::string line;
    int lineno = 0;
    if (!std::getline(in, line)) throw input_error("CSV line 1: empty input");
    ++lineno;
    // tolerate trailing CR and whitespace in the header
    std::string header = line;
    header.erase(header.find_last_not_of(" \t\r") + 1);
    if (header != "r,value")
        throw input_error("CSV line 1: expected header 'r,value', got '" + header + "'");
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        double r, v;
        char comma;
        if (!(ls >> r >> comma >> v) || comma != ',')
            throw input_error("CSV line " + std::to_string(lineno) + ": malformed row '" + line + "'");
        if (!std::isfinite(r) || !std::isfinite(v))
            throw input_error("CSV line " + std::to_string(lineno) + ": non-finite entry");
        if (data.nodes.empty()) {
            if (r != 0.0)
                throw input_error("CSV line " + std::to_string(lineno) + ": first radius must be 0");
        } else if (r <= data.nodes.back()) {
            throw input_error("CSV line " + std::to_string(lineno) + ": radii must be strictly increasing");
        }
        data.nodes.push_back(r);
        data.values.push_back(v);
    }
    if (data.nodes.size() < 2) throw input_error("CSV: need at least 2 rows");
    return data;
}

inline void write_profile_csv(std::ostream& out, const RadialProfile& f)
{
    out << "r,value\n";
    char buf[64];
    for (std::size_t i = 0; i < f.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.15g,%.15g", f.grid.nodes[i], f.values[i]);
        out << buf << '\n';
    }
}

} // namespace nashdual
