#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <rieszeq/solver.hpp>

namespace rieszeq {

// Weighted potential U + Q sampled on and off the support. A passing check has
// the on-support values constant within tolerance and every exterior point at
// or above the constant.
struct FrostmanReport {
    double on_support_max = 0.0;
    double on_support_min = 0.0;
    double constancy_gap = 0.0;
    double off_support_min_excess = 0.0;
    double F_Q_used = 0.0;
};

// Samples U + Q for an arbitrary member of the sigma family against a given
// constant: grid_size evenly spaced points on the support shrunk by 1e-3 of
// the half-width, plus exterior points at fixed multiples of the half-width.
// The gap is constant-free; only the exterior excess uses F_used.
inline FrostmanReport frostman_report(const FieldParams& p,
                                      const IntervalDensity& density, double F_used,
                                      int grid_size, double tol) {
    detail::check_params(p);
    if (grid_size < 2) throw domain_error("potential grid needs at least two points");
    if (!(tol > 0.0)) throw domain_error("tolerance must be positive");
    const double a = density.half_width;
    const double qtol = 0.25 * tol;
    auto weighted = [&](double x) {
        return riesz_potential(density, p.s, x, qtol) + external_field(p, x);
    };
    const double lo = -a * (1.0 - 1e-3);
    double vmax = -std::numeric_limits<double>::infinity();
    double vmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_size; ++i) {
        const double v = weighted(lo + 2.0 * (-lo) * i / (grid_size - 1.0));
        vmax = std::max(vmax, v);
        vmin = std::min(vmin, v);
    }
    double excess = std::numeric_limits<double>::infinity();
    for (double mult : {1.1, 1.5, 2.0, 5.0, 10.0}) {
        excess = std::min(excess, weighted(mult * a) - F_used);
        excess = std::min(excess, weighted(-mult * a) - F_used);
    }
    return {vmax, vmin, vmax - vmin, excess, F_used};
}

// Frostman conditions for the equilibrium measure itself: U + Q must equal the
// equilibrium constant on the support and exceed it outside. Failure shows in
// the report, not as an exception.
inline FrostmanReport frostman_check(const FieldParams& p, int grid_size, double tol) {
    detail::check_solvable(p);
    const double at = detail::halfwidth_from_c(critical_c(p), p.b);
    return frostman_report(p, equilibrium_density(p, at), equilibrium_constant(p),
                           grid_size, tol);
}

enum class Side { left, right };

// Least-squares slope of log density against log distance to the chosen
// endpoint, over distances in [1e-5, 1e-2] of the half-width. Recovers the
// edge exponent of power-law densities: (1+s)/2 for the equilibrium measure,
// -(1-s)/2 for raw balayage. Residuals beyond 0.05 in log space mean the
// window is not in a power-law regime and the fit is refused.
inline double endpoint_exponent_fit(const IntervalDensity& density, Side side) {
    const int n = 25;
    const int sgn = side == Side::right ? 1 : -1;
    const double a = density.half_width;
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx(n), ly(n);
    for (int j = 0; j < n; ++j) {
        const double d = 1e-5 * a * std::pow(1e3, j / (n - 1.0));
        const double v = density.evaluate_at_distance(sgn, d);
        if (!(v > 0.0) || !std::isfinite(v))
            throw fit_error("density is not positive inside the fit window");
        lx[j] = std::log(d);
        ly[j] = std::log(v);
        sx += lx[j];
        sy += ly[j];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (int j = 0; j < n; ++j) {
        sxx += (lx[j] - mx) * (lx[j] - mx);
        sxy += (lx[j] - mx) * (ly[j] - my);
    }
    const double slope = sxy / sxx;
    double rss = 0.0;
    for (int j = 0; j < n; ++j) {
        const double r = ly[j] - my - slope * (lx[j] - mx);
        rss += r * r;
    }
    if (std::sqrt(rss / n) > 0.05)
        throw fit_error("edge fit residual exceeds the power-law threshold");
    return slope;
}

// Borderline case q = 1: the equilibrium measure on the whole axis is the
// balayage of the point charge, its potential cancels the field exactly and
// the equilibrium constant is zero.
struct WeaklyAdmissibleReport {
    double max_potential_mismatch = 0.0;
    double mass_error = 0.0;
    bool passed = false;
};

// Verifies U(x) = |x - bi|^{-s} for the line balayage density at fixed test
// points, and unit total mass. The potential integral is truncated at two
// radii and extrapolated: the tail beyond T contributes c/T + O(T^{-2}), so
// 2 U_{2T} - U_T removes the leading term.
inline WeaklyAdmissibleReport weakly_admissible_check(double s, double b, double tol) {
    if (!(s > 0.0) || !(s < 1.0)) throw domain_error("s must lie in (0, 1)");
    if (!(b > 0.0) || !std::isfinite(b))
        throw domain_error("charge height b must be positive and finite");
    if (!(tol > 0.0)) throw domain_error("tolerance must be positive");
    const LineDensity f = bal_line_density(s, b);
    const double qtol = tol / 16.0;
    auto truncated = [&](double x, double T) {
        QuadratureOptions opt;
        opt.breakpoints = {std::fabs(x), b, std::fabs(x) + b};
        auto left = [&](double d) { return f.evaluate(x - d) * std::pow(d, -s); };
        auto right = [&](double d) { return f.evaluate(x + d) * std::pow(d, -s); };
        return integrate_finite(left, 0.0, T + x, {-s, 0.0}, qtol, opt).value +
               integrate_finite(right, 0.0, T - x, {-s, 0.0}, qtol, opt).value;
    };
    const double T = 1e4 * b;
    WeaklyAdmissibleReport rep;
    for (double mult : {0.0, 1.0, -1.0, 5.0, -5.0, 20.0, -20.0}) {
        const double x = mult * b;
        const double u = 2.0 * truncated(x, 2.0 * T) - truncated(x, T);
        const double exact = std::pow(x * x + b * b, -0.5 * s);
        rep.max_potential_mismatch =
            std::max(rep.max_potential_mismatch, std::fabs(u - exact));
    }
    QuadratureOptions mopt;
    mopt.known_tail_decay = 2.0 - s;
    const double mass =
        integrate_semi_infinite([&f](double t) { return 2.0 * f.evaluate(t); }, 0.0,
                                1e-10, mopt)
            .value;
    rep.mass_error = std::fabs(mass - 1.0);
    rep.passed = rep.max_potential_mismatch <= tol && rep.mass_error <= tol;
    return rep;
}

}  // namespace rieszeq
