#pragma once

#include <rieszeq/measures.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <string>

namespace rieszeq {

struct RootBracket {
    double lo = 0.0;
    double hi = 0.0;
    double f_lo = 0.0;
    double f_hi = 0.0;
};

// Everything the critical half-width determines in one record. a_tilde is the
// value from the compact-variable equation; per_method keeps every route's
// estimate so disagreement is visible, not averaged away.
struct SolverReport {
    double a_tilde = 0.0;
    double c = 0.0;
    double d = 0.0;
    double m_a_tilde = 0.0;
    double mass_loss = 0.0;
    double F_Q = 0.0;
    double ms_value = 0.0;
    std::map<std::string, double> per_method;
    double consensus_spread = 0.0;
};

namespace detail {

inline void check_solvable(const FieldParams& p) {
    check_params(p);
    if (p.q < 1.0)
        throw no_equilibrium_error("no equilibrium measure exists for q < 1");
    if (p.q == 1.0)
        throw weakly_admissible_error(
            "q = 1 is the weakly admissible borderline with unbounded support");
}

// Expands from `start` by doubling (or halving) until the monotone function
// changes sign. `increasing` states the orientation: an increasing target is
// negative left of its root.
template <class F>
RootBracket bracket_monotone(F&& f, double start, bool increasing) {
    double x = start;
    const double fx = f(x);
    if (fx == 0.0) return {x, x, 0.0, 0.0};
    const bool go_up = increasing ? (fx < 0.0) : (fx > 0.0);
    double lo = x, hi = x, flo = fx, fhi = fx;
    for (int k = 0; k < 60; ++k) {
        if (go_up) {
            hi *= 2.0;
            fhi = f(hi);
            if (fhi == 0.0) return {hi, hi, 0.0, 0.0};
            if ((flo < 0.0) != (fhi < 0.0)) return {lo, hi, flo, fhi};
            lo = hi;
            flo = fhi;
        } else {
            lo *= 0.5;
            flo = f(lo);
            if (flo == 0.0) return {lo, lo, 0.0, 0.0};
            if ((flo < 0.0) != (fhi < 0.0)) return {lo, hi, flo, fhi};
            hi = lo;
            fhi = flo;
        }
    }
    throw root_isolation_error("no sign change found while bracketing a monotone root");
}

// Bisection down to xtol, then at most five secant polishing steps confined
// to the bracket.
template <class F>
double solve_bracketed(F&& f, RootBracket br, double xtol) {
    if (br.lo == br.hi) return br.lo;
    double lo = br.lo, hi = br.hi, flo = br.f_lo, fhi = br.f_hi;
    while (hi - lo > xtol) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo) || !(mid < hi)) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    double x0 = lo, f0 = flo, x1 = hi, f1 = fhi;
    for (int k = 0; k < 5; ++k) {
        const double df = f1 - f0;
        if (df == 0.0) break;
        const double x2 = x1 - f1 * (x1 - x0) / df;
        if (!(x2 >= br.lo) || !(x2 <= br.hi)) break;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f(x2);
        if (f1 == 0.0) break;
    }
    return x1;
}

// Two-phase solve for functions whose evaluation cost climbs steeply with the
// inner quadrature tolerance: bisection narrows the bracket to coarse_w on the
// cheap surrogate, then bracketed secant steps at full precision finish to
// xtol. The bracket passed in must carry surrogate values. If the surrogate
// misjudged a sign near the root, the fine refresh notices and the whole
// bracket is re-solved at full precision.
template <class FC, class FF>
double solve_laddered(FC&& coarse, FF&& fine, RootBracket br, double coarse_w,
                      double xtol) {
    if (br.lo == br.hi) return br.lo;
    double lo = br.lo, hi = br.hi, flo = br.f_lo, fhi = br.f_hi;
    while (hi - lo > coarse_w) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo) || !(mid < hi)) break;
        const double fm = coarse(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    flo = fine(lo);
    if (flo == 0.0) return lo;
    fhi = fine(hi);
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) return solve_bracketed(fine, br, xtol);
    double x0 = lo, f0 = flo, x1 = hi, f1 = fhi;
    for (int k = 0; k < 24 && hi - lo > xtol; ++k) {
        double x2 = 0.5 * (lo + hi);
        const double df = f1 - f0;
        if (df != 0.0) {
            const double xs = x1 - f1 * (x1 - x0) / df;
            if (xs > lo && xs < hi) x2 = xs;
        }
        const double f2 = fine(x2);
        if (f2 == 0.0) return x2;
        const double step = std::fabs(x2 - x1);
        if ((f2 < 0.0) == (flo < 0.0)) {
            lo = x2;
            flo = f2;
        } else {
            hi = x2;
            fhi = f2;
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        if (step <= xtol) return x2;
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

// Potential of the interval Robin measure evaluated at the off-axis charge
// location, in closed hypergeometric form. Collapses to b^{-s} as a -> 0.
// Past c = 1/2 the connection formula is applied with 1 - c formed from
// b^2/(a^2+b^2), which stays exact however wide the interval gets.
inline double robin_potential_at_z(double s, double a, double b) {
    if (!(s > 0.0) || !(s < 1.0)) throw domain_error("s must lie in (0, 1)");
    detail::check_halfwidth(a);
    if (!(b > 0.0) || !std::isfinite(b))
        throw domain_error("charge height b must be positive and finite");
    const double al = 0.5 * s;
    const double be = 0.5 * (1.0 + s);
    const double ga = 1.0 + 0.5 * s;
    const double m = a * a + b * b;
    const double c = a * a / m;
    if (c <= 0.5)
        return std::pow(m, -0.5 * s) * hyp2f1(al, be, ga, c);
    const double y = b * b / m;
    const double d = 0.5 * (1.0 - s);
    const double c1 = gamma_fn(ga) * gamma_fn(d) * detail::rgamma(ga - al) *
                      detail::rgamma(ga - be);
    const double c2 = gamma_fn(ga) * gamma_fn(-d) * detail::rgamma(al) *
                      detail::rgamma(be) * std::pow(y, d);
    const double f = c1 * detail::hyp_series(al, be, 1.0 - d, y, {}) +
                     c2 * detail::hyp_series(ga - al, ga - be, 1.0 + d, y, {});
    return std::pow(m, -0.5 * s) * f;
}

// Interval functional: Robin constant of [-a, a] minus q times the Robin
// potential at the charge. Its minimizer over a is the critical half-width.
inline double ms_functional(const FieldParams& p, double a) {
    detail::check_params(p);
    detail::check_halfwidth(a);
    return interval_energy(p.s, a) - p.q * robin_potential_at_z(p.s, a, p.b);
}

namespace detail {

// Same functional assembled in the compact variable c = a^2/(a^2+b^2); equal
// to ms_functional through the Legendre duplication identity, so agreement of
// the two exercises the gamma and hypergeometric layers along distinct paths.
inline double ms_functional_closed(const FieldParams& p, double a) {
    check_params(p);
    check_halfwidth(a);
    const double pi = 3.14159265358979323846;
    const double s = p.s;
    const double m = a * a + p.b * p.b;
    const double c = a * a / m;
    const double kappa =
        gamma_fn(1.0 + s) / (std::pow(2.0, s) * gamma_fn(0.5 * (1.0 + s)));
    const double fs = hyp2f1(0.5 * s, 0.5 * (1.0 + s), 1.0 + 0.5 * s, c);
    const double g = gamma_fn(0.5 * (1.0 - s)) -
                     p.q * std::sqrt(pi) / gamma_fn(1.0 + 0.5 * s) *
                         std::pow(c, 0.5 * s) * fs;
    return kappa * std::pow(a, -s) * g;
}

} // namespace detail

// Critical value of c = a^2/(a^2+b^2): unique root in (0, 1) of
//   c^{s/2} (2F1(s/2,(1+s)/2;1+s/2;c) - (1-c)^{(1-s)/2}) = K / q
// with K = Gamma((1-s)/2) Gamma(1+s/2) / sqrt(pi).
inline double critical_c(const FieldParams& p) {
    detail::check_solvable(p);
    const double pi = 3.14159265358979323846;
    const double s = p.s;
    const double k = gamma_fn(0.5 * (1.0 - s)) * gamma_fn(1.0 + 0.5 * s) /
                     std::sqrt(pi);
    auto phi = [&](double c) {
        const double fs = hyp2f1(0.5 * s, 0.5 * (1.0 + s), 1.0 + 0.5 * s, c);
        return std::pow(c, 0.5 * s) *
                   (fs - std::pow(1.0 - c, 0.5 * (1.0 - s))) -
               k / p.q;
    };
    RootBracket br{1e-15, 1.0 - 1e-15, phi(1e-15), phi(1.0 - 1e-15)};
    if (!(br.f_lo < 0.0) || !(br.f_hi > 0.0))
        throw root_isolation_error("critical equation has no sign change in (0, 1)");
    return detail::solve_bracketed(phi, br, 1e-12);
}

namespace detail {

inline double halfwidth_from_c(double c, double b) {
    return b * std::sqrt(c / (1.0 - c));
}

} // namespace detail

// Critical half-width by three independent routes: the unit-mass condition on
// the attracted measure, the compact-variable equation, and the vanishing of
// the signed-density endpoint coefficient. The routes share no iterates, so
// their spread is a genuine cross-check.
inline SolverReport critical_endpoint(const FieldParams& p) {
    detail::check_solvable(p);
    auto sigma_route = std::async(std::launch::async, [p] {
        return detail::sigma_unit_mass_halfwidth(p, 1e-10, 1e-11 * p.b);
    });
    auto coeff_route = std::async(std::launch::async, [p] {
        auto fc = [&p](double a) {
            return detail::signed_endpoint_coeff_with_mass(
                p, a, detail::balayage_mass_quad(p, a, 1e-7));
        };
        auto ff = [&p](double a) { return signed_endpoint_coeff(p, a); };
        const RootBracket br = detail::bracket_monotone(fc, p.b, false);
        return detail::solve_laddered(fc, ff, br, 1e-4 * p.b, 1e-9 * p.b);
    });
    const double a_eq = detail::halfwidth_from_c(critical_c(p), p.b);
    const double a_sigma = sigma_route.get();
    const double a_coeff = coeff_route.get();

    SolverReport r;
    r.per_method = {{"sigma_mass", a_sigma},
                    {"critical_equation", a_eq},
                    {"endpoint_coefficient", a_coeff}};
    r.a_tilde = a_eq;
    r.consensus_spread = std::max({a_sigma, a_eq, a_coeff}) -
                         std::min({a_sigma, a_eq, a_coeff});
    if (r.consensus_spread > 1e-6 * r.a_tilde)
        throw consistency_error(
            "critical endpoint routes disagree beyond the consensus tolerance");
    const double m = r.a_tilde * r.a_tilde + p.b * p.b;
    r.c = r.a_tilde * r.a_tilde / m;
    r.d = r.a_tilde / p.b;
    r.m_a_tilde =
        1.0 / p.q + beta_mass_factor(p.s) * geometry_mass_factor(r.d, p.s);
    r.mass_loss = 1.0 - r.m_a_tilde;
    r.F_Q = -p.q * std::pow(p.b, 1.0 - p.s) / std::sqrt(m);
    r.ms_value = ms_functional(p, r.a_tilde);
    return r;
}

// Mass lost by sweeping the point charge onto the critical interval, in the
// closed form 1 - 1/q - f(s) h(d, s), cross-checked against quadrature of the
// swept density.
inline double mass_loss(const FieldParams& p) {
    detail::check_solvable(p);
    const double a = detail::halfwidth_from_c(critical_c(p), p.b);
    const double closed = 1.0 - 1.0 / p.q -
                          beta_mass_factor(p.s) * geometry_mass_factor(a / p.b, p.s);
    const double quad = 1.0 - balayage_mass(p, a).value;
    if (std::fabs(closed - quad) > 1e-6)
        throw consistency_error("mass loss closed form and quadrature disagree");
    return closed;
}

// Frostman constant of the equilibrium problem; strictly negative for q > 1.
inline double equilibrium_constant(const FieldParams& p) {
    detail::check_solvable(p);
    const double a = detail::halfwidth_from_c(critical_c(p), p.b);
    return -p.q * std::pow(p.b, 1.0 - p.s) / std::sqrt(a * a + p.b * p.b);
}

} // namespace rieszeq
