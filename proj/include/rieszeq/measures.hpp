#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <vector>

#include <rieszeq/errors.hpp>
#include <rieszeq/quadrature.hpp>
#include <rieszeq/specfun.hpp>

namespace rieszeq {

struct FieldParams {
    double s = 0.5;
    double q = 1.0;
    double b = 1.0;
};

namespace detail {

inline void check_params(const FieldParams& p) {
    if (!(p.s > 0.0) || !(p.s < 1.0))
        throw domain_error("field parameter s must lie in (0, 1)");
    if (!(p.q > 0.0)) throw domain_error("field parameter q must be positive");
    if (!(p.b > 0.0)) throw domain_error("field parameter b must be positive");
}

inline void check_halfwidth(double a) {
    if (!(a > 0.0) || !std::isfinite(a))
        throw domain_error("interval half-width must be positive and finite");
}

struct MassCache {
    std::once_flag once;
    double value = 0.0;
};

}  // namespace detail

// Density w.r.t. Lebesgue measure on [-half_width, half_width]. Immutable after
// construction; the total mass is computed on first use and cached, or preset
// when a closed form fixes it exactly.
class IntervalDensity {
  public:
    double half_width = 0.0;
    SingularityProfile profile{};

    IntervalDensity() = default;
    IntervalDensity(double a, SingularityProfile prof, std::function<double(double)> eval,
                    std::function<double(int, double)> edge = {},
                    double known_mass = std::numeric_limits<double>::quiet_NaN())
        : half_width(a),
          profile(prof),
          eval_(std::move(eval)),
          edge_(std::move(edge)),
          preset_(known_mass) {}

    double evaluate(double x) const { return eval_(x); }

    // Evaluates at x = half_width - dist (side +1) or x = -half_width + dist
    // (side -1) with the endpoint distance supplied exactly, so quadrature in
    // distance coordinates keeps full precision where x itself would round.
    double evaluate_at_distance(int side, double dist) const {
        if (edge_) return edge_(side, dist);
        return eval_(side > 0 ? half_width - dist : -half_width + dist);
    }

    double mass() const {
        std::call_once(cache_->once, [&] {
            if (!std::isnan(preset_)) {
                cache_->value = preset_;
                return;
            }
            const auto& f = eval_;
            cache_->value =
                integrate_finite([&f](double x) { return f(x); }, -half_width, half_width,
                                 profile, 1e-11)
                    .value;
        });
        return cache_->value;
    }

  private:
    std::function<double(double)> eval_;
    std::function<double(int, double)> edge_;
    double preset_ = std::numeric_limits<double>::quiet_NaN();
    std::shared_ptr<detail::MassCache> cache_ = std::make_shared<detail::MassCache>();
};

struct Atom {
    std::complex<double> location;
    double weight = 1.0;
};

struct AtomicMeasure {
    std::vector<Atom> atoms;
};

// Q(x) = -q |x - bi|^{-s} on the real axis.
inline double external_field(const FieldParams& p, double x) {
    detail::check_params(p);
    return -p.q * std::pow(x * x + p.b * p.b, -0.5 * p.s);
}

// Unweighted equilibrium density of [-a, a]:
//   omega'(x) = (a^2 - x^2)^{-(1-s)/2} / (a^s B(1/2, (1+s)/2)),  total mass 1.
inline IntervalDensity robin_density(double s, double a) {
    if (!(s > 0.0) || !(s < 1.0)) throw domain_error("s must lie in (0, 1)");
    detail::check_halfwidth(a);
    const double e = -0.5 * (1.0 - s);
    const double c = 1.0 / (std::pow(a, s) * beta_fn(0.5, 0.5 * (1.0 + s)));
    auto eval = [a, c, e](double x) {
        const double d = (a - x) * (a + x);
        if (!(d > 0.0)) return 0.0;
        return c * std::pow(d, e);
    };
    auto edge = [a, c, e](int, double dist) {
        if (!(dist > 0.0) || dist >= 2.0 * a) return 0.0;
        return c * std::pow(dist * (2.0 * a - dist), e);
    };
    return IntervalDensity(a, {e, e}, eval, edge, 1.0);
}

// Riesz s-energy of [-a, a] at its equilibrium measure, i.e. the constant value
// of the equilibrium potential on the interval.
inline double interval_energy(double s, double a) {
    if (!(s > 0.0) || !(s < 1.0)) throw domain_error("s must lie in (0, 1)");
    detail::check_halfwidth(a);
    return gamma_fn(0.5 * (1.0 - s)) * gamma_fn(1.0 + s) * std::pow(a, -s) /
           (std::pow(2.0, s) * gamma_fn(0.5 * (1.0 + s)));
}

// Balayage of the unit point mass at bi onto the whole real line:
//   b^{1-s} / (B(1/2, (1-s)/2) (x^2 + b^2)^{1 - s/2}),  total mass 1.
// s = 0 is allowed and gives the Poisson kernel of the half-plane.
struct LineDensity {
    double s = 0.0;
    double b = 1.0;
    double coeff = 0.0;

    double evaluate(double x) const {
        return coeff * std::pow(x * x + b * b, 0.5 * s - 1.0);
    }
    double mass() const { return 1.0; }
};

inline LineDensity bal_line_density(double s, double b) {
    if (!(s >= 0.0) || !(s < 1.0)) throw domain_error("s must lie in [0, 1)");
    if (!(b > 0.0)) throw domain_error("height b must be positive");
    return {s, b, std::pow(b, 1.0 - s) / beta_fn(0.5, 0.5 * (1.0 - s))};
}

// Balayage of the unit point mass at a real t, |t| > a, onto [-a, a]:
//   ((t^2 - a^2) / (a^2 - x^2))^{(1-s)/2} / (B((1+s)/2, (1-s)/2) |x - t|).
inline IntervalDensity bal_realpoint_interval_density(double s, double a, double t) {
    if (!(s > 0.0) || !(s < 1.0)) throw domain_error("s must lie in (0, 1)");
    detail::check_halfwidth(a);
    if (!(std::fabs(t) > a))
        throw domain_error("the point mass must lie strictly outside [-a, a]");
    const double e = -0.5 * (1.0 - s);
    const double g = 1.0 / beta_fn(0.5 * (1.0 + s), 0.5 * (1.0 - s));
    const double tt = (std::fabs(t) - a) * (std::fabs(t) + a);
    auto eval = [=](double x) {
        const double d = (a - x) * (a + x);
        if (!(d > 0.0)) return 0.0;
        return g * std::pow(tt / d, 0.5 * (1.0 - s)) / std::fabs(x - t);
    };
    auto edge = [=](int side, double dist) {
        if (!(dist > 0.0) || dist >= 2.0 * a) return 0.0;
        const double d = dist * (2.0 * a - dist);
        const double x = side > 0 ? a - dist : -a + dist;
        return g * std::pow(tt / d, 0.5 * (1.0 - s)) / std::fabs(x - t);
    };
    return IntervalDensity(a, {e, e}, eval, edge);
}

namespace detail {

// Rescaled core of the off-axis balayage density:
//   T(eps_hat) = int_0^inf w^{(1-s)/2} (w+1)^{s/2-1} / (w + eps_hat) dw,
// where eps_hat = (a^2 - x^2)/(a^2 + b^2) in (0, 1]. The head [0, eps_hat] is
// rescaled to [0, 1] so its w^{(1-s)/2} cusp can be declared to the profile
// machinery even when eps_hat is far below the panel width floor; the rest is
// shifted to the origin, leaving a bounded integrand with w^{-3/2} tail decay.
inline double bal_scaled_tail_integral(double s, double eps_hat, double tol) {
    const double al = 0.5 * (1.0 - s);
    const double pw = 0.5 * s - 1.0;
    QuadratureOptions ho;
    ho.abs_tol = 0.25 * tol;
    const double head =
        std::pow(eps_hat, al) *
        integrate_finite(
            [=](double r) {
                return std::pow(r, al) * std::pow(1.0 + eps_hat * r, pw) / (1.0 + r);
            },
            0.0, 1.0, {al, 0.0}, tol, ho)
            .value;
    auto rest = [=](double u) {
        const double w = u + eps_hat;
        return std::pow(w, al) * std::pow(w + 1.0, pw) / (w + eps_hat);
    };
    QuadratureOptions ro;
    ro.known_tail_decay = 1.5;
    ro.breakpoints = {eps_hat, 1.0};
    ro.abs_tol = 0.25 * tol;
    return head + integrate_semi_infinite(rest, 0.0, tol, ro).value;
}

}  // namespace detail

// I(x) = int_0^inf u^{(1-s)/2} (u + a^2 + b^2)^{s/2-1} / (u + a^2 - x^2) du for
// |x| <= a, with the closed form B(1/2, (1-s)/2) / sqrt(a^2 + b^2) at |x| = a.
inline double integral_I(double s, double a, double b, double x, double tol = 1e-10) {
    if (!(s > 0.0) || !(s < 1.0)) throw domain_error("s must lie in (0, 1)");
    detail::check_halfwidth(a);
    if (!(b > 0.0)) throw domain_error("height b must be positive");
    const double ax = std::fabs(x);
    if (ax > a) throw domain_error("evaluation point must lie in [-a, a]");
    const double m = a * a + b * b;
    if (ax == a) return beta_fn(0.5, 0.5 * (1.0 - s)) / std::sqrt(m);
    const double eps_hat = (a - ax) * (a + ax) / m;
    return detail::bal_scaled_tail_integral(s, eps_hat, tol) / std::sqrt(m);
}

// Balayage of the unit point mass at bi onto [-a, a]:
//   f(x) = K [ (x^2+b^2)^{s/2-1} + gamma I(x) (a^2-x^2)^{-(1-s)/2} ],
// K = b^{1-s}/B(1/2, (1-s)/2), gamma = 1/B((1+s)/2, (1-s)/2). Total mass m_a < 1.
// Within 1e-12 of the endpoints the density is evaluated through its endpoint
// limit gamma b^{1-s} / sqrt(a^2+b^2) (a^2-x^2)^{-(1-s)/2}.
inline IntervalDensity bal_z_interval_density(const FieldParams& p, double a) {
    detail::check_params(p);
    detail::check_halfwidth(a);
    const double s = p.s, b = p.b;
    const double e = -0.5 * (1.0 - s);
    const double k = std::pow(b, 1.0 - s) / beta_fn(0.5, 0.5 * (1.0 - s));
    const double g = 1.0 / beta_fn(0.5 * (1.0 + s), 0.5 * (1.0 - s));
    const double m = a * a + b * b;
    const double lim = g * std::pow(b, 1.0 - s) / std::sqrt(m);
    // The inner tolerance sits two orders below typical outer tolerances, so
    // quadratures over this density do not stall on inner evaluation noise.
    auto raw = [=](double x, double d) {
        const double tail = detail::bal_scaled_tail_integral(s, d / m, 1e-12);
        return k * (std::pow(x * x + b * b, 0.5 * s - 1.0) +
                    g * tail / std::sqrt(m) * std::pow(d, e));
    };
    auto eval = [=](double x) {
        const double ax = std::fabs(x);
        if (ax >= a) return 0.0;
        const double d = (a - x) * (a + x);
        if (ax > a * (1.0 - 1e-12)) return lim * std::pow(d, e);
        return raw(x, d);
    };
    auto edge = [=](int side, double dist) {
        if (!(dist > 0.0) || dist >= 2.0 * a) return 0.0;
        const double d = dist * (2.0 * a - dist);
        if (dist < 1e-12 * a) return lim * std::pow(d, e);
        return raw(side > 0 ? a - dist : -a + dist, d);
    };
    return IntervalDensity(a, {e, e}, eval, edge);
}

// Factors of the mass identity ||sigma_a|| = q (m_a - beta_mass_factor(s) *
// geometry_mass_factor(a/b, s)). The first is a pure Beta-function ratio, the
// second carries the interval/height geometry through d = a/b.
inline double beta_mass_factor(double s) {
    if (!(s > 0.0) || !(s < 1.0)) throw domain_error("s must lie in (0, 1)");
    return beta_fn(0.5, 0.5 * (1.0 + s)) / beta_fn(0.5 * (1.0 - s), 0.5 * (1.0 + s));
}

inline double geometry_mass_factor(double d, double s) {
    if (!(d > 0.0)) throw domain_error("aspect ratio must be positive");
    return std::pow(d, s) / std::sqrt(1.0 + d * d);
}

namespace detail {

// Total mass of the off-axis balayage density by quadrature of its density.
inline double balayage_mass_quad(const FieldParams& p, double a, double tol = 1e-10) {
    const IntervalDensity f = bal_z_interval_density(p, a);
    const double e = f.profile.right_exponent;
    auto half = [&f](double x) { return 2.0 * f.evaluate(x); };
    return integrate_finite(half, 0.0, a, {0.0, e}, tol).value;
}

}  // namespace detail

// The non-negative part of the signed equilibrium measure scaled by q:
//   sigma_a'(x) = q [ f_a(x) - beta_mass_factor(s) geometry_mass_factor(a/b, s)
//                     omega_a'(x) ],
// evaluated through the equivalent single integral
//   K0 int_0^inf v^{-(1+s)/2}/(v+1) [ (x^2+b^2)^{s/2-1} - (a^2+b^2+(a^2-x^2)v)^{s/2-1} ] dv,
// K0 = q b^{1-s} / (B(1/2, (1-s)/2) B((1+s)/2, (1-s)/2)), whose bracket is
// computed with expm1/log1p so it vanishes exactly at x = +-a instead of by
// cancellation of two divergent terms.
inline IntervalDensity sigma_density(const FieldParams& p, double a) {
    detail::check_params(p);
    detail::check_halfwidth(a);
    const double s = p.s, b = p.b, q = p.q;
    const double m = a * a + b * b;
    const double pw = 0.5 * s - 1.0;
    const double k0 = q * std::pow(b, 1.0 - s) /
                      (beta_fn(0.5, 0.5 * (1.0 - s)) *
                       beta_fn(0.5 * (1.0 + s), 0.5 * (1.0 - s)));
    const double ee = 0.5 * (1.0 + s);
    auto from_eps = [=](double eps) {
        if (!(eps > 0.0)) return 0.0;
        const double mp = std::pow(m, pw);
        const double c_near = std::expm1(pw * std::log1p(-eps / m));
        auto f = [=](double v) {
            const double c_far = std::expm1(pw * std::log1p(eps * v / m));
            return std::pow(v, -ee) / (v + 1.0) * (c_near - c_far);
        };
        QuadratureOptions opt;
        opt.known_tail_decay = 0.5 * (3.0 + s);
        opt.breakpoints = {1.0, m / eps};
        opt.abs_tol = 1e-15;
        const double val =
            k0 * mp * integrate_semi_infinite(f, -ee, 1e-11, opt).value;
        if (val < -1e-12)
            throw consistency_error("sigma density evaluated negative beyond tolerance");
        return val;
    };
    auto eval = [=](double x) {
        if (std::fabs(x) >= a) return 0.0;
        return from_eps((a - x) * (a + x));
    };
    auto edge = [=](int, double dist) {
        if (!(dist > 0.0) || dist >= 2.0 * a) return 0.0;
        return from_eps(dist * (2.0 * a - dist));
    };
    return IntervalDensity(a, {ee, ee}, eval, edge);
}

// Total mass of sigma_a, strictly increasing in a with limits 0 and q.
inline double sigma_mass(const FieldParams& p, double a, double tol = 1e-9) {
    const IntervalDensity sd = sigma_density(p, a);
    auto half = [&sd](double x) { return 2.0 * sd.evaluate(x); };
    QuadratureOptions opt;
    opt.abs_tol = tol;
    return integrate_finite(half, 0.0, a, {0.0, sd.profile.right_exponent}, tol, opt)
        .value;
}

struct BalayageMassResult {
    double value = 0.0;              // quadrature of the balayage density
    double route_discrepancy = 0.0;  // value minus the mass-identity route
};

// m_a by two independent routes: direct quadrature of the balayage density, and
// the rearranged mass identity m_a = ||sigma_a||/q + beta_mass_factor(s) *
// geometry_mass_factor(a/b, s). Disagreement beyond 1e-6 is an error; the
// quadrature value is the one consumers use.
inline BalayageMassResult balayage_mass(const FieldParams& p, double a) {
    detail::check_params(p);
    detail::check_halfwidth(a);
    const double m1 = detail::balayage_mass_quad(p, a);
    const double m2 = sigma_mass(p, a) / p.q +
                      beta_mass_factor(p.s) * geometry_mass_factor(a / p.b, p.s);
    const double diff = m1 - m2;
    if (!(std::fabs(diff) <= 1e-6))
        throw consistency_error("balayage mass routes disagree beyond 1e-6");
    return {m1, diff};
}

// lim_{|x| -> a} (a^2 - x^2)^{(1-s)/2} eta_a'(x) for the signed equilibrium
// measure eta_a = q f_a - (q m_a - 1) omega_a. Positive iff eta_a >= 0 on all
// of [-a, a]; vanishes exactly at the critical half-width.
namespace detail {

inline double signed_endpoint_coeff_with_mass(const FieldParams& p, double a,
                                              double m_a) {
    const double g = 1.0 / beta_fn(0.5 * (1.0 + p.s), 0.5 * (1.0 - p.s));
    const double robin_c = 1.0 / (std::pow(a, p.s) * beta_fn(0.5, 0.5 * (1.0 + p.s)));
    const double lim = g * std::pow(p.b, 1.0 - p.s) / std::sqrt(a * a + p.b * p.b);
    return p.q * lim - (p.q * m_a - 1.0) * robin_c;
}

template <class F>
double bisect_root(F&& f, double lo, double hi, double flo, double fhi, double xtol) {
    if (!(flo == 0.0 || fhi == 0.0 || (flo < 0.0) != (fhi < 0.0)))
        throw root_isolation_error("bracket does not straddle a sign change");
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    for (int i = 0; i < 200 && hi - lo > xtol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

inline double signed_endpoint_coeff(const FieldParams& p, double a) {
    detail::check_params(p);
    detail::check_halfwidth(a);
    return detail::signed_endpoint_coeff_with_mass(p, a,
                                                   detail::balayage_mass_quad(p, a));
}

struct SignedDensityReport {
    IntervalDensity density;          // eta_a', total mass 1
    double positive_halfwidth = 0.0;  // largest a' <= a with eta_a' >= 0 on [-a', a']
    double endpoint_coefficient = 0.0;
    double balayage_mass = 0.0;  // m_a used in the decomposition
};

// Signed equilibrium measure eta_a = q Bal(delta_z) - (q m_a - 1) omega_a on
// [-a, a]. Unit total mass by construction. When the endpoint coefficient is
// negative, eta_a' turns negative near the endpoints and positive_halfwidth
// reports its innermost zero.
inline SignedDensityReport signed_eq_density(const FieldParams& p, double a) {
    detail::check_params(p);
    detail::check_halfwidth(a);
    const double m_a = detail::balayage_mass_quad(p, a);
    const double coeff = detail::signed_endpoint_coeff_with_mass(p, a, m_a);
    const IntervalDensity bal = bal_z_interval_density(p, a);
    const IntervalDensity omega = robin_density(p.s, a);
    const double q = p.q;
    const double c = q * m_a - 1.0;
    auto eval = [=](double x) { return q * bal.evaluate(x) - c * omega.evaluate(x); };
    auto edge = [=](int side, double dist) {
        return q * bal.evaluate_at_distance(side, dist) -
               c * omega.evaluate_at_distance(side, dist);
    };
    const double e = bal.profile.left_exponent;
    IntervalDensity density(a, {e, e}, eval, edge, 1.0);

    double ap = a;
    if (coeff < 0.0) {
        const double hi = a * (1.0 - 1e-12);
        double lo = 0.5 * a;
        double flo = eval(lo);
        int widen = 0;
        while (flo <= 0.0) {
            if (++widen > 60)
                throw root_isolation_error(
                    "no positive region found for the signed density");
            lo *= 0.5;
            flo = eval(lo);
        }
        ap = detail::bisect_root(eval, lo, hi, flo, eval(hi), 1e-12 * a);
    }
    return {std::move(density), ap, coeff, m_a};
}

namespace detail {

// Smallest a with ||sigma_a|| = 1, found by bracket doubling plus bisection on
// the strictly increasing mass, then secant refinement. mass_tol controls the
// inner quadratures; xtol is relative to the returned half-width. Bracketing
// and bisection run on a cheap mass tolerance; only the secant finish pays for
// full-precision masses.
inline double sigma_unit_mass_halfwidth(const FieldParams& p, double mass_tol = 1e-10,
                                        double xtol = 1e-11) {
    if (!(p.q > 1.0))
        throw no_equilibrium_error("sigma mass stays below 1 for q <= 1");
    const double coarse_tol = std::max(mass_tol, 1e-6);
    double hi = p.b, lo = 0.0, flo = 0.0;
    double fhi = sigma_mass(p, hi, coarse_tol) - 1.0;
    int steps = 0;
    while (fhi < 0.0) {
        if (++steps > 60)
            throw root_isolation_error("sigma mass failed to reach 1 while doubling");
        lo = hi;
        flo = fhi;
        hi *= 2.0;
        fhi = sigma_mass(p, hi, coarse_tol) - 1.0;
    }
    if (lo == 0.0) {
        lo = 0.5 * hi;
        flo = sigma_mass(p, lo, coarse_tol) - 1.0;
        while (flo > 0.0) {
            if (++steps > 120)
                throw root_isolation_error("sigma mass failed to drop below 1");
            hi = lo;
            lo *= 0.5;
            flo = sigma_mass(p, lo, coarse_tol) - 1.0;
        }
    }
    double x0 = lo, x1 = hi, f0 = flo, f1 = fhi;
    for (int i = 0; i < 80 && x1 - x0 > 1e-4 * x1; ++i) {
        const double mid = 0.5 * (x0 + x1);
        const double fm = sigma_mass(p, mid, coarse_tol) - 1.0;
        if ((fm < 0.0) == (f0 < 0.0)) {
            x0 = mid;
            f0 = fm;
        } else {
            x1 = mid;
            f1 = fm;
        }
    }
    // Secant steps collapse the remaining bracket superlinearly; the coarse
    // values seeding the first step only perturb it by a sliver of the width.
    auto f = [&](double a) { return sigma_mass(p, a, mass_tol) - 1.0; };
    for (int i = 0; i < 12; ++i) {
        const double denom = f1 - f0;
        if (denom == 0.0) break;
        const double x2 = x1 - f1 * (x1 - x0) / denom;
        if (!(x2 > 0.0) || !std::isfinite(x2)) break;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f(x1);
        if (std::fabs(x1 - x0) <= xtol * x1) break;
    }
    return x1;
}

}  // namespace detail

// Equilibrium density of the external field: sigma at the critical half-width,
// where its mass reaches exactly 1. Requires q > 1; pass a previously solved
// critical half-width to skip the internal root solve.
inline IntervalDensity equilibrium_density(const FieldParams& p,
                                           double critical_halfwidth = 0.0) {
    detail::check_params(p);
    if (!(p.q > 1.0))
        throw no_equilibrium_error("no compactly supported equilibrium measure for q <= 1");
    const double at = critical_halfwidth > 0.0
                          ? critical_halfwidth
                          : detail::sigma_unit_mass_halfwidth(p);
    IntervalDensity d = sigma_density(p, at);
    return IntervalDensity(
        d.half_width, d.profile, [d](double x) { return d.evaluate(x); },
        [d](int side, double dist) { return d.evaluate_at_distance(side, dist); }, 1.0);
}

// Balayage of a finite atomic measure onto [-a, a]. Atoms off the real axis
// use the off-axis interval density translated to the atom's real part with
// b = |Im|; real atoms outside [-a, a] use the real-point density. Note the
// translation is exact for purely imaginary atoms and a stated approximation
// otherwise, since the target interval is not recentred.
inline IntervalDensity superpose_atomic(double s, const AtomicMeasure& measure,
                                        double a) {
    if (!(s > 0.0) || !(s < 1.0)) throw domain_error("s must lie in (0, 1)");
    detail::check_halfwidth(a);
    if (measure.atoms.empty()) throw domain_error("atomic measure has no atoms");
    struct Component {
        IntervalDensity density;
        double weight;
        double shift;
    };
    auto components = std::make_shared<std::vector<Component>>();
    bool centred = true;
    for (const Atom& atom : measure.atoms) {
        if (!(atom.weight > 0.0)) throw domain_error("atom weights must be positive");
        const double x0 = atom.location.real();
        const double y0 = atom.location.imag();
        if (y0 == 0.0) {
            if (std::fabs(x0) <= a)
                throw domain_error("atom lies on the target interval");
            components->push_back(
                {bal_realpoint_interval_density(s, a, x0), atom.weight, 0.0});
        } else {
            components->push_back(
                {bal_z_interval_density({s, 1.0, std::fabs(y0)}, a), atom.weight, x0});
            if (x0 != 0.0) centred = false;
        }
    }
    const double e = -0.5 * (1.0 - s);
    auto eval = [components](double x) {
        double sum = 0.0;
        for (const Component& c : *components)
            sum += c.weight * c.density.evaluate(x - c.shift);
        return sum;
    };
    std::function<double(int, double)> edge;
    if (centred) {
        edge = [components](int side, double dist) {
            double sum = 0.0;
            for (const Component& c : *components)
                sum += c.weight * c.density.evaluate_at_distance(side, dist);
            return sum;
        };
    }
    return IntervalDensity(a, {e, e}, eval, std::move(edge));
}

struct LogCaseReference {
    double a_tilde = 0.0;
    IntervalDensity density;
};

// Logarithmic-kernel counterpart used as an s -> 0 sanity anchor: critical
// half-width sqrt(2q-1) b / (q-1) and density (q-1) sqrt(a^2-x^2) / (pi (x^2+b^2)),
// which integrates to exactly 1.
inline LogCaseReference log_case_reference(double q, double b) {
    if (!(b > 0.0)) throw domain_error("height b must be positive");
    if (!(q > 1.0))
        throw no_equilibrium_error("the logarithmic case needs q > 1 for a compact support");
    const double at = std::sqrt(2.0 * q - 1.0) * b / (q - 1.0);
    const double pi = 3.14159265358979323846;
    auto eval = [=](double x) {
        const double d = (at - x) * (at + x);
        if (!(d > 0.0)) return 0.0;
        return (q - 1.0) * std::sqrt(d) / (pi * (x * x + b * b));
    };
    auto edge = [=](int side, double dist) {
        if (!(dist > 0.0) || dist >= 2.0 * at) return 0.0;
        const double x = side > 0 ? at - dist : -at + dist;
        return (q - 1.0) * std::sqrt(dist * (2.0 * at - dist)) / (pi * (x * x + b * b));
    };
    return {at, IntervalDensity(at, {0.5, 0.5}, eval, edge, 1.0)};
}

}  // namespace rieszeq
