#pragma once

#include <rieszeq/errors.hpp>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

namespace rieszeq {

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    long evaluations = 0;
};

struct SingularityProfile {
    double left_exponent = 0.0;
    double right_exponent = 0.0;
};

struct QuadratureOptions {
    double abs_tol = -1.0;           // negative: reuse the relative tol
    long max_evaluations = 1 << 20;
    std::vector<double> breakpoints; // interior points to split at
    double known_tail_decay = -1.0;  // semi-infinite: skip the decay probe when > 1
};

namespace detail {

// Gauss-Legendre 15-point rule on [-1, 1], nodes by Newton from Chebyshev starts
struct GL15 {
    double x[15];
    double w[15];
    GL15() {
        for (int k = 0; k < 15; ++k) {
            double t = std::cos(M_PI * (k + 0.75) / 15.5);
            double dp = 0.0;
            for (int it = 0; it < 60; ++it) {
                double p0 = 1.0, p1 = t;
                for (int n = 1; n < 15; ++n) {
                    const double p2 = ((2 * n + 1) * t * p1 - n * p0) / (n + 1);
                    p0 = p1;
                    p1 = p2;
                }
                dp = 15.0 * (t * p1 - p0) / (t * t - 1.0);
                const double dt = p1 / dp;
                t -= dt;
                if (std::fabs(dt) < 1e-15) break;
            }
            x[k] = t;
            w[k] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
    }
};

inline const GL15& gl15_nodes() {
    static const GL15 g;
    return g;
}

template <class G>
double gl15_sum(const G& g, double lo, double hi, long& evals) {
    const GL15& q = gl15_nodes();
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    double s = 0.0;
    for (int i = 0; i < 15; ++i) s += q.w[i] * g(c + h * q.x[i]);
    evals += 15;
    return s * h;
}

struct Piece {
    std::function<double(double)> g;
    double lo, hi;
};

struct Panel {
    int piece;
    double lo, hi;
    double whole; // one rule over [lo, hi], inherited from the parent's half
    double left, right;
    double value() const { return left + right; }
    double err() const { return std::fabs(whole - (left + right)); }
};

struct PanelOrder {
    bool operator()(const Panel& a, const Panel& b) const { return a.err() < b.err(); }
};

inline Panel make_panel(const std::vector<Piece>& ps, int pi, double lo, double hi,
                        double whole, long& evals) {
    const auto& g = ps[pi].g;
    const double mid = 0.5 * (lo + hi);
    Panel p{pi, lo, hi, whole, gl15_sum(g, lo, mid, evals), gl15_sum(g, mid, hi, evals)};
    if (!std::isfinite(p.whole) || !std::isfinite(p.value()))
        throw domain_error("integrand returned a non-finite value");
    return p;
}

inline QuadratureResult run_adaptive(const std::vector<Piece>& pieces, double rel_tol,
                                     double abs_tol, long budget) {
    std::priority_queue<Panel, std::vector<Panel>, PanelOrder> active;
    long evals = 0;
    double total = 0.0, terr = 0.0;
    for (int i = 0; i < static_cast<int>(pieces.size()); ++i) {
        const Piece& pc = pieces[i];
        const double whole = gl15_sum(pc.g, pc.lo, pc.hi, evals);
        Panel p = make_panel(pieces, i, pc.lo, pc.hi, whole, evals);
        total += p.value();
        terr += p.err();
        active.push(p);
    }
    const double eps = std::numeric_limits<double>::epsilon();
    while (terr > std::max(abs_tol, rel_tol * std::fabs(total))) {
        if (active.empty())
            throw convergence_error("quadrature refinement stalled at floating-point resolution",
                                    total, terr);
        if (evals + 60 > budget)
            throw convergence_error("quadrature evaluation budget exhausted", total, terr);
        Panel p = active.top();
        active.pop();
        if (p.hi - p.lo < 64.0 * eps * (std::fabs(p.lo) + std::fabs(p.hi) + 1.0))
            continue; // too narrow to split; keep its contribution as-is
        const double mid = 0.5 * (p.lo + p.hi);
        Panel a = make_panel(pieces, p.piece, p.lo, mid, p.left, evals);
        Panel b = make_panel(pieces, p.piece, mid, p.hi, p.right, evals);
        total += a.value() + b.value() - p.value();
        terr += a.err() + b.err() - p.err();
        active.push(a);
        active.push(b);
    }
    return {total, terr, evals};
}

// Algebraic endpoint behavior dist^alpha is flattened by dist = w^{1/(1+alpha)}.
// The floor is one ulp of the endpoint: just enough to keep endpoint + dist from
// rounding onto the endpoint itself, without distorting the integrand.
template <class F>
void emit_segment(std::vector<Piece>& out, F f, double A, double B, double alpha_l,
                  double alpha_r) {
    if (alpha_l != 0.0 && alpha_r != 0.0) {
        const double mid = 0.5 * (A + B);
        emit_segment(out, f, A, mid, alpha_l, 0.0);
        emit_segment(out, f, mid, B, 0.0, alpha_r);
        return;
    }
    const double eps = std::numeric_limits<double>::epsilon();
    if (alpha_l != 0.0) {
        const double kappa = 1.0 / (1.0 + alpha_l);
        const double wmax = std::pow(B - A, 1.0 + alpha_l);
        const double floor_d = eps * std::fabs(A);
        out.push_back({[=](double w) {
                           double dist = std::pow(w, kappa);
                           if (dist < floor_d) dist = floor_d;
                           if (!(dist > 0.0)) return 0.0;
                           return f(A + dist) * kappa * std::pow(w, kappa - 1.0);
                       },
                       0.0, wmax});
        return;
    }
    if (alpha_r != 0.0) {
        const double kappa = 1.0 / (1.0 + alpha_r);
        const double wmax = std::pow(B - A, 1.0 + alpha_r);
        const double floor_d = eps * std::fabs(B);
        out.push_back({[=](double w) {
                           double dist = std::pow(w, kappa);
                           if (dist < floor_d) dist = floor_d;
                           if (!(dist > 0.0)) return 0.0;
                           return f(B - dist) * kappa * std::pow(w, kappa - 1.0);
                       },
                       0.0, wmax});
        return;
    }
    out.push_back({[f](double t) { return f(t); }, A, B});
}

} // namespace detail

template <class F>
QuadratureResult integrate_finite(F f, double lo, double hi, SingularityProfile profile = {},
                                  double tol = 1e-10, const QuadratureOptions& opt = {}) {
    if (!(lo < hi)) throw domain_error("integrate_finite requires lo < hi");
    if (!(profile.left_exponent > -1.0) || !(profile.right_exponent > -1.0))
        throw domain_error("singularity exponents must exceed -1");
    if (!(tol > 0.0)) throw domain_error("tol must be positive");
    if (opt.max_evaluations <= 0) throw domain_error("max_evaluations must be positive");

    std::vector<double> pts{lo};
    {
        std::vector<double> brk = opt.breakpoints;
        std::sort(brk.begin(), brk.end());
        for (double t : brk)
            if (t > lo && t < hi && t != pts.back()) pts.push_back(t);
    }
    pts.push_back(hi);

    std::vector<detail::Piece> pieces;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        detail::emit_segment(pieces, f, pts[i], pts[i + 1],
                             i == 0 ? profile.left_exponent : 0.0,
                             i + 2 == pts.size() ? profile.right_exponent : 0.0);
    const double abs_tol = opt.abs_tol < 0.0 ? tol : opt.abs_tol;
    return detail::run_adaptive(pieces, tol, abs_tol, opt.max_evaluations);
}

template <class F>
QuadratureResult integrate_semi_infinite(F f, double origin_exponent, double tol = 1e-10,
                                         const QuadratureOptions& opt = {}) {
    if (!(origin_exponent > -1.0) || !(origin_exponent <= 0.0))
        throw domain_error("origin_exponent must lie in (-1, 0]");
    if (!(tol > 0.0)) throw domain_error("tol must be positive");

    long probe_evals = 0;
    double decay = opt.known_tail_decay;
    if (!(decay > 1.0)) {
        const double m4 = std::fabs(f(1e4));
        const double m6 = std::fabs(f(1e6));
        const double m8 = std::fabs(f(1e8));
        probe_evals = 3;
        if (m4 == 0.0 || m6 == 0.0 || m8 == 0.0)
            decay = 4.0;
        else
            decay = std::min(std::log(m4 / m6), std::log(m6 / m8)) / std::log(1e2);
        if (!(decay > 1.05))
            throw divergence_error("integrand tail decays too slowly for convergence");
    }
    const double right_exp = std::clamp(decay - 2.0, -0.95, 0.0);

    // u = v/(1-v) maps (0,inf) onto v in (0,1). The u <= 1 half is integrated in
    // v directly; the u >= 1 half is integrated in dist = 1-v = 1/(1+u), so the
    // argument u = (1-dist)/dist stays exact arbitrarily close to v = 1.
    auto mapped = [f](double v) {
        const double omv = 1.0 - v;
        return f(v / omv) / (omv * omv);
    };
    auto tail = [f](double dist) {
        if (dist < 1e-300) return 0.0;
        const double u = (1.0 - dist) / dist;
        return f(u) / (dist * dist);
    };
    std::vector<double> vpts{0.0}, dpts{0.0};
    {
        std::vector<double> brk = opt.breakpoints;
        std::sort(brk.begin(), brk.end());
        for (double u : brk) {
            if (!(u > 0.0) || !std::isfinite(u)) continue;
            const double v = u / (1.0 + u);
            const double d = 1.0 / (1.0 + u);
            if (v < 0.5 && v != vpts.back())
                vpts.push_back(v);
            else if (d < 0.5 && d > 0.0)
                dpts.push_back(d);
        }
        std::sort(dpts.begin(), dpts.end());
        dpts.erase(std::unique(dpts.begin(), dpts.end()), dpts.end());
    }
    vpts.push_back(0.5);
    dpts.push_back(0.5);

    std::vector<detail::Piece> pieces;
    for (std::size_t i = 0; i + 1 < vpts.size(); ++i)
        detail::emit_segment(pieces, mapped, vpts[i], vpts[i + 1],
                             i == 0 ? origin_exponent : 0.0, 0.0);
    for (std::size_t i = 0; i + 1 < dpts.size(); ++i)
        detail::emit_segment(pieces, tail, dpts[i], dpts[i + 1],
                             i == 0 ? right_exp : 0.0, 0.0);
    const double abs_tol = opt.abs_tol < 0.0 ? tol : opt.abs_tol;
    QuadratureResult r = detail::run_adaptive(pieces, tol, abs_tol, opt.max_evaluations);
    r.evaluations += probe_evals;
    return r;
}

// Densities that can evaluate themselves as a function of the distance to one of
// their endpoints (side +1 means x = a - dist, side -1 means x = -a + dist) keep
// their endpoint factors exact where x itself would round onto the endpoint.
template <class D>
concept EdgeEvaluable = requires(const D& d) {
    { d.evaluate_at_distance(1, 0.5) } -> std::convertible_to<double>;
};

// Potential of a density on [-a, a] against the kernel |x-t|^{-s}. Each side of the
// split is integrated in distance coordinates so the kernel argument is exact.
template <class Density>
double riesz_potential(const Density& density, double s, double x, double tol = 1e-10) {
    if (!(s > 0.0) || !(s < 1.0)) throw domain_error("riesz_potential requires s in (0, 1)");
    const double a = density.half_width;
    const SingularityProfile prof = density.profile;
    auto at = [&density](double t) { return density.evaluate(t); };

    if (x == a) {
        auto g = [&](double d) {
            double val;
            if constexpr (EdgeEvaluable<Density>)
                val = density.evaluate_at_distance(1, d);
            else
                val = at(a - d);
            return val * std::pow(d, -s);
        };
        return integrate_finite(g, 0.0, 2.0 * a,
                                {prof.right_exponent - s, prof.left_exponent}, tol)
            .value;
    }
    if (x == -a) {
        auto g = [&](double d) {
            double val;
            if constexpr (EdgeEvaluable<Density>)
                val = density.evaluate_at_distance(-1, d);
            else
                val = at(-a + d);
            return val * std::pow(d, -s);
        };
        return integrate_finite(g, 0.0, 2.0 * a,
                                {prof.left_exponent - s, prof.right_exponent}, tol)
            .value;
    }
    if (x > a) {
        auto g = [&](double d) { return at(x - d) * std::pow(d, -s); };
        return integrate_finite(g, x - a, x + a, {prof.right_exponent, prof.left_exponent}, tol)
            .value;
    }
    if (x < -a) {
        auto g = [&](double d) { return at(x + d) * std::pow(d, -s); };
        return integrate_finite(g, -x - a, -x + a, {prof.left_exponent, prof.right_exponent}, tol)
            .value;
    }
    auto gl = [&](double d) { return at(x - d) * std::pow(d, -s); };
    auto gr = [&](double d) { return at(x + d) * std::pow(d, -s); };
    return integrate_finite(gl, 0.0, x + a, {-s, prof.left_exponent}, tol).value +
           integrate_finite(gr, 0.0, a - x, {-s, prof.right_exponent}, tol).value;
}

} // namespace rieszeq
