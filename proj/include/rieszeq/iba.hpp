#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <rieszeq/measures.hpp>

namespace rieszeq {

enum class IBAStop {
    converged,
    positive_everywhere,
    max_iterations,
    non_shrinking,
};

inline const char* to_string(IBAStop r) {
    switch (r) {
        case IBAStop::converged: return "converged";
        case IBAStop::positive_everywhere: return "positive_everywhere";
        case IBAStop::max_iterations: return "max_iterations";
        case IBAStop::non_shrinking: return "non_shrinking";
    }
    return "unknown";
}

// One run of the iterated balayage algorithm. a_sequence holds the interval
// half-widths starting at a0, non-increasing throughout; coeff_sequence the
// endpoint coefficient of the signed measure on each interval, one per step.
struct IBATrace {
    std::vector<double> a_sequence;
    std::vector<double> coeff_sequence;
    IBAStop stop_reason = IBAStop::converged;
    double limit_halfwidth = 0.0;
};

namespace detail {

struct SupportStep {
    double next = 0.0;
    double coeff = 0.0;
};

// Half-width of the positive part of eta_a plus the endpoint coefficient that
// decided it. After locating the innermost density zero the sign pattern is
// scanned on both sides; a second sign change means the measure has left the
// single-interval regime and the step is refused rather than guessed.
inline SupportStep positive_support_step(const FieldParams& p, double a) {
    const SignedDensityReport r = signed_eq_density(p, a);
    if (r.endpoint_coefficient >= 0.0) return {a, r.endpoint_coefficient};
    const double ap = r.positive_halfwidth;
    const double tol = 1e-8 / a;
    for (int j = 1; j <= 9; ++j) {
        if (r.density.evaluate(0.1 * j * ap) < -tol)
            throw root_isolation_error(
                "signed density dips negative inside its positive part");
    }
    for (int j = 1; j <= 3; ++j) {
        if (r.density.evaluate(ap + 0.25 * j * (a - ap)) > tol)
            throw root_isolation_error(
                "signed density turns positive between its zero and the endpoint");
    }
    return {ap, r.endpoint_coefficient};
}

}  // namespace detail

// Support half-width of the positive part of the signed equilibrium measure on
// [-a, a]: a itself when the endpoint coefficient is nonnegative, otherwise the
// largest density zero in (0, a).
inline double positive_support_halfwidth(const FieldParams& p, double a) {
    detail::check_params(p);
    detail::check_halfwidth(a);
    return detail::positive_support_step(p, a).next;
}

// Iterated balayage: a_{k+1} is the positive-part half-width of the signed
// measure on [-a_k, a_k], re-solved from scratch on each interval. a0 <= 0
// selects the start automatically by doubling from b until the endpoint
// coefficient turns negative; for q <= 1 it never does (the signed measure is
// positive on every interval) and the trace reports non_shrinking. The run
// counts as converged only when the final coefficient sits within stop_tol,
// so a small step alone does not end it.
inline IBATrace run_iba(const FieldParams& p, double a0 = 0.0, double stop_tol = 1e-8,
                        int max_iter = 200) {
    detail::check_params(p);
    if (!(stop_tol > 0.0)) throw domain_error("stop tolerance must be positive");
    if (max_iter < 1) throw domain_error("iteration budget must be positive");

    IBATrace tr;
    double a = a0;
    if (!(a > 0.0)) {
        a = p.b;
        bool shrinks = false;
        for (int k = 0; k <= 60 && !shrinks; ++k) {
            // The balayage mass never exceeds 1, so the coefficient evaluated
            // with m_a = 1 bounds the true one from below; while the bound is
            // positive the measure has no negative part and no quadrature is
            // needed. That settles every probe when q <= 1. Otherwise the sign
            // is decided with a coarse mass.
            if (detail::signed_endpoint_coeff_with_mass(p, a, 1.0) <= 0.0)
                shrinks = detail::signed_endpoint_coeff_with_mass(
                              p, a, detail::balayage_mass_quad(p, a, 1e-6)) < 0.0;
            if (!shrinks) a *= 2.0;
        }
        if (!shrinks) {
            tr.stop_reason = IBAStop::non_shrinking;
            tr.limit_halfwidth = std::numeric_limits<double>::infinity();
            return tr;
        }
    }
    detail::check_halfwidth(a);

    tr.a_sequence.push_back(a);
    for (int k = 0; k < max_iter; ++k) {
        const detail::SupportStep st = detail::positive_support_step(p, a);
        tr.coeff_sequence.push_back(st.coeff);
        if (k == 0 && st.coeff >= 0.0) {
            tr.stop_reason =
                p.q > 1.0 ? IBAStop::positive_everywhere : IBAStop::non_shrinking;
            tr.limit_halfwidth = a;
            return tr;
        }
        tr.a_sequence.push_back(st.next);
        const double step = a - st.next;
        a = st.next;
        if (st.coeff >= -stop_tol ||
            (step < stop_tol * a && std::fabs(st.coeff) <= stop_tol)) {
            tr.stop_reason = IBAStop::converged;
            tr.limit_halfwidth = a;
            return tr;
        }
    }
    tr.stop_reason = IBAStop::max_iterations;
    tr.limit_halfwidth = a;
    return tr;
}

}  // namespace rieszeq
