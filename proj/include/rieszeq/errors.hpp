#pragma once

#include <stdexcept>
#include <string>

namespace rieszeq {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// invalid argument ranges (bad s/q/b, atom on the conductor, x out of range)
struct domain_error : error {
    using error::error;
};

// gamma evaluated at a non-positive integer
struct pole_error : domain_error {
    using domain_error::domain_error;
};

// result exceeds the representable double range
struct overflow_error : error {
    using error::error;
};

// series or adaptive refinement ran out of budget; carries the partial result
struct convergence_error : error {
    double partial_value;
    double error_estimate;
    convergence_error(const std::string& msg, double partial, double estimate)
        : error(msg), partial_value(partial), error_estimate(estimate) {}
};

// semi-infinite integrand whose tail decays too slowly to integrate
struct divergence_error : error {
    using error::error;
};

// q < 1: the weighted equilibrium problem has no solution
struct no_equilibrium_error : domain_error {
    using domain_error::domain_error;
};

// q = 1: weakly admissible field, support is the whole real axis
struct weakly_admissible_error : domain_error {
    using domain_error::domain_error;
};

// two independent routes to the same quantity disagree beyond tolerance
struct consistency_error : error {
    using error::error;
};

// a density showed more sign changes than its structure allows
struct root_isolation_error : error {
    using error::error;
};

// least-squares exponent fit with residuals above threshold
struct fit_error : error {
    using error::error;
};

} // namespace rieszeq
