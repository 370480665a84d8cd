#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <rieszeq/quadrature.hpp>
#include <rieszeq/solver.hpp>

#include <cmath>
#include <vector>

using namespace rieszeq;

TEST_CASE("robin potential at the charge") {
    CHECK(robin_potential_at_z(0.5, 1.0, 1.0) ==
          doctest::Approx(0.927037338650685959).epsilon(1e-12));
    CHECK(robin_potential_at_z(0.5, 1.44227117262485513, 1.0) ==
          doctest::Approx(0.878558411573747307).epsilon(1e-12));
    CHECK(robin_potential_at_z(0.25, 2.0, 1.5) ==
          doctest::Approx(0.84729208084394769).epsilon(1e-12));

    // closed form against direct quadrature of the Robin density times the
    // distance kernel to the charge
    {
        const double s = 0.5, a = 1.0, b = 1.0;
        const IntervalDensity w = robin_density(s, a);
        auto f = [&](double t) {
            return 2.0 * w.evaluate(t) * std::pow(t * t + b * b, -0.5 * s);
        };
        const double quad = integrate_finite(f, 0.0, a, {0.0, -0.25}, 1e-11).value;
        CHECK(quad == doctest::Approx(robin_potential_at_z(s, a, b)).epsilon(1e-8));
    }

    // collapses to b^{-s} for a vanishing interval
    CHECK(robin_potential_at_z(0.3, 1e-8, 2.0) ==
          doctest::Approx(std::pow(2.0, -0.3)).epsilon(1e-12));

    // moving the charge away lowers the potential
    double prev = robin_potential_at_z(0.5, 1.0, 0.5);
    for (double b : {1.0, 2.0, 4.0}) {
        const double u = robin_potential_at_z(0.5, 1.0, b);
        CHECK(u < prev);
        prev = u;
    }

    CHECK_THROWS_AS(robin_potential_at_z(1.2, 1.0, 1.0), domain_error);
    CHECK_THROWS_AS(robin_potential_at_z(0.5, -1.0, 1.0), domain_error);
    CHECK_THROWS_AS(robin_potential_at_z(0.5, 1.0, 0.0), domain_error);
}

TEST_CASE("interval functional") {
    const FieldParams p5{0.5, 5.0, 1.0};
    CHECK(ms_functional(p5, 1.0) ==
          doctest::Approx(-2.78111201595205788).epsilon(1e-12));
    CHECK(ms_functional({0.25, 2.0, 1.5}, 2.0) ==
          doctest::Approx(-0.63550579971396378).epsilon(1e-12));

    // definitional form and compact-variable form stay together
    for (double s : {0.25, 0.5, 0.75}) {
        for (double q : {0.75, 5.0}) {
            const FieldParams p{s, q, 1.0};
            for (double a : {0.1, 0.5, 1.0, 1.44227117262485513, 3.0, 10.0, 100.0}) {
                const double direct = ms_functional(p, a);
                const double closed = detail::ms_functional_closed(p, a);
                CHECK(std::fabs(direct - closed) <=
                      1e-10 * std::max(1.0, std::fabs(direct)));
            }
        }
    }

    // decays to zero for wide intervals, blows up for narrow ones
    CHECK(std::fabs(ms_functional({0.5, 0.75, 1.0}, 1e6)) < 1e-3);
    CHECK(std::fabs(ms_functional(p5, 1e10)) < 1e-4);
    CHECK(ms_functional(p5, 1e-6) > 100.0);

    // a weak charge keeps the functional positive and strictly decreasing
    {
        const FieldParams p{0.5, 0.75, 1.0};
        double last = ms_functional(p, 0.1);
        CHECK(last > 0.0);
        for (int k = 1; k <= 24; ++k) {
            const double a = 0.1 * std::pow(10.0, 3.0 * k / 24.0);
            const double v = ms_functional(p, a);
            CHECK(v > 0.0);
            CHECK(v < last);
            last = v;
        }
    }
}

TEST_CASE("critical compact variable") {
    CHECK(critical_c({0.5, 5.0, 1.0}) ==
          doctest::Approx(0.67534007931896012).epsilon(1e-11));
    CHECK(critical_c({0.5, 2.0, 1.0}) ==
          doctest::Approx(0.95340265376205957).epsilon(1e-11));
    CHECK(critical_c({0.25, 3.0, 1.0}) ==
          doctest::Approx(0.69981884221873903).epsilon(1e-11));

    CHECK(detail::halfwidth_from_c(critical_c({0.5, 5.0, 1.0}), 1.0) ==
          doctest::Approx(1.44227117262485513).epsilon(1e-9));
    CHECK(detail::halfwidth_from_c(critical_c({0.5, 2.0, 1.0}), 1.0) ==
          doctest::Approx(4.52332284838326715).epsilon(1e-9));
    CHECK(detail::halfwidth_from_c(critical_c({0.25, 3.0, 1.0}), 1.0) ==
          doctest::Approx(1.5268666228096973).epsilon(1e-9));

    CHECK_THROWS_AS(critical_c({0.5, 0.9, 1.0}), no_equilibrium_error);
    CHECK_THROWS_AS(critical_c({0.5, 1.0, 1.0}), weakly_admissible_error);

    // contiguous-parameter hypergeometric collapses to the algebraic form
    for (double c : {0.1, 0.5, 0.9}) {
        CHECK(hyp2f1(1.25, 0.75, 1.25, c) ==
              doctest::Approx(std::pow(1.0 - c, -0.75)).epsilon(1e-10));
    }
    CHECK(hyp2f1(1.25, 0.75, 1.25, 0.9) ==
          doctest::Approx(5.623413251903491).epsilon(1e-10));
}

TEST_CASE("critical endpoint consensus") {
    const FieldParams p5{0.5, 5.0, 1.0};
    const SolverReport r5 = critical_endpoint(p5);
    CHECK(r5.a_tilde == doctest::Approx(1.44227117262485513).epsilon(1e-8));
    CHECK(r5.consensus_spread <= 1e-6 * r5.a_tilde);
    REQUIRE(r5.per_method.count("sigma_mass") == 1);
    REQUIRE(r5.per_method.count("critical_equation") == 1);
    REQUIRE(r5.per_method.count("endpoint_coefficient") == 1);
    for (const auto& [name, est] : r5.per_method)
        CHECK(est == doctest::Approx(1.44227117262485513).epsilon(1e-6));

    CHECK(r5.c == doctest::Approx(0.67534007931896012).epsilon(1e-9));
    CHECK(std::fabs(r5.c - r5.d * r5.d / (1.0 + r5.d * r5.d)) <= 1e-12);
    CHECK(r5.m_a_tilde == doctest::Approx(0.569071558083189).epsilon(1e-9));
    CHECK(r5.mass_loss == doctest::Approx(0.430928441916811).epsilon(1e-9));
    CHECK(r5.F_Q == doctest::Approx(-2.84894682593866553).epsilon(1e-9));

    // the functional value at the minimizer is the Frostman constant, and the
    // minimizer really is a local minimum
    CHECK(std::fabs(r5.ms_value - r5.F_Q) <= 1e-9);
    CHECK(ms_functional(p5, r5.a_tilde * 1.001) > r5.ms_value);
    CHECK(ms_functional(p5, r5.a_tilde * 0.999) > r5.ms_value);

    // the attracted measure carries unit mass at the critical half-width
    CHECK(sigma_mass(p5, r5.a_tilde) == doctest::Approx(1.0).epsilon(1e-8));

    const SolverReport r2 = critical_endpoint({0.5, 2.0, 1.0});
    CHECK(r2.a_tilde == doctest::Approx(4.52332284838326715).epsilon(1e-8));
    CHECK(r2.consensus_spread <= 1e-6 * r2.a_tilde);
    CHECK(r2.mass_loss == doctest::Approx(0.252382027835271).epsilon(1e-9));
    CHECK(r2.F_Q == doctest::Approx(-0.431728369408082525).epsilon(1e-9));
    CHECK(std::fabs(r2.ms_value - r2.F_Q) <= 1e-9);

    CHECK_THROWS_AS(critical_endpoint({0.5, 0.9, 1.0}), no_equilibrium_error);
    CHECK_THROWS_AS(critical_endpoint({0.5, 1.0, 1.0}), weakly_admissible_error);
}

TEST_CASE("critical endpoint scaling and spread") {
    // the half-width scales linearly with the charge height, every route along
    const SolverReport rb3 = critical_endpoint({0.5, 5.0, 3.0});
    CHECK(rb3.a_tilde ==
          doctest::Approx(3.0 * 1.44227117262485513).epsilon(1e-9));
    CHECK(rb3.consensus_spread <= 1e-6 * rb3.a_tilde);

    // a stronger charge pulls the support in
    double last = detail::halfwidth_from_c(critical_c({0.5, 2.0, 1.0}), 1.0);
    for (double q : {3.0, 5.0, 10.0}) {
        const double a = detail::halfwidth_from_c(critical_c({0.5, q, 1.0}), 1.0);
        CHECK(a < last);
        last = a;
    }

    // route agreement across the parameter grid
    for (double s : {0.25, 0.5, 0.75}) {
        for (double q : {1.5, 2.0, 5.0, 20.0}) {
            const SolverReport r = critical_endpoint({s, q, 1.0});
            CHECK(r.consensus_spread <= 1e-6 * r.a_tilde);
            CHECK(r.F_Q < 0.0);
            CHECK(r.m_a_tilde > 0.0);
            CHECK(r.m_a_tilde < 1.0);
            CHECK(std::fabs(r.ms_value - r.F_Q) <=
                  1e-9 * std::max(1.0, std::fabs(r.F_Q)));
        }
    }
}

TEST_CASE("mass loss and equilibrium constant") {
    CHECK(mass_loss({0.5, 5.0, 1.0}) ==
          doctest::Approx(0.430928441916811).epsilon(1e-10));
    CHECK(mass_loss({0.5, 2.0, 1.0}) ==
          doctest::Approx(0.252382027835271).epsilon(1e-10));
    CHECK(mass_loss({0.25, 3.0, 1.0}) ==
          doctest::Approx(0.18309995630328535).epsilon(1e-9));

    CHECK(equilibrium_constant({0.5, 5.0, 1.0}) ==
          doctest::Approx(-2.84894682593866553).epsilon(1e-10));
    CHECK(equilibrium_constant({0.5, 2.0, 1.0}) ==
          doctest::Approx(-0.431728369408082525).epsilon(1e-10));
    CHECK(equilibrium_constant({0.25, 3.0, 1.0}) ==
          doctest::Approx(-1.6436637186576057).epsilon(1e-10));

    // approaches zero at the admissibility boundary
    const double fq = equilibrium_constant({0.5, 1.01, 1.0});
    CHECK(fq < 0.0);
    CHECK(fq == doctest::Approx(-8.508893345173284e-05).epsilon(1e-6));

    // the geometric factor peaks at sqrt(s/(1-s)) and falls off beyond
    CHECK(geometry_mass_factor(2.0, 0.5) > geometry_mass_factor(3.0, 0.5));
    CHECK(geometry_mass_factor(3.0, 0.5) > geometry_mass_factor(5.0, 0.5));

    CHECK_THROWS_AS(mass_loss({0.5, 0.5, 1.0}), no_equilibrium_error);
    CHECK_THROWS_AS(equilibrium_constant({0.5, 1.0, 1.0}), weakly_admissible_error);
}
