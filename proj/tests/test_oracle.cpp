#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rmt/asymptotics.hpp"
#include "rmt/errors.hpp"
#include "rmt/moments.hpp"
#include "rmt/oracle.hpp"

using namespace rmt;

TEST_CASE("quadrature of known densities") {
    CHECK(std::abs(quad_moment(EnsembleSpec::jacobi_sym(1, 2, 0), 1).value - 1.0 / 3) < 1e-12);
    CHECK(std::abs(quad_moment(EnsembleSpec::cauchy_sym(1, 2, 2), 1).value - 1.0 / 3) < 1e-10);
    const auto spec = EnsembleSpec::jacobi_sym(3, 2, 2);
    const double q = quad_moment(spec, 4).value;
    const double r = m2k_from_mu(mu_jacobi(spec, 3))[4].get_d();
    CHECK(std::abs(q - r) < 1e-9 * r);
    // beta = 4 through the density built from the operator
    const auto s4 = EnsembleSpec::jacobi_sym(2, 4, 1);
    const auto m4 = m2k_from_mu(mu_jacobi(s4, 3));
    for (unsigned k = 0; k <= 3; ++k) CHECK(std::abs(quad_moment(s4, k).value - m4[k].get_d()) < 1e-9 * m4[k].get_d());
}

TEST_CASE("brute force over the joint law") {
    const auto s2 = EnsembleSpec::jacobi_sym(2, 2, 0);
    CHECK(std::abs(brute_force_moment_exact(s2, 1).get_d() - quad_moment(s2, 1).value) < 1e-12);
    CHECK(brute_force_moment_exact(EnsembleSpec::jacobi_sym(2, 4, 1), 0) == 2);
    // beta = 1 second moment against the recurrence
    const auto s1 = EnsembleSpec::jacobi_sym(2, 1, 1);
    const double m2 = brute_force_moment(s1, 1, 1e-9).value;
    CHECK(std::abs(m2 - m2k_from_mu(mu_jacobi(s1, 1))[1].get_d()) < 1e-9 * m2);
    // even-beta exact path against the numeric path
    for (const Rational& beta : {frac(2), frac(4)})
        for (unsigned k = 1; k <= 3; ++k) {
            const auto s = EnsembleSpec::jacobi_sym(3, beta, 2);
            const double ex = brute_force_moment_exact(s, k).get_d();
            CHECK(std::abs(brute_force_moment(s, k, 1e-9).value - ex) < 1e-9 * ex);
        }
    // the exact density integrates to N
    const auto d = brute_force_density(EnsembleSpec::jacobi_sym(3, 4, 1));
    CHECK(std::abs(quad_moment(EnsembleSpec::jacobi_sym(3, 4, 1), 0).value - 3.0) < 1e-10);
    (void)d;
    CHECK_THROWS_AS(brute_force_moment(EnsembleSpec::jacobi_sym(4, 1, 1), 1), std::invalid_argument);
}

TEST_CASE("Metropolis sampler") {
    McmcOptions opt;
    opt.sweeps = 20000;
    opt.seed = 7;
    const auto spec = EnsembleSpec::cauchy_sym(20, 2, 20);
    const auto run = mcmc_sample(spec, opt);
    CHECK(run.samples.size() == 2000);
    CHECK(run.acceptance_in_range);
    // parity
    const auto [m1, se1] = run.moment(1);
    CHECK(std::abs(m1) < 3 * se1 + 1e-12);
    // second moment per eigenvalue within 5% of the exact value
    const double exact = Rational(m2k_from_mu(mu_cauchy(spec, 1))[1] / 20).get_d();
    CHECK(std::abs(run.moment(2).first / exact - 1) < 0.05);
    // same seed, same output
    McmcOptions small = opt;
    small.sweeps = 500;
    std::ostringstream a, b;
    mcmc_sample(spec, small).write_csv(a);
    mcmc_sample(spec, small).write_csv(b);
    CHECK(a.str() == b.str());
    small.seed = 8;
    std::ostringstream c;
    mcmc_sample(spec, small).write_csv(c);
    CHECK(a.str() != c.str());
}
