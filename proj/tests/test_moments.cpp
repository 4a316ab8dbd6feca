#include <doctest.h>

#include <cmath>

#include "rmt/errors.hpp"
#include "rmt/moments.hpp"
#include "rmt/oracle.hpp"

using namespace rmt;

TEST_CASE("Jacobi beta = 2 examples") {
    const auto mu = mu_jacobi_values(1, 2, 0, 6);
    for (unsigned k = 0; k <= 6; ++k) CHECK(mu[k] == frac(-2, static_cast<long>((2 * k + 1) * (2 * k + 3))));
    CHECK(mu_jacobi_values(2, 2, 1, 0)[0] == frac(-48, 35));
    // N = 1: m_{2k} is the one-dimensional ratio
    // 1/2 and 5/2 hit a vanishing leading coefficient and go through the a -> a0 limit
    for (const Rational& a : {frac(1, 3), frac(2), frac(7, 3), frac(1, 2), frac(5, 2)}) {
        const auto m = mu_jacobi_values(1, 2, a, 5);
        for (unsigned k = 0; k <= 5; ++k)
            CHECK(m[k] == one_dim_moment(WeightKind::Jacobi, a, 2 * k + 2, true).ratio -
                              one_dim_moment(WeightKind::Jacobi, a, 2 * k, true).ratio);
    }
    const auto m2 = m2k_from_mu(mu_jacobi(EnsembleSpec::jacobi_sym(1, 2, 0), 2));
    CHECK(m2[0] == 1);
    CHECK(m2[1] == frac(1, 3));
    // Cauchy continuation has genuine poles
    CHECK_THROWS_AS(mu_cauchy_values(1, 2, frac(3, 2), 3), DegenerateParameterError);
}

TEST_CASE("Cauchy beta = 2 examples and the continuation sign") {
    CHECK(mu_cauchy_values(1, 2, 1, 0)[0] == 2);
    CHECK(mu_cauchy_values(2, 2, 2, 0)[0] == frac(16, 5));
    const auto seq = mu_cauchy(EnsembleSpec::cauchy_sym(1, 2, 2), 3);
    CHECK(seq.literal_below == 2);
    CHECK(m2k_from_mu(seq)[1] == frac(1, 3));
    for (const Rational& beta : {frac(2), frac(4), frac(1)}) {
        for (long N : {1, 2, 3}) {
            for (const Rational& al : {frac(9, 2), frac(17, 3)}) {
                const Rational eta = cauchy_exponent(N, beta, al).real();
                std::vector<Rational> cy, jac;
                try {
                    cy = mu_cauchy_values(N, beta, al, 6);
                    jac = mu_jacobi_values(N, beta, eta, 6);
                } catch (const DegenerateParameterError&) {
                    continue;
                }
                for (std::size_t k = 0; k < cy.size(); ++k) CHECK(cy[k] == (k % 2 ? jac[k] : Rational(-jac[k])));
            }
        }
    }
}

TEST_CASE("second moment by binomial transfer") {
    for (const Rational& beta : {frac(1), frac(2), frac(4)})
        for (long N : {1, 2, 3, 5})
            for (const Rational& a : {frac(1), frac(2), frac(5, 3)}) {
                CAPTURE(beta);
                CAPTURE(N);
                CHECK(jacobi_m2_binomial(N, beta, a) == N + mu_jacobi_values(N, beta, a, 0)[0]);
            }
}

TEST_CASE("continuous Hahn closed form") {
    for (unsigned k = 0; k <= 6; ++k) CHECK(hahn_mu_exact(1, 0, k) == frac(-2, static_cast<long>((2 * k + 1) * (2 * k + 3))));
    for (int N = 1; N <= 8; ++N)
        for (long a : {0, 1, 2, 5}) {
            const auto mu = mu_jacobi_values(N, 2, a, 12);
            for (unsigned k = 0; k <= 12; ++k) CHECK(hahn_mu_exact(N, a, k) == mu[k]);
        }
    for (unsigned k : {0u, 3u, 7u}) {
        const double exact = hahn_mu_exact(4, 2, k).get_d();
        CHECK(std::abs(hahn_mu(4, 2, cdouble(k)) - exact) < 1e-12 * std::abs(exact));
    }
    CHECK(hahn_polynomial_part(5, 1).degree() == 4);
    for (int N = 2; N <= 6; ++N)
        for (long a : {0, 1, 2, 5})
            for (const auto& z : hahn_zeros(N, a)) CHECK(std::abs(z.real() + 1.0) < 1e-8);
}

TEST_CASE("Gaussian moments and the large-a limit") {
    for (long N : {1, 2, 3, 7}) {
        const auto m = gue_moments(N, 3);
        CHECK(m[1] == N * N);
        CHECK(m[2] == 2 * N * N * N + N);
    }
    CHECK(gue_moments(1, 4)[3] == 15);  // N = 1: (2k-1)!!
    for (int N = 1; N <= 5; ++N) {
        const auto g = gue_moments(N, 5);
        for (unsigned k = 0; k <= 5; ++k) {
            const double v = harer_zagier_scaled(N, 1000000, k);
            CHECK(std::abs(v - g[k].get_d()) < 1e-4 * g[k].get_d());
        }
    }
}

TEST_CASE("beta <-> 4/beta duality") {
    for (const Rational& beta : {frac(4), frac(1)})
        for (long N : {2, 3}) {
            const auto d = duality_check(N, beta, beta == 4 ? 3 : 4, 4);
            CHECK(d.holds);
            CHECK(d.lhs[0] == N);
        }
    CHECK(duality_check(2, 2, 5, 4).holds);
}

TEST_CASE("beta = 2 moments against quadrature of the exact density") {
    for (int N = 1; N <= 4; ++N) {
        const auto js = EnsembleSpec::jacobi_sym(N, 2, frac(4, 3));
        const auto m = m2k_from_mu(mu_jacobi(js, 5));
        for (unsigned k = 0; k <= 6; ++k) {
            const double q = quad_moment(js, k).value;
            CHECK(std::abs(q - m[k].get_d()) < 1e-10 * std::abs(q));
        }
        const auto cs = EnsembleSpec::cauchy_sym(N, 2, 20);
        const auto mc = m2k_from_mu(mu_cauchy(cs, 5));
        for (unsigned k = 0; k <= 6; ++k) {
            const double q = quad_moment(cs, k).value;
            CHECK(std::abs(q - mc[k].get_d()) < 1e-9 * std::abs(q));
        }
    }
}

TEST_CASE("beta = 1, 4 recurrences against brute force") {
    for (long N : {2, 3})
        for (long a : {1, 2, 3}) {
            const auto spec = EnsembleSpec::jacobi_sym(static_cast<int>(N), 4, a);
            const auto m = m2k_from_mu(mu_jacobi(spec, 6));  // N = 2, a = 2 is a limit
            CAPTURE(N);
            CAPTURE(a);
            for (unsigned k = 0; k < m.size(); ++k) CHECK(brute_force_moment_exact(spec, k) == m[k]);
        }
    for (long N : {2, 3}) {
        const auto spec = EnsembleSpec::cauchy_sym(static_cast<int>(N), 4, frac(17, 2));
        const auto m = m2k_from_mu(mu_cauchy(spec, 5));
        for (unsigned k = 0; k < m.size(); ++k) CHECK(brute_force_moment_exact(spec, k) == m[k]);
    }
    {
        // leading coefficient vanishes at k = 0
        const auto spec = EnsembleSpec::cauchy_sym(2, 4, 6);
        const auto m = m2k_from_mu(mu_cauchy(spec, 5));
        for (unsigned k = 0; k < m.size(); ++k) CHECK(brute_force_moment_exact(spec, k) == m[k]);
    }
    // beta = 1 by nested quadrature
    for (int N : {2, 3})
    for (const Rational& a : {frac(1), frac(2), frac(1, 2)}) {
        const auto spec = EnsembleSpec::jacobi_sym(N, 1, a);
        const auto m = m2k_from_mu(mu_jacobi(spec, 4));
        for (unsigned k = 1; k <= 5; ++k) {
            const double q = brute_force_moment(spec, k, 1e-9).value;
            CAPTURE(N);
            CAPTURE(a);
            CAPTURE(k);
            CHECK(std::abs(q - m[k].get_d()) < 1e-9 * q);
        }
    }
}
