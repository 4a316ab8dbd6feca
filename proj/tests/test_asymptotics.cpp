#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rmt/asymptotics.hpp"
#include "rmt/errors.hpp"
#include "rmt/moments.hpp"
#include "rmt/quadrature.hpp"
#include "rmt/special_fn.hpp"

using namespace rmt;

namespace {

constexpr double kPi = std::numbers::pi;

// int over [lo, hi] through the cos substitution, which absorbs square-root edges
double over_support(const std::function<double(double)>& f, double lo, double hi) {
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    return integrate_interval([&](double t) { return f(mid + half * t) * half; }, 1e-12).value;
}

double edge(double ah) { return std::sqrt(1 + 2 * ah) / ah; }

}  // namespace

TEST_CASE("limiting density: normalisation, reductions, circular form") {
    for (double ah : {1.0, 0.5, 3.0}) {
        const auto g = global_density(ah);
        CHECK(g.u_plus == doctest::Approx(edge(ah)).epsilon(1e-14));
        CHECK(std::abs(over_support(g, g.u_minus, g.u_plus) - 1.0) < 1e-8);
        for (double x : {0.0, 0.3 * edge(ah), -0.9 * edge(ah)})
            CHECK(g(x) == doctest::Approx(std::sqrt(1 + 2 * ah - ah * ah * x * x) / (kPi * (1 + x * x))).epsilon(1e-13));
    }
    for (cdouble ah : {cdouble(1.0, 0.5), cdouble(2.0, -1.0), cdouble(0.4, 0.3)}) {
        const auto g = global_density(ah);
        CHECK(std::abs(over_support(g, g.u_minus, g.u_plus) - 1.0) < 1e-8);
    }
    CHECK_THROWS_AS(global_density(cdouble(-1.0, 0.0)), std::invalid_argument);

    // stereographic image: rho_cJ(theta) = rho(s)(1 + s^2)/2, s = cot(theta/2)
    const double ah = 1.5;
    const double theta_c = 2 * std::atan(1 / edge(ah));
    const double norm = over_support([&](double t) { return global_density_circular(ah, t); }, theta_c, 2 * kPi - theta_c);
    CHECK(std::abs(norm - 1.0) < 1e-8);
    for (double th : {2.0, 3.0, 4.1}) {
        const double s = 1 / std::tan(th / 2);
        CHECK(global_density_circular(ah, th) == doctest::Approx(global_density(ah, s) * (1 + s * s) / 2).epsilon(1e-12));
    }
}

TEST_CASE("mu_hat closed form, generating functions and Sokhotski-Plemelj") {
    CHECK(mu_hat(1, 0) == frac(3, 2));
    CHECK(mu_hat(1, 1) == frac(9, 8));
    for (const Rational& ah : {frac(1), frac(1, 3), frac(5, 2)}) {
        CHECK(mu_hat(ah, 0) == (1 + 2 * ah) / (2 * ah));
        // first-order recurrence in k
        for (unsigned k = 0; k < 10; ++k)
            CHECK((2 * k + 4) * ah * ah * mu_hat(ah, k + 1) == (2 * k + 1) * (1 + 2 * ah) * mu_hat(ah, k));
        // even moments of the limiting density against the telescoped mu_hat
        const double a = ah.get_d();
        Rational m(1);
        for (unsigned k = 0; k < 4; ++k) {
            const double q = over_support([&](double x) { return std::pow(x, 2 * k) * global_density(a, x); }, -edge(a), edge(a));
            CHECK(std::abs(q - m.get_d()) < 1e-8 * std::max(1.0, m.get_d()));
            m = mu_hat(ah, k) - m;
        }
    }
    // series of H against the closed form
    const double x = 5.0;
    double sum = 0.0;
    for (unsigned k = 0; k < 60; ++k) sum += mu_hat(1, k).get_d() * std::pow(x, -2.0 * k);
    CHECK(std::abs(generating_H(1.0, x) - sum) < 1e-12);
    CHECK(std::abs(generating_G(1.0, x) - (sum + x * x) / (1 + x * x)) < 1e-12);
    for (double ah : {1.0, 0.5})
        for (double s : {0.3, -0.7, 1.2})
            CHECK(std::abs(sokhotski_plemelj_density(ah, s, 1e-6) - global_density(ah, s)) < 1e-4);
}

TEST_CASE("large-N limit of the moment sequences") {
    // beta = 1, 4 recurrence coefficients: top power of N annihilates mu_hat
    for (const Rational& beta : {frac(1), frac(4)})
        for (const Rational& ah : {frac(1), frac(1, 2), frac(3)})
            for (unsigned k = 0; k <= 8; ++k) CHECK(limit_recurrence_defect(beta, ah, k) == 0);
    CHECK(limit_recurrence_defect(4, 1, 3) == 0);
    // exact 1/N expansion starts at mu_hat for every beta
    for (const Rational& beta : {frac(1), frac(2), frac(4)}) {
        const auto c = mu_cauchy_large_n(beta, frac(2, 3), 8, 1);
        for (unsigned k = 0; k <= 8; ++k) CHECK(c[k][0] == mu_hat(frac(2, 3), k));
        if (beta == 2)
            for (unsigned k = 0; k <= 8; ++k) CHECK(c[k][1] == 0);
    }
    // beta = 2, N = 400 within 1%, and the 1/N^2 rate
    for (unsigned k = 0; k <= 6; ++k) {
        const auto mu = mu_cauchy_values(400, 2, 400, k);
        const double ratio = Rational(mu[k] / 400).get_d() / mu_hat(1, k).get_d();
        CHECK(std::abs(ratio - 1) < 0.01);
    }
    for (unsigned k = 0; k <= 3; ++k) {
        std::vector<double> lx, ly;
        for (int N : {50, 100, 200, 400}) {
            const Rational n(N);
            const Rational d = mu_cauchy_values(n, 2, n, k)[k] / n - mu_hat(1, k);
            lx.push_back(std::log(N));
            ly.push_back(std::log(std::abs(d.get_d())));
        }
        const double slope = (ly.back() - ly.front()) / (lx.back() - lx.front());
        CHECK(std::abs(slope + 2) < 0.1);
    }
}

TEST_CASE("inhomogeneous resolvent equation on exact series") {
    CHECK(resolvent_inhomogeneous_check(2, 2, 5, 8).vanishes());
    CHECK(resolvent_inhomogeneous_check(4, 2, 6, 6).vanishes());  // moments through the a -> a0 limit
    CHECK(resolvent_inhomogeneous_check(1, 2, 6, 6).vanishes());
    CHECK(resolvent_inhomogeneous_check(4, 3, frac(22, 3), 8).vanishes());
    CHECK(resolvent_inhomogeneous_check(1, 3, 5, 8).vanishes());
    const auto r = resolvent_inhomogeneous_check(2, 2, 5, 8);
    CHECK(r.coefficients.size() == static_cast<std::size_t>(r.top_power + 9));
    CHECK_THROWS_AS(resolvent_inhomogeneous_check(2, 2, 5, 8, 4), TruncationError);
    // a wrong right-hand side is caught
    CHECK(resolvent_h(2, 6) != resolvent_h(-1, -12));
}

TEST_CASE("1/N resolvent expansion: closed forms") {
    const auto w = resolvent_expansion(2, 1, 4);
    // leading term decays like 1/x
    CHECK(std::abs(1e6 * w(0, 1e6) - 1.0) < 1e-6);
    CHECK(w.coefficients[1].is_zero());
    CHECK(w.coefficients[3].is_zero());
    for (double x : {2.5, 4.0, -3.0}) {
        const double expect = 3 * (1 + x * x) / (8 * std::pow(x * x - 3, 2.5)) * (x < 0 ? -1 : 1);
        CHECK(std::abs(w(2, x) - expect) < 1e-13 * std::abs(expect));
    }
    // x^-3 behaviour with coefficient (1 + 2a)/(2a)^(2p+1)
    for (const Rational& ah : {frac(1), frac(2, 5)}) {
        const auto v = resolvent_expansion(2, ah, 4);
        CHECK(v.coefficients[2].large_x(3) == std::vector<Rational>{0, 0, (1 + 2 * ah) / pow(Rational(2 * ah), 3)});
        CHECK(v.coefficients[4].large_x(3) == std::vector<Rational>{0, 0, (1 + 2 * ah) / pow(Rational(2 * ah), 5)});
    }
    // beta = 1, 4 shape at beta = 2
    CHECK(resolvent_closed_form(2, frac(3, 2), 1).is_zero());
    CHECK((resolvent_closed_form(2, frac(3, 2), 2) - resolvent_expansion(2, frac(3, 2), 2).coefficients[2]).is_zero());
    // branch
    CHECK_THROWS_AS(w(0, 0.5), BranchError);
    CHECK_THROWS_AS(w(0, std::sqrt(3.0)), BranchError);
    for (double x : {0.0, 0.5, -1.3})
        CHECK(std::abs(w(0, x, true).imag() / kPi - global_density(1.0, x)) < 1e-13);
}

TEST_CASE("1/N resolvent expansion against exact large-N moments") {
    for (const Rational& beta : {frac(1), frac(2), frac(4)})
        for (const Rational& ah : {frac(1), frac(1, 3)}) {
            const auto w = resolvent_expansion(beta, ah, 2);
            const auto mu = mu_cauchy_large_n(beta, ah, 7, 2);
            for (unsigned l = 0; l <= 2; ++l) {
                const auto s = w.coefficients[l].large_x(16);
                Rational m = l == 0 ? 1 : 0;
                CHECK(s[0] == m);
                for (unsigned j = 0; j < 7; ++j) {
                    m = mu[j][l] - m;
                    CAPTURE(beta);
                    CAPTURE(l);
                    CHECK(s[2 * j + 2] == m);
                    CHECK(s[2 * j + 1] == 0);
                }
            }
        }
}

TEST_CASE("1/N resolvent expansion: higher orders") {
    const auto w = resolvent_expansion(2, 1, 6);
    for (unsigned l : {0u, 2u, 4u, 6u}) CHECK(chain_residual(w, l).is_zero());
    CHECK((resolvent_term_from_moments(2, 1, 4) - w.coefficients[4]).is_zero());
    const auto v = resolvent_expansion(4, frac(1, 2), 3);
    CHECK((resolvent_term_from_moments(4, frac(1, 2), 2) - v.coefficients[2]).is_zero());
    // duality N -> -2N between beta = 4 and beta = 1 at fixed alpha_hat
    const auto u = resolvent_expansion(1, frac(1, 2), 3);
    CHECK((u.coefficients[3] - v.coefficients[3].scaled(-8)).is_zero());
}

TEST_CASE("density corrections") {
    const double ah = 1.0;
    const auto d = density_correction(2, ah, 0.0);
    CHECK(d.order == 2);
    CHECK(d.smooth == doctest::Approx(3 / (8 * kPi * std::pow(3.0, 2.5))).epsilon(1e-14));
    CHECK(d.deltas.empty());
    const auto d1 = density_correction(1, ah, 0.2);
    REQUIRE(d1.deltas.size() == 2);
    CHECK(d1.deltas[0].mass == doctest::Approx(0.25));
    CHECK(d1.deltas[1].location == doctest::Approx(std::sqrt(3.0)));
    CHECK(density_correction(4, ah, 0.2).deltas[0].mass == doctest::Approx(-0.125));
    CHECK(density_correction(4, ah, std::sqrt(3.0) - 5e-4).near_endpoint);
    CHECK_FALSE(density_correction(4, ah, 1.0).near_endpoint);
    CHECK(density_correction(2, ah, 2.0).smooth == 0.0);

    // smooth parts are the boundary values of the resolvent terms
    const auto w2 = resolvent_expansion(2, 1, 2);
    for (const Rational& beta : {frac(1), frac(4)}) {
        const auto w = resolvent_expansion(beta, 1, 1);
        for (double x : {0.0, 0.7, -1.5}) {
            CHECK(std::abs(w(1, x, true).imag() / kPi - density_correction(beta, ah, x).smooth) < 1e-12);
            CHECK(std::abs(w2(2, x, true).imag() / kPi - density_correction(2, ah, x).smooth) < 1e-12);
        }
        // point masses are residues at the edges
        const double up = std::sqrt(3.0), h = 1e-10;
        CHECK(std::abs(h * w(1, up + h).real() - density_correction(beta, ah, 0).deltas[1].mass) < 1e-4);
        // smooth part and point masses carry no total mass
        for (double a : {1.0, 0.25}) {
            const double u = edge(a);
            const double smooth = over_support([&](double x) { return density_correction(beta, a, x).smooth; }, -u, u);
            double masses = 0;
            for (const auto& p : density_correction(beta, a, 0).deltas) masses += p.mass;
            CHECK(std::abs(smooth + masses) < 1e-6);
        }
    }
}

TEST_CASE("finite-N fit of the second-moment correction") {
    for (const Rational& ah : {frac(1), frac(1, 2)}) {
        const auto s = resolvent_expansion(2, ah, 2).coefficients[2].large_x(7);
        const double predicted = Rational(s[4] + s[6]).get_d();  // m_4 + m_6 corrections
        CHECK(mu_cauchy_large_n(2, ah, 2, 2)[2][2].get_d() == doctest::Approx(predicted));
        const auto [c, d] = fit_mu2_correction(ah, {50, 100, 150, 200, 250, 300, 350, 400});
        CHECK(std::abs(c / predicted - 1) < 0.05);
        (void)d;
    }
}
