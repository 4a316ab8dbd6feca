#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rmt/ensembles.hpp"
#include "rmt/errors.hpp"
#include "rmt/quadrature.hpp"

using namespace rmt;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("one_dim_moment examples") {
    CHECK(one_dim_moment(WeightKind::Jacobi, Rational(0), 2).value().real() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(one_dim_moment(WeightKind::Jacobi, frac(7, 3), 1).value() == cdouble(0.0));
    CHECK(one_dim_moment(WeightKind::Cauchy, Rational(-2), 2).value().real() == doctest::Approx(kPi / 2).epsilon(1e-14));
    CHECK_THROWS_AS(one_dim_moment(WeightKind::Cauchy, frac(-5, 2), 0), PoleError);
    CHECK_NOTHROW(one_dim_moment(WeightKind::Cauchy, frac(-5, 2), 0, true));
}

TEST_CASE("one_dim_moment against quadrature") {
    for (Rational a : {Rational(0), frac(1, 2), frac(7, 3)})
        for (unsigned k = 0; k <= 8; k += 2) {
            const double ad = a.get_d();
            const double q = integrate_interval([&](double x) { return std::pow(x, k) * std::pow(1 - x * x, ad); }).value;
            CHECK(one_dim_moment(WeightKind::Jacobi, a, k).value().real() == doctest::Approx(q).epsilon(1e-11));
        }
    for (Rational e : {Rational(-7), frac(-13, 3), frac(-83, 10)})
        for (unsigned k = 0; k <= 6; k += 2) {
            const double ed = e.get_d();
            const double q = integrate_line([&](double x) { return std::pow(x, k) * std::pow(1 + x * x, ed); }).value;
            CHECK(one_dim_moment(WeightKind::Cauchy, e, k).value().real() == doctest::Approx(q).epsilon(1e-11));
            CHECK(one_dim_moment(WeightKind::Cauchy, cdouble(ed), k).real() == doctest::Approx(q).epsilon(1e-11));
        }
}

TEST_CASE("tan form and beta form agree") {
    // (-1)^j tan(pi e) Gamma(1+e) Gamma(j+1/2) / Gamma(j+3/2+e)
    const double e = -3.3;
    for (unsigned j = 0; j < 3; ++j) {
        const double tan_form = (j % 2 ? -1 : 1) * std::tan(kPi * e) * std::tgamma(1 + e) * std::tgamma(j + 0.5) /
                                std::tgamma(j + 1.5 + e);
        CHECK(one_dim_moment(WeightKind::Cauchy, Rational(e), 2 * j).value().real() ==
              doctest::Approx(tan_form).epsilon(1e-12));
    }
}

TEST_CASE("normalisation products") {
    CHECK(std::abs(morris_product(1, 1.0, 1.0, 1.0) - 2.0) < 1e-13);
    CHECK(std::abs(selberg_product(1, 0.0, 0.0, 0.7) - 1.0) < 1e-13);
    CHECK(std::abs(selberg_product(2, 0.0, 0.0, 1.0) - 1.0 / 6.0) < 1e-13);
    CHECK_THROWS_AS(selberg_product(2, -1.0, 0.0, 1.0), PoleError);
}

TEST_CASE("norm_jacobi matches direct integration at N = 2") {
    // int int (1-x^2)^a (1-y^2)^a (x-y)^2 = 2 (M0 M2 - M1^2) with M1 = 0
    for (double a : {0.0, 1.0, 2.5}) {
        const double m0 = one_dim_moment(WeightKind::Jacobi, cdouble(a), 0).real();
        const double m2 = one_dim_moment(WeightKind::Jacobi, cdouble(a), 2).real();
        auto spec = EnsembleSpec::jacobi_sym(2, 2, Rational(a));
        CHECK(norm_jacobi(spec).real() == doctest::Approx(2 * m0 * m2).epsilon(1e-12));
    }
    for (double al : {1.0, 2.5}) {
        const double eta = -2.0 - al;
        const double m0 = one_dim_moment(WeightKind::Cauchy, cdouble(eta), 0).real();
        const double m2 = one_dim_moment(WeightKind::Cauchy, cdouble(eta), 2).real();
        auto spec = EnsembleSpec::cauchy_sym(2, 2, Rational(al));
        CHECK(norm_cauchy(spec).real() == doctest::Approx(2 * m0 * m2).epsilon(1e-12));
    }
}

TEST_CASE("norm identity") {
    CHECK(check_norm_identity(1, 2, 0.25) < 1e-12);
    CHECK(check_norm_identity(2, 2, cdouble(0.3, 0.2)) < 1e-10);
    CHECK(check_norm_identity(2, 4, 1.0 / 3.0) < 1e-10);
    for (int N = 1; N <= 4; ++N)
        for (int beta : {2, 4})
            for (cdouble al : {cdouble(0.25), cdouble(1.0 / 3.0), cdouble(0.4), cdouble(0.3, 0.2), cdouble(1.7, -0.6)})
                CHECK(check_norm_identity(N, beta, al) < 1e-10);
    CHECK_THROWS(check_norm_identity(2, 1, 0.25));
}

TEST_CASE("density_beta2 examples") {
    auto j1 = EnsembleSpec::jacobi_sym(1, 2, 0);
    for (double x : {-0.9, 0.0, 0.4}) CHECK(density_beta2(j1, x).real() == doctest::Approx(0.5).epsilon(1e-14));
    auto c1 = EnsembleSpec::cauchy_sym(1, 2, 1);
    for (double x : {-2.0, 0.0, 0.7})
        CHECK(density_beta2(c1, x).real() == doctest::Approx(2 / kPi / std::pow(1 + x * x, 2)).epsilon(1e-13));
    auto j2 = EnsembleSpec::jacobi_sym(2, 2, 0);
    const double total = integrate_interval([&](double x) { return density_beta2(j2, x).real(); }).value;
    CHECK(total == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("density_beta2 normalisation, parity and polynomial structure") {
    for (int N = 1; N <= 6; ++N) {
        for (Rational a : {Rational(0), frac(1, 2), Rational(3)}) {
            auto s = EnsembleSpec::jacobi_sym(N, 2, a);
            const auto f = [&](double x) { return density_beta2(s, x).real(); };
            CHECK(integrate_interval(f).value == doctest::Approx(N).epsilon(1e-9));
            CHECK(integrate_interval([&](double x) { return x * f(x); }).value == doctest::Approx(0.0).scale(1));
            for (double x : {0.13, 0.5, 0.88}) CHECK(f(x) == doctest::Approx(f(-x)).epsilon(1e-12));
        }
        for (Rational al : {frac(3, 4), Rational(2), frac(9, 2)}) {
            auto s = EnsembleSpec::cauchy_sym(N, 2, al);
            const auto f = [&](double x) { return density_beta2(s, x).real(); };
            CHECK(integrate_line(f).value == doctest::Approx(N).epsilon(1e-9));
            for (double x : {0.13, 1.5, 7.0}) CHECK(f(x) == doctest::Approx(f(-x)).epsilon(1e-12));
        }
        auto ns = EnsembleSpec::cauchy(N, 2, ComplexRational(frac(3, 2), frac(1, 2)));
        CHECK(integrate_line([&](double x) { return density_beta2(ns, x).real(); }).value ==
              doctest::Approx(N).epsilon(1e-9));
    }
}

TEST_CASE("rho / w is a polynomial in x^2 of degree N - 1") {
    for (int N = 1; N <= 5; ++N) {
        auto s = EnsembleSpec::jacobi_sym(N, 2, frac(1, 2));
        WeightFn w{s};
        // N-th divided difference in y = x^2 must vanish, the (N-1)-th must not
        std::vector<double> ys, vs;
        for (int i = 0; i <= N; ++i) {
            const double x = 0.1 + 0.15 * i;
            ys.push_back(x * x);
            vs.push_back(density_beta2(s, x).real() / w(x));
        }
        std::vector<double> d = vs;
        double scale = 0;
        for (double v : vs) scale = std::max(scale, std::abs(v));
        for (int order = 1; order <= N; ++order)
            for (int i = N; i >= order; --i) d[i] = (d[i] - d[i - 1]) / (ys[i] - ys[i - order]);
        CHECK(std::abs(d[N]) < 1e-8 * scale);
    }
}

TEST_CASE("circular and (0,1) variants integrate to N") {
    auto cj = EnsembleSpec::circular_jacobi(3, 2, frac(3, 2));
    CHECK(integrate([&](double t) { return density_beta2(cj, t).real(); }, 1e-9, 2 * kPi - 1e-9).value ==
          doctest::Approx(3.0).epsilon(1e-8));
    auto j01 = EnsembleSpec::jacobi(3, 2, Rational(1), Rational(2));
    j01.family = Family::Jacobi01;
    CHECK(integrate([&](double t) { return density_beta2(j01, t).real(); }, 0, 1).value ==
          doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("continuation relation") {
    CHECK(check_continuation_relation(1, 0.25, 0.3) < 1e-10);
    CHECK(check_continuation_relation(2, 1.0 / 3.0, 0.0) < 1e-9);
    CHECK(check_continuation_relation(2, cdouble(0.3, 0.1), 0.2) < 1e-8);
    for (int N = 1; N <= 4; ++N)
        for (double al : {0.25, 1.0 / 3.0, 0.4})
            for (double x = -0.9; x <= 0.9001; x += 0.1) CHECK(check_continuation_relation(N, al, x) < 1e-8);
    CHECK_THROWS_AS(check_continuation_relation(2, 1.0, 0.1), PoleError);
}

TEST_CASE("spec validation") {
    CHECK_THROWS(EnsembleSpec::jacobi_sym(2, 2, Rational(-2)).validate());
    auto s = EnsembleSpec::jacobi_sym(2, 2, Rational(-2));
    s.continued = true;
    CHECK_NOTHROW(s.validate());
    CHECK_THROWS(EnsembleSpec::cauchy_sym(2, 2, Rational(-1)).validate());
    CHECK(EnsembleSpec::cauchy(2, 2, ComplexRational(1, 1)).family == Family::CauchyNonSym);
    CHECK(EnsembleSpec::cauchy_sym(3, 4, 2).eta() == ComplexRational(-7));
}

TEST_CASE("exact polynomial form of the beta = 2 density") {
    std::vector<EnsembleSpec> specs = {EnsembleSpec::jacobi_sym(3, 2, frac(1, 2)), EnsembleSpec::jacobi(4, 2, 1, 2),
                                       EnsembleSpec::cauchy_sym(3, 2, 2), EnsembleSpec::cauchy_sym(4, 2, frac(5, 3)),
                                       EnsembleSpec::cauchy(3, 2, ComplexRational(frac(3, 2), frac(1, 3)))};
    for (const auto& s : specs) {
        const auto d = density_beta2_exact(s);
        for (double x : {-0.7, 0.1, 0.55}) {
            const cdouble want = density_beta2(s, x);
            CHECK(std::abs(d(x) - want) < 1e-12 * std::abs(want));
        }
        // first derivative against a central difference
        const double x = 0.3, h = 1e-5;
        const cdouble fd = (d(x + h) - d(x - h)) / (2 * h);
        CHECK(std::abs(d.derivative(1, x) - fd) < 1e-7 * (1 + std::abs(fd)));
    }
    // flat density: q constant, integer alpha Cauchy has finite norms
    CHECK(density_beta2_exact(EnsembleSpec::jacobi_sym(1, 2, 0)).q().degree() == 0);
    CHECK(density_beta2_exact(EnsembleSpec::cauchy_sym(5, 2, 1)).q().degree() == 8);
}
