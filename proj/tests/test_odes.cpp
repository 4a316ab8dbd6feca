#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rmt/errors.hpp"
#include "rmt/odes.hpp"
#include "rmt/special_fn.hpp"

using namespace rmt;
using CR = ComplexRational;
using P = Poly<CR>;

namespace {

OpParams jac(long N, const Rational& beta, const CR& a) {
    OpParams p;
    p.N = N;
    p.beta = beta;
    p.a = a;
    return p;
}
OpParams cy(long N, const Rational& beta, const CR& alpha) {
    OpParams p;
    p.N = N;
    p.beta = beta;
    p.alpha = alpha;
    return p;
}

// beta = 4, N = 2 density up to a constant: w(x) int w(y) (x - y)^4 dy, expanded exactly
P beta4_n2_q(WeightKind kind, const Rational& e) {
    std::vector<CR> c(5, CR(0));
    for (unsigned k = 0; k <= 4; k += 2)
        c[4 - k] = CR(Rational(binomial(4, k)) * one_dim_moment(kind, e, k, true).ratio);
    return P(std::move(c));
}

bool proportional_poly(const P& a, const P& b) {
    // a * b_lead == b * a_lead
    return a * P(b[static_cast<std::size_t>(b.degree())]) == b * P(a[static_cast<std::size_t>(a.degree())]);
}

}  // namespace

TEST_CASE("operator examples") {
    auto op = build_operator(OpKind::rCy2, cy(1, 2, 1));
    CHECK(op.order() == 3);
    CHECK(op.coeffs[3] == P{1, 0, 2, 0, 1});
    CHECK(op.coeffs[2] == P{0, 2, 0, 2});
    CHECK(op.coeffs[1] == P{12, 0, -4});
    CHECK(op.coeffs[0] == P{0, 4});

    auto ss = build_operator(OpKind::SS, cy(1, 2, 0));
    REQUIRE(ss.order() == 3);
    CHECK(ss.coeffs[3] == P{0, 0, 1});
    CHECK(ss.coeffs[2] == P{0, 4});
    CHECK(ss.coeffs[1] == P{2, 0, 4});
    CHECK(ss.coeffs[0].is_zero());

    CHECK_THROWS_AS(build_operator(OpKind::Jb, jac(2, 2, 1)), DegenerateParameterError);
    CHECK_THROWS_AS(build_operator(OpKind::rCyb, cy(2, 2, 1)), DegenerateParameterError);
    CHECK(op_kind_from_string("Cyb") == OpKind::Cyb);
    CHECK_THROWS(op_kind_from_string("nope"));
}

TEST_CASE("coefficients alternate parity on symmetric operators") {
    for (OpKind k : {OpKind::J2, OpKind::Jb, OpKind::Cy2, OpKind::Cyb, OpKind::rJ2, OpKind::rJb, OpKind::rCy2, OpKind::rCyb}) {
        const bool jk = k == OpKind::J2 || k == OpKind::Jb || k == OpKind::rJ2 || k == OpKind::rJb;
        const auto op = build_operator(k, jk ? jac(3, 4, frac(3, 2)) : cy(3, 4, frac(5, 2)));
        for (int j = 0; j <= op.order(); ++j) {
            const auto& c = op.coeffs[static_cast<std::size_t>(j)];
            for (int m = 0; m <= c.degree(); ++m)
                if (!c[static_cast<std::size_t>(m)].is_zero()) CHECK((m + j) % 2 == op.order() % 2);
        }
    }
}

TEST_CASE("Jacobi and Cauchy operators map onto each other under x -> i x") {
    const CR i = CR::i();
    for (long N : {1, 2, 3, 5}) {
        for (const Rational& al : {frac(1), frac(7, 3), frac(-1, 4), frac(11, 2)}) {
            for (const Rational& beta : {frac(2), frac(4), frac(1)}) {
                const Rational eta = cauchy_exponent(N, beta, al).real();
                const bool two = beta == 2;
                auto J = substitute_scale(build_operator(two ? OpKind::J2 : OpKind::Jb, jac(N, beta, eta)), i);
                auto C = build_operator(two ? OpKind::Cy2 : OpKind::Cyb, cy(N, beta, al));
                CHECK(proportional(J, C));
                auto rJ = substitute_scale(build_operator(two ? OpKind::rJ2 : OpKind::rJb, jac(N, beta, eta)), i);
                auto rC = build_operator(two ? OpKind::rCy2 : OpKind::rCyb, cy(N, beta, al));
                CHECK(proportional(rJ, rC));
            }
        }
    }
}

TEST_CASE("r-form operators follow from rho = r / (1 -+ x^2)") {
    const P u{1, 0, -1}, v{1, 0, 1};
    for (long N : {1, 2, 4}) {
        for (const Rational& beta : {frac(2), frac(4), frac(1)}) {
            const bool two = beta == 2;
            const Rational a = frac(3, 4), al = frac(5, 3);
            CAPTURE(N);
            CAPTURE(beta);
            CHECK(proportional(divide_dependent(build_operator(two ? OpKind::J2 : OpKind::Jb, jac(N, beta, a)), u),
                               build_operator(two ? OpKind::rJ2 : OpKind::rJb, jac(N, beta, a))));
            CHECK(proportional(divide_dependent(build_operator(two ? OpKind::Cy2 : OpKind::Cyb, cy(N, beta, al)), v),
                               build_operator(two ? OpKind::rCy2 : OpKind::rCyb, cy(N, beta, al))));
        }
    }
}

TEST_CASE("non-symmetric Cauchy operators") {
    for (long N : {1, 3}) {
        const Rational al = frac(5, 2);
        CHECK(build_operator(OpKind::CyNonSym2, cy(N, 2, al)).coeffs == build_operator(OpKind::Cy2, cy(N, 2, al)).coeffs);
        CHECK(build_operator(OpKind::rCyNonSym2, cy(N, 2, al)).coeffs == build_operator(OpKind::rCy2, cy(N, 2, al)).coeffs);
        const CR alc(frac(3, 2), frac(2, 3));
        CHECK(proportional(divide_dependent(build_operator(OpKind::CyNonSym2, cy(N, 2, alc)), P{1, 0, 1}),
                           build_operator(OpKind::rCyNonSym2, cy(N, 2, alc))));
    }
}

TEST_CASE("beta = 2 operators annihilate the exact densities") {
    for (int N = 1; N <= 4; ++N) {
        for (const Rational& a : {frac(0), frac(1, 2), frac(3)}) {
            const auto rho = density_beta2_exact(EnsembleSpec::jacobi_sym(N, 2, a));
            CHECK(apply_exact(build_operator(OpKind::J2, jac(N, 2, a)), rho).is_zero());
            CHECK(apply_exact(build_operator(OpKind::rJ2, jac(N, 2, a)), rho.times(P{1, 0, -1})).is_zero());
        }
        for (const Rational& al : {frac(1), frac(3, 2), frac(7, 3)}) {
            const auto rho = density_beta2_exact(EnsembleSpec::cauchy_sym(N, 2, al));
            CHECK(apply_exact(build_operator(OpKind::Cy2, cy(N, 2, al)), rho).is_zero());
            CHECK(apply_exact(build_operator(OpKind::rCy2, cy(N, 2, al)), rho.times(P{1, 0, 1})).is_zero());
        }
        const CR alc(frac(2), frac(1, 2));
        const auto rho = density_beta2_exact(EnsembleSpec::cauchy(N, 2, alc));
        CHECK(apply_exact(build_operator(OpKind::CyNonSym2, cy(N, 2, alc)), rho).is_zero());
        CHECK(apply_exact(build_operator(OpKind::rCyNonSym2, cy(N, 2, alc)), rho.times(P{1, 0, 1})).is_zero());
    }
}

TEST_CASE("finite-difference residuals") {
    const auto spec = EnsembleSpec::cauchy_sym(2, 2, 1);
    DensityEvaluator fd;
    fd.f = [spec](cdouble x) { return density_beta2(spec, x); };
    const auto op = build_operator(OpKind::Cy2, cy(2, 2, 1));
    CHECK(residual(op, fd, 0.4) < 1e-7);
    CHECK(residual(op, DensityEvaluator::from_exact(density_beta2_exact(spec)), 0.4) < 1e-12);

    const auto r1 = density_beta2_exact(EnsembleSpec::cauchy_sym(1, 2, 1)).times(P{1, 0, 1});
    const auto rop = build_operator(OpKind::rCy2, cy(1, 2, 1));
    for (double s : {-2.0, 0.0, 0.3, 1.7}) CHECK(residual(rop, DensityEvaluator::from_exact(r1), s) < 1e-8);

    // both forms on one density, sampled grid, N <= 4
    for (int N = 1; N <= 4; ++N) {
        const auto js = EnsembleSpec::jacobi_sym(N, 2, frac(1, 2));
        DensityEvaluator rho, r;
        rho.f = [js](cdouble x) { return density_beta2(js, x); };
        r.f = [js](cdouble x) { return (1.0 - x * x) * density_beta2(js, x); };
        const auto J = build_operator(OpKind::J2, jac(N, 2, frac(1, 2)));
        const auto rJ = build_operator(OpKind::rJ2, jac(N, 2, frac(1, 2)));
        double worst = 0;
        for (int k = 0; k < 50; ++k) {
            const double x = -0.9 + 1.8 * k / 49.0;
            worst = std::max({worst, residual(J, rho, x), residual(rJ, r, x)});
        }
        CAPTURE(N);
        CHECK(worst < 1e-7);
    }
}

TEST_CASE("densities recovered from the operators") {
    // degree 0: the normalised weight
    {
        const auto spec = EnsembleSpec::jacobi_sym(1, 2, frac(3, 2));
        const auto d = density_from_ode(build_operator(OpKind::J2, jac(1, 2, frac(3, 2))), WeightFn{spec}, 0);
        CHECK(d.q().degree() == 0);
        for (double x : {0.0, 0.5}) CHECK(std::abs(d(x) - density_beta2(spec, x)) < 1e-12);
    }
    for (int N = 2; N <= 4; ++N) {
        const auto spec = EnsembleSpec::jacobi_sym(N, 2, 0);
        const auto d = density_from_ode(build_operator(OpKind::J2, jac(N, 2, 0)), WeightFn{spec}, 2 * (N - 1));
        for (int k = 0; k <= 20; ++k) {
            const double x = -0.95 + 1.9 * k / 20.0;
            CHECK(std::abs(d(x) - density_beta2(spec, x)) < 1e-10);
        }
    }
    {
        const auto spec = EnsembleSpec::cauchy_sym(3, 2, frac(3, 2));
        const auto d = density_from_ode(build_operator(OpKind::Cy2, cy(3, 2, frac(3, 2))), WeightFn{spec}, 4);
        for (double x : {-3.0, 0.0, 0.7}) CHECK(std::abs(d(x) - density_beta2(spec, x)) < 1e-10);
    }
    {
        const CR al(frac(2), frac(1, 2));
        const auto spec = EnsembleSpec::cauchy(2, 2, al);
        const auto d = density_from_ode(build_operator(OpKind::CyNonSym2, cy(2, 2, al)), WeightFn{spec}, 2);
        for (double x : {-1.0, 0.0, 2.5}) CHECK(std::abs(d(x) - density_beta2(spec, x)) < 1e-9);
    }
}

TEST_CASE("beta = 4 operators reproduce the N = 2 brute-force density") {
    for (const Rational& a : {frac(1), frac(1, 2), frac(5)}) {
        const auto spec = EnsembleSpec::jacobi_sym(2, 4, a);
        const auto d = density_from_ode(build_operator(OpKind::Jb, jac(2, 4, a)), WeightFn{spec}, 4);
        CHECK(proportional_poly(d.q(), beta4_n2_q(WeightKind::Jacobi, a)));
        double mass = 0;
        for (unsigned m = 0; m <= 4; m += 2)
            mass += (d.q()[m].to_complex() * one_dim_moment(WeightKind::Jacobi, a, m).value() * d.scale()).real();
        CHECK(mass == doctest::Approx(2.0).epsilon(1e-12));
    }
    for (const Rational& al : {frac(3), frac(7, 2)}) {
        const auto spec = EnsembleSpec::cauchy_sym(2, 4, al);
        const auto d = density_from_ode(build_operator(OpKind::Cyb, cy(2, 4, al)), WeightFn{spec}, 4);
        CHECK(proportional_poly(d.q(), beta4_n2_q(WeightKind::Cauchy, spec.eta().real())));
    }
}

TEST_CASE("mismatched operator and weight leave no solution") {
    const auto spec = EnsembleSpec::jacobi_sym(2, 2, frac(1));
    CHECK_THROWS_AS(density_from_ode(build_operator(OpKind::J2, jac(2, 2, frac(2))), WeightFn{spec}, 2), RankDeficiencyError);
}

TEST_CASE("spectrum singularity density") {
    for (double x : {0.1, 1.0, 7.0}) CHECK(spectrum_singularity_density(0.0, x) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-13));
    const double j1 = std::cyl_bessel_j(0.5, 1.0), j3 = std::cyl_bessel_j(1.5, 1.0);
    CHECK(spectrum_singularity_density(1.0, 1.0) == doctest::Approx(0.5 * (j1 * j1 + j3 * j3 - 2 * j1 * j3)).epsilon(1e-13));
    for (double al : {0.5, 1.0, 2.0}) {
        OpParams p;
        p.alpha = CR(Rational(al));
        const auto op = build_operator(OpKind::SS, p);
        DensityEvaluator f;
        f.f = [al](cdouble x) { return cdouble(spectrum_singularity_density(al, x.real())); };
        for (double X : {0.5, 1.0, 2.0, 5.0}) {
            CAPTURE(al);
            CAPTURE(X);
            CHECK(residual(op, f, X) < 1e-7);
        }
    }
    CHECK_THROWS(spectrum_singularity_density(-0.6, 1.0));
}

TEST_CASE("sigma-form linearisation") {
    for (int N : {1, 2, 3})
        for (const Rational& al : {frac(1), frac(5, 2)})
            for (double s : {-1.5, 0.2, 3.0}) CHECK(sigma_form_residual(N, al, s) < 1e-6);
}
