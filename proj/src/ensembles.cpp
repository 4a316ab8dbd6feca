#include "rmt/ensembles.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rmt/errors.hpp"
#include "rmt/special_fn.hpp"

namespace rmt {

namespace {

constexpr double kPi = std::numbers::pi;
const cdouble kI(0.0, 1.0);

cdouble cpow2(cdouble e) { return std::exp(e * std::log(2.0)); }

std::string str(const ComplexRational& z) {
    std::ostringstream os;
    os << z;
    return os.str();
}

}  // namespace

std::string to_string(Family f) {
    switch (f) {
        case Family::JacobiSym: return "jacobi-sym";
        case Family::Jacobi01: return "jacobi01";
        case Family::CauchySym: return "cauchy-sym";
        case Family::CauchyNonSym: return "cauchy";
        case Family::CircularJacobi: return "circular-jacobi";
    }
    return "unknown";
}

EnsembleSpec EnsembleSpec::jacobi_sym(int N, const Rational& beta, const ComplexRational& a) {
    EnsembleSpec s;
    s.family = Family::JacobiSym;
    s.N = N;
    s.beta = beta;
    s.a = a;
    s.b = a;
    return s;
}

EnsembleSpec EnsembleSpec::jacobi(int N, const Rational& beta, const ComplexRational& a, const ComplexRational& b) {
    EnsembleSpec s = jacobi_sym(N, beta, a);
    s.b = b;
    return s;
}

EnsembleSpec EnsembleSpec::cauchy_sym(int N, const Rational& beta, const Rational& alpha) {
    EnsembleSpec s;
    s.family = Family::CauchySym;
    s.N = N;
    s.beta = beta;
    s.alpha = alpha;
    return s;
}

EnsembleSpec EnsembleSpec::cauchy(int N, const Rational& beta, const ComplexRational& alpha) {
    EnsembleSpec s = cauchy_sym(N, beta, 0);
    s.alpha = alpha;
    s.family = alpha.is_real() ? Family::CauchySym : Family::CauchyNonSym;
    return s;
}

EnsembleSpec EnsembleSpec::circular_jacobi(int N, const Rational& beta, const Rational& alpha) {
    EnsembleSpec s = cauchy_sym(N, beta, alpha);
    s.family = Family::CircularJacobi;
    return s;
}

ComplexRational cauchy_exponent(const Rational& N, const Rational& beta, const ComplexRational& alpha) {
    return ComplexRational(-beta * (N - 1) / 2 - 1) - alpha;
}

ComplexRational EnsembleSpec::eta() const { return cauchy_exponent(Rational(N), beta, alpha); }

void EnsembleSpec::validate() const {
    if (N < 1) throw std::invalid_argument("N must be a positive integer");
    if (sgn(beta) <= 0) throw std::invalid_argument("beta must be positive");
    switch (family) {
        case Family::JacobiSym:
        case Family::Jacobi01:
            if (!continued && (a.real() <= -1 || b.real() <= -1))
                throw std::invalid_argument("Jacobi exponents need Re a, Re b > -1 (a = " + str(a) + ")");
            break;
        case Family::CauchySym:
        case Family::CircularJacobi:
            if (!alpha.is_real()) throw std::invalid_argument("symmetric Cauchy ensemble needs real alpha");
            if (!continued && alpha.real() <= Rational(-1, 2))
                throw std::invalid_argument("Cauchy parameter needs alpha > -1/2");
            break;
        case Family::CauchyNonSym:
            if (alpha.is_real()) throw std::invalid_argument("non-symmetric Cauchy ensemble needs Im alpha != 0");
            if (!continued && alpha.real() <= Rational(-1, 2))
                throw std::invalid_argument("Cauchy parameter needs Re alpha > -1/2");
            break;
    }
}

cdouble WeightFn::operator()(cdouble x) const {
    switch (spec.family) {
        case Family::JacobiSym:
        case Family::Jacobi01: {
            cdouble t = x;
            if (spec.family == Family::Jacobi01) t = 1.0 - 2.0 * x;
            if (t.imag() == 0.0 && std::abs(t.real()) >= 1.0) return 0.0;
            const cdouble a = spec.a.to_complex(), b = spec.b.to_complex();
            // (1-x)^a (1+x)^b on (-1,1) becomes 2^{-(a+b)} x^a (1-x)^b after x -> 1 - 2x
            cdouble w = std::exp(a * std::log(1.0 - t) + b * std::log(1.0 + t));
            if (spec.family == Family::Jacobi01) w *= cpow2(-(a + b));
            return w;
        }
        case Family::CauchySym:
        case Family::CauchyNonSym: {
            const cdouble e = spec.eta().to_complex();
            return std::exp(e * std::log(1.0 - kI * x) + std::conj(e) * std::log(1.0 + kI * x));
        }
        case Family::CircularJacobi: {
            const double al = spec.alpha.real().get_d();
            return std::pow(std::abs(1.0 - std::exp(kI * x)), 2.0 * al);
        }
    }
    return 0.0;
}

OneDimMoment one_dim_moment(WeightKind kind, const Rational& e, unsigned k, bool ratio_only) {
    OneDimMoment m;
    if (k % 2 == 1) {
        m.ratio = 0;
        return m;
    }
    const unsigned j = k / 2;
    const Rational half(1, 2);
    if (kind == WeightKind::Jacobi) {
        // Gamma(1+a) Gamma(j+1/2) / Gamma(j+3/2+a) = base * (1/2)_j / (a+3/2)_j
        Rational den = pochhammer(e + Rational(3, 2), j);
        if (sgn(den) == 0) throw PoleError("one_dim_moment: (a + 3/2)_j vanishes for a = " + e.get_str());
        m.ratio = pochhammer(half, j) / den;
        if (!ratio_only) {
            const double a = e.get_d();
            m.base = std::exp(log_gamma(cdouble(1.0 + a)) + 0.5 * std::log(kPi) - log_gamma(cdouble(1.5 + a)));
        } else {
            m.base = std::numeric_limits<double>::quiet_NaN();
        }
        return m;
    }
    // Cauchy: (-1)^j tan(pi e) Gamma(1+e) Gamma(j+1/2) / Gamma(j+3/2+e)
    Rational den = pochhammer(e + Rational(3, 2), j);
    if (sgn(den) == 0) throw PoleError("one_dim_moment: (eta + 3/2)_j vanishes for eta = " + e.get_str());
    m.ratio = pochhammer(half, j) / den;
    if (j % 2 == 1) m.ratio = -m.ratio;
    if (ratio_only) {
        m.base = std::numeric_limits<double>::quiet_NaN();
        return m;
    }
    const Rational twice = 2 * e;
    if (is_integer(twice) && !is_integer(e))
        throw PoleError("one_dim_moment: tan(pi eta) diverges at half-integer eta = " + e.get_str());
    // Euler beta form sqrt(pi) Gamma(-eta-1/2) / Gamma(-eta), equal to the tan form by reflection
    m.base = cauchy_line_base(e);
    return m;
}

cdouble cauchy_line_base(const Rational& e) {
    if (is_integer(e) && sgn(e) >= 0) return 0.0;  // 1/Gamma(-eta) vanishes
    const double ed = e.get_d();
    return std::exp(0.5 * std::log(kPi) + log_gamma(cdouble(-ed - 0.5)) - log_gamma(cdouble(-ed)));
}

cdouble one_dim_moment(WeightKind kind, cdouble e, unsigned k) {
    if (k % 2 == 1) return 0.0;
    const unsigned j = k / 2;
    const cdouble ratio = pochhammer(cdouble(0.5), j) / pochhammer(e + 1.5, j);
    if (kind == WeightKind::Jacobi)
        return ratio * std::exp(log_gamma(1.0 + e) + 0.5 * std::log(kPi) - log_gamma(1.5 + e));
    const double sign = (j % 2 == 1) ? -1.0 : 1.0;
    return sign * ratio * std::exp(0.5 * std::log(kPi) + log_gamma(-e - 0.5) - log_gamma(-e));
}

cdouble morris_product(int N, cdouble a, cdouble b, double l) {
    cdouble acc = 0.0;
    for (int j = 0; j < N; ++j) {
        acc += log_gamma(l * j + a + b + 1.0) + log_gamma(cdouble(l * (j + 1) + 1.0)) - log_gamma(l * j + a + 1.0) -
               log_gamma(l * j + b + 1.0) - log_gamma(cdouble(1.0 + l));
    }
    return std::exp(acc);
}

cdouble selberg_product(int N, cdouble a, cdouble b, double l) {
    cdouble acc = 0.0;
    for (int j = 0; j < N; ++j) {
        acc += log_gamma(a + 1.0 + l * j) + log_gamma(b + 1.0 + l * j) + log_gamma(cdouble(1.0 + l * (j + 1))) -
               log_gamma(a + b + 2.0 + l * (N + j - 1)) - log_gamma(cdouble(1.0 + l));
    }
    return std::exp(acc);
}

cdouble norm_cauchy(const EnsembleSpec& spec) {
    if (!spec.is_cauchy() && spec.family != Family::CircularJacobi)
        throw std::invalid_argument("norm_cauchy needs a Cauchy ensemble");
    const double beta = spec.beta.get_d();
    const cdouble al = spec.alpha.to_complex();
    const int N = spec.N;
    const double e = -beta * N * (N - 1) / 2.0 - 2.0 * N * al.real();
    return std::pow(2.0, e) * std::pow(kPi, N) * morris_product(N, al, std::conj(al), beta / 2.0);
}

cdouble norm_jacobi(const EnsembleSpec& spec) {
    if (!spec.is_jacobi()) throw std::invalid_argument("norm_jacobi needs a Jacobi ensemble");
    const double beta = spec.beta.get_d();
    const cdouble a = spec.a.to_complex(), b = spec.b.to_complex();
    const int N = spec.N;
    const cdouble s = selberg_product(N, a, b, beta / 2.0);
    if (spec.family == Family::Jacobi01) return s;
    return cpow2(beta * N * (N - 1) / 2.0 + static_cast<double>(N) * (a + b + 1.0)) * s;
}

double check_norm_identity(int N, const Rational& beta, cdouble alpha) {
    if (!is_integer(beta) || beta.get_num() % 2 != 0) throw std::invalid_argument("check_norm_identity needs even beta");
    const double bd = beta.get_d(), lambda = bd / 2.0;
    const long sign_exp = (beta.get_num().get_si() * N * (N - 1)) / 4;
    const double sign = (sign_exp % 2 == 0) ? 1.0 : -1.0;
    const cdouble eta = -bd * (N - 1) / 2.0 - 1.0 - alpha;
    cdouble lhs, rhs;
    if (alpha.imag() == 0.0) {
        lhs = sign * std::pow(2.0 * kPi, N) * morris_product(N, alpha, alpha, lambda);
        rhs = std::pow(-std::tan(kPi * alpha), N) * selberg_product(N, eta, eta, lambda);
    } else {
        const cdouble ab = std::conj(alpha);
        const cdouble f = -std::sin(kPi * alpha) * std::sin(kPi * ab) / std::sin(kPi * (alpha + ab));
        lhs = sign * std::pow(kPi, N) * morris_product(N, alpha, ab, lambda);
        rhs = std::pow(f, N) * selberg_product(N, eta, std::conj(eta), lambda);
    }
    return std::abs(lhs - rhs) / std::abs(lhs);
}

std::vector<cdouble> jacobi_polynomials(unsigned n, cdouble a, cdouble b, cdouble x) {
    std::vector<cdouble> p(n + 1);
    p[0] = 1.0;
    if (n == 0) return p;
    p[1] = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    for (unsigned m = 2; m <= n; ++m) {
        const double md = m;
        const cdouble s = 2.0 * md + a + b;
        const cdouble lead = 2.0 * md * (md + a + b) * (s - 2.0);
        if (std::abs(lead) == 0.0)
            throw DegenerateParameterError("jacobi_polynomials: recurrence degenerates at n = " + std::to_string(m));
        p[m] = ((s - 1.0) * (s * (s - 2.0) * x + a * a - b * b) * p[m - 1] -
                2.0 * (md + a - 1.0) * (md + b - 1.0) * s * p[m - 2]) /
               lead;
    }
    return p;
}

cdouble jacobi_norm(unsigned n, cdouble a, cdouble b) {
    try {
        if (n == 0) return cpow2(a + b + 1.0) * std::exp(log_gamma(a + 1.0) + log_gamma(b + 1.0) - log_gamma(a + b + 2.0));
        const double nd = n;
        return cpow2(a + b + 1.0) / (2.0 * nd + a + b + 1.0) *
               std::exp(log_gamma(nd + a + 1.0) + log_gamma(nd + b + 1.0) - log_gamma(nd + a + b + 1.0) -
                        log_gamma(cdouble(nd + 1.0)));
    } catch (const PoleError& e) {
        throw DegenerateParameterError(std::string("jacobi_norm: ") + e.what());
    }
}

cdouble cauchy_norm(unsigned n, cdouble eta) {
    // reflected form of the Jacobi norm at (eta, conj eta); finite for integer alpha
    const cdouble a = eta, b = std::conj(eta);
    const double nd = n;
    try {
        return -kPi * cpow2(a + b + 2.0) / (2.0 * nd + a + b + 1.0) *
               std::exp(log_gamma(-nd - a - b) - log_gamma(-nd - a) - log_gamma(-nd - b) - log_gamma(cdouble(nd + 1.0)));
    } catch (const PoleError& e) {
        throw DegenerateParameterError(std::string("cauchy_norm: ") + e.what());
    }
}

cdouble density_beta2(const EnsembleSpec& spec, cdouble x) {
    if (spec.beta != 2) throw std::invalid_argument("density_beta2 needs beta = 2");
    const unsigned N = static_cast<unsigned>(spec.N);
    const auto check = [](cdouble h, unsigned n) {
        if (!std::isfinite(std::abs(h)) || std::abs(h) == 0.0)
            throw DegenerateParameterError("density_beta2: norm constant h_" + std::to_string(n) + " degenerate");
    };
    switch (spec.family) {
        case Family::JacobiSym: {
            const cdouble a = spec.a.to_complex(), b = spec.b.to_complex();
            const auto p = jacobi_polynomials(N - 1, a, b, x);
            cdouble sum = 0.0;
            for (unsigned n = 0; n < N; ++n) {
                const cdouble h = jacobi_norm(n, a, b);
                check(h, n);
                sum += p[n] * p[n] / h;
            }
            return WeightFn{spec}(x)*sum;
        }
        case Family::Jacobi01: {
            EnsembleSpec s = spec;
            s.family = Family::JacobiSym;
            return 2.0 * density_beta2(s, 1.0 - 2.0 * x);
        }
        case Family::CauchySym:
        case Family::CauchyNonSym: {
            const cdouble eta = spec.eta().to_complex();
            const auto p = jacobi_polynomials(N - 1, eta, std::conj(eta), kI * x);
            cdouble sum = 0.0, ipow = 1.0;
            for (unsigned n = 0; n < N; ++n) {
                const cdouble h = cauchy_norm(n, eta);
                check(h, n);
                const cdouble pn = p[n] / ipow;  // i^{-n} P_n(ix)
                sum += pn * pn / h;
                ipow *= kI;
            }
            return WeightFn{spec}(x)*sum;
        }
        case Family::CircularJacobi: {
            EnsembleSpec s = spec;
            s.family = Family::CauchySym;
            const cdouble half = 0.5 * x;
            const cdouble sn = std::sin(half);
            return density_beta2(s, std::cos(half) / sn) / (2.0 * sn * sn);
        }
    }
    return 0.0;
}

double check_continuation_relation(int N, cdouble alpha, double x) {
    const cdouble eta = -static_cast<double>(N) - alpha;
    cdouble factor;
    EnsembleSpec cy;
    cy.N = N;
    cy.beta = 2;
    cy.continued = true;
    if (alpha.imag() == 0.0) {
        const double s = std::sin(kPi * alpha.real());
        if (std::abs(s) < 1e-14) throw PoleError("check_continuation_relation: cot(pi alpha) diverges at integer alpha");
        factor = -std::cos(kPi * alpha.real()) / s;
        cy.family = Family::CauchySym;
    } else {
        const cdouble ab = std::conj(alpha);
        factor = -std::sin(kPi * (alpha + ab)) / (2.0 * std::sin(kPi * alpha) * std::sin(kPi * ab));
        cy.family = Family::CauchyNonSym;
    }
    // alpha enters the Cauchy density only through eta; carry it as a double-exact rational
    cy.alpha = ComplexRational(Rational(alpha.real()), Rational(alpha.imag()));
    EnsembleSpec jac;
    jac.family = Family::JacobiSym;
    jac.N = N;
    jac.beta = 2;
    jac.continued = true;
    jac.a = ComplexRational(Rational(std::conj(eta).real()), Rational(std::conj(eta).imag()));
    jac.b = ComplexRational(Rational(eta.real()), Rational(eta.imag()));
    const cdouble lhs = density_beta2(cy, kI * x);
    const cdouble rhs = factor * density_beta2(jac, x);
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    return std::abs(lhs - rhs) / scale;
}

}  // namespace rmt

namespace rmt {

LogDerivative weight_log_derivative(const EnsembleSpec& spec) {
    using P = Poly<ComplexRational>;
    const ComplexRational i = ComplexRational::i();
    if (spec.family == Family::JacobiSym) {
        const ComplexRational &a = spec.a, &b = spec.b;
        return {P{b - a, -(a + b)}, P{1, 0, -1}};
    }
    if (spec.is_cauchy()) {
        const ComplexRational e = spec.eta();
        return {P{i * (e.conj() - e), e + e.conj()}, P{1, 0, 1}};
    }
    throw std::invalid_argument("weight_log_derivative: unsupported family " + to_string(spec.family));
}

PolyWeightDensity::PolyWeightDensity(EnsembleSpec spec, Poly<ComplexRational> q, cdouble scale)
    : spec_(std::move(spec)), q_(std::move(q)), scale_(scale), ld_(weight_log_derivative(spec_)) {
    t_.push_back(q_);
}

const Poly<ComplexRational>& PolyWeightDensity::t_poly(unsigned j) const {
    while (t_.size() <= j) {
        const long m = static_cast<long>(t_.size()) - 1;
        const auto& t = t_.back();
        t_.push_back(ld_.f * t.derivative() + (ld_.g - Poly<ComplexRational>(ComplexRational(m)) * ld_.f.derivative()) * t);
    }
    return t_[j];
}

cdouble PolyWeightDensity::operator()(cdouble x) const { return scale_ * WeightFn{spec_}(x)*q_(x); }

cdouble PolyWeightDensity::derivative(unsigned j, cdouble x) const {
    const cdouble f = ld_.f(x);
    return scale_ * WeightFn{spec_}(x)*t_poly(j)(x) / std::pow(f, static_cast<int>(j));
}

PolyWeightDensity PolyWeightDensity::times(const Poly<ComplexRational>& p) const {
    return PolyWeightDensity(spec_, q_ * p, scale_);
}

namespace {

using CPoly = Poly<ComplexRational>;

std::vector<CPoly> jacobi_polys_exact(unsigned n, const ComplexRational& a, const ComplexRational& b) {
    std::vector<CPoly> p;
    p.push_back(CPoly(ComplexRational(1)));
    if (n == 0) return p;
    const ComplexRational half(frac(1, 2));
    p.push_back(CPoly{(a + 1) - (a + b + 2) * half, (a + b + 2) * half});
    for (unsigned m = 2; m <= n; ++m) {
        const ComplexRational md(static_cast<long>(m));
        const ComplexRational s = 2 * md + a + b;
        const ComplexRational lead = 2 * md * (md + a + b) * (s - 2);
        if (lead.is_zero())
            throw DegenerateParameterError("jacobi polynomials: recurrence degenerates at n = " + std::to_string(m));
        const CPoly lin{(s - 1) * (a * a - b * b), (s - 1) * s * (s - 2)};
        const CPoly c2(2 * (md + a - 1) * (md + b - 1) * s);
        p.push_back(((lin * p[m - 1]) - c2 * p[m - 2]) * CPoly(ComplexRational(1) / lead));
    }
    return p;
}

}  // namespace

PolyWeightDensity density_beta2_exact(const EnsembleSpec& spec) {
    if (spec.beta != 2) throw std::invalid_argument("density_beta2_exact needs beta = 2");
    const unsigned N = static_cast<unsigned>(spec.N);
    CPoly q;
    if (spec.family == Family::JacobiSym) {
        const ComplexRational &a = spec.a, &b = spec.b;
        const auto p = jacobi_polys_exact(N - 1, a, b);
        // h_n / h_0 = (a+1)_n (b+1)_n / ((2n+a+b+1) (a+b+2)_{n-1} n!)
        for (unsigned n = 0; n < N; ++n) {
            ComplexRational ratio(1);
            if (n > 0) {
                ComplexRational den = (2 * ComplexRational(static_cast<long>(n)) + a + b + 1) *
                                      pochhammer(a + b + 2, n - 1);
                for (unsigned k = 2; k <= n; ++k) den *= ComplexRational(static_cast<long>(k));
                if (den.is_zero()) throw DegenerateParameterError("density_beta2_exact: norm ratio diverges");
                ratio = pochhammer(a + 1, n) * pochhammer(b + 1, n) / den;
            }
            if (ratio.is_zero()) throw DegenerateParameterError("density_beta2_exact: norm constant vanishes");
            q += p[n] * p[n] * CPoly(ComplexRational(1) / ratio);
        }
        const cdouble h0 = jacobi_norm(0, a.to_complex(), b.to_complex());
        return PolyWeightDensity(spec, q, 1.0 / h0);
    }
    if (spec.is_cauchy()) {
        const ComplexRational e = spec.eta(), eb = e.conj();
        const ComplexRational i = ComplexRational::i();
        const auto p = jacobi_polys_exact(N - 1, e, eb);
        ComplexRational ipow(1);
        for (unsigned n = 0; n < N; ++n) {
            // p_n(x) = i^{-n} P_n(ix)
            CPoly pn = p[n].scale_argument(i) * CPoly(ComplexRational(1) / ipow);
            ComplexRational ratio(1);
            if (n > 0) {
                const ComplexRational nn(static_cast<long>(n));
                // h_n / h_0 = (a+b+1) (-n-a)_n (-n-b)_n / ((2n+a+b+1) (-n-a-b)_n n!)
                ComplexRational den = (2 * nn + e + eb + 1) * pochhammer(-nn - e - eb, n);
                for (unsigned k = 2; k <= n; ++k) den *= ComplexRational(static_cast<long>(k));
                if (den.is_zero()) throw DegenerateParameterError("density_beta2_exact: norm ratio diverges");
                ratio = (e + eb + 1) * pochhammer(-nn - e, n) * pochhammer(-nn - eb, n) / den;
            }
            if (ratio.is_zero()) throw DegenerateParameterError("density_beta2_exact: norm constant vanishes");
            q += pn * pn * CPoly(ComplexRational(1) / ratio);
            ipow *= i;
        }
        const cdouble h0 = cauchy_norm(0, e.to_complex());
        return PolyWeightDensity(spec, q, 1.0 / h0);
    }
    throw std::invalid_argument("density_beta2_exact: unsupported family " + to_string(spec.family));
}

}  // namespace rmt
