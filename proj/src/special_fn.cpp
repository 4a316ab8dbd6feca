#include "rmt/special_fn.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "rmt/errors.hpp"

namespace rmt {

namespace {

constexpr double kPi = std::numbers::pi;

bool near_nonpositive_integer(double x) {
    return x <= 0.0 && std::abs(x - std::round(x)) < 1e-14 * std::max(1.0, std::abs(x));
}

std::string to_str(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

// Lanczos approximation, g = 7, n = 9.
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

cdouble lanczos_log_gamma(cdouble z) {
    // valid for Re z >= 1/2
    z -= 1.0;
    cdouble acc = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) acc += kLanczos[i] / (z + static_cast<double>(i));
    const cdouble t = z + 7.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(acc);
}

}  // namespace

Rational HalfIntGammaRatio::value() const { return gamma_ratio(numerator_shift, integer_gap); }

Rational gamma_ratio(const Rational& z, unsigned m) {
    Rational prod(1);
    for (unsigned j = 0; j < m; ++j) {
        Rational f = z + j;
        if (sgn(f) == 0) throw PoleError("gamma_ratio: z + " + std::to_string(j) + " = 0 for z = " + to_str(z));
        prod *= f;
    }
    return Rational(1) / prod;
}

double ln_gamma(double x) {
    if (near_nonpositive_integer(x)) throw PoleError("ln_gamma: pole at x = " + std::to_string(x));
    return std::lgamma(x);
}

int gamma_sign(double x) {
    if (x > 0.0) return 1;
    if (near_nonpositive_integer(x)) throw PoleError("gamma_sign: pole at x = " + std::to_string(x));
    return (static_cast<long>(std::floor(-x)) % 2 == 0) ? -1 : 1;
}

cdouble log_gamma(cdouble z) {
    if (z.imag() == 0.0) {
        const double x = z.real();
        const double mag = ln_gamma(x);
        return {mag, gamma_sign(x) < 0 ? kPi : 0.0};
    }
    if (z.real() < 0.5) {
        // reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        return std::log(kPi) - std::log(std::sin(kPi * z)) - lanczos_log_gamma(1.0 - z);
    }
    return lanczos_log_gamma(z);
}

Rational pochhammer(const Rational& u, unsigned n) {
    Rational r(1);
    for (unsigned j = 0; j < n; ++j) r *= u + j;
    return r;
}

ComplexRational pochhammer(const ComplexRational& u, unsigned n) {
    ComplexRational r(1);
    for (unsigned j = 0; j < n; ++j) r *= u + ComplexRational(static_cast<long>(j));
    return r;
}

cdouble pochhammer(cdouble u, unsigned n) {
    cdouble r = 1.0;
    for (unsigned j = 0; j < n; ++j) r *= u + static_cast<double>(j);
    return r;
}

Integer binomial(unsigned n, unsigned k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

Integer catalan(unsigned k) { return binomial(2 * k, k) / (k + 1); }

cdouble hyp3f2_terminating(unsigned n, cdouble a1, cdouble a2, cdouble b1, cdouble b2) {
    cdouble term = 1.0, sum = 1.0;
    const double mn = -static_cast<double>(n);
    for (unsigned j = 0; j < n; ++j) {
        const double jd = j;
        const cdouble den = (b1 + jd) * (b2 + jd) * (jd + 1.0);
        if (std::abs(b1 + jd) == 0.0 || std::abs(b2 + jd) == 0.0)
            throw PoleError("hyp3f2_terminating: lower parameter hits a nonpositive integer");
        term *= (mn + jd) * (a1 + jd) * (a2 + jd) / den;
        sum += term;
    }
    return sum;
}

Rational hyp3f2_terminating(unsigned n, const Rational& a1, const Rational& a2, const Rational& b1,
                            const Rational& b2) {
    Rational term(1), sum(1);
    for (unsigned j = 0; j < n; ++j) {
        const Rational lb1 = b1 + j, lb2 = b2 + j;
        if (sgn(lb1) == 0 || sgn(lb2) == 0)
            throw PoleError("hyp3f2_terminating: lower parameter hits a nonpositive integer");
        term *= (Rational(-static_cast<long>(n)) + j) * (a1 + j) * (a2 + j) / (lb1 * lb2 * (j + 1));
        sum += term;
    }
    return sum;
}

cdouble continuous_hahn(unsigned n, cdouble x, cdouble a, cdouble b, cdouble c, cdouble d) {
    const cdouble i(0.0, 1.0);
    cdouble nfact = 1.0;
    for (unsigned j = 2; j <= n; ++j) nfact *= static_cast<double>(j);
    const cdouble pref = std::pow(i, static_cast<int>(n)) * pochhammer(a + c, n) * pochhammer(a + d, n) / nfact;
    return pref * hyp3f2_terminating(n, static_cast<double>(n) + a + b + c + d - 1.0, a + i * x, a + c, a + d);
}

cdouble continuous_hahn_sym(unsigned n, cdouble x, cdouble a, cdouble b) {
    return continuous_hahn(n, x, a, b, std::conj(a), std::conj(b));
}

double bessel_j(double nu, double x) {
    if (x < 0.0) throw std::domain_error("bessel_j: x must be nonnegative");
    if (nu <= -1.0) throw std::domain_error("bessel_j: nu must exceed -1");
    if (x == 0.0) {
        if (nu == 0.0) return 1.0;
        if (nu > 0.0) return 0.0;
        return std::numeric_limits<double>::infinity();
    }
    // prefactor (x/2)^nu / Gamma(nu+1) in double, the alternating sum in quad precision
    const double pref = std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
    const __float128 q = static_cast<__float128>(0.25) * x * x;
    __float128 term = 1, sum = 1;
    const double peak = 0.5 * x;
    for (int m = 0; m < 2000; ++m) {
        term *= -q / (static_cast<__float128>(m + 1) * (static_cast<__float128>(nu) + m + 1));
        sum += term;
        const double at = std::abs(static_cast<double>(term)), as = std::abs(static_cast<double>(sum));
        if (m > peak && at < 1e-16 * as) break;
    }
    return pref * static_cast<double>(sum);
}

std::vector<cdouble> polynomial_roots(const std::vector<cdouble>& coeffs) {
    std::size_t deg = coeffs.size();
    while (deg > 0 && coeffs[deg - 1] == cdouble(0.0)) --deg;
    if (deg <= 1) return {};
    const std::size_t n = deg - 1;
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const cdouble lead = coeffs[n];
    for (std::size_t i = 0; i < n; ++i) {
        companion(0, static_cast<Eigen::Index>(i)) = -coeffs[n - 1 - i] / lead;
        if (i + 1 < n) companion(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = 1.0;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    std::vector<cdouble> roots(n);
    for (std::size_t i = 0; i < n; ++i) roots[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    return roots;
}

}  // namespace rmt
