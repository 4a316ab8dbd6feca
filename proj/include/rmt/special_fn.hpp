#pragma once

// Exact and floating special functions shared by every other module.

#include <vector>

#include "rmt/rational.hpp"

namespace rmt {

/// Gamma(z) / Gamma(z + m) = 1 / prod_{j<m} (z + j); exact for rational z.
struct HalfIntGammaRatio {
    Rational numerator_shift;  // z, typically k + 1/2
    unsigned integer_gap = 0;  // m

    Rational value() const;
};

/// 1 / prod_{j=0}^{m-1} (z + j). Throws PoleError if some z + j vanishes.
Rational gamma_ratio(const Rational& z, unsigned m);

/// log|Gamma(x)|. Throws PoleError at nonpositive integers.
double ln_gamma(double x);

/// Sign of Gamma(x) for real x off the poles.
int gamma_sign(double x);

/// Branch of log Gamma(z) whose exponential is Gamma(z); real inputs give
/// log|Gamma| + i*pi for negative values. Throws PoleError at the poles.
cdouble log_gamma(cdouble z);

inline cdouble gamma(cdouble z) { return std::exp(log_gamma(z)); }

/// Rising factorial (u)_n.
Rational pochhammer(const Rational& u, unsigned n);
ComplexRational pochhammer(const ComplexRational& u, unsigned n);
cdouble pochhammer(cdouble u, unsigned n);

Integer binomial(unsigned n, unsigned k);

/// k-th Catalan number binom(2k, k) / (k + 1).
Integer catalan(unsigned k);

/// 3F2(-n, a1, a2; b1, b2; 1) by exact term accumulation (terminates after n+1 terms).
cdouble hyp3f2_terminating(unsigned n, cdouble a1, cdouble a2, cdouble b1, cdouble b2);
Rational hyp3f2_terminating(unsigned n, const Rational& a1, const Rational& a2, const Rational& b1,
                            const Rational& b2);

/// Continuous Hahn polynomial S_n(x; a, b, c, d) in the Askey-scheme normalisation.
cdouble continuous_hahn(unsigned n, cdouble x, cdouble a, cdouble b, cdouble c, cdouble d);

/// s_n(x; a, b) = S_n(x; a, b, conj(a), conj(b)).
cdouble continuous_hahn_sym(unsigned n, cdouble x, cdouble a, cdouble b);

/// Bessel function of the first kind from its ascending series, for x >= 0 and nu > -1.
double bessel_j(double nu, double x);

/// Roots of the polynomial c[0] + c[1] z + ... (companion-matrix eigenvalues).
std::vector<cdouble> polynomial_roots(const std::vector<cdouble>& coeffs);

}  // namespace rmt
