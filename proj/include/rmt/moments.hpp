#pragma once

// Exact even-moment sequences of the symmetric Jacobi and Cauchy ensembles from their
// recurrences, the continuous Hahn closed form at beta = 2, the Gaussian limit and the
// beta <-> 4/beta duality.

#include <array>
#include <vector>

#include "rmt/ensembles.hpp"
#include "rmt/poly.hpp"
#include "rmt/rational.hpp"

namespace rmt {

enum class SeqKind {
    JacobiDiff,  // mu_k = m_{2k+2} - m_{2k}
    CauchySum,   // mu_k = m_{2k+2} + m_{2k}
    Rescaled,    // mu~_k, the polynomial part at beta = 2
};
enum class Provenance { Recurrence, Hahn, Oracle };

struct RationalSeq {
    std::vector<Rational> values;  // mu_0 .. mu_K
    EnsembleSpec spec;
    SeqKind kind = SeqKind::JacobiDiff;
    Provenance provenance = Provenance::Recurrence;
    /// Cauchy only: mu_k is a convergent integral for k < literal_below; later entries are
    /// analytic continuations. Jacobi sequences set it to values.size().
    std::size_t literal_below = 0;

    bool is_formal(std::size_t k) const { return k >= literal_below; }
};

/// The five coefficients f_{-2} .. f_2 of the beta = 1, 4 Jacobi recurrence at index k,
/// as functions of ~a and ~c. T is Rational, cdouble or a polynomial ring over Rational.
template <typename T>
std::array<T, 5> jacobi_recurrence_coeffs(const T& at, const T& ct, const Rational& k);

/// mu_0..mu_K for the symmetric Jacobi ensemble with formal (rational) N. beta in {1, 2, 4}.
/// Where a denominator or the leading recurrence coefficient vanishes the values are taken as the
/// a -> a0 limit (they are rational in a); throws DegenerateParameterError if that limit diverges.
std::vector<Rational> mu_jacobi_values(const Rational& N, const Rational& beta, const Rational& a, unsigned K);
/// Complex a, floating point.
std::vector<cdouble> mu_jacobi_values_complex(const Rational& N, const Rational& beta, cdouble a, unsigned K);

/// mu_0..mu_K for the symmetric Cauchy ensemble with formal N. beta = 2 runs its own
/// recurrence; beta = 1, 4 run the sign-twisted Jacobi recurrence at a = eta.
std::vector<Rational> mu_cauchy_values(const Rational& N, const Rational& beta, const Rational& alpha, unsigned K);

/// Exact large-N expansion of the symmetric Cauchy sequence at alpha = alpha_hat beta N / 2:
/// mu_k / N = sum_l c[k][l] N^-l, returned as c[k][l] for k <= K, l <= L.
std::vector<std::vector<Rational>> mu_cauchy_large_n(const Rational& beta, const Rational& alpha_hat, unsigned K,
                                                      unsigned L);

RationalSeq mu_jacobi(const EnsembleSpec& spec, unsigned K);
RationalSeq mu_cauchy(const EnsembleSpec& spec, unsigned K);

/// Even moments m_0, m_2, ..., m_{2K+2} from mu_0..mu_K.
std::vector<Rational> m2k_from_mu(const std::vector<Rational>& mu, SeqKind kind, const Rational& N);
std::vector<Rational> m2k_from_mu(const RationalSeq& seq);

/// m_2 of the symmetric Jacobi ensemble from the (0,1) averages of sum x and sum x^2 by the
/// binomial transfer; independent of the recurrences.
Rational jacobi_m2_binomial(const Rational& N, const Rational& beta, const Rational& a);

/// mu_k at beta = 2 from the continuous Hahn closed form. Throws PoleError on prefactor poles.
Rational hahn_mu_exact(int N, const Rational& a, unsigned k);
cdouble hahn_mu(int N, const Rational& a, cdouble k);
/// The polynomial in k proportional to the rescaled mu~_k (degree N - 1).
Poly<Rational> hahn_polynomial_part(int N, const Rational& a);
std::vector<cdouble> hahn_zeros(int N, const Rational& a);

/// Gaussian (weight exp(-x^2/2), beta = 2) even moments m_0..m_{2K}.
std::vector<Rational> gue_moments(const Rational& N, unsigned K);

/// (2a)^k (-mu_k) at beta = 2, which tends to the Gaussian m_{2k} as a grows.
double harer_zagier_scaled(int N, const Rational& a, unsigned k);

struct DualityResult {
    bool holds = false;
    std::vector<Rational> lhs;  // m_{2k}(N, beta, alpha)
    std::vector<Rational> rhs;  // -(2/beta) m_{2k}(-beta N/2, 4/beta, -2 alpha/beta)
};
/// Cauchy moments m_0..m_{2K} on both sides of the beta <-> 4/beta duality, exact.
DualityResult duality_check(const Rational& N, const Rational& beta, const Rational& alpha, unsigned K);

}  // namespace rmt
