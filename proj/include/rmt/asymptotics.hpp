#pragma once

// Global scaling alpha = alpha_hat beta N / 2 of the Cauchy ensemble: the limiting density and
// its generating functions, the large-x series check of the inhomogeneous resolvent equation,
// the 1/N expansion of the resolvent and the resulting density corrections.

#include <utility>
#include <vector>

#include "rmt/poly.hpp"
#include "rmt/rational.hpp"
#include "rmt/series.hpp"

namespace rmt {

// ---------------------------------------------------------------- limiting density

struct GlobalDensity {
    cdouble alpha_hat;
    double u_minus = 0.0;
    double u_plus = 0.0;
    double A = 0.0;  // prefactor, 1/pi when alpha_hat is real

    double operator()(double x) const;
};

/// Throws std::invalid_argument unless Re alpha_hat > 0.
GlobalDensity global_density(cdouble alpha_hat);
double global_density(cdouble alpha_hat, double x);
/// Circular-Jacobi version in the angle, real alpha_hat.
double global_density_circular(double alpha_hat, double theta);

/// (1 + 2a)^{k+1} C_k / (2a)^{2k+1}.
Rational mu_hat(const Rational& alpha_hat, unsigned k);
/// Generating functions sum mu_hat_k x^-2k and sum m_hat_2k x^-2k, analytic off the support.
cdouble generating_H(double alpha_hat, cdouble x);
cdouble generating_G(double alpha_hat, cdouble x);
/// (1/pi) Im G(s - i eps) / s, which tends to the limiting density as eps -> 0.
double sokhotski_plemelj_density(double alpha_hat, double s, double eps = 1e-6);

/// Leading power of N in sum_l (-1)^l f_l(k) mu_hat_{k+l}, with f_l the beta = 1, 4 recurrence
/// coefficients at alpha = alpha_hat beta N / 2 (polynomials in N). Zero when mu_hat solves the
/// limiting recurrence.
Rational limit_recurrence_defect(const Rational& beta, const Rational& alpha_hat, unsigned k);

// ---------------------------------------------------------------- resolvent series

struct SeriesResidual {
    long top_power = 0;                // residual coefficients run from x^top_power down
    std::vector<Rational> coefficients;  // x^top_power, x^(top_power - 1), ..., x^-M
    bool vanishes() const;
};

/// Applies the Cauchy operator to W_1 / N = (1/N) sum m_k x^-(k+1) built from the exact
/// (possibly continued) moments, subtracts the inhomogeneous term and returns every large-x
/// coefficient down to x^-M. moments = 0 picks enough of them; otherwise only m_0 .. m_{moments-1}
/// are used and TruncationError is thrown if they cannot decide every coefficient.
SeriesResidual resolvent_inhomogeneous_check(const Rational& beta, int N, const Rational& alpha, unsigned M,
                                             unsigned moments = 0);

/// The inhomogeneous term of the beta = 4 resolvent equation; beta = 1 uses h(x; -N/2, -2 alpha).
Poly<Rational> resolvent_h(const Rational& N, const Rational& alpha);

// ---------------------------------------------------------------- 1/N expansion

/// Exact algebraic function A(u) + x B(u) of u = sqrt(alpha_hat^2 x^2 - 1 - 2 alpha_hat), where
/// A and B are P(u) / (u^k (u^2 + e)^r) with e = (1 + alpha_hat)^2, so that 1 + x^2 = (u^2 + e) / alpha_hat^2.
class ResolventTerm {
public:
    struct Part {
        Poly<Rational> num;
        int k = 0;
        int r = 0;
    };

    ResolventTerm() = default;
    ResolventTerm(Rational alpha_hat, Part a, Part b);

    static ResolventTerm zero(const Rational& alpha_hat);
    /// u^-s, and x u^-s.
    static ResolventTerm u_power(const Rational& alpha_hat, int s);
    static ResolventTerm x_u_power(const Rational& alpha_hat, int s);
    static ResolventTerm constant(const Rational& alpha_hat, const Rational& c);

    const Rational& alpha_hat() const { return ah_; }
    const Part& a() const { return a_; }
    const Part& b() const { return b_; }

    ResolventTerm operator+(const ResolventTerm& o) const;
    ResolventTerm operator-(const ResolventTerm& o) const;
    ResolventTerm operator*(const ResolventTerm& o) const;
    ResolventTerm scaled(const Rational& c) const;
    ResolventTerm times_x() const;
    ResolventTerm derivative() const;  // d/dx
    bool is_zero() const;

    /// Value at complex x off the support (u ~ alpha_hat x at infinity). Real x inside the support
    /// throws BranchError unless boundary_limit, which evaluates at x - i0.
    cdouble operator()(cdouble x, bool boundary_limit = false) const;
    /// Coefficients of x^-1 .. x^-n of the large-x expansion.
    std::vector<Rational> large_x(unsigned n) const;

private:
    Rational ah_{1};
    Part a_, b_;
};

struct ResolventExpansion {
    Rational alpha_hat;
    Rational beta;
    std::vector<ResolventTerm> coefficients;  // W_{1,0} .. W_{1,L}

    /// W_{1,l}(x); see ResolventTerm::operator() for the branch.
    cdouble operator()(unsigned l, cdouble x, bool boundary_limit = false) const;
};

/// W_{1,0..L}. beta = 2 solves the first-order chain for l > 2; beta = 1, 4 fit l > 2 to the
/// exact large-N moment expansion in the same algebraic basis.
ResolventExpansion resolvent_expansion(const Rational& beta, const Rational& alpha_hat, unsigned L);

/// Closed forms of W_{1,0}, W_{1,1}, W_{1,2} in the beta = 1, 4 shape, with beta left formal
/// (beta = 2 reproduces the beta = 2 expansion).
ResolventTerm resolvent_closed_form(const Rational& beta, const Rational& alpha_hat, unsigned l);

/// W_{1,l}, l >= 1, fitted exactly to the large-N moment expansion in the basis u^-s (odd s),
/// x u^-s (even s); surplus equations confirm the fit. Throws RankDeficiencyError if it fails.
ResolventTerm resolvent_term_from_moments(const Rational& beta, const Rational& alpha_hat, unsigned l);

/// beta = 2 chain residual for W_{1,l} given W_{1,l-2}; l = 0 checks the leading equation.
ResolventTerm chain_residual(const ResolventExpansion& w, unsigned l);

struct PointMass {
    double location = 0.0;
    double mass = 0.0;
};

struct DensityCorrection {
    int order = 2;              // the term multiplies N^-order
    double smooth = 0.0;        // value of the absolutely continuous part at x
    std::vector<PointMass> deltas;
    bool near_endpoint = false;  // within 1e-3 of an edge, where the smooth part blows up
};

/// First correction to rho / N at alpha = alpha_hat beta N / 2: order N^-2 at beta = 2, order
/// N^-1 with edge point masses at beta = 1, 4.
DensityCorrection density_correction(const Rational& beta, double alpha_hat, double x);

/// Least-squares c in N^2 [mu_2(N)/N - mu_hat_2] = c + d / N^2 over the given N, beta = 2.
std::pair<double, double> fit_mu2_correction(const Rational& alpha_hat, const std::vector<int>& Ns);

}  // namespace rmt
