#pragma once

// Linear differential operators annihilating the one-point densities, their exact
// identities under x -> s x and rho = r / f, residual evaluation and the
// polynomial-times-weight construction of densities from an operator.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rmt/ensembles.hpp"
#include "rmt/poly.hpp"

namespace rmt {

enum class OpKind {
    J2,          // symmetric Jacobi density, beta = 2, third order
    Jb,          // symmetric Jacobi density, beta = 1 or 4, fifth order
    Cy2,         // symmetric Cauchy density, beta = 2
    Cyb,         // symmetric Cauchy density, beta = 1 or 4
    CyNonSym2,   // non-symmetric Cauchy density, beta = 2
    rJ2,         // r = (1 - x^2) rho, Jacobi, beta = 2
    rJb,         // r = (1 - x^2) rho, Jacobi, beta = 1 or 4
    rCy2,        // r = (1 + x^2) rho, Cauchy, beta = 2
    rCyb,        // r = (1 + x^2) rho, Cauchy, beta = 1 or 4
    rCyNonSym2,  // r = (1 + x^2) rho, non-symmetric Cauchy, beta = 2
    SS,          // spectrum singularity scaling limit, beta = 2
};

std::string to_string(OpKind k);
OpKind op_kind_from_string(const std::string& name);

/// Parameters consumed by build_operator. Jacobi kinds read a, Cauchy kinds read alpha
/// (complex for the non-symmetric ones), SS reads alpha only. N may be formal.
struct OpParams {
    Rational N{1};
    Rational beta{2};
    ComplexRational a{0};
    ComplexRational alpha{0};
};

/// sum_j c_j(x) d^j/dx^j with exact coefficients.
struct LinearDiffOp {
    OpKind kind = OpKind::J2;
    std::vector<Poly<ComplexRational>> coeffs;  // coeffs[j] multiplies the j-th derivative

    int order() const;
    /// c_j evaluated at x.
    cdouble coeff(unsigned j, cdouble x) const;
    /// Divides every coefficient by the largest common power of x.
    LinearDiffOp canonical() const;
};

/// ~a and ~c of the beta = 1, 4 Jacobi operators; throws DegenerateParameterError at beta = 2.
std::pair<Rational, Rational> jacobi_tilde_params(const Rational& a, const Rational& N, const Rational& beta);
/// ~alpha and ~N of the beta = 1, 4 Cauchy operators.
std::pair<Rational, Rational> cauchy_tilde_params(const Rational& alpha, const Rational& N, const Rational& beta);

LinearDiffOp build_operator(OpKind kind, const OpParams& p);

/// Operator acting on rho~(x) = rho(s x).
LinearDiffOp substitute_scale(const LinearDiffOp& op, const ComplexRational& s);
/// Operator acting on r where rho = r / f, scaled by f^(order+1) so coefficients stay polynomial.
LinearDiffOp divide_dependent(const LinearDiffOp& op, const Poly<ComplexRational>& f);
/// True when the two operators agree up to a common rational-function factor.
bool proportional(const LinearDiffOp& A, const LinearDiffOp& B);

/// Applies op to scale * w * q exactly: returns P with op(w q) = w P / f^order.
Poly<ComplexRational> apply_exact(const LinearDiffOp& op, const PolyWeightDensity& d);

/// A density or r-function: a callable, optionally with an exact polynomial-times-weight form.
struct DensityEvaluator {
    std::function<cdouble(cdouble)> f;
    std::optional<PolyWeightDensity> exact;

    cdouble operator()(cdouble x) const { return exact ? (*exact)(x) : f(x); }
    static DensityEvaluator from_exact(PolyWeightDensity d);
};

/// j-th derivative by central differences with Richardson extrapolation over h, h/2, h/4.
double fd_derivative(const std::function<double(double)>& f, unsigned j, double x, double h);

/// |sum_j c_j f^(j)| / max_j |c_j f^(j)|. Exact derivatives when f has an exact form,
/// otherwise finite differences with step h. h <= 0 picks 0.02 (1 + |x|), capped at a twelfth of
/// the distance from x to the nearest zero of the leading coefficient.
double residual(const LinearDiffOp& op, const DensityEvaluator& f, cdouble x, double h = 0.0);

/// Finds q of the given degree (even when the weight is even) with op(w q) = 0 by exact
/// coefficient matching, then normalises so that int w q = N.
/// Throws RankDeficiencyError when the solution space is not one dimensional.
PolyWeightDensity density_from_ode(const LinearDiffOp& op, const WeightFn& weight, int degree);

/// Bessel closed form of the beta = 2 spectrum-singularity density.
double spectrum_singularity_density(double alpha, double x);

/// Relative residual of the order-xi^2 linearisation of the sigma-form equation,
/// (1+s^2)^2 r''^2 - 4 alpha^2 r^2 + 8 alpha^2 s r r' + 4 [N(N+2 alpha) - alpha^2 s^2] r'^2,
/// for r = (1 + s^2) rho of the exact beta = 2 symmetric Cauchy density.
double sigma_form_residual(int N, const Rational& alpha, double s);

}  // namespace rmt
