#pragma once

// Ensemble descriptions, weights, Selberg-type normalisations and the exact beta = 2
// one-point densities, including their continuation to complex parameters.

#include <string>
#include <vector>

#include "rmt/poly.hpp"
#include "rmt/rational.hpp"

namespace rmt {

enum class Family { JacobiSym, Jacobi01, CauchySym, CauchyNonSym, CircularJacobi };

std::string to_string(Family f);

/// Which ensemble, its size and its parameters. Jacobi families use a, b; Cauchy
/// families use alpha. `continued` lifts the convergence restrictions so that
/// formulas may be evaluated at continued parameter values.
struct EnsembleSpec {
    Family family = Family::JacobiSym;
    int N = 1;
    Rational beta{2};
    ComplexRational a{0};
    ComplexRational b{0};
    ComplexRational alpha{0};
    bool continued = false;

    static EnsembleSpec jacobi_sym(int N, const Rational& beta, const ComplexRational& a);
    static EnsembleSpec jacobi(int N, const Rational& beta, const ComplexRational& a, const ComplexRational& b);
    static EnsembleSpec cauchy_sym(int N, const Rational& beta, const Rational& alpha);
    static EnsembleSpec cauchy(int N, const Rational& beta, const ComplexRational& alpha);
    static EnsembleSpec circular_jacobi(int N, const Rational& beta, const Rational& alpha);

    bool is_jacobi() const { return family == Family::JacobiSym || family == Family::Jacobi01; }
    bool is_cauchy() const { return family == Family::CauchySym || family == Family::CauchyNonSym; }

    /// Cauchy exponent eta = -beta (N - 1) / 2 - 1 - alpha.
    ComplexRational eta() const;

    /// Throws std::invalid_argument when an invariant of the family is violated.
    void validate() const;
};

/// eta = -beta (N - 1) / 2 - 1 - alpha for arbitrary (possibly formal) N.
ComplexRational cauchy_exponent(const Rational& N, const Rational& beta, const ComplexRational& alpha);

/// Weight of the ensemble: (1-x)^a (1+x)^b on (-1,1) for Jacobi, x^a (1-x)^b on (0,1)
/// for Jacobi01, (1-ix)^eta (1+ix)^conj(eta) for Cauchy. Complex x uses principal logs.
struct WeightFn {
    EnsembleSpec spec;
    cdouble operator()(cdouble x) const;
    double operator()(double x) const { return (*this)(cdouble(x)).real(); }
};

enum class WeightKind { Jacobi, Cauchy };

/// int x^k (1 - x^2)^e dx over (-1,1), or int x^k (1 + x^2)^e dx over the line, written
/// as base * ratio with base the k = 0 integral and ratio exact.
struct OneDimMoment {
    Rational ratio;            // value / base, exact; 0 for odd k
    cdouble base{0.0, 0.0};    // k = 0 integral, NaN when only the ratio was requested
    cdouble value() const { return sgn(ratio) == 0 ? cdouble(0.0) : base * ratio.get_d(); }
};

/// Throws PoleError when the Cauchy base carries a divergent tan(pi e) (half-integer e)
/// unless ratio_only is set. Convergence is not checked: outside the convergent range
/// the result is the analytic continuation.
OneDimMoment one_dim_moment(WeightKind kind, const Rational& exponent, unsigned k, bool ratio_only = false);
cdouble one_dim_moment(WeightKind kind, cdouble exponent, unsigned k);

/// int (1 + x^2)^e dx = sqrt(pi) Gamma(-e - 1/2) / Gamma(-e), finite at half-integer e.
cdouble cauchy_line_base(const Rational& e);

/// prod_j Gamma(l j + a + b + 1) Gamma(l (j + 1) + 1) / (Gamma(l j + a + 1) Gamma(l j + b + 1) Gamma(1 + l)).
cdouble morris_product(int N, cdouble a, cdouble b, double lambda);
/// Selberg product prod_j Gamma(a + 1 + l j) Gamma(b + 1 + l j) Gamma(1 + l (j + 1)) / (Gamma(a + b + 2 + l (N + j - 1)) Gamma(1 + l)).
cdouble selberg_product(int N, cdouble a, cdouble b, double lambda);

/// Partition functions of the Cauchy and Jacobi ensembles.
cdouble norm_cauchy(const EnsembleSpec& spec);
cdouble norm_jacobi(const EnsembleSpec& spec);

/// Relative residual of the identity linking the Cauchy normalisation at alpha to the
/// Jacobi one at a = b = eta (or a = conj(eta), b = eta for complex alpha). beta even.
double check_norm_identity(int N, const Rational& beta, cdouble alpha);

/// Jacobi polynomials P_0..P_n at x via the three-term recurrence; complex parameters allowed.
std::vector<cdouble> jacobi_polynomials(unsigned n, cdouble a, cdouble b, cdouble x);

/// int_{-1}^{1} (1-x)^a (1+x)^b P_n^2 dx (analytically continued).
cdouble jacobi_norm(unsigned n, cdouble a, cdouble b);

/// int (1-ix)^eta (1+ix)^conj(eta) p_n(x)^2 dx with p_n(x) = i^{-n} P_n^{(eta, conj eta)}(ix).
cdouble cauchy_norm(unsigned n, cdouble eta);

/// Exact beta = 2 one-point density sum_{n<N} w p_n^2 / h_n, for complex x and parameters.
/// Throws DegenerateParameterError when some h_n vanishes or diverges.
cdouble density_beta2(const EnsembleSpec& spec, cdouble x);

/// Relative residual of rho_Cy(ix) = factor * rho_J(x) with the continued Jacobi parameters.
/// Real alpha uses factor -cot(pi alpha); complex alpha the sine ratio. beta = 2.
double check_continuation_relation(int N, cdouble alpha, double x);

/// w'/w = g/f as polynomials; f = 1 - x^2 for Jacobi on (-1,1), 1 + x^2 for Cauchy.
struct LogDerivative {
    Poly<ComplexRational> g;
    Poly<ComplexRational> f;
};
LogDerivative weight_log_derivative(const EnsembleSpec& spec);

/// rho(x) = scale * w(x) * q(x) with q exact. Derivatives are exact: d^j(w q) = w T_j / f^j
/// with T_0 = q and T_{j+1} = f T_j' + (g - j f') T_j.
class PolyWeightDensity {
public:
    PolyWeightDensity(EnsembleSpec spec, Poly<ComplexRational> q, cdouble scale);

    const EnsembleSpec& spec() const { return spec_; }
    const Poly<ComplexRational>& q() const { return q_; }
    cdouble scale() const { return scale_; }

    cdouble operator()(cdouble x) const;
    cdouble derivative(unsigned j, cdouble x) const;
    /// T_j of the recursion above.
    const Poly<ComplexRational>& t_poly(unsigned j) const;

    /// Same weight, polynomial multiplied by p (e.g. r = (1 - x^2) rho).
    PolyWeightDensity times(const Poly<ComplexRational>& p) const;

private:
    EnsembleSpec spec_;
    Poly<ComplexRational> q_;
    cdouble scale_;
    LogDerivative ld_;
    mutable std::vector<Poly<ComplexRational>> t_;
};

/// The beta = 2 density of a Jacobi (-1,1) or Cauchy spec as w * q with q in Q(i)[x]
/// and only the overall 1/h_0 left in floating point.
PolyWeightDensity density_beta2_exact(const EnsembleSpec& spec);

}  // namespace rmt
