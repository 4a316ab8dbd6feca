#pragma once

// Independent checks on the recurrence and ODE results: quadrature of known densities,
// brute-force small-N integrals over the joint law, and Metropolis sampling.

#include <cstdint>
#include <ostream>
#include <vector>

#include "rmt/ensembles.hpp"
#include "rmt/quadrature.hpp"

namespace rmt {

/// int x^{2k} rho over the support. beta = 2 uses the exact density; beta = 4 the density
/// built from the fifth-order operator. Jacobi through x = cos(theta), Cauchy through x = tan(t).
QuadResult quad_moment(const EnsembleSpec& spec, unsigned k, double tol = 1e-12);

/// Even beta: m_{2k} from the monomial expansion of prod |x_i - x_j|^beta integrated term by
/// term with the exact one-dimensional moment ratios. Valid at continued parameters.
Rational brute_force_moment_exact(const EnsembleSpec& spec, unsigned k);

/// Even beta: rho = w q exactly, q from integrating the expansion over N - 1 variables.
PolyWeightDensity brute_force_density(const EnsembleSpec& spec);

/// Any beta, N <= 3: nested adaptive quadrature over the ordered region x_1 < ... < x_N.
QuadResult brute_force_moment(const EnsembleSpec& spec, unsigned k, double tol = 1e-11);

struct McmcOptions {
    std::size_t sweeps = 100000;  // retained sweeps after burn-in
    std::size_t burn_in = 1000;
    std::size_t thin = 10;        // keep every thin-th configuration
    std::uint64_t seed = 1;
};

struct McmcResult {
    std::vector<std::vector<double>> samples;  // kept configurations, sorted ascending
    double acceptance = 0.0;                   // over the retained sweeps
    double step = 0.0;                         // proposal half-width after tuning
    bool acceptance_in_range = false;          // 20% .. 40%

    /// (1/N) <sum x^k> over kept samples, with its standard error.
    std::pair<double, double> moment(unsigned k) const;
    /// Density of eigenvalues per unit length divided by N, bins of equal width on [lo, hi].
    std::vector<double> histogram(double lo, double hi, unsigned bins) const;
    void write_csv(std::ostream& os) const;
};

/// Random-walk Metropolis on sum log w(x_l) + beta sum log |x_k - x_j|, one coordinate at a time.
/// The step is tuned towards 30% acceptance during burn-in, then frozen.
McmcResult mcmc_sample(const EnsembleSpec& spec, const McmcOptions& opt);

}  // namespace rmt
