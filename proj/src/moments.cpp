#include "rmt/moments.hpp"

#include <cmath>
#include <string>

#include "rmt/errors.hpp"
#include "rmt/series.hpp"
#include "rmt/special_fn.hpp"

namespace rmt {

namespace {

template <typename T>
T lift(const Rational& q) {
    if constexpr (std::is_same_v<T, cdouble>)
        return cdouble(q.get_d(), 0.0);
    else
        return T(q);
}

bool vanishes(const Rational& q) { return sgn(q) == 0; }
bool vanishes(const cdouble& z) { return std::abs(z) < 1e-13; }

std::string str(const Rational& q) { return q.get_str(); }


void require_beta(const Rational& beta) {
    if (beta != 1 && beta != 2 && beta != 4) throw std::invalid_argument("beta must be 1, 2 or 4, got " + str(beta));
}

// beta = 2, from mu_{k-1}, mu_k to mu_{k+1}
template <typename T>
std::vector<T> jacobi_beta2(const T& n, const T& a, unsigned K) {
    const T one = lift<T>(1), two = lift<T>(2), four = lift<T>(4);
    std::vector<T> mu;
    const T d0 = one - four * (a + n) * (a + n);
    if (vanishes(d0)) throw DegenerateParameterError("mu_0 has 1 - 4 (a + N)^2 = 0 in its denominator");
    mu.push_back(two * n * (a + n) * (two * a + n) / d0);
    for (unsigned k = 0; k < K; ++k) {
        const Rational kk(k);
        const T lead = lift<T>(2 * kk + 4) * (lift<T>((2 * kk + 3) * (2 * kk + 3)) - four * (a + n) * (a + n));
        if (vanishes(lead))
            throw DegenerateParameterError("leading coefficient (2k+4)[(2k+3)^2 - 4(a+N)^2] vanishes at k = " +
                                           std::to_string(k));
        T rhs = lift<T>(2 * (2 * kk + 1)) * (lift<T>((2 * kk + 2) * (2 * kk + 2)) - two * n * (n + two * a)) * mu[k];
        if (k > 0) rhs = rhs - lift<T>((2 * kk + 1) * (2 * kk) * (2 * kk - 1)) * mu[k - 1];
        mu.push_back(rhs / lead);
    }
    return mu;
}

// beta = 1, 4: mu_0, mu_1 closed forms, then five-term recurrence. f_{-2} carries (2k)(2k-2) and
// f_{-1} carries (2k), so k = 0, 1 never read mu_{-1}, mu_{-2}.
template <typename T>
std::vector<T> jacobi_beta14(const T& N, const Rational& beta, const T& a, unsigned K) {
    const Rational kappa = beta / 2 - 1;
    const T ak = a / lift<T>(kappa);
    const T one = lift<T>(1);
    const T at = ak * (ak - lift<T>(2));
    const T ct = lift<T>(2) * ak + lift<T>(4 * kappa) * N - one;
    const T den0 = lift<T>(8) * ct * (ct - lift<T>(3)) * lift<T>(1 - beta / 2);
    if (vanishes(den0)) throw DegenerateParameterError("mu_0 closed form has a vanishing denominator (~c = 0 or 3)");
    std::vector<T> mu;
    mu.push_back((ct - one) * (ct + lift<T>(2) * ak - lift<T>(3)) * (ct - lift<T>(2) * ak + one) / den0);
    if (K == 0) return mu;
    const T c2 = ct * ct;
    const T den1 = lift<T>(4) * (c2 - lift<T>(4)) * (ct - lift<T>(7));
    if (vanishes(den1)) throw DegenerateParameterError("mu_1 closed form has a vanishing denominator (~c = +-2 or 7)");
    mu.push_back(((c2 - lift<T>(5)) * (ct - lift<T>(7)) - lift<T>(4) * at * (ct - one)) / den1 * mu[0]);
    for (unsigned k = 0; k + 1 < K; ++k) {
        const auto f = jacobi_recurrence_coeffs<T>(at, ct, Rational(k));
        if (vanishes(f[4]))
            throw DegenerateParameterError("leading coefficient f_2 vanishes at k = " + std::to_string(k));
        T acc = f[2] * mu[k] + f[3] * mu[k + 1];
        if (k >= 1) acc = acc + f[1] * mu[k - 1];
        if (k >= 2) acc = acc + f[0] * mu[k - 2];
        mu.push_back(lift<T>(-1) * acc / f[4]);
    }
    return mu;
}

// beta = 2 Cauchy, from mu_{k-1}, mu_k to mu_{k+1}
template <typename T>
std::vector<T> cauchy_beta2(const T& N, const T& alpha, unsigned K) {
    const auto L = [](const Rational& q) { return lift<T>(q); };
    const T d0 = (L(2) * alpha - L(1)) * (L(2) * alpha + L(1));
    if (vanishes(d0)) throw DegenerateParameterError("mu_0 has (2 alpha - 1)(2 alpha + 1) = 0 in its denominator");
    std::vector<T> mu{L(2) * N * alpha * (N + L(2) * alpha) / d0};
    for (unsigned k = 0; k < K; ++k) {
        const Rational kk(k);
        const T lead = L(2 * kk + 4) * (L((2 * kk + 3) * (2 * kk + 3)) - L(4) * alpha * alpha);
        if (vanishes(lead))
            throw DegenerateParameterError("leading coefficient (2k+4)[(2k+3)^2 - 4 alpha^2] vanishes at k = " +
                                           std::to_string(k));
        T rhs = L(-2 * (2 * kk + 1)) * (L((2 * kk + 2) * (2 * kk + 2)) + L(2) * N * (N + L(2) * alpha)) * mu[k];
        if (k > 0) rhs = rhs - L((2 * kk + 1) * (2 * kk) * (2 * kk - 1)) * mu[k - 1];
        mu.push_back(rhs / lead);
    }
    return mu;
}

}  // namespace

template <typename T>
std::array<T, 5> jacobi_recurrence_coeffs(const T& at, const T& ct, const Rational& k) {
    const auto L = [](const Rational& q) { return lift<T>(q); };
    const Rational k2 = k * k, k3 = k2 * k, k4 = k3 * k, k5 = k4 * k;
    const T c2 = ct * ct;
    std::array<T, 5> f;
    f[0] = L(-4 * (2 * k + 1) * (2 * k) * (2 * k - 1) * (2 * k - 2) * (2 * k - 3));
    f[1] = L((2 * k + 1) * (2 * k) * (2 * k - 1)) *
           (L(20) * at - L(5) * c2 + L(16 * k * (4 * k + 5) + 77));
    const T inner = c2 - L(4) * at - L(30 * k2 + 67 * k + 42);
    f[2] = L(2 * k + 1) * (L(8 * (5 * k + 8) * (2 * k + 3)) * at - inner * inner +
                           L(516 * k4 + 2292 * k3 + 3653 * k2 + 2534 * k + 673));
    f[3] = c2 * ((c2 - L(4) * at) * L(4 * k + 7) - L(120 * k3 + 656 * k2 + 1210 * k + 746)) +
           at * L(160 * k3 + 736 * k2 + 1128 * k + 580) +
           L(512 * k5 + 4480 * k4 + 16056 * k3 + 29360 * k2 + 27270 * k + 10243);
    f[4] = L(-2 * (k + 3)) * (ct + L(4 * k + 11)) * (ct + L(2 * k + 4)) * (ct - L(2 * k + 4)) * (ct - L(4 * k + 11));
    return f;
}

template std::array<Rational, 5> jacobi_recurrence_coeffs<Rational>(const Rational&, const Rational&, const Rational&);
template std::array<cdouble, 5> jacobi_recurrence_coeffs<cdouble>(const cdouble&, const cdouble&, const Rational&);
template std::array<Poly<Rational>, 5> jacobi_recurrence_coeffs<Poly<Rational>>(const Poly<Rational>&,
                                                                                const Poly<Rational>&, const Rational&);
template std::array<Laurent, 5> jacobi_recurrence_coeffs<Laurent>(const Laurent&, const Laurent&, const Rational&);

namespace {

// a -> a0 limit of the recurrence run at a0 + eps
std::vector<Rational> jacobi_limit(const Rational& N, const Rational& beta, const Rational& a, unsigned K) {
    const Laurent::PrecisionScope scope(16);
    const Laurent at = Laurent(a) + Laurent::monomial(1);
    const Laurent n(N);
    const auto series = beta == 2 ? jacobi_beta2<Laurent>(n, at, K) : jacobi_beta14<Laurent>(n, beta, at, K);
    std::vector<Rational> mu;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const Laurent& s = series[k];
        if (s.valuation() < 0)
            throw DegenerateParameterError("mu_" + std::to_string(k) + " diverges as a -> " + str(a));
        if (s.precision() <= 0)
            throw DegenerateParameterError("recurrence limit at a = " + str(a) + " lost all precision by mu_" +
                                           std::to_string(k));
        mu.push_back(s.coeff(0));
    }
    return mu;
}

}  // namespace

std::vector<Rational> mu_jacobi_values(const Rational& N, const Rational& beta, const Rational& a, unsigned K) {
    require_beta(beta);
    try {
        if (beta == 2) return jacobi_beta2<Rational>(N, a, K);
        return jacobi_beta14<Rational>(N, beta, a, K);
    } catch (const DegenerateParameterError&) {
        return jacobi_limit(N, beta, a, K);
    }
}

std::vector<cdouble> mu_jacobi_values_complex(const Rational& N, const Rational& beta, cdouble a, unsigned K) {
    require_beta(beta);
    const cdouble n(N.get_d(), 0.0);
    if (beta == 2) return jacobi_beta2<cdouble>(n, a, K);
    return jacobi_beta14<cdouble>(n, beta, a, K);
}

std::vector<Rational> mu_cauchy_values(const Rational& N, const Rational& beta, const Rational& alpha, unsigned K) {
    require_beta(beta);
    std::vector<Rational> mu;
    if (beta == 2) return cauchy_beta2<Rational>(N, alpha, K);
    // g_l = (-1)^{l-1} f_l at a = eta is the same as mu^Cy_k = (-1)^{k-1} mu^J_k(eta)
    const Rational eta = cauchy_exponent(N, beta, alpha).real();
    mu = mu_jacobi_values(N, beta, eta, K);
    for (std::size_t k = 0; k < mu.size(); k += 2) mu[k] = -mu[k];
    return mu;
}

std::vector<std::vector<Rational>> mu_cauchy_large_n(const Rational& beta, const Rational& alpha_hat, unsigned K,
                                                      unsigned L) {
    require_beta(beta);
    // t = 1/N; every recurrence step trades powers of N, so carry generous slack
    const Laurent::PrecisionScope scope(static_cast<long>(L) + 8 * static_cast<long>(K) + 24);
    const Laurent N = Laurent::monomial(-1);
    const Laurent alpha = Laurent(alpha_hat * beta / 2) * N;
    std::vector<Laurent> mu;
    if (beta == 2) {
        mu = cauchy_beta2<Laurent>(N, alpha, K);
    } else {
        const Laurent eta = Laurent(-beta / 2) * (N - Laurent(1)) - Laurent(1) - alpha;
        mu = jacobi_beta14<Laurent>(N, beta, eta, K);
        for (std::size_t k = 0; k < mu.size(); k += 2) mu[k] = -mu[k];
    }
    std::vector<std::vector<Rational>> out;
    for (std::size_t k = 0; k < mu.size(); ++k) {
        const Laurent scaled = mu[k].shifted(1);  // mu_k / N
        if (scaled.valuation() < 0) throw std::logic_error("mu_k / N grows with N");
        if (scaled.precision() <= static_cast<long>(L))
            throw TruncationError("large-N expansion of mu_" + std::to_string(k) + " lost precision");
        std::vector<Rational> row;
        for (unsigned l = 0; l <= L; ++l) row.push_back(scaled.coeff(l));
        out.push_back(std::move(row));
    }
    return out;
}

RationalSeq mu_jacobi(const EnsembleSpec& spec, unsigned K) {
    if (spec.family != Family::JacobiSym || spec.a != spec.b || !spec.a.is_real())
        throw std::invalid_argument("mu_jacobi needs a symmetric Jacobi spec with real a");
    RationalSeq s;
    s.values = mu_jacobi_values(Rational(spec.N), spec.beta, spec.a.real(), K);
    s.spec = spec;
    s.kind = SeqKind::JacobiDiff;
    s.literal_below = s.values.size();
    return s;
}

RationalSeq mu_cauchy(const EnsembleSpec& spec, unsigned K) {
    if (spec.family != Family::CauchySym) throw std::invalid_argument("mu_cauchy needs a symmetric Cauchy spec");
    RationalSeq s;
    s.values = mu_cauchy_values(Rational(spec.N), spec.beta, spec.alpha.real(), K);
    s.spec = spec;
    s.kind = SeqKind::CauchySum;
    // literal for k < alpha - 1/2
    const Rational bound = spec.alpha.real() - Rational(1, 2);
    std::size_t n = 0;
    while (n < s.values.size() && Rational(static_cast<long>(n)) < bound) ++n;
    s.literal_below = n;
    return s;
}

std::vector<Rational> m2k_from_mu(const std::vector<Rational>& mu, SeqKind kind, const Rational& N) {
    if (kind == SeqKind::Rescaled) throw std::invalid_argument("m2k_from_mu needs differences or sums, not mu~");
    std::vector<Rational> m{N};
    for (const auto& v : mu) m.push_back(kind == SeqKind::JacobiDiff ? Rational(m.back() + v) : Rational(v - m.back()));
    return m;
}

std::vector<Rational> m2k_from_mu(const RationalSeq& seq) { return m2k_from_mu(seq.values, seq.kind, Rational(seq.spec.N)); }

Rational jacobi_m2_binomial(const Rational& N, const Rational& beta, const Rational& a) {
    const Rational b = beta / 2;
    const Rational num = 2 * a * a + a * (-b * (6 - 5 * N) + 6) + b * b * (N - 1) * (3 * N - 4) - b * (9 - 7 * N) + 4;
    const Rational den = 2 * (2 * a - b * (3 - 2 * N) + 2) * (2 * a + beta * (N - 1) + 3);
    if (sgn(den) == 0) throw DegenerateParameterError("second moment on (0,1) has a vanishing denominator");
    const Rational s2 = N * num / den;
    // sum_s binom(2, s) (-2)^s <sum x^s>: s = 0, 1, 2
    return N - 4 * (N / 2) + 4 * s2;
}

Rational hahn_mu_exact(int N, const Rational& a, unsigned k) {
    if (N < 1) throw std::invalid_argument("hahn_mu needs N >= 1");
    const Rational n(N);
    const unsigned deg = static_cast<unsigned>(N - 1);
    const Rational bp = Rational(1, 2) - (a + n);  // second parameter of s_{N-1}
    const Rational mu0 = mu_jacobi_values(n, 2, a, 0)[0];
    // mu~_0 Gamma(k+1/2) / Gamma(k+N+a+3/2) = mu_0 (1/2)_k / (N+a+3/2)_k
    const Rational pref = mu0 * pochhammer(Rational(1, 2), k) * gamma_ratio(n + a + Rational(3, 2), k);
    // s_{N-1}(i(k+1); 1, b') with i^{1-N} absorbed: (2)_n (1+b')_n / n! 3F2(-n, n+1+2b', -k; 2, 1+b'; 1)
    const Rational s = pochhammer(Rational(2), deg) * pochhammer(1 + bp, deg) / pochhammer(Rational(1), deg) *
                       hyp3f2_terminating(deg, deg + 1 + 2 * bp, Rational(-static_cast<long>(k)), Rational(2), 1 + bp);
    const Rational norm = pochhammer(Rational(3, 2) - (a + n), deg);
    if (sgn(norm) == 0) throw PoleError("hahn_mu: (3/2 - (a+N))_{N-1} vanishes");
    return pref * s / (n * norm);
}

cdouble hahn_mu(int N, const Rational& a, cdouble k) {
    if (N < 1) throw std::invalid_argument("hahn_mu needs N >= 1");
    const double n = N, ad = a.get_d();
    const unsigned deg = static_cast<unsigned>(N - 1);
    const cdouble I(0.0, 1.0);
    const double mu0 = mu_jacobi_values(Rational(N), 2, a, 0)[0].get_d();
    const cdouble log_pref = log_gamma(cdouble(n + ad + 1.5)) - std::log(std::sqrt(M_PI)) + log_gamma(k + 0.5) -
                             log_gamma(k + n + ad + 1.5);
    const cdouble s = continuous_hahn_sym(deg, I * (k + 1.0), 1.0, 0.5 - (ad + n));
    const cdouble norm = pochhammer(cdouble(1.5 - (ad + n)), deg);
    if (std::abs(norm) == 0.0) throw PoleError("hahn_mu: (3/2 - (a+N))_{N-1} vanishes");
    return mu0 * std::exp(log_pref) * std::pow(I, 1 - N) * s / (n * norm);
}

Poly<Rational> hahn_polynomial_part(int N, const Rational& a) {
    const unsigned deg = static_cast<unsigned>(N - 1);
    const Rational bp = Rational(1, 2) - (a + Rational(N));
    const Rational up = deg + 1 + 2 * bp;
    using PR = Poly<Rational>;
    PR acc, falling(Rational(1));  // falling = (-k)_j as a polynomial in k
    Rational coef(1);
    for (unsigned j = 0; j <= deg; ++j) {
        acc += falling * PR(coef);
        // next term of the 3F2
        const Rational denom = (Rational(2) + j) * (1 + bp + j) * (j + 1);
        if (sgn(denom) == 0) throw PoleError("hahn_polynomial_part: lower parameter hits zero");
        coef *= (Rational(-static_cast<long>(deg)) + j) * (up + j) / denom;
        falling *= PR{Rational(j), Rational(-1)};  // (-k + j)
    }
    return acc;
}

std::vector<cdouble> hahn_zeros(int N, const Rational& a) {
    const auto p = hahn_polynomial_part(N, a);
    std::vector<cdouble> c;
    for (const auto& q : p.coeffs()) c.emplace_back(q.get_d(), 0.0);
    return polynomial_roots(c);
}

std::vector<Rational> gue_moments(const Rational& N, unsigned K) {
    std::vector<Rational> m{N};
    for (unsigned k = 0; k < K; ++k) {
        const Rational kk(k);
        Rational next = 2 * N * (2 * kk + 1) * m[k];
        if (k > 0) next += kk * (2 * kk + 1) * (2 * kk - 1) * m[k - 1];
        m.push_back(next / (kk + 2));
    }
    return m;
}

double harer_zagier_scaled(int N, const Rational& a, unsigned k) {
    const auto mu = mu_jacobi_values(Rational(N), 2, a, k);
    return Rational(-mu[k] * pow(Rational(2 * a), static_cast<long>(k))).get_d();
}

DualityResult duality_check(const Rational& N, const Rational& beta, const Rational& alpha, unsigned K) {
    DualityResult r;
    const unsigned nmu = K == 0 ? 0 : K - 1;
    r.lhs = m2k_from_mu(mu_cauchy_values(N, beta, alpha, nmu), SeqKind::CauchySum, N);
    const Rational Nd = -beta * N / 2, bd = 4 / beta, ad = -2 * alpha / beta;
    const auto dual = m2k_from_mu(mu_cauchy_values(Nd, bd, ad, nmu), SeqKind::CauchySum, Nd);
    r.lhs.resize(K + 1);
    for (std::size_t k = 0; k <= K; ++k) r.rhs.push_back(-2 / beta * dual[k]);
    r.holds = r.lhs == r.rhs;
    return r;
}

}  // namespace rmt
