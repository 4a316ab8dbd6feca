#include "rmt/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "rmt/errors.hpp"
#include "rmt/moments.hpp"
#include "rmt/odes.hpp"
#include "rmt/special_fn.hpp"

namespace rmt {

namespace {

constexpr double kPi = std::numbers::pi;

void require_beta(const Rational& beta) {
    if (beta != 1 && beta != 2 && beta != 4) throw std::invalid_argument("beta must be 1, 2 or 4");
}

void require_positive(const Rational& ah) {
    if (sgn(ah) <= 0) throw std::invalid_argument("alpha_hat must be positive");
}

// Gauss-Jordan over Q. Returns nullopt when inconsistent; throws if the solution is not unique.
std::optional<std::vector<Rational>> solve_exact(std::vector<std::vector<Rational>> A, std::vector<Rational> b) {
    const std::size_t rows = A.size(), cols = rows ? A[0].size() : 0;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && sgn(A[p][c]) == 0) ++p;
        if (p == rows) continue;
        std::swap(A[p], A[r]);
        std::swap(b[p], b[r]);
        const Rational inv = 1 / A[r][c];
        for (auto& v : A[r]) v *= inv;
        b[r] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || sgn(A[i][c]) == 0) continue;
            const Rational f = A[i][c];
            for (std::size_t j = c; j < cols; ++j) A[i][j] -= f * A[r][j];
            b[i] -= f * b[r];
        }
        pivots.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (sgn(b[i]) != 0) return std::nullopt;
    if (pivots.size() != cols) throw RankDeficiencyError("basis coefficients are not determined uniquely");
    std::vector<Rational> x(cols);
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = b[i];
    return x;
}

Rational half_binomial(unsigned j) {
    // binom(1/2, j)
    Rational r(1);
    for (unsigned i = 0; i < j; ++i) r *= (Rational(1, 2) - i) / (i + 1);
    return r;
}

}  // namespace

// ---------------------------------------------------------------- limiting density

double GlobalDensity::operator()(double x) const {
    if (x <= u_minus || x >= u_plus) return 0.0;
    return A * std::sqrt((u_plus - x) * (x - u_minus)) / (1.0 + x * x);
}

GlobalDensity global_density(cdouble alpha_hat) {
    const double a1 = alpha_hat.real(), a2 = alpha_hat.imag();
    if (!(a1 > 0.0)) throw std::invalid_argument("global_density needs Re alpha_hat > 0");
    GlobalDensity g;
    g.alpha_hat = alpha_hat;
    const double root = std::sqrt((a1 * a1 + a2 * a2) * (1.0 + 2.0 * a1));
    g.u_minus = (-(1.0 + a1) * a2 - root) / (a1 * a1);
    g.u_plus = (-(1.0 + a1) * a2 + root) / (a1 * a1);
    g.A = a1 / kPi;
    return g;
}

double global_density(cdouble alpha_hat, double x) { return global_density(alpha_hat)(x); }

double global_density_circular(double alpha_hat, double theta) {
    if (!(alpha_hat > 0.0)) throw std::invalid_argument("global_density_circular needs alpha_hat > 0");
    const double edge = (1.0 + 2.0 * alpha_hat) / (alpha_hat * alpha_hat);  // cot^2(theta_c / 2)
    const double ct = 1.0 / std::tan(0.5 * theta);
    const double gap = edge - ct * ct;
    if (theta <= 0.0 || theta >= 2 * kPi || gap <= 0.0) return 0.0;
    return alpha_hat / (2 * kPi) * std::sqrt(gap);
}

Rational mu_hat(const Rational& alpha_hat, unsigned k) {
    require_positive(alpha_hat);
    const Rational c = 1 + 2 * alpha_hat;
    return pow(c, static_cast<long>(k) + 1) * Rational(catalan(k)) / pow(Rational(2 * alpha_hat), 2 * static_cast<long>(k) + 1);
}

namespace {

// sqrt(a^2 x^2 - 1 - 2a) with the cut on the support and ~ a x at infinity
cdouble edge_root(double ah, cdouble x, bool boundary_limit) {
    const double up = std::sqrt(1.0 + 2.0 * ah) / ah;
    if (x.imag() == 0.0) {
        const double xr = x.real();
        if (std::abs(xr) == up) throw BranchError("resolvent requested at an edge of the support");
        if (std::abs(xr) < up) {
            if (!boundary_limit) throw BranchError("real x inside the support; pass the boundary-limit flag for x - i0");
            return cdouble(0.0, -ah * std::sqrt(up - xr) * std::sqrt(up + xr));
        }
    }
    return ah * std::sqrt(x - up) * std::sqrt(x + up);
}

}  // namespace

cdouble generating_H(double alpha_hat, cdouble x) {
    return alpha_hat * x * x - x * edge_root(alpha_hat, x, false);
}

cdouble generating_G(double alpha_hat, cdouble x) {
    return (generating_H(alpha_hat, x) + x * x) / (1.0 + x * x);
}

double sokhotski_plemelj_density(double alpha_hat, double s, double eps) {
    return generating_G(alpha_hat, cdouble(s, -eps)).imag() / (kPi * s);
}

Rational limit_recurrence_defect(const Rational& beta, const Rational& alpha_hat, unsigned k) {
    if (beta != 1 && beta != 4) throw std::invalid_argument("limit_recurrence_defect is for beta = 1, 4");
    using P = Poly<Rational>;
    const P N = P::x();
    const Rational kappa = beta / 2 - 1;
    const P alpha = N * P(alpha_hat * beta / 2);
    const P eta = P(-beta / 2) * (N - P(Rational(1))) - P(Rational(1)) - alpha;
    const P ak = eta * P(Rational(1) / kappa);
    const P at = ak * (ak - P(Rational(2)));
    const P ct = P(Rational(2)) * ak + P(4 * kappa) * N - P(Rational(1));
    const auto f = jacobi_recurrence_coeffs<P>(at, ct, Rational(k));
    int top = 0;
    for (const auto& fl : f) top = std::max(top, fl.degree());
    Rational defect(0);
    for (int l = -2; l <= 2; ++l) {
        if (static_cast<int>(k) + l < 0) continue;
        const Rational sign = (l % 2 == 0) ? 1 : -1;
        defect += sign * f[static_cast<std::size_t>(l + 2)][static_cast<std::size_t>(top)] *
                  mu_hat(alpha_hat, static_cast<unsigned>(static_cast<int>(k) + l));
    }
    return defect;
}

// ---------------------------------------------------------------- resolvent series

bool SeriesResidual::vanishes() const {
    return std::all_of(coefficients.begin(), coefficients.end(), [](const Rational& q) { return sgn(q) == 0; });
}

Poly<Rational> resolvent_h(const Rational& N, const Rational& a) {
    // polynomial in x of degree 2
    const Rational pre = 8 * (2 * N + 2 * a - 1);
    const Rational c0 = (2 * N + 1) * (8 * N * N - 1) + 4 * N * a * (6 * N + 3) + a * a * (5 + 8 * N) - 2 * a;
    const Rational c2 = (2 * N + 1) + 4 * N * a + a * a * (3 - 4 * N) - 2 * a * a * a;
    return Poly<Rational>({pre * c0, Rational(0), pre * c2});
}

SeriesResidual resolvent_inhomogeneous_check(const Rational& beta, int N, const Rational& alpha, unsigned M,
                                             unsigned moments) {
    require_beta(beta);
    OpParams p;
    p.N = N;
    p.beta = beta;
    p.alpha = ComplexRational(alpha);
    const LinearDiffOp op = build_operator(beta == 2 ? OpKind::Cy2 : OpKind::Cyb, p);
    Poly<Rational> rhs;
    if (beta == 2) rhs = Poly<Rational>(4 * (N + alpha) * (N + 2 * alpha));
    else if (beta == 4) rhs = resolvent_h(N, alpha);
    else rhs = resolvent_h(frac(-N, 2), -2 * alpha);

    int top = rhs.degree();
    int reach = 0;  // max_j (deg c_j - j)
    std::vector<Poly<Rational>> c;
    for (unsigned j = 0; j < op.coeffs.size(); ++j) {
        std::vector<Rational> re;
        for (const auto& z : op.coeffs[j].coeffs()) {
            if (!z.is_real()) throw std::logic_error("symmetric Cauchy operator has complex coefficients");
            re.push_back(z.real());
        }
        c.emplace_back(std::move(re));
        top = std::max(top, c.back().degree() - 1 - static_cast<int>(j));
        reach = std::max(reach, c.back().degree() - static_cast<int>(j));
    }
    // m_0 .. m_K: the series W / N is known through x^-(K+1)
    const unsigned K = moments ? moments - 1 : M + static_cast<unsigned>(std::max(reach, 0)) + 1;
    const auto spec = EnsembleSpec::cauchy_sym(N, beta, alpha);
    std::vector<Rational> even = m2k_from_mu(mu_cauchy(spec, K / 2 + 1));
    std::vector<Rational> w(K + 2, Rational(0));  // coefficient of y^j, y = 1/x
    for (unsigned k = 0; k <= K; k += 2) w[k + 1] = even[k / 2] / N;
    const long wprec = static_cast<long>(K) + 2;
    const long big = wprec + 64;
    const Laurent W(0, w, wprec);

    Laurent acc(Rational(0), big);
    Laurent deriv = W;
    for (unsigned j = 0; j < c.size(); ++j) {
        // c_j(x) = sum_i c_ji y^-i
        std::vector<Rational> cj(c[j].coeffs().rbegin(), c[j].coeffs().rend());
        if (!cj.empty()) acc = acc + Laurent(-c[j].degree(), cj, big) * deriv;
        deriv = -(deriv.derivative().shifted(2));  // d/dx = -y^2 d/dy
    }
    std::vector<Rational> h(rhs.coeffs().rbegin(), rhs.coeffs().rend());
    if (!h.empty()) acc = acc - Laurent(-rhs.degree(), h, big);
    if (acc.precision() <= static_cast<long>(M))
        throw TruncationError("resolvent check: " + std::to_string(K + 1) + " moments decide the residual only through x^-" +
                              std::to_string(std::max(0L, acc.precision() - 1)));
    SeriesResidual r;
    r.top_power = top;
    for (long e = -top; e <= static_cast<long>(M); ++e) r.coefficients.push_back(acc.coeff(e));
    return r;
}

// ---------------------------------------------------------------- algebraic terms

namespace {

using Part = ResolventTerm::Part;
using P = Poly<Rational>;

struct Field {
    Rational ah, c, e;
    explicit Field(const Rational& a) : ah(a), c(1 + 2 * a), e((1 + a) * (1 + a)) {}
    P q() const { return P({e, Rational(0), Rational(1)}); }            // u^2 + e
    P x2() const { return P({c / (ah * ah), Rational(0), 1 / (ah * ah)}); }  // x^2 = (u^2 + c) / a^2
};

// divides by u^2 + e while exact and r > 0, and strips powers of u from the numerator
Part reduce(Part p, const Field& F) {
    if (p.num.is_zero()) return Part{};
    std::size_t v = p.num.valuation();
    if (v) {
        p.num = p.num.shift_down(v);
        p.k -= static_cast<int>(v);
    }
    while (p.r > 0 && p.num.degree() >= 2) {
        // synthetic division by u^2 + e
        std::vector<Rational> a = p.num.coeffs();
        std::vector<Rational> quo(a.size() - 2, Rational(0));
        for (std::size_t i = a.size() - 1; i >= 2; --i) {
            quo[i - 2] = a[i];
            a[i - 2] -= F.e * a[i];
            a[i] = 0;
        }
        if (sgn(a[0]) != 0 || sgn(a[1]) != 0) break;
        p.num = P(std::move(quo));
        --p.r;
    }
    return p;
}

Part align(const Part& p, int K, int R, const Field& F) {
    Part out{p.num * P::monomial(static_cast<std::size_t>(K - p.k)) * pow(F.q(), static_cast<unsigned>(R - p.r)), K, R};
    return out;
}

Part add(const Part& a, const Part& b, const Field& F) {
    if (a.num.is_zero()) return b;
    if (b.num.is_zero()) return a;
    const int K = std::max(a.k, b.k), R = std::max(a.r, b.r);
    return reduce(Part{align(a, K, R, F).num + align(b, K, R, F).num, K, R}, F);
}

Part mul(const Part& a, const Part& b, const Field& F) {
    if (a.num.is_zero() || b.num.is_zero()) return Part{};
    return reduce(Part{a.num * b.num, a.k + b.k, a.r + b.r}, F);
}

Part scale(const Part& a, const P& f, const Field& F) { return reduce(Part{a.num * f, a.k, a.r}, F); }

// d/du of P u^-k q^-r: (P' u q - k P q - 2 r P u^2) / (u^(k+1) q^(r+1))
Part du(const Part& a, const Field& F) {
    if (a.num.is_zero()) return Part{};
    const P u = P::x();
    const P num = a.num.derivative() * u * F.q() - a.num * F.q() * P(Rational(a.k)) -
                  a.num * u * u * P(Rational(2 * a.r));
    return reduce(Part{num, a.k + 1, a.r + 1}, F);
}

cdouble eval_part(const Part& p, cdouble u, const Rational& e) {
    if (p.num.is_zero()) return 0.0;
    cdouble v = p.num(u);
    v *= std::pow(u, -p.k);
    if (p.r) v /= std::pow(u * u + e.get_d(), p.r);
    return v;
}

Laurent eval_part(const Part& p, const Laurent& u, const Field& F) {
    if (p.num.is_zero()) return Laurent(Rational(0));
    Laurent v(Rational(0));
    for (auto it = p.num.coeffs().rbegin(); it != p.num.coeffs().rend(); ++it) v = v * u + Laurent(*it);
    Laurent den(Rational(1));
    for (int i = 0; i < std::abs(p.k); ++i) den = den * u;
    if (p.k < 0) v = v * den;
    else if (p.k > 0) v = v / den;
    const Laurent q = u * u + Laurent(F.e);
    for (int i = 0; i < p.r; ++i) v = v / q;
    return v;
}

}  // namespace

ResolventTerm::ResolventTerm(Rational alpha_hat, Part a, Part b) : ah_(std::move(alpha_hat)) {
    const Field F(ah_);
    a_ = reduce(std::move(a), F);
    b_ = reduce(std::move(b), F);
}

ResolventTerm ResolventTerm::zero(const Rational& alpha_hat) { return ResolventTerm(alpha_hat, Part{}, Part{}); }

ResolventTerm ResolventTerm::u_power(const Rational& alpha_hat, int s) {
    return ResolventTerm(alpha_hat, Part{P(Rational(1)), s, 0}, Part{});
}

ResolventTerm ResolventTerm::x_u_power(const Rational& alpha_hat, int s) {
    return ResolventTerm(alpha_hat, Part{}, Part{P(Rational(1)), s, 0});
}

ResolventTerm ResolventTerm::constant(const Rational& alpha_hat, const Rational& c) {
    return ResolventTerm(alpha_hat, Part{P(c), 0, 0}, Part{});
}

ResolventTerm ResolventTerm::operator+(const ResolventTerm& o) const {
    const Field F(ah_);
    return ResolventTerm(ah_, add(a_, o.a_, F), add(b_, o.b_, F));
}

ResolventTerm ResolventTerm::operator-(const ResolventTerm& o) const { return *this + o.scaled(Rational(-1)); }

ResolventTerm ResolventTerm::operator*(const ResolventTerm& o) const {
    const Field F(ah_);
    // (a1 + x b1)(a2 + x b2) = a1 a2 + x^2 b1 b2 + x (a1 b2 + a2 b1)
    const Part a = add(mul(a_, o.a_, F), scale(mul(b_, o.b_, F), F.x2(), F), F);
    const Part b = add(mul(a_, o.b_, F), mul(o.a_, b_, F), F);
    return ResolventTerm(ah_, a, b);
}

ResolventTerm ResolventTerm::scaled(const Rational& c) const {
    const Field F(ah_);
    return ResolventTerm(ah_, scale(a_, P(c), F), scale(b_, P(c), F));
}

ResolventTerm ResolventTerm::times_x() const {
    const Field F(ah_);
    return ResolventTerm(ah_, scale(b_, F.x2(), F), a_);
}

ResolventTerm ResolventTerm::derivative() const {
    // d/dx = (a^2 x / u) d/du
    const Field F(ah_);
    const P u = P::x();
    const Part db = du(b_, F);
    Part new_a = add(b_, scale(Part{db.num * (u * u + P(F.c)), db.k + 1, db.r}, P(Rational(1)), F), F);
    Part da = du(a_, F);
    Part new_b = scale(Part{da.num, da.k + 1, da.r}, P(ah_ * ah_), F);
    return ResolventTerm(ah_, new_a, new_b);
}

bool ResolventTerm::is_zero() const { return a_.num.is_zero() && b_.num.is_zero(); }

cdouble ResolventTerm::operator()(cdouble x, bool boundary_limit) const {
    const cdouble u = edge_root(ah_.get_d(), x, boundary_limit);
    const Rational e = (1 + ah_) * (1 + ah_);
    return eval_part(a_, u, e) + x * eval_part(b_, u, e);
}

std::vector<Rational> ResolventTerm::large_x(unsigned n) const {
    const Field F(ah_);
    const long extra = 2 * (std::abs(a_.k) + std::abs(b_.k) + 2 * (a_.r + b_.r)) + 8;
    const Laurent::PrecisionScope scope(static_cast<long>(n) + extra);
    const long prec = static_cast<long>(n) + extra;
    // u = a y^-1 sqrt(1 - (c / a^2) y^2)
    std::vector<Rational> s;
    const Rational z = -F.c / (F.ah * F.ah);
    for (long j = 0; 2 * j < prec + 1; ++j) {
        s.push_back(F.ah * half_binomial(static_cast<unsigned>(j)) * pow(z, j));
        s.push_back(Rational(0));
    }
    const Laurent u(-1, s, prec - 1);
    const Laurent val = eval_part(a_, u, F) + Laurent::monomial(-1) * eval_part(b_, u, F);
    if (val.precision() <= static_cast<long>(n)) throw std::logic_error("large_x: series precision exhausted");
    if (val.valuation() < 1) throw std::logic_error("large_x: term does not decay at infinity");
    std::vector<Rational> out;
    for (unsigned j = 1; j <= n; ++j) out.push_back(val.coeff(j));
    return out;
}

// ---------------------------------------------------------------- 1/N expansion

cdouble ResolventExpansion::operator()(unsigned l, cdouble x, bool boundary_limit) const {
    return coefficients.at(l)(x, boundary_limit);
}

namespace {

ResolventTerm w0(const Rational& ah) {
    // ((1 + a) x - u) / (1 + x^2) = a^2 ((1 + a) x - u) / (u^2 + e)
    const Rational a2 = ah * ah;
    return ResolventTerm(ah, Part{P({Rational(0), -a2}), 0, 1}, Part{P(a2 * (1 + ah)), 0, 1});
}

ResolventTerm one_plus_x2(const Rational& ah) {
    return ResolventTerm::constant(ah, Rational(1)) + ResolventTerm::constant(ah, Rational(1)).times_x().times_x();
}

// u^2 = a^2 x^2 - c
ResolventTerm u_squared(const Rational& ah) { return ResolventTerm::u_power(ah, -2); }

ResolventTerm w2_beta2(const Rational& ah) {
    // a^2 (1 + 2a)(1 + x^2) / (8 u^5)
    return (one_plus_x2(ah) * ResolventTerm::u_power(ah, 5)).scaled(ah * ah * (1 + 2 * ah) / 8);
}

}  // namespace

ResolventTerm resolvent_closed_form(const Rational& beta, const Rational& ah, unsigned l) {
    require_positive(ah);
    if (sgn(beta) <= 0) throw std::invalid_argument("beta must be positive");
    if (l == 0) return w0(ah);
    const Rational g = 1 - 2 / beta;
    if (l == 1) return ResolventTerm::u_power(ah, 1).scaled(g * ah / 2) - ResolventTerm::x_u_power(ah, 2).scaled(g * ah * ah / 2);
    if (l != 2) throw std::invalid_argument("closed forms exist for l <= 2 only");
    const Rational e = (1 + ah) * (1 + ah);
    const ResolventTerm u5 = ResolventTerm::u_power(ah, 5);
    const ResolventTerm bracket = u5.times_x().times_x().scaled(ah * ah * e) +
                                  (one_plus_x2(ah) * u5).scaled(ah * ah * (1 + 2 * ah) / 4) -
                                  ResolventTerm::x_u_power(ah, 4).scaled(ah * e);
    return bracket.scaled(g * g / 2) + (one_plus_x2(ah) * u5).scaled(ah * ah * (1 + 2 * ah) / (4 * beta));
}

namespace {

// 4(1+x^2) u^2 W' + 4 (u^2 - e) x W
ResolventTerm chain_lhs(const ResolventTerm& W) {
    const Rational& ah = W.alpha_hat();
    const Rational e = (1 + ah) * (1 + ah);
    const ResolventTerm lhs = one_plus_x2(ah) * u_squared(ah) * W.derivative() +
                              (u_squared(ah) - ResolventTerm::constant(ah, e)) * W.times_x();
    return lhs.scaled(Rational(4));
}

ResolventTerm chain_rhs(const ResolventTerm& V) {
    const Rational& ah = V.alpha_hat();
    const ResolventTerm q = one_plus_x2(ah);
    const ResolventTerm d1 = V.derivative(), d2 = d1.derivative(), d3 = d2.derivative();
    const ResolventTerm one = ResolventTerm::constant(ah, Rational(1));
    const ResolventTerm seven_x2_3 = one.times_x().times_x().scaled(Rational(7)) + one.scaled(Rational(3));
    return q * q * q * d3 + (q * q * d2.times_x()).scaled(Rational(8)) + (q * seven_x2_3 * d1).scaled(Rational(2)) +
           (q * V.times_x()).scaled(Rational(4));
}

// odd functions of x: u^-s for odd s, x u^-s for even s
std::vector<ResolventTerm> odd_basis(const Rational& ah, int smax) {
    std::vector<ResolventTerm> basis;
    for (int s = 1; s <= smax; ++s)
        basis.push_back(s % 2 ? ResolventTerm::u_power(ah, s) : ResolventTerm::x_u_power(ah, s));
    return basis;
}

// coefficient equations of sum_i x_i T_i = target, matched on common denominators
std::vector<Rational> match(const std::vector<ResolventTerm>& T, const ResolventTerm& target) {
    const Field F(target.alpha_hat());
    std::vector<std::vector<Rational>> A;
    std::vector<Rational> b;
    for (int which = 0; which < 2; ++which) {
        const auto part = [which](const ResolventTerm& t) -> const Part& { return which ? t.b() : t.a(); };
        int K = part(target).k, R = part(target).r;
        for (const auto& t : T)
            if (!part(t).num.is_zero()) {
                K = std::max(K, part(t).k);
                R = std::max(R, part(t).r);
            }
        std::vector<P> nums;
        std::size_t len = 0;
        for (const auto& t : T) {
            nums.push_back(part(t).num.is_zero() ? P() : align(part(t), K, R, F).num);
            len = std::max(len, nums.back().coeffs().size());
        }
        const P tnum = part(target).num.is_zero() ? P() : align(part(target), K, R, F).num;
        len = std::max(len, tnum.coeffs().size());
        for (std::size_t d = 0; d < len; ++d) {
            std::vector<Rational> row;
            for (const auto& n : nums) row.push_back(n[d]);
            A.push_back(std::move(row));
            b.push_back(tnum[d]);
        }
    }
    auto sol = solve_exact(std::move(A), std::move(b));
    if (!sol) throw RankDeficiencyError("no solution in the algebraic basis");
    return *sol;
}

ResolventTerm combine(const std::vector<ResolventTerm>& basis, const std::vector<Rational>& x, const Rational& ah) {
    ResolventTerm w = ResolventTerm::zero(ah);
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (sgn(x[i]) != 0) w = w + basis[i].scaled(x[i]);
    return w;
}

ResolventTerm chain_solve(const ResolventTerm& prev, const Rational& ah, unsigned l) {
    const auto basis = odd_basis(ah, 3 * static_cast<int>(l) + 3);
    std::vector<ResolventTerm> images;
    for (const auto& t : basis) images.push_back(chain_lhs(t));
    return combine(basis, match(images, chain_rhs(prev)), ah);
}

}  // namespace

ResolventTerm resolvent_term_from_moments(const Rational& beta, const Rational& alpha_hat, unsigned l) {
    require_beta(beta);
    require_positive(alpha_hat);
    const int smax = 3 * static_cast<int>(l) + 3;
    const auto basis = odd_basis(alpha_hat, smax);
    // x^-(2j+1) coefficients, j = 0..J; extra rows double-check the fit
    const unsigned J = static_cast<unsigned>(smax) + 6;
    const auto mu = mu_cauchy_large_n(beta, alpha_hat, J, l);
    std::vector<Rational> target;  // order-l coefficient of m_{2j} / N
    Rational prev = l == 0 ? Rational(1) : Rational(0);
    target.push_back(prev);
    for (unsigned j = 0; j < J; ++j) {
        prev = mu[j][l] - prev;
        target.push_back(prev);
    }
    const unsigned rows = 2 * J + 1;
    std::vector<std::vector<Rational>> A(rows, std::vector<Rational>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto s = basis[i].large_x(rows);
        for (unsigned r = 0; r < rows; ++r) A[r][i] = s[r];
    }
    std::vector<Rational> b(rows, Rational(0));
    for (unsigned j = 0; j < target.size() && 2 * j < rows; ++j) b[2 * j] = target[j];
    auto sol = solve_exact(std::move(A), std::move(b));
    if (!sol) throw RankDeficiencyError("large-N moments do not fit the algebraic basis at order " + std::to_string(l));
    return combine(basis, *sol, alpha_hat);
}

ResolventExpansion resolvent_expansion(const Rational& beta, const Rational& alpha_hat, unsigned L) {
    require_beta(beta);
    require_positive(alpha_hat);
    ResolventExpansion w{alpha_hat, beta, {}};
    w.coefficients.push_back(w0(alpha_hat));
    for (unsigned l = 1; l <= L; ++l) {
        if (beta == 2) {
            if (l % 2) w.coefficients.push_back(ResolventTerm::zero(alpha_hat));
            else if (l == 2) w.coefficients.push_back(w2_beta2(alpha_hat));
            else w.coefficients.push_back(chain_solve(w.coefficients[l - 2], alpha_hat, l));
        } else {
            if (l <= 2) w.coefficients.push_back(resolvent_closed_form(beta, alpha_hat, l));
            else w.coefficients.push_back(resolvent_term_from_moments(beta, alpha_hat, l));
        }
    }
    return w;
}

ResolventTerm chain_residual(const ResolventExpansion& w, unsigned l) {
    const Rational& ah = w.alpha_hat;
    const ResolventTerm& W = w.coefficients.at(l);
    if (l == 0) {
        // (1+x^2) u^2 W' + (u^2 - e) x W + (a + 1)(2a + 1)
        const Rational e = (1 + ah) * (1 + ah);
        return one_plus_x2(ah) * u_squared(ah) * W.derivative() +
               (u_squared(ah) - ResolventTerm::constant(ah, e)) * W.times_x() +
               ResolventTerm::constant(ah, (ah + 1) * (2 * ah + 1));
    }
    if (l == 1) return chain_lhs(W);
    return chain_lhs(W) - chain_rhs(w.coefficients.at(l - 2));
}

DensityCorrection density_correction(const Rational& beta, double alpha_hat, double x) {
    require_beta(beta);
    if (!(alpha_hat > 0.0)) throw std::invalid_argument("density_correction needs alpha_hat > 0");
    const double c = 1.0 + 2.0 * alpha_hat;
    const double up = std::sqrt(c) / alpha_hat;
    DensityCorrection d;
    d.near_endpoint = std::abs(std::abs(x) - up) < 1e-3;
    const double gap = c - alpha_hat * alpha_hat * x * x;
    if (beta == 2) {
        d.order = 2;
        if (gap > 0.0) d.smooth = alpha_hat * alpha_hat * c * (1.0 + x * x) / (8.0 * kPi * std::pow(gap, 2.5));
        return d;
    }
    const double g = 1.0 - 2.0 / beta.get_d();
    d.order = 1;
    if (gap > 0.0) d.smooth = g * alpha_hat / (2.0 * kPi * std::sqrt(gap));
    d.deltas = {{-up, -g / 4.0}, {up, -g / 4.0}};
    return d;
}

std::pair<double, double> fit_mu2_correction(const Rational& alpha_hat, const std::vector<int>& Ns) {
    if (Ns.size() < 2) throw std::invalid_argument("fit_mu2_correction needs at least two N");
    const Rational target = mu_hat(alpha_hat, 2);
    // y = c + d t, t = 1 / N^2
    double s1 = 0, st = 0, stt = 0, sy = 0, sty = 0;
    for (int N : Ns) {
        const Rational n(N);
        const Rational mu2 = mu_cauchy_values(n, 2, alpha_hat * n, 2)[2];
        const double y = Rational(n * n * (mu2 / n - target)).get_d();
        const double t = 1.0 / (static_cast<double>(N) * N);
        s1 += 1;
        st += t;
        stt += t * t;
        sy += y;
        sty += t * y;
    }
    const double det = s1 * stt - st * st;
    return {(stt * sy - st * sty) / det, (s1 * sty - st * sy) / det};
}

}  // namespace rmt
