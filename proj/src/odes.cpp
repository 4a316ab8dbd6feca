#include "rmt/odes.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "rmt/errors.hpp"
#include "rmt/quadrature.hpp"
#include "rmt/special_fn.hpp"

namespace rmt {

namespace {

constexpr double kFdStep = 0.02;
constexpr double kFdReach = 12.0;

using CR = ComplexRational;
using P = Poly<CR>;

P constant(const CR& c) { return P(c); }
const P& X() {
    static const P x = P::x();
    return x;
}

const std::map<std::string, OpKind>& kind_names() {
    static const std::map<std::string, OpKind> m = {
        {"J2", OpKind::J2},       {"Jb", OpKind::Jb},         {"Cy2", OpKind::Cy2},   {"Cyb", OpKind::Cyb},
        {"CyNonSym2", OpKind::CyNonSym2}, {"rJ2", OpKind::rJ2}, {"rJb", OpKind::rJb}, {"rCy2", OpKind::rCy2},
        {"rCyb", OpKind::rCyb},   {"rCyNonSym2", OpKind::rCyNonSym2}, {"ss", OpKind::SS}};
    return m;
}

Rational real_param(const CR& z, const char* what) {
    if (!z.is_real()) throw std::invalid_argument(std::string(what) + " must be real for this operator");
    return z.real();
}

Rational kappa_of(const Rational& beta) {
    Rational k = beta / 2 - 1;
    if (sgn(k) == 0)
        throw DegenerateParameterError("beta = 2 passed to a beta = 1, 4 operator (division by beta/2 - 1)");
    return k;
}

}  // namespace

std::string to_string(OpKind k) {
    for (const auto& [name, kind] : kind_names())
        if (kind == k) return name;
    return "?";
}

OpKind op_kind_from_string(const std::string& name) {
    auto it = kind_names().find(name);
    if (it == kind_names().end()) throw std::invalid_argument("unknown operator '" + name + "'");
    return it->second;
}

int LinearDiffOp::order() const {
    for (int j = static_cast<int>(coeffs.size()) - 1; j >= 0; --j)
        if (!coeffs[static_cast<std::size_t>(j)].is_zero()) return j;
    return -1;
}

cdouble LinearDiffOp::coeff(unsigned j, cdouble x) const { return j < coeffs.size() ? coeffs[j](x) : cdouble(0.0); }

LinearDiffOp LinearDiffOp::canonical() const {
    std::size_t common = SIZE_MAX;
    for (const auto& c : coeffs)
        if (!c.is_zero()) common = std::min(common, c.valuation());
    LinearDiffOp r = *this;
    if (common == SIZE_MAX || common == 0) return r;
    for (auto& c : r.coeffs) c = c.shift_down(common);
    return r;
}

std::pair<Rational, Rational> jacobi_tilde_params(const Rational& a, const Rational& N, const Rational& beta) {
    const Rational k = kappa_of(beta);
    const Rational ak = a / k;
    return {ak * (ak - 2), 2 * ak + 4 * k * N - 1};
}

std::pair<Rational, Rational> cauchy_tilde_params(const Rational& alpha, const Rational& N, const Rational& beta) {
    const Rational k = kappa_of(beta);
    const Rational ak = alpha / k;
    const Rational n = 2 * k * N + ak;
    return {ak * (ak - 1), n * n};
}

LinearDiffOp build_operator(OpKind kind, const OpParams& p) {
    LinearDiffOp op;
    op.kind = kind;
    const P& x = X();
    const P u = P{1, 0, -1}, v = P{1, 0, 1};
    const P x2 = x * x;
    const CR N(p.N);
    auto c = [](const Rational& q) { return P(CR(q)); };
    switch (kind) {
        case OpKind::J2: {
            const CR a = p.a;
            op.coeffs.resize(4);
            op.coeffs[3] = pow(u, 3);
            op.coeffs[2] = constant(-8) * x * pow(u, 2);
            op.coeffs[1] = constant(-2) * u * (constant(3 - 2 * N * N - 4 * a * N) + constant(2 * (a + N) * (a + N) - 7) * x2);
            op.coeffs[0] = constant(4) * x * (constant(a * a + 1 - N * N - 2 * a * N) + constant((a + N) * (a + N) - 1) * x2);
            break;
        }
        case OpKind::Jb: {
            const auto [at, ct] = jacobi_tilde_params(real_param(p.a, "a"), p.N, p.beta);
            const Rational c2 = ct * ct;
            op.coeffs.resize(6);
            op.coeffs[5] = constant(4) * pow(u, 5);
            op.coeffs[4] = constant(-80) * x * pow(u, 4);
            op.coeffs[3] = c(5 * c2 - 493) * pow(u, 4) - c(4 * (5 * at - 88)) * pow(u, 3);
            op.coeffs[2] = c(16 * (11 * at - 8)) * x * pow(u, 2) - c(2 * (19 * c2 - 539)) * x * pow(u, 3);
            op.coeffs[1] = c(c2 * c2 - 64 * c2 + 719) * pow(u, 3) - c(8 * ((c2 - 45) * (at - 3) - 124)) * pow(u, 2) +
                           c(16 * ((at - 7) * (at - 7) - 65)) * u;
            op.coeffs[0] = c(-(c2 - 9) * (c2 - 9)) * x * pow(u, 2) + c(4 * (4 * (c2 - 9) + (3 * c2 - 35) * at)) * x * u -
                           c(32 * at * at) * x;
            break;
        }
        case OpKind::Cy2: {
            const CR al = p.alpha;
            const CR m = 2 * N * (N + 2 * al);
            op.coeffs.resize(4);
            op.coeffs[3] = pow(v, 3);
            op.coeffs[2] = constant(8) * x * pow(v, 2);
            op.coeffs[1] = constant(2) * v * (constant(3 + m) + constant(7 - 2 * al * al) * x2);
            op.coeffs[0] = constant(4) * x * (constant(1 + al * al + m) + constant(1 - al * al) * x2);
            break;
        }
        case OpKind::Cyb: {
            const auto [alt, nt] = cauchy_tilde_params(real_param(p.alpha, "alpha"), p.N, p.beta);
            op.coeffs.resize(6);
            op.coeffs[5] = constant(4) * pow(v, 5);
            op.coeffs[4] = constant(80) * x * pow(v, 4);
            op.coeffs[3] = c(-4 * (5 * alt - 122)) * pow(v, 4) + c(4 * (5 * nt - 93)) * pow(v, 3);
            op.coeffs[2] = c(-8 * (19 * alt - 130)) * x * pow(v, 3) + c(16 * (11 * nt - 19)) * x * pow(v, 2);
            op.coeffs[1] = c(8 * (2 * alt * alt - 31 * alt + 82)) * pow(v, 3) -
                           c(32 * ((alt - 11) * (nt - 4) - 31)) * pow(v, 2) + c(16 * ((nt - 8) * (nt - 8) - 65)) * v;
            op.coeffs[0] = c(16 * (alt - 2) * (alt - 2)) * x * pow(v, 2) - c(16 * ((3 * alt - 8) * nt + alt)) * x * v +
                           c(32 * (nt - 1) * (nt - 1)) * x;
            break;
        }
        case OpKind::CyNonSym2: {
            const CR al = p.alpha, ab = p.alpha.conj();
            const CR s = al + ab, d = al - ab, i = CR::i();
            op.coeffs.resize(4);
            op.coeffs[3] = pow(v, 3);
            op.coeffs[2] = constant(8) * x * pow(v, 2);
            op.coeffs[1] = v * P{6 + 4 * N * (N + s) + d * d, 2 * i * d * (2 * N + s), 14 - s * s};
            op.coeffs[0] = P{0, 4 + 8 * N * (N + s) + 3 * al * al - 2 * al * ab + 3 * ab * ab, 0, 4 - s * s} +
                           constant(i * d * (2 * N + s)) * P{-1, 0, 3};
            break;
        }
        case OpKind::rJ2: {
            const CR a = p.a;
            op.coeffs.resize(4);
            op.coeffs[3] = pow(u, 2);
            op.coeffs[2] = constant(-2) * x * u;
            op.coeffs[1] = constant(4) * (constant(N * (N + 2 * a)) - constant((N + a) * (N + a)) * x2);
            op.coeffs[0] = constant(4 * (a + N) * (a + N)) * x;
            break;
        }
        case OpKind::rJb: {
            const auto [at, ct] = jacobi_tilde_params(real_param(p.a, "a"), p.N, p.beta);
            const Rational c2 = ct * ct;
            op.coeffs.resize(6);
            op.coeffs[5] = constant(4) * pow(u, 4);
            op.coeffs[4] = constant(-40) * x * pow(u, 3);
            op.coeffs[3] = c(5 * c2 - 93) * pow(u, 3) - c(4 * (5 * at - 8)) * pow(u, 2);
            op.coeffs[2] = c(-8 * (c2 + 5)) * x * pow(u, 2) + constant(8) * (c(7 * at + 18) - constant(10) * x2) * x * u;
            op.coeffs[1] = c((c2 - 1) * (c2 - 1)) * pow(u, 2) - c(8 * (c2 * (at + 1) - 2 * at - 1)) * u + c(16 * at * at);
            op.coeffs[0] = c(c2 - 1) * (c(c2 - 1) * u - c(4 * at)) * x;
            break;
        }
        case OpKind::rCy2: {
            const CR al = p.alpha;
            op.coeffs.resize(4);
            op.coeffs[3] = pow(v, 2);
            op.coeffs[2] = constant(2) * x * v;
            op.coeffs[1] = constant(4) * (constant(N * (N + 2 * al)) - constant(al * al) * x2);
            op.coeffs[0] = constant(4 * al * al) * x;
            break;
        }
        case OpKind::rCyb: {
            const auto [alt, nt] = cauchy_tilde_params(real_param(p.alpha, "alpha"), p.N, p.beta);
            op.coeffs.resize(6);
            op.coeffs[5] = pow(v, 4);
            op.coeffs[4] = constant(10) * x * pow(v, 3);
            op.coeffs[3] = c(-(5 * alt - 22)) * pow(v, 3) + c(5 * nt - 13) * pow(v, 2);
            op.coeffs[2] = c(-8 * (alt - 1)) * x * pow(v, 2) + c(2 * (7 * nt + 1)) * x * v;
            op.coeffs[1] = c(4 * alt * alt) * pow(v, 2) - c(2 * ((4 * alt - 1) * nt + 1)) * v + c(4 * (nt - 1) * (nt - 1));
            op.coeffs[0] = c(-4 * alt * alt) * x * v + c(4 * alt * (nt - 1)) * x;
            break;
        }
        case OpKind::rCyNonSym2: {
            const CR a1(p.alpha.real()), a2(p.alpha.imag());
            const P lin = P{(N + a1) * a2, a1 * a1};  // alpha1^2 t + (N + alpha1) alpha2
            op.coeffs.resize(4);
            op.coeffs[3] = pow(v, 2);
            op.coeffs[2] = constant(2) * x * v;
            op.coeffs[1] = constant(4) * (constant(-1) * x * lin + P{(N + a1) * (N + a1) - a1 * a1 - a2 * a2, -(N + a1) * a2});
            op.coeffs[0] = constant(4) * lin;
            break;
        }
        case OpKind::SS: {
            // multiplied through by X so every coefficient is polynomial
            const CR al2 = p.alpha * p.alpha;
            op.coeffs.resize(4);
            op.coeffs[3] = pow(x, 3);
            op.coeffs[2] = constant(4) * x2;
            op.coeffs[1] = (constant(2 - 4 * al2) + constant(4) * x2) * x;
            op.coeffs[0] = constant(-4 * al2);
            op = op.canonical();
            break;
        }
    }
    return op;
}

LinearDiffOp substitute_scale(const LinearDiffOp& op, const CR& s) {
    LinearDiffOp r = op;
    CR sinv_pow(1);
    const CR sinv = CR(1) / s;
    for (auto& c : r.coeffs) {
        c = c.scale_argument(s) * P(sinv_pow);
        sinv_pow *= sinv;
    }
    return r;
}

LinearDiffOp divide_dependent(const LinearDiffOp& op, const P& f) {
    const int ord = op.order();
    // d^k (1/f) = D_k / f^{k+1}
    std::vector<P> D{P(CR(1))};
    for (int k = 0; k < ord; ++k) D.push_back(f * D.back().derivative() - P(CR(static_cast<long>(k + 1))) * f.derivative() * D.back());
    std::vector<P> fp{P(CR(1))};
    for (int k = 0; k <= ord; ++k) fp.push_back(fp.back() * f);
    LinearDiffOp r;
    r.kind = op.kind;
    r.coeffs.assign(static_cast<std::size_t>(ord + 1), P());
    for (int j = 0; j <= ord; ++j) {
        for (int m = 0; m <= j; ++m) {
            // c_j C(j,m) r^{(m)} (1/f)^{(j-m)}, times f^{ord+1}
            const P term = op.coeffs[static_cast<std::size_t>(j)] * P(CR(Rational(binomial(static_cast<unsigned>(j), static_cast<unsigned>(m))))) *
                           D[static_cast<std::size_t>(j - m)] * fp[static_cast<std::size_t>(ord - j + m)];
            r.coeffs[static_cast<std::size_t>(m)] += term;
        }
    }
    return r;
}

bool proportional(const LinearDiffOp& A, const LinearDiffOp& B) {
    if (A.order() != B.order()) return false;
    const std::size_t n = static_cast<std::size_t>(A.order()) + 1;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            if (A.coeffs[j] * B.coeffs[k] != B.coeffs[j] * A.coeffs[k]) return false;
    return true;
}

P apply_exact(const LinearDiffOp& op, const PolyWeightDensity& d) {
    const int ord = op.order();
    const P f = weight_log_derivative(d.spec()).f;
    P acc;
    for (int j = 0; j <= ord; ++j)
        acc += op.coeffs[static_cast<std::size_t>(j)] * pow(f, static_cast<unsigned>(ord - j)) * d.t_poly(static_cast<unsigned>(j));
    return acc;
}

DensityEvaluator DensityEvaluator::from_exact(PolyWeightDensity d) {
    DensityEvaluator e;
    e.exact = std::move(d);
    return e;
}

double fd_derivative(const std::function<double(double)>& f, unsigned j, double x, double h) {
    // second-order central stencils on x + k h, k = -3..3
    static const std::array<std::array<double, 7>, 6> W = {{
        {0, 0, 0, 1, 0, 0, 0},
        {0, 0, -0.5, 0, 0.5, 0, 0},
        {0, 0, 1, -2, 1, 0, 0},
        {0, -0.5, 1, 0, -1, 0.5, 0},
        {0, 1, -4, 6, -4, 1, 0},
        {-0.5, 2, -2.5, 0, 2.5, -2, 0.5},
    }};
    if (j > 5) throw std::invalid_argument("fd_derivative supports orders up to 5");
    const auto D = [&](double step) {
        double s = 0.0;
        for (int k = -3; k <= 3; ++k) {
            const double w = W[j][static_cast<std::size_t>(k + 3)];
            if (w != 0.0) s += w * f(x + k * step);
        }
        return s / std::pow(step, static_cast<int>(j));
    };
    if (j == 0) return f(x);
    const double d1 = D(h), d2 = D(h / 2), d3 = D(h / 4);
    const double r1 = (4 * d2 - d1) / 3, r2 = (4 * d3 - d2) / 3;
    return (16 * r2 - r1) / 15;
}

double residual(const LinearDiffOp& op, const DensityEvaluator& fe, cdouble x, double h) {
    const int ord = op.order();
    std::vector<cdouble> terms;
    if (fe.exact) {
        for (int j = 0; j <= ord; ++j) terms.push_back(op.coeff(static_cast<unsigned>(j), x) * fe.exact->derivative(static_cast<unsigned>(j), x));
    } else {
        if (x.imag() != 0.0) throw std::invalid_argument("finite-difference residual needs real x");
        const double xr = x.real();
        if (h <= 0.0) {
            // keep the widest stencil well inside the distance to the nearest singular point
            std::vector<cdouble> lead;
            for (const auto& c : op.coeffs[static_cast<std::size_t>(ord)].coeffs()) lead.push_back(c.to_complex());
            double dist = std::numeric_limits<double>::infinity();
            for (const auto& z : polynomial_roots(lead)) dist = std::min(dist, std::abs(z - x));
            h = std::min(kFdStep * (1.0 + std::abs(xr)), dist / kFdReach);
        }
        if (h < 1e-6) throw std::domain_error("residual: finite-difference step underflows near a singular point");
        const auto g = [&](double t) { return fe.f(cdouble(t)).real(); };
        for (int j = 0; j <= ord; ++j) terms.push_back(op.coeff(static_cast<unsigned>(j), x) * fd_derivative(g, static_cast<unsigned>(j), xr, h));
    }
    cdouble sum = 0.0;
    double scale = 0.0;
    for (const auto& t : terms) {
        sum += t;
        scale = std::max(scale, std::abs(t));
    }
    return scale == 0.0 ? 0.0 : std::abs(sum) / scale;
}

namespace {

/// Null space of M (rows x cols) over Q(i) by exact Gauss-Jordan elimination.
std::vector<std::vector<CR>> null_space(std::vector<std::vector<CR>> M, std::size_t cols) {
    std::vector<int> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < M.size(); ++col) {
        std::size_t piv = row;
        while (piv < M.size() && M[piv][col].is_zero()) ++piv;
        if (piv == M.size()) continue;
        std::swap(M[piv], M[row]);
        const CR inv = CR(1) / M[row][col];
        for (auto& e : M[row]) e *= inv;
        for (std::size_t r = 0; r < M.size(); ++r) {
            if (r == row || M[r][col].is_zero()) continue;
            const CR fct = M[r][col];
            for (std::size_t c = 0; c < cols; ++c) M[r][c] -= fct * M[row][c];
        }
        pivot_col.push_back(static_cast<int>(col));
        ++row;
    }
    std::vector<std::vector<CR>> basis;
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<CR> vec(cols, CR(0));
        vec[free] = CR(1);
        for (std::size_t r = 0; r < pivot_col.size(); ++r) vec[static_cast<std::size_t>(pivot_col[r])] = -M[r][free];
        basis.push_back(std::move(vec));
    }
    return basis;
}

}  // namespace

PolyWeightDensity density_from_ode(const LinearDiffOp& op, const WeightFn& weight, int degree) {
    const EnsembleSpec& spec = weight.spec;
    if (degree < 0) throw std::invalid_argument("density_from_ode: negative degree");
    const LogDerivative ld = weight_log_derivative(spec);
    const bool even = (spec.family == Family::JacobiSym && spec.a == spec.b) || spec.family == Family::CauchySym;
    std::vector<int> powers;
    for (int m = 0; m <= degree; ++m)
        if (!even || m % 2 == 0) powers.push_back(m);
    const int ord = op.order();
    std::vector<P> images;
    std::size_t rows = 0;
    for (int m : powers) {
        PolyWeightDensity basis(spec, P::monomial(static_cast<std::size_t>(m)), 1.0);
        P img = apply_exact(op, basis);
        rows = std::max(rows, static_cast<std::size_t>(img.degree() + 1));
        images.push_back(std::move(img));
    }
    (void)ord;
    std::vector<std::vector<CR>> M(rows, std::vector<CR>(powers.size(), CR(0)));
    for (std::size_t c = 0; c < powers.size(); ++c)
        for (std::size_t r = 0; r < rows; ++r) M[r][c] = images[c][r];
    const auto ns = null_space(std::move(M), powers.size());
    if (ns.size() != 1)
        throw RankDeficiencyError("density_from_ode: solution space has dimension " + std::to_string(ns.size()) +
                                  " (expected 1) for operator " + to_string(op.kind));
    std::vector<CR> coeffs(static_cast<std::size_t>(degree + 1), CR(0));
    // fix the scale so the leading coefficient is 1
    CR lead(0);
    for (std::size_t c = powers.size(); c-- > 0;)
        if (!ns[0][c].is_zero()) {
            lead = ns[0][c];
            break;
        }
    for (std::size_t c = 0; c < powers.size(); ++c) coeffs[static_cast<std::size_t>(powers[c])] = ns[0][c] / lead;
    P q(std::move(coeffs));

    // int w q = N
    cdouble total = 0.0;
    if (spec.family == Family::JacobiSym && spec.a == spec.b && spec.a.is_real()) {
        for (int m = 0; m <= q.degree(); m += 2)
            total += q[static_cast<std::size_t>(m)].to_complex() *
                     one_dim_moment(WeightKind::Jacobi, spec.a.real(), static_cast<unsigned>(m)).value();
    } else if (spec.family == Family::CauchySym) {
        const Rational e = spec.eta().real();
        for (int m = 0; m <= q.degree(); m += 2)
            total += q[static_cast<std::size_t>(m)].to_complex() * cauchy_line_base(e) *
                     one_dim_moment(WeightKind::Cauchy, e, static_cast<unsigned>(m), true).ratio.get_d();
    } else {
        PolyWeightDensity unit(spec, q, 1.0);
        const auto re = [&](double t) { return unit(t).real(); };
        const auto im = [&](double t) { return unit(t).imag(); };
        if (spec.is_cauchy())
            total = cdouble(integrate_line(re, 1e-11).value, integrate_line(im, 1e-11).value);
        else
            total = cdouble(integrate_interval(re, 1e-11).value, integrate_interval(im, 1e-11).value);
    }
    if (std::abs(total) == 0.0) throw DegenerateParameterError("density_from_ode: weight times polynomial integrates to 0");
    return PolyWeightDensity(spec, q, static_cast<double>(spec.N) / total);
}

double spectrum_singularity_density(double alpha, double x) {
    if (x <= 0.0) throw std::domain_error("spectrum_singularity_density needs x > 0");
    if (alpha <= -0.5) throw std::domain_error("spectrum_singularity_density needs alpha > -1/2");
    const double jm = bessel_j(alpha - 0.5, x), jp = bessel_j(alpha + 0.5, x);
    return 0.5 * x * (jm * jm + jp * jp - 2.0 * alpha / x * jm * jp);
}

double sigma_form_residual(int N, const Rational& alpha, double s) {
    const auto rho = density_beta2_exact(EnsembleSpec::cauchy_sym(N, 2, alpha));
    const auto r = rho.times(P{1, 0, 1});
    const double r0 = r(s).real(), r1 = r.derivative(1, s).real(), r2 = r.derivative(2, s).real();
    const double a = alpha.get_d(), v = 1 + s * s;
    const std::array<double, 4> t = {v * v * r2 * r2, -4 * a * a * r0 * r0, 8 * a * a * s * r0 * r1,
                                     4 * (N * (N + 2 * a) - a * a * s * s) * r1 * r1};
    double sum = 0, scale = 0;
    for (double e : t) {
        sum += e;
        scale = std::max(scale, std::abs(e));
    }
    return std::abs(sum) / scale;
}

}  // namespace rmt
