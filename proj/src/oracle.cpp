#include "rmt/oracle.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "rmt/errors.hpp"
#include "rmt/odes.hpp"
#include "rmt/special_fn.hpp"

namespace rmt {

namespace {

using Mono = std::vector<unsigned>;
using MultiPoly = std::map<Mono, Integer>;

unsigned even_beta(const EnsembleSpec& spec) {
    if (!is_integer(spec.beta) || spec.beta.get_num() % 2 != 0)
        throw std::invalid_argument("exact brute force needs an even integer beta");
    return static_cast<unsigned>(spec.beta.get_num().get_ui());
}

/// prod_{i<j} (x_i - x_j)^beta as exponent vector -> integer coefficient
MultiPoly vandermonde_power(unsigned N, unsigned beta) {
    MultiPoly p{{Mono(N, 0), Integer(1)}};
    std::vector<Integer> binom(beta + 1);
    for (unsigned t = 0; t <= beta; ++t) binom[t] = binomial(beta, t);
    for (unsigned i = 0; i < N; ++i) {
        for (unsigned j = i + 1; j < N; ++j) {
            MultiPoly next;
            for (const auto& [mono, c] : p) {
                for (unsigned t = 0; t <= beta; ++t) {
                    Mono m = mono;
                    m[i] += beta - t;
                    m[j] += t;
                    Integer v = c * binom[t];
                    if (t % 2) v = -v;
                    next[m] += v;
                }
            }
            p.clear();
            for (auto& [m, c] : next)
                if (c != 0) p.emplace(m, std::move(c));
        }
    }
    return p;
}

struct OneDim {
    WeightKind kind;
    Rational exponent;
    std::map<unsigned, Rational> cache;

    explicit OneDim(const EnsembleSpec& spec) {
        if (spec.family == Family::JacobiSym) {
            if (spec.a != spec.b || !spec.a.is_real())
                throw std::invalid_argument("exact brute force needs a symmetric weight with real exponent");
            kind = WeightKind::Jacobi;
            exponent = spec.a.real();
        } else if (spec.family == Family::CauchySym) {
            kind = WeightKind::Cauchy;
            exponent = spec.eta().real();
        } else {
            throw std::invalid_argument("exact brute force supports jacobi-sym and cauchy-sym");
        }
    }
    const Rational& ratio(unsigned p) {
        auto it = cache.find(p);
        if (it == cache.end()) it = cache.emplace(p, one_dim_moment(kind, exponent, p, true).ratio).first;
        return it->second;
    }
    cdouble base() const {
        return kind == WeightKind::Jacobi ? one_dim_moment(kind, exponent, 0).value() : cauchy_line_base(exponent);
    }
};

Rational term_weight(OneDim& od, const Mono& m, unsigned shift_first, std::size_t from = 0) {
    Rational r(1);
    for (std::size_t l = from; l < m.size(); ++l) {
        const unsigned p = m[l] + (l == 0 ? shift_first : 0u);
        if (p % 2) return Rational(0);
        r *= od.ratio(p);
    }
    return r;
}

}  // namespace

Rational brute_force_moment_exact(const EnsembleSpec& spec, unsigned k) {
    const unsigned beta = even_beta(spec);
    OneDim od(spec);
    const auto P = vandermonde_power(static_cast<unsigned>(spec.N), beta);
    Rational num(0), den(0);
    for (const auto& [m, c] : P) {
        num += Rational(c) * term_weight(od, m, 2 * k);
        den += Rational(c) * term_weight(od, m, 0);
    }
    if (sgn(den) == 0) throw DegenerateParameterError("brute_force_moment_exact: normalisation vanishes");
    return spec.N * num / den;
}

PolyWeightDensity brute_force_density(const EnsembleSpec& spec) {
    const unsigned beta = even_beta(spec);
    OneDim od(spec);
    const auto P = vandermonde_power(static_cast<unsigned>(spec.N), beta);
    std::vector<ComplexRational> q(beta * static_cast<unsigned>(spec.N - 1) + 1, ComplexRational(0));
    Rational total(0);
    for (const auto& [m, c] : P) {
        const Rational rest = Rational(c) * term_weight(od, m, 0, 1);
        q[m[0]] += ComplexRational(rest);
        if (m[0] % 2 == 0) total += rest * od.ratio(m[0]);
    }
    if (sgn(total) == 0) throw DegenerateParameterError("brute_force_density: normalisation vanishes");
    const cdouble scale = static_cast<double>(spec.N) / (od.base() * total.get_d());
    return PolyWeightDensity(spec, Poly<ComplexRational>(std::move(q)), scale);
}

QuadResult quad_moment(const EnsembleSpec& spec, unsigned k, double tol) {
    std::optional<PolyWeightDensity> rho;
    if (spec.beta == 2) {
        rho = density_beta2_exact(spec);
    } else if (spec.beta == 4 && (spec.family == Family::JacobiSym || spec.family == Family::CauchySym)) {
        OpParams p;
        p.N = spec.N;
        p.beta = 4;
        p.a = spec.a;
        p.alpha = spec.alpha;
        const OpKind kind = spec.family == Family::JacobiSym ? OpKind::Jb : OpKind::Cyb;
        rho = density_from_ode(build_operator(kind, p), WeightFn{spec}, 4 * (spec.N - 1));
    } else {
        throw std::invalid_argument("quad_moment needs beta = 2, or beta = 4 with a symmetric weight");
    }
    const auto f = [&](double x) { return std::pow(x, 2 * static_cast<int>(k)) * (*rho)(x).real(); };
    return spec.is_cauchy() ? integrate_line(f, tol) : integrate_interval(f, tol);
}

namespace {

// Gauss-Legendre in theta after x = lo + (hi - lo)(1 - cos theta)/2, which tames
// (x - lo)^a and (hi - x)^a endpoint factors
// panels equal-width pieces of [0, pi], 30 nodes each
double cos_gauss(const std::function<double(double)>& f, double lo, double hi, int panels) {
    const auto g = [&](double th) {
        const double x = lo + 0.5 * (hi - lo) * (1.0 - std::cos(th));
        return f(x) * 0.5 * (hi - lo) * std::sin(th);
    };
    const double width = std::numbers::pi / panels;
    double s = 0.0;
    for (int p = 0; p < panels; ++p)
        s += boost::math::quadrature::gauss<double, 30>::integrate(g, p * width, (p + 1) * width);
    return s;
}

double ordered_integral(const EnsembleSpec& spec, unsigned k, bool with_power, int panels) {
    const int N = spec.N;
    const double beta = spec.beta.get_d();
    const WeightFn w{spec};
    const bool line = spec.is_cauchy();
    // t in (-1, 1); Cauchy uses x = tan(pi t / 2)
    const auto x_of = [line](double t) { return line ? std::tan(0.5 * std::numbers::pi * t) : t; };
    const auto jac = [line](double x) { return line ? 0.5 * std::numbers::pi * (1.0 + x * x) : 1.0; };
    std::vector<double> xs(static_cast<std::size_t>(N));
    // level l integrates t_l over (-1, t_{l+1})
    std::function<double(int, double)> nested = [&](int l, double upper) -> double {
        const auto g = [&](double t) {
            const double x = x_of(t);
            xs[static_cast<std::size_t>(l)] = x;
            double v = w(x) * jac(x);
            if (v == 0.0 || !std::isfinite(v)) return 0.0;
            for (int j = l + 1; j < N; ++j) v *= std::pow(xs[static_cast<std::size_t>(j)] - x, beta);
            if (l > 0) return v * nested(l - 1, t);
            if (!with_power) return v;
            double s = 0.0;
            for (double y : xs) s += std::pow(y, 2 * static_cast<int>(k));
            return v * s;
        };
        return cos_gauss(g, -1.0, upper, panels);
    };
    return nested(N - 1, 1.0);
}

}  // namespace

QuadResult brute_force_moment(const EnsembleSpec& spec, unsigned k, double tol) {
    if (spec.N < 1 || spec.N > 3) throw std::invalid_argument("brute_force_moment handles N <= 3");
    if (!spec.is_jacobi() && !spec.is_cauchy()) throw std::invalid_argument("brute_force_moment needs a Jacobi or Cauchy spec");
    if (spec.family == Family::Jacobi01 || spec.family == Family::CauchyNonSym)
        throw std::invalid_argument("brute_force_moment needs a (-1,1) Jacobi or symmetric Cauchy spec");
    const double fine = ordered_integral(spec, k, true, 2) / ordered_integral(spec, k, false, 2);
    const double coarse = ordered_integral(spec, k, true, 1) / ordered_integral(spec, k, false, 1);
    QuadResult r{fine, std::abs(fine - coarse)};
    if (!std::isfinite(fine) || r.error > tol * std::max(1.0, std::abs(fine))) {
        std::ostringstream os;
        os << "brute_force_moment: one- and two-panel rules differ by " << r.error << " (N=" << spec.N
           << ", k=" << k << ")";
        throw ToleranceError(os.str());
    }
    return r;
}

std::pair<double, double> McmcResult::moment(unsigned k) const {
    if (samples.empty()) return {0.0, 0.0};
    double s = 0, s2 = 0;
    for (const auto& c : samples) {
        double v = 0;
        for (double x : c) v += std::pow(x, static_cast<int>(k));
        v /= static_cast<double>(c.size());
        s += v;
        s2 += v * v;
    }
    const double n = static_cast<double>(samples.size());
    const double mean = s / n;
    const double var = std::max(0.0, s2 / n - mean * mean);
    return {mean, std::sqrt(var / n)};
}

std::vector<double> McmcResult::histogram(double lo, double hi, unsigned bins) const {
    std::vector<double> h(bins, 0.0);
    if (samples.empty() || bins == 0) return h;
    const double width = (hi - lo) / bins;
    std::size_t total = 0;
    for (const auto& c : samples) {
        total += c.size();
        for (double x : c) {
            if (x < lo || x >= hi) continue;
            h[std::min<std::size_t>(bins - 1, static_cast<std::size_t>((x - lo) / width))] += 1.0;
        }
    }
    for (auto& v : h) v /= static_cast<double>(total) * width;
    return h;
}

void McmcResult::write_csv(std::ostream& os) const {
    const auto old = os.precision(17);
    os << "sample";
    if (!samples.empty())
        for (std::size_t l = 0; l < samples.front().size(); ++l) os << ",x" << l + 1;
    os << '\n';
    for (std::size_t s = 0; s < samples.size(); ++s) {
        os << s;
        for (double x : samples[s]) os << ',' << x;
        os << '\n';
    }
    os.precision(old);
}

McmcResult mcmc_sample(const EnsembleSpec& spec, const McmcOptions& opt) {
    spec.validate();
    if (opt.sweeps < 1 || opt.thin < 1) throw std::invalid_argument("mcmc_sample needs sweeps >= 1 and thin >= 1");
    const std::size_t N = static_cast<std::size_t>(spec.N);
    const double beta = spec.beta.get_d();
    const bool line = spec.is_cauchy();
    if (!line && spec.family != Family::JacobiSym) throw std::invalid_argument("mcmc_sample needs a Jacobi (-1,1) or Cauchy spec");
    const cdouble eta = line ? spec.eta().to_complex() : cdouble(0.0);
    const double a = spec.a.real().get_d(), b = spec.b.real().get_d();
    const auto log_w = [&](double x) {
        if (line) return eta.real() * std::log1p(x * x) + 2.0 * eta.imag() * std::atan(x);
        return a * std::log1p(-x) + b * std::log1p(x);
    };

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> x(N);
    for (std::size_t l = 0; l < N; ++l) {
        const double u = (static_cast<double>(l) + 0.5) / static_cast<double>(N);
        x[l] = line ? std::tan((u - 0.5) * 0.8 * std::numbers::pi) : 0.9 * (2 * u - 1);
    }
    double step = line ? 0.5 : 0.2;
    const auto sweep = [&]() {
        std::size_t acc = 0;
        for (std::size_t l = 0; l < N; ++l) {
            const double xn = x[l] + step * (2 * unif(rng) - 1);
            if (!line && std::abs(xn) >= 1.0) {
                unif(rng);
                continue;
            }
            double d = log_w(xn) - log_w(x[l]);
            for (std::size_t j = 0; j < N; ++j)
                if (j != l) d += beta * (std::log(std::abs(xn - x[j])) - std::log(std::abs(x[l] - x[j])));
            if (std::log(unif(rng)) < d) {
                x[l] = xn;
                ++acc;
            }
        }
        return acc;
    };

    std::size_t batch = 0;
    for (std::size_t s = 0; s < opt.burn_in; ++s) {
        batch += sweep();
        if ((s + 1) % 50 == 0) {
            const double rate = static_cast<double>(batch) / static_cast<double>(50 * N);
            step *= rate > 0.3 ? 1.1 : 0.9;
            batch = 0;
        }
    }
    McmcResult r;
    r.step = step;
    std::size_t accepted = 0;
    for (std::size_t s = 0; s < opt.sweeps; ++s) {
        accepted += sweep();
        if (s % opt.thin == 0) {
            auto c = x;
            std::sort(c.begin(), c.end());
            r.samples.push_back(std::move(c));
        }
    }
    r.acceptance = static_cast<double>(accepted) / static_cast<double>(opt.sweeps * N);
    r.acceptance_in_range = r.acceptance >= 0.2 && r.acceptance <= 0.4;
    return r;
}

}  // namespace rmt
