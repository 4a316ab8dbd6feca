#include "rmt/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <sstream>
#include <stdexcept>

#include "rmt/asymptotics.hpp"
#include "rmt/ensembles.hpp"
#include "rmt/errors.hpp"
#include "rmt/moments.hpp"
#include "rmt/odes.hpp"
#include "rmt/oracle.hpp"
#include "rmt/quadrature.hpp"

namespace rmt {

namespace {

// Accumulates the worst deviation and the first offending case.
struct Tally {
    double worst = 0.0;
    std::string first_bad;
    double tol;

    explicit Tally(double tolerance) : tol(tolerance) {}

    void add(double dev, const std::string& where) {
        if (!(dev <= worst)) worst = std::isnan(dev) ? INFINITY : std::max(worst, dev);
        if (!(dev <= tol) && first_bad.empty()) first_bad = where;
    }
    // exact comparisons: any mismatch is a failure regardless of tol
    void exact(const Rational& got, const Rational& want, const std::string& where) {
        if (got == want) return;
        const double d = std::abs(Rational(got - want).get_d());
        worst = std::max(worst, d > 0 ? d : 1e-300);
        if (first_bad.empty()) first_bad = where;
    }
};

double rel(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

std::string tag(std::initializer_list<std::pair<const char*, std::string>> kv) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : kv) {
        os << (first ? "" : " ") << k << '=' << v;
        first = false;
    }
    return os.str();
}

std::string str(const Rational& q) { return q.get_str(); }
std::string str(double d) {
    std::ostringstream os;
    os << d;
    return os.str();
}

OpParams jac_params(int N, const Rational& beta, const Rational& a) {
    OpParams p;
    p.N = N;
    p.beta = beta;
    p.a = ComplexRational(a);
    return p;
}

OpParams cy_params(int N, const Rational& beta, const Rational& alpha) {
    OpParams p;
    p.N = N;
    p.beta = beta;
    p.alpha = ComplexRational(alpha);
    return p;
}

// ------------------------------------------------------------------ checks

void hahn_closed_form(Tally& t) {
    const unsigned K = 12;
    for (int N = 1; N <= 8; ++N)
        for (int a : {0, 1, 2, 5}) {
            const auto mu = mu_jacobi_values(N, 2, a, K);
            for (unsigned k = 0; k <= K; ++k)
                t.exact(hahn_mu_exact(N, a, k), mu[k], tag({{"N", str(N)}, {"a", str(a)}, {"k", str(k)}}));
        }
}

void beta2_quadrature(Tally& t) {
    const unsigned K = 10;
    std::vector<EnsembleSpec> specs;
    for (int N = 1; N <= 6; ++N) {
        specs.push_back(EnsembleSpec::jacobi_sym(N, 2, frac(1, 2)));
        specs.push_back(EnsembleSpec::jacobi_sym(N, 2, 2));
        specs.push_back(EnsembleSpec::cauchy_sym(N, 2, 20));
    }
    for (const auto& s : specs) {
        const auto m = m2k_from_mu(s.is_jacobi() ? mu_jacobi(s, K - 1) : mu_cauchy(s, K - 1));
        for (unsigned k = 0; k <= K; ++k)
            t.add(rel(quad_moment(s, k).value, m[k].get_d()),
                  tag({{"family", to_string(s.family)}, {"N", str(s.N)}, {"k", str(k)}}));
    }
}

void beta14_brute_force(Tally& t) {
    for (int N : {2, 3})
        for (int a : {1, 2}) {
            const auto s4 = EnsembleSpec::jacobi_sym(N, 4, a);
            const auto m4 = m2k_from_mu(mu_jacobi(s4, 1));
            for (unsigned k : {1u, 2u})
                t.exact(brute_force_moment_exact(s4, k), m4[k],
                        tag({{"beta", "4"}, {"N", str(N)}, {"a", str(a)}, {"k", str(2 * k)}}));
            const auto s1 = EnsembleSpec::jacobi_sym(N, 1, a);
            const auto m1 = m2k_from_mu(mu_jacobi(s1, 1));
            for (unsigned k : {1u, 2u})
                t.add(rel(brute_force_moment(s1, k, 1e-9).value, m1[k].get_d()),
                      tag({{"beta", "1"}, {"N", str(N)}, {"a", str(a)}, {"k", str(2 * k)}}));
        }
}

void ode_residuals(Tally& t) {
    const int points = 50;
    // beta = 2: finite differences of the exact densities, density and r forms
    for (int N = 1; N <= 4; ++N) {
        const auto js = EnsembleSpec::jacobi_sym(N, 2, frac(1, 2));
        const auto cs = EnsembleSpec::cauchy_sym(N, 2, frac(3, 2));
        DensityEvaluator rj, rrj, rc, rrc;
        rj.f = [js](cdouble x) { return density_beta2(js, x); };
        rrj.f = [js](cdouble x) { return (1.0 - x * x) * density_beta2(js, x); };
        rc.f = [cs](cdouble x) { return density_beta2(cs, x); };
        rrc.f = [cs](cdouble x) { return (1.0 + x * x) * density_beta2(cs, x); };
        const auto J = build_operator(OpKind::J2, jac_params(N, 2, frac(1, 2)));
        const auto rJ = build_operator(OpKind::rJ2, jac_params(N, 2, frac(1, 2)));
        const auto C = build_operator(OpKind::Cy2, cy_params(N, 2, frac(3, 2)));
        const auto rC = build_operator(OpKind::rCy2, cy_params(N, 2, frac(3, 2)));
        for (int i = 0; i < points; ++i) {
            const double xj = -0.9 + 1.8 * i / (points - 1), xc = -4.0 + 8.0 * i / (points - 1);
            const auto w = tag({{"N", str(N)}, {"i", str(i)}});
            t.add(residual(J, rj, xj), "jacobi " + w);
            t.add(residual(rJ, rrj, xj), "jacobi r " + w);
            t.add(residual(C, rc, xc), "cauchy " + w);
            t.add(residual(rC, rrc, xc), "cauchy r " + w);
        }
    }
    // beta = 4: the density built from the operator has the recurrence moments and is annihilated
    for (int N : {2, 3})
        for (int a : {1, 2}) {
            const auto spec = EnsembleSpec::jacobi_sym(N, 4, a);
            const auto op = build_operator(OpKind::Jb, jac_params(N, 4, a));
            const auto d = density_from_ode(op, WeightFn{spec}, 4 * (N - 1));
            const auto m = m2k_from_mu(mu_jacobi(spec, 1));
            for (unsigned k = 0; k <= 2; ++k) {
                const auto q = integrate([&](double x) { return std::pow(x, 2 * k) * d(x).real(); }, -1, 1, 1e-13);
                t.add(rel(q.value, m[k].get_d()), tag({{"beta", "4"}, {"N", str(N)}, {"a", str(a)}, {"m", str(2 * k)}}));
            }
            const auto ev = DensityEvaluator::from_exact(d);
            for (int i = 0; i < points; ++i)
                t.add(residual(op, ev, -0.9 + 1.8 * i / (points - 1)), tag({{"beta", "4"}, {"N", str(N)}, {"i", str(i)}}));
        }
    // scaling limit at the weight singularity
    for (double al : {0.5, 1.0, 2.0}) {
        OpParams p;
        p.alpha = ComplexRational(Rational(al));
        const auto op = build_operator(OpKind::SS, p);
        DensityEvaluator f;
        f.f = [al](cdouble x) { return cdouble(spectrum_singularity_density(al, x.real())); };
        for (int i = 0; i < points; ++i) {
            const double x = 0.25 + 7.75 * i / (points - 1);
            // h = 0.1 balances truncation against Bessel rounding better than the default step here
            t.add(residual(op, f, x, 0.1), tag({{"singularity alpha", str(al)}, {"x", str(x)}}));
        }
    }
}

void continuation(Tally& rel_t, Tally& norm_t) {
    for (int N = 1; N <= 4; ++N)
        for (double al : {0.25, 1.0 / 3.0}) {
            for (int i = 0; i <= 18; ++i) {
                const double x = -0.9 + 0.1 * i;
                rel_t.add(check_continuation_relation(N, al, x), tag({{"N", str(N)}, {"alpha", str(al)}, {"x", str(x)}}));
            }
            for (int beta : {2, 4})
                norm_t.add(check_norm_identity(N, beta, al), tag({{"norm N", str(N)}, {"beta", str(beta)}, {"alpha", str(al)}}));
        }
    for (int N = 1; N <= 4; ++N) norm_t.add(check_norm_identity(N, 2, cdouble(0.3, 0.2)), tag({{"norm N", str(N)}, {"alpha", "0.3+0.2i"}}));
}

void harer_zagier(Tally& t) {
    for (int N = 1; N <= 5; ++N) {
        const auto g = gue_moments(N, 5);
        t.exact(g[1], Rational(N * N), tag({{"gaussian m2 N", str(N)}}));
        t.exact(g[2], Rational(2 * N * N * N + N), tag({{"gaussian m4 N", str(N)}}));
        for (unsigned k = 0; k <= 5; ++k)
            t.add(rel(harer_zagier_scaled(N, 1000000, k), g[k].get_d()), tag({{"N", str(N)}, {"k", str(k)}}));
    }
}

void global_limit(Tally& t) {
    const int N = 400;
    const Rational ah(1);
    const auto mu = mu_cauchy_values(N, 2, ah * N, 6);
    for (unsigned k = 0; k <= 6; ++k)
        t.add(rel(Rational(mu[k] / N).get_d(), mu_hat(ah, k).get_d()), tag({{"N", str(N)}, {"k", str(k)}}));
    // leading order of the beta = 1, 4 recurrences, exactly
    for (int beta : {1, 4})
        for (const Rational& a : {Rational(1), frac(1, 2)}) {
            const auto lead = mu_cauchy_large_n(beta, a, 6, 0);
            for (unsigned k = 0; k <= 6; ++k) {
                const auto w = tag({{"beta", str(beta)}, {"alpha_hat", str(a)}, {"k", str(k)}});
                t.exact(limit_recurrence_defect(beta, a, k), 0, "defect " + w);
                t.exact(lead[k][0], mu_hat(a, k), "leading " + w);
            }
        }
}

void resolvent(Tally& series, Tally& fit) {
    struct Case {
        int beta, N, alpha;
    };
    for (const Case c : {Case{2, 2, 5}, Case{4, 2, 6}, Case{1, 2, 6}}) {
        const auto r = resolvent_inhomogeneous_check(c.beta, c.N, c.alpha, 8);
        for (std::size_t i = 0; i < r.coefficients.size(); ++i)
            series.exact(r.coefficients[i], 0,
                         tag({{"beta", str(c.beta)}, {"N", str(c.N)}, {"alpha", str(c.alpha)},
                              {"power", str(r.top_power - static_cast<long>(i))}}));
    }
    const Rational ah(1);
    const auto s = resolvent_expansion(2, ah, 2).coefficients[2].large_x(7);
    const double predicted = Rational(s[4] + s[6]).get_d();
    const auto [c, d] = fit_mu2_correction(ah, {50, 100, 150, 200, 250, 300, 350, 400});
    (void)d;
    fit.add(rel(c, predicted), tag({{"fit", str(c)}, {"predicted", str(predicted)}}));
}

void duality(Tally& t) {
    for (int beta : {1, 4})
        for (int N : {2, 3}) {
            const auto r = duality_check(N, beta, beta == 4 ? 3 : 4, 4);
            for (std::size_t k = 0; k < r.lhs.size(); ++k)
                t.exact(r.lhs[k], r.rhs[k], tag({{"beta", str(beta)}, {"N", str(N)}, {"m", str(2 * k)}}));
            if (!r.holds && t.first_bad.empty()) t.first_bad = tag({{"beta", str(beta)}, {"N", str(N)}});
        }
}

void sampler(Tally& t, std::string& note) {
    const int N = 50;
    const double ah = 1.0;
    McmcOptions opt;
    opt.sweeps = 100000;
    opt.seed = 1;
    const auto run = mcmc_sample(EnsembleSpec::cauchy_sym(N, 2, N), opt);
    const auto g = global_density(ah);
    const unsigned bins = 20;
    const auto h = run.histogram(g.u_minus, g.u_plus, bins);
    const double width = (g.u_plus - g.u_minus) / bins;
    for (unsigned i = 0; i < bins; ++i) {
        const double lo = g.u_minus + i * width;
        const double avg = integrate_with_fallback([&](double x) { return g(x); }, lo, lo + width, 1e-10).value / width;
        t.add(std::abs(h[i] - avg), tag({{"bin", str(i)}}));
    }
    std::ostringstream os;
    os << "acceptance " << run.acceptance;
    if (!run.acceptance_in_range) os << " (outside 20-40%)";
    note = os.str();
}

struct CheckDef {
    std::string id;
    std::string description;
    double tolerance;
    double time_limit;
    std::function<void(CheckResult&)> body;
};

CheckResult finish(CheckResult r, const Tally& t) {
    r.max_residual = t.worst;
    r.passed = t.first_bad.empty();
    if (!r.passed) r.note = "first failure at " + t.first_bad + (r.note.empty() ? "" : "; " + r.note);
    return r;
}

const std::vector<CheckDef>& checks() {
    static const std::vector<CheckDef> defs = {
        {"hahn-closed-form", "continuous Hahn closed form equals the Jacobi recurrence, beta = 2", 0, 1,
         [](CheckResult& r) {
             Tally t(0);
             hahn_closed_form(t);
             r = finish(r, t);
         }},
        {"beta2-quadrature", "beta = 2 recurrence moments against quadrature of the exact density", 1e-9, 10,
         [](CheckResult& r) {
             Tally t(1e-9);
             beta2_quadrature(t);
             r = finish(r, t);
         }},
        {"beta14-brute-force", "beta = 1, 4 recurrence m2, m4 against the N-fold integral", 1e-7, 120,
         [](CheckResult& r) {
             Tally t(1e-7);
             beta14_brute_force(t);
             r = finish(r, t);
         }},
        {"ode-residuals", "differential operators annihilate the densities", 1e-7, 0,
         [](CheckResult& r) {
             Tally t(1e-7);
             ode_residuals(t);
             r = finish(r, t);
         }},
        {"continuation", "Cauchy/Jacobi density continuation and normalisation identities", 1e-8, 0,
         [](CheckResult& r) {
             Tally a(1e-8), b(1e-10);
             continuation(a, b);
             r = finish(r, a);
             if (!b.first_bad.empty()) {
                 r.passed = false;
                 r.note += (r.note.empty() ? "" : "; ") + ("normalisation fails at " + b.first_bad);
             }
             r.note += (r.note.empty() ? "" : "; ") + ("normalisation worst " + str(b.worst));
         }},
        {"harer-zagier", "large-a Jacobi moments tend to the Gaussian ones", 1e-4, 0,
         [](CheckResult& r) {
             Tally t(1e-4);
             harer_zagier(t);
             r = finish(r, t);
         }},
        {"global-limit", "N = 400 Cauchy moments near the limiting ones; exact leading order for beta = 1, 4", 1e-2, 0,
         [](CheckResult& r) {
             Tally t(1e-2);
             global_limit(t);
             r = finish(r, t);
         }},
        {"resolvent", "resolvent equation series residual and the 1/N^2 moment correction", 0, 0,
         [](CheckResult& r) {
             Tally series(0), fit(0.05);
             resolvent(series, fit);
             r = finish(r, series);
             r.tolerance = 0.05;
             r.max_residual = fit.worst;
             if (!fit.first_bad.empty()) {
                 r.passed = false;
                 r.note += (r.note.empty() ? "" : "; ") + ("fit off: " + fit.first_bad);
             }
             if (series.worst > 0) r.note += (r.note.empty() ? "" : "; ") + ("series residual " + str(series.worst));
         }},
        {"duality", "beta <-> 4/beta duality of Cauchy moments", 0, 0,
         [](CheckResult& r) {
             Tally t(0);
             duality(t);
             r = finish(r, t);
         }},
        {"sampler", "Metropolis histogram against the limiting density, N = 50", 0.05, 120,
         [](CheckResult& r) {
             Tally t(0.05);
             std::string note;
             sampler(t, note);
             r = finish(r, t);
             r.note += (r.note.empty() ? "" : "; ") + note;
         }},
    };
    return defs;
}

}  // namespace

const std::vector<std::string>& check_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& d : checks()) v.push_back(d.id);
        return v;
    }();
    return ids;
}

CheckResult run_check(const std::string& id) {
    const auto& defs = checks();
    const auto it = std::find_if(defs.begin(), defs.end(), [&](const CheckDef& d) { return d.id == id; });
    if (it == defs.end()) throw std::invalid_argument("unknown check '" + id + "'");
    CheckResult r;
    r.id = it->id;
    r.description = it->description;
    r.tolerance = it->tolerance;
    r.time_limit = it->time_limit;
    const auto start = std::chrono::steady_clock::now();
    try {
        it->body(r);
    } catch (const std::exception& e) {
        r.passed = false;
        r.note = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.time_limit > 0 && r.seconds > r.time_limit) {
        r.passed = false;
        r.note += (r.note.empty() ? "" : "; ") + ("took " + str(r.seconds) + " s, limit " + str(r.time_limit) + " s");
    }
    return r;
}

std::vector<CheckResult> run_suite(const std::string& suite, unsigned jobs) {
    std::vector<std::string> ids;
    if (suite == "all") {
        ids = check_ids();
    } else if (suite == "quick") {
        for (const auto& id : check_ids())
            if (id != "sampler") ids.push_back(id);
    } else {
        std::stringstream ss(suite);
        for (std::string id; std::getline(ss, id, ',');) {
            if (std::find(check_ids().begin(), check_ids().end(), id) == check_ids().end())
                throw std::invalid_argument("unknown check '" + id + "'");
            ids.push_back(id);
        }
    }
    std::vector<CheckResult> out(ids.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < ids.size(); ++i) out[i] = run_check(ids[i]);
        return out;
    }
    // simple batches of `jobs` concurrent checks
    for (std::size_t start = 0; start < ids.size(); start += jobs) {
        std::vector<std::future<CheckResult>> fut;
        for (std::size_t i = start; i < std::min(ids.size(), start + jobs); ++i)
            fut.push_back(std::async(std::launch::async, run_check, ids[i]));
        for (std::size_t i = 0; i < fut.size(); ++i) out[start + i] = fut[i].get();
    }
    return out;
}

}  // namespace rmt
