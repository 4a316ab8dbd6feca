#include "rmt/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

#include "rmt/asymptotics.hpp"
#include "rmt/ensembles.hpp"
#include "rmt/errors.hpp"
#include "rmt/moments.hpp"
#include "rmt/odes.hpp"
#include "rmt/oracle.hpp"
#include "rmt/verify.hpp"

namespace rmt {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr int kSchemaVersion = 1;

// Raised for anything wrong with the configuration; maps to exit 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
    json extra = json::object();  // JSON-only metadata
};

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_cell(const json& v) {
    if (v.is_null()) return "nan";
    if (v.is_string()) {
        const auto& s = v.get_ref<const std::string&>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + '"';
    }
    if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
    return format_double(v.get<double>());
}

std::string render(const Table& t, const RunConfig& cfg, const json& config_echo) {
    std::ostringstream os;
    if (cfg.format == OutputFormat::Csv) {
        for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
        os << '\n';
        for (const auto& r : t.rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_cell(r[i]);
            os << '\n';
        }
        return os.str();
    }
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = cfg.subcommand;
    doc["config"] = config_echo;
    doc["columns"] = t.columns;
    json rows = json::array();
    for (const auto& r : t.rows) {
        json o = json::object();
        for (std::size_t i = 0; i < r.size(); ++i) o[t.columns[i]] = r[i];
        rows.push_back(std::move(o));
    }
    doc["rows"] = std::move(rows);
    for (const auto& [k, v] : t.extra.items()) doc[k] = v;
    return doc.dump(2) + "\n";
}

// temp file in the target directory, then rename
void write_atomic(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        f << text;
        f.close();
        if (!f) throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    fs::rename(tmp, path);
}

// ------------------------------------------------------------------ config validation

std::vector<double> parse_grid(const std::string& g) {
    if (g.empty()) throw ConfigError("--grid lo:hi:step is required");
    std::vector<double> p;
    std::stringstream ss(g);
    for (std::string part; std::getline(ss, part, ':');) {
        try {
            std::size_t used = 0;
            p.push_back(std::stod(part, &used));
            if (used != part.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ConfigError("bad --grid component '" + part + "'");
        }
    }
    if (p.size() != 3) throw ConfigError("--grid needs lo:hi:step");
    const double lo = p[0], hi = p[1], step = p[2];
    if (!(step > 0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi))
        throw ConfigError("--grid needs lo <= hi and step > 0");
    const double span = (hi - lo) / step;
    if (span > 1e7) throw ConfigError("--grid has more than 10^7 points");
    const auto n = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = lo + static_cast<double>(i) * step;
    return xs;
}

Rational rational_opt(const std::string& value, const char* name) {
    try {
        return parse_rational(value);
    } catch (const std::invalid_argument&) {
        throw ConfigError(std::string("bad value for ") + name + ": '" + value + "'");
    }
}

Rational beta_of(const RunConfig& c) {
    const Rational b = rational_opt(c.beta, "--beta");
    if (b != 1 && b != 2 && b != 4) throw ConfigError("--beta must be 1, 2 or 4");
    return b;
}

void need_N(const RunConfig& c) {
    if (c.N < 1) throw ConfigError(c.subcommand + " needs --N >= 1");
}

// Ensemble spec from the flags; alpha may come from --alpha-hat under the global scaling.
EnsembleSpec spec_of(const RunConfig& c) {
    need_N(c);
    const Rational beta = beta_of(c);
    if (c.ensemble == "jacobi-sym") {
        if (c.a.empty()) throw ConfigError("jacobi-sym needs --a");
        const Rational a = rational_opt(c.a, "--a");
        if (a <= -1) throw ConfigError("--a must exceed -1");
        return EnsembleSpec::jacobi_sym(c.N, beta, a);
    }
    if (c.ensemble == "cauchy-sym" || c.ensemble == "cauchy") {
        Rational re;
        if (!c.alpha.empty())
            re = rational_opt(c.alpha, "--alpha");
        else
            re = rational_opt(c.alpha_hat, "--alpha-hat") * beta * c.N / 2;
        const Rational im = rational_opt(c.alpha_imag, "--alpha-imag");
        if (re <= -Rational(1, 2)) throw ConfigError("--alpha must exceed -1/2");
        if (c.ensemble == "cauchy-sym") {
            if (sgn(im) != 0) throw ConfigError("cauchy-sym takes a real --alpha; use --ensemble cauchy");
            return EnsembleSpec::cauchy_sym(c.N, beta, re);
        }
        return EnsembleSpec::cauchy(c.N, beta, ComplexRational(re, im));
    }
    throw ConfigError("unknown --ensemble '" + c.ensemble + "' (jacobi-sym, cauchy-sym, cauchy)");
}

json config_echo(const RunConfig& c) {
    json j;
    j["ensemble"] = c.ensemble;
    j["N"] = c.N;
    j["beta"] = c.beta;
    j["a"] = c.a;
    j["alpha"] = c.alpha;
    j["alpha_imag"] = c.alpha_imag;
    j["alpha_hat"] = c.alpha_hat;
    j["alpha_hat_imag"] = c.alpha_hat_imag;
    j["kmax"] = c.kmax;
    j["grid"] = c.grid;
    j["L"] = c.L;
    j["density_mode"] = c.density_mode;
    j["singularity"] = c.singularity;
    j["boundary"] = c.boundary;
    j["suite"] = c.suite;
    j["n_samples"] = c.n_samples;
    j["burn_in"] = c.burn_in;
    j["thin"] = c.thin;
    j["seed"] = c.seed;
    return j;
}

// ------------------------------------------------------------------ subcommands

Table cmd_moments(const RunConfig& c) {
    const auto spec = spec_of(c);
    if (c.ensemble == "cauchy") throw ConfigError("moments needs a symmetric ensemble");
    const auto seq = spec.is_jacobi() ? mu_jacobi(spec, c.kmax) : mu_cauchy(spec, c.kmax);
    const auto m = m2k_from_mu(seq);
    Table t;
    t.columns = {"k", "mu_exact_num", "mu_exact_den", "m2k_num", "m2k_den", "float_value", "formal"};
    for (unsigned k = 0; k <= c.kmax; ++k) {
        const auto& mu = seq.values[k];
        t.rows.push_back({k, mu.get_num().get_str(), mu.get_den().get_str(), m[k].get_num().get_str(),
                          m[k].get_den().get_str(), num(mu.get_d()), seq.is_formal(k)});
    }
    return t;
}

Table cmd_hahn(const RunConfig& c) {
    need_N(c);
    if (c.a.empty()) throw ConfigError("hahn needs --a");
    const Rational a = rational_opt(c.a, "--a");
    Table t;
    t.columns = {"quantity", "index", "num", "den", "re", "im"};
    for (unsigned k = 0; k <= c.kmax; ++k) {
        const Rational v = hahn_mu_exact(c.N, a, k);
        t.rows.push_back({"mu", k, v.get_num().get_str(), v.get_den().get_str(), num(v.get_d()), 0.0});
    }
    const auto p = hahn_polynomial_part(c.N, a);
    for (int j = 0; j <= p.degree(); ++j) {
        const Rational v = p[static_cast<std::size_t>(j)];
        t.rows.push_back({"poly_coeff", j, v.get_num().get_str(), v.get_den().get_str(), num(v.get_d()), 0.0});
    }
    const auto z = hahn_zeros(c.N, a);
    for (std::size_t j = 0; j < z.size(); ++j)
        t.rows.push_back({"zero", j, "", "", num(z[j].real()), num(z[j].imag())});
    return t;
}

LinearDiffOp operator_for(const EnsembleSpec& s) {
    OpParams p;
    p.N = s.N;
    p.beta = s.beta;
    p.a = s.a;
    p.alpha = s.alpha;
    const bool two = s.beta == 2;
    if (s.family == Family::JacobiSym) return build_operator(two ? OpKind::J2 : OpKind::Jb, p);
    if (s.family == Family::CauchySym) return build_operator(two ? OpKind::Cy2 : OpKind::Cyb, p);
    if (!two) throw ConfigError("the non-symmetric Cauchy operator is beta = 2 only");
    return build_operator(OpKind::CyNonSym2, p);
}

PolyWeightDensity ode_density(const EnsembleSpec& s) {
    if (s.beta == 1) throw ConfigError("no polynomial-times-weight density at beta = 1");
    const int degree = (s.beta == 2 ? 2 : 4) * (s.N - 1);
    return density_from_ode(operator_for(s), WeightFn{s}, degree);
}

Table cmd_density(const RunConfig& c) {
    const auto xs = parse_grid(c.grid);
    const std::string mode = c.density_mode.empty() ? "exact" : c.density_mode;
    Table t;
    t.columns = {"x", "value"};
    if (mode == "global") {
        const cdouble ah(rational_opt(c.alpha_hat, "--alpha-hat").get_d(),
                         rational_opt(c.alpha_hat_imag, "--alpha-hat-imag").get_d());
        if (!(ah.real() > 0)) throw ConfigError("--alpha-hat needs a positive real part");
        const auto g = global_density(ah);
        for (double x : xs) t.rows.push_back({num(x), num(g(x))});
        return t;
    }
    if (mode == "corrections") {
        const Rational beta = beta_of(c);
        const double ah = rational_opt(c.alpha_hat, "--alpha-hat").get_d();
        if (!(ah > 0)) throw ConfigError("--alpha-hat must be positive");
        t.columns = {"x", "value", "kind", "order"};
        DensityCorrection last;
        for (double x : xs) {
            last = density_correction(beta, ah, x);
            t.rows.push_back({num(x), num(last.smooth), last.near_endpoint ? "near_endpoint" : "smooth", last.order});
        }
        if (xs.empty()) last = density_correction(beta, ah, 0.0);
        for (const auto& d : last.deltas) t.rows.push_back({num(d.location), num(d.mass), "point_mass", last.order});
        return t;
    }
    const auto spec = spec_of(c);
    if (mode == "exact") {
        if (spec.beta != 2) throw ConfigError("density --exact is beta = 2 only; use --ode for beta = 4");
        for (double x : xs) t.rows.push_back({num(x), num(density_beta2(spec, x).real())});
        return t;
    }
    if (mode == "ode") {
        const auto d = ode_density(spec);
        for (double x : xs) t.rows.push_back({num(x), num(d(x).real())});
        return t;
    }
    throw ConfigError("unknown density mode '" + mode + "'");
}

Table cmd_ode_check(const RunConfig& c) {
    const auto xs = parse_grid(c.grid);
    Table t;
    t.columns = {"x", "residual_fd", "residual_exact"};
    if (c.singularity) {
        if (c.alpha.empty()) throw ConfigError("ode-check --singularity needs --alpha");
        const Rational al = rational_opt(c.alpha, "--alpha");
        if (al <= -Rational(1, 2)) throw ConfigError("--alpha must exceed -1/2");
        OpParams p;
        p.alpha = ComplexRational(al);
        const auto op = build_operator(OpKind::SS, p);
        const double ad = al.get_d();
        DensityEvaluator f;
        f.f = [ad](cdouble x) { return cdouble(spectrum_singularity_density(ad, x.real())); };
        for (double x : xs) {
            double r = NAN;
            try {
                r = residual(op, f, x);
            } catch (const std::exception&) {
            }
            t.rows.push_back({num(x), num(r), nullptr});
        }
        return t;
    }
    const auto spec = spec_of(c);
    const auto op = operator_for(spec);
    const auto exact = spec.beta == 2 ? density_beta2_exact(spec) : ode_density(spec);
    DensityEvaluator fd;
    if (spec.beta == 2)
        fd.f = [spec](cdouble x) { return density_beta2(spec, x); };
    else
        fd.f = [exact](cdouble x) { return exact(x); };
    const auto ev = DensityEvaluator::from_exact(exact);
    for (double x : xs) {
        double rf = NAN, re = NAN;
        try {
            rf = residual(op, fd, x);
            re = residual(op, ev, x);
        } catch (const std::exception&) {
        }
        t.rows.push_back({num(x), num(rf), num(re)});
    }
    return t;
}

Table cmd_resolvent(const RunConfig& c) {
    const auto xs = parse_grid(c.grid);
    const Rational beta = beta_of(c);
    const Rational ah = rational_opt(c.alpha_hat, "--alpha-hat");
    if (ah <= 0) throw ConfigError("--alpha-hat must be positive");
    const auto w = resolvent_expansion(beta, ah, c.L);
    Table t;
    t.columns = {"l", "x", "re", "im"};
    for (unsigned l = 0; l <= c.L; ++l)
        for (double x : xs) {
            cdouble v(NAN, NAN);
            try {
                v = w(l, x, c.boundary);
            } catch (const BranchError&) {
            }
            t.rows.push_back({l, num(x), num(v.real()), num(v.imag())});
        }
    return t;
}

Table cmd_verify(const RunConfig& c, std::ostream& err, bool& all_passed) {
    std::vector<CheckResult> results;
    try {
        results = run_suite(c.suite, c.jobs);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    Table t;
    t.columns = {"check_id", "status", "max_residual"};
    all_passed = true;
    for (const auto& r : results) {
        t.rows.push_back({r.id, r.passed ? "PASS" : "FAIL", num(r.max_residual)});
        all_passed = all_passed && r.passed;
        err << r.id << ": " << (r.passed ? "PASS" : "FAIL") << " (" << format_double(r.seconds) << " s)";
        if (!r.note.empty()) err << "  " << r.note;
        err << '\n';
    }
    return t;
}

Table cmd_sample(const RunConfig& c, std::ostream& err) {
    const auto spec = spec_of(c);
    if (spec.family == Family::CauchyNonSym) throw ConfigError("sample needs jacobi-sym or cauchy-sym");
    if (c.n_samples < 10000) throw ConfigError("--n-samples must be at least 10000");
    if (c.thin < 1) throw ConfigError("--thin must be positive");
    McmcOptions opt;
    opt.sweeps = c.n_samples;
    opt.burn_in = c.burn_in;
    opt.thin = c.thin;
    opt.seed = c.seed;
    const auto run = mcmc_sample(spec, opt);
    if (!run.acceptance_in_range)
        err << "warning: acceptance rate " << format_double(run.acceptance) << " outside 20-40%\n";
    Table t;
    t.columns = {"sample"};
    for (int l = 1; l <= spec.N; ++l) t.columns.push_back("x" + std::to_string(l));
    for (std::size_t s = 0; s < run.samples.size(); ++s) {
        std::vector<json> row{s};
        for (double x : run.samples[s]) row.push_back(num(x));
        t.rows.push_back(std::move(row));
    }
    t.extra["acceptance"] = num(run.acceptance);
    t.extra["step"] = num(run.step);
    return t;
}

void add_ensemble_flags(CLI::App* s, RunConfig& c) {
    s->add_option("--ensemble", c.ensemble, "jacobi-sym | cauchy-sym | cauchy")->capture_default_str();
    s->add_option("--N", c.N, "number of eigenvalues");
    s->add_option("--beta", c.beta, "1, 2 or 4")->capture_default_str();
    s->add_option("--a", c.a, "Jacobi exponent (rational, e.g. 3/2)");
    s->add_option("--alpha", c.alpha, "Cauchy parameter, real part");
    s->add_option("--alpha-imag", c.alpha_imag, "Cauchy parameter, imaginary part")->capture_default_str();
    s->add_option("--alpha-hat", c.alpha_hat, "global scaling: alpha = alpha_hat beta N / 2 when --alpha is absent")
        ->capture_default_str();
}

void add_output_flags(CLI::App* s, RunConfig& c) {
    s->add_option("--format", c.format, "csv | json")
        ->transform(CLI::CheckedTransformer(std::map<std::string, OutputFormat>{{"csv", OutputFormat::Csv},
                                                                                 {"json", OutputFormat::Json}},
                                            CLI::ignore_case));
    s->add_option("--output,-o", c.output, "output file (default: $RMT_OUTPUT_DIR/<command>.<ext>, else stdout)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Moments, densities and large-N expansions of Jacobi and Cauchy beta ensembles", "rmt"};
    app.require_subcommand(1);

    auto* moments = app.add_subcommand("moments", "exact mu_k and m_2k sequences");
    add_ensemble_flags(moments, c);
    moments->add_option("--kmax", c.kmax, "largest k")->capture_default_str();

    auto* hahn = app.add_subcommand("hahn", "beta = 2 Jacobi mu_k from the continuous Hahn closed form, and its zeros");
    hahn->add_option("--N", c.N, "number of eigenvalues");
    hahn->add_option("--a", c.a, "Jacobi exponent");
    hahn->add_option("--kmax", c.kmax, "largest k")->capture_default_str();

    auto* density = app.add_subcommand("density", "density on a grid");
    add_ensemble_flags(density, c);
    density->add_option("--alpha-hat-imag", c.alpha_hat_imag, "imaginary part of alpha_hat (--global)")
        ->capture_default_str();
    density->add_option("--grid", c.grid, "lo:hi:step");
    auto* g1 = density->add_flag_callback("--exact", [&] { c.density_mode = "exact"; }, "exact beta = 2 density (default)");
    auto* g2 = density->add_flag_callback("--ode", [&] { c.density_mode = "ode"; }, "density solved from the differential operator");
    auto* g3 = density->add_flag_callback("--global", [&] { c.density_mode = "global"; }, "limiting density at alpha_hat");
    auto* g4 = density->add_flag_callback("--corrections", [&] { c.density_mode = "corrections"; }, "first 1/N correction");
    g1->excludes(g2)->excludes(g3)->excludes(g4);
    g2->excludes(g3)->excludes(g4);
    g3->excludes(g4);

    auto* ode = app.add_subcommand("ode-check", "operator residuals on a grid");
    add_ensemble_flags(ode, c);
    ode->add_option("--grid", c.grid, "lo:hi:step");
    ode->add_flag("--singularity", c.singularity, "scaling limit at the weight singularity (uses --alpha)");

    auto* resolvent = app.add_subcommand("resolvent", "1/N expansion coefficients of the resolvent on a grid");
    resolvent->add_option("--beta", c.beta, "1, 2 or 4")->capture_default_str();
    resolvent->add_option("--alpha-hat", c.alpha_hat, "global scaling parameter")->capture_default_str();
    resolvent->add_option("--L", c.L, "highest order")->capture_default_str();
    resolvent->add_option("--grid", c.grid, "lo:hi:step");
    resolvent->add_flag("--boundary", c.boundary, "inside the support evaluate at x - i0 instead of nan");

    auto* verify = app.add_subcommand("verify", "cross-check suite; exit 1 on any failure");
    verify->add_option("--suite", c.suite, "all | quick | comma-separated check ids")->capture_default_str();
    verify->add_option("--jobs", c.jobs, "checks run concurrently")->capture_default_str();

    auto* sample = app.add_subcommand("sample", "Metropolis samples of the eigenvalues");
    add_ensemble_flags(sample, c);
    sample->add_option("--n-samples", c.n_samples, "sweeps after burn-in (>= 10000)")->capture_default_str();
    sample->add_option("--burn-in", c.burn_in, "sweeps discarded")->capture_default_str();
    sample->add_option("--thin", c.thin, "keep every thin-th sweep")->capture_default_str();
    sample->add_option("--seed", c.seed, "random seed")->capture_default_str();

    for (auto* s : {moments, hahn, density, ode, resolvent, verify, sample}) add_output_flags(s, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    c.subcommand = app.get_subcommands().front()->get_name();

    std::string text;
    bool passed = true;
    try {
        Table t;
        if (c.subcommand == "moments") t = cmd_moments(c);
        else if (c.subcommand == "hahn") t = cmd_hahn(c);
        else if (c.subcommand == "density") t = cmd_density(c);
        else if (c.subcommand == "ode-check") t = cmd_ode_check(c);
        else if (c.subcommand == "resolvent") t = cmd_resolvent(c);
        else if (c.subcommand == "verify") t = cmd_verify(c, err, passed);
        else t = cmd_sample(c, err);
        text = render(t, c, config_echo(c));
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const PoleError& e) {
        err << "error: parameters hit a pole: " << e.what() << '\n';
        return 2;
    } catch (const DegenerateParameterError& e) {
        err << "error: degenerate parameters: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        std::string path = c.output;
        if (path.empty())
            if (const char* dir = std::getenv("RMT_OUTPUT_DIR"); dir && *dir)
                path = (fs::path(dir) / (c.subcommand + (c.format == OutputFormat::Csv ? ".csv" : ".json"))).string();
        if (path.empty())
            out << text << std::flush;
        else
            write_atomic(path, text);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return passed ? 0 : 1;
}

}  // namespace rmt
