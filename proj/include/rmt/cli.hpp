#pragma once

// Command-line front end: parses a RunConfig, validates it, computes, and writes one CSV or
// JSON table. Exit codes: 0 success, 1 failed verification or computation, 2 invalid config.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace rmt {

enum class OutputFormat { Csv, Json };

struct RunConfig {
    std::string subcommand;
    std::string ensemble = "jacobi-sym";  // jacobi-sym | cauchy-sym | cauchy
    int N = 0;                            // 0: not given
    std::string beta = "2";
    std::string a;                        // Jacobi exponent
    std::string alpha;                    // Cauchy parameter, real part
    std::string alpha_imag = "0";
    std::string alpha_hat = "1";
    std::string alpha_hat_imag = "0";
    unsigned kmax = 10;
    std::string grid;                     // lo:hi:step
    unsigned L = 4;
    std::string density_mode;             // exact | ode | global | corrections
    bool singularity = false;             // ode-check: scaling limit at the weight singularity
    bool boundary = false;                // resolvent: evaluate inside the support at x - i0
    std::string suite = "all";
    unsigned jobs = 1;
    std::size_t n_samples = 100000;
    std::size_t burn_in = 1000;
    std::size_t thin = 10;
    std::uint64_t seed = 1;
    OutputFormat format = OutputFormat::Csv;
    std::string output;                   // empty: $RMT_OUTPUT_DIR/<subcommand>.<ext>, else stdout
};

/// Full run. Tables go to the configured destination (or `out` when none), messages to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rmt
