#pragma once

// The cross-check suite: each check compares a library result against an independent
// route (closed form, quadrature, brute force, sampling) at a fixed tolerance.

#include <string>
#include <vector>

namespace rmt {

struct CheckResult {
    std::string id;
    std::string description;
    bool passed = false;
    double max_residual = 0.0;   // worst deviation, in the units the tolerance is stated in
    double tolerance = 0.0;
    double seconds = 0.0;
    double time_limit = 0.0;     // 0: none
    std::string note;            // why it failed, or extra diagnostics
};

/// Ids in suite order.
const std::vector<std::string>& check_ids();

/// Runs one check. Exceptions inside the check count as failure and land in note.
CheckResult run_check(const std::string& id);

/// "all", "quick" (everything but the sampler), or a comma-separated list of ids.
/// Throws std::invalid_argument for an unknown id. jobs > 1 runs checks concurrently;
/// results come back in suite order either way.
std::vector<CheckResult> run_suite(const std::string& suite, unsigned jobs = 1);

}  // namespace rmt
