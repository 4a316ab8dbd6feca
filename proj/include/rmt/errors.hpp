#pragma once

#include <stdexcept>
#include <string>

namespace rmt {

/// A gamma function (or a recurrence denominator) was evaluated at a pole.
class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Parameters make a normalisation constant or recurrence coefficient vanish.
class DegenerateParameterError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The solution space of a coefficient-matching system is not one dimensional.
class RankDeficiencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Not enough series terms were supplied to decide the requested coefficients.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical procedure failed to reach its error target.
class ToleranceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point was requested where the evaluator has a branch cut or singularity.
class BranchError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace rmt
