#pragma once

// Truncated Laurent series in one variable t with rational coefficients and explicit
// absolute precision: every coefficient below t^precision() is exact, nothing above is known.

#include <vector>

#include "rmt/rational.hpp"

namespace rmt {

class Laurent {
public:
    /// Precision given to constants and monomials when none is passed (per thread).
    static long default_precision();
    /// Sets the default precision for the lifetime of the guard.
    class PrecisionScope {
    public:
        explicit PrecisionScope(long prec);
        ~PrecisionScope();
        PrecisionScope(const PrecisionScope&) = delete;
        PrecisionScope& operator=(const PrecisionScope&) = delete;

    private:
        long saved_;
    };

    Laurent() : prec_(default_precision()) {}
    Laurent(const Rational& q) : Laurent(q, default_precision()) {}  // NOLINT: constants lift implicitly
    Laurent(const Rational& q, long prec);
    Laurent(long q) : Laurent(Rational(q)) {}  // NOLINT
    /// coeffs[j] multiplies t^(val + j); known through t^(prec - 1).
    Laurent(long val, std::vector<Rational> coeffs, long prec);

    /// t^n, known to the default precision.
    static Laurent monomial(long n);

    bool is_zero() const { return c_.empty(); }
    /// Exponent of the first nonzero coefficient (precision() when none is known).
    long valuation() const { return c_.empty() ? prec_ : val_; }
    long precision() const { return prec_; }
    Rational coeff(long e) const;

    /// Multiplies by t^n.
    Laurent shifted(long n) const;
    /// d/dt.
    Laurent derivative() const;
    /// Drops everything from t^prec on.
    Laurent truncated(long prec) const;

    friend Laurent operator+(const Laurent& a, const Laurent& b);
    friend Laurent operator-(const Laurent& a);
    friend Laurent operator-(const Laurent& a, const Laurent& b) { return a + (-b); }
    friend Laurent operator*(const Laurent& a, const Laurent& b);
    /// Throws DegenerateParameterError if b has no known nonzero coefficient.
    friend Laurent operator/(const Laurent& a, const Laurent& b);

private:
    void normalise();

    long val_ = 0;
    long prec_ = 0;
    std::vector<Rational> c_;
};

inline bool vanishes(const Laurent& s) { return s.is_zero(); }

}  // namespace rmt
