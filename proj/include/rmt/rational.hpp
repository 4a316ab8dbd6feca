#pragma once

// Exact arithmetic over Q and Q(i), backed by GMP.

#include <gmpxx.h>

#include <complex>
#include <ostream>
#include <string>
#include <string_view>

namespace rmt {

using Rational = mpq_class;
using Integer = mpz_class;
using cdouble = std::complex<double>;

/// n/d in canonical form (mpq_class(n, d) alone does not reduce).
inline Rational frac(long n, long d = 1) {
    Rational q(n, d);
    q.canonicalize();
    return q;
}

/// Parses "p/q", an integer, or a finite decimal such as "-0.25" or "1e-3" exactly.
Rational parse_rational(std::string_view text);

inline double to_double(const Rational& q) { return q.get_d(); }

/// Numerator and denominator as decimal strings, canonical form.
std::string numerator_string(const Rational& q);
std::string denominator_string(const Rational& q);

/// q^n for a (possibly negative) integer exponent.
Rational pow(const Rational& q, long n);

bool is_integer(const Rational& q);

/// Element of Q(i).
class ComplexRational {
public:
    ComplexRational() = default;
    ComplexRational(Rational re) : re_(std::move(re)) {}  // NOLINT: implicit by design of Q ⊂ Q(i)
    ComplexRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}
    ComplexRational(long v) : re_(v) {}  // NOLINT

    static ComplexRational i() { return {Rational(0), Rational(1)}; }

    const Rational& real() const { return re_; }
    const Rational& imag() const { return im_; }
    bool is_real() const { return sgn(im_) == 0; }
    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }

    ComplexRational conj() const { return {re_, -im_}; }
    Rational norm() const { return re_ * re_ + im_ * im_; }
    cdouble to_complex() const { return {re_.get_d(), im_.get_d()}; }

    ComplexRational& operator+=(const ComplexRational& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    ComplexRational& operator-=(const ComplexRational& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    ComplexRational& operator*=(const ComplexRational& o) {
        Rational r = re_ * o.re_ - im_ * o.im_;
        Rational m = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(m);
        return *this;
    }
    ComplexRational& operator/=(const ComplexRational& o);

    friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
    friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
    friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
    friend ComplexRational operator/(ComplexRational a, const ComplexRational& b) { return a /= b; }
    friend ComplexRational operator-(const ComplexRational& a) { return {-a.re_, -a.im_}; }
    friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const ComplexRational& a, const ComplexRational& b) { return !(a == b); }

    friend std::ostream& operator<<(std::ostream& os, const ComplexRational& z);

private:
    Rational re_{0};
    Rational im_{0};
};

ComplexRational pow(const ComplexRational& z, unsigned n);

}  // namespace rmt
