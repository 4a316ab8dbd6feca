#pragma once

// Dense univariate polynomials with coefficients in an arbitrary ring.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <type_traits>
#include <utility>
#include <vector>

#include "rmt/rational.hpp"

namespace rmt {

namespace detail {
inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_zero(const ComplexRational& z) { return z.is_zero(); }
inline bool is_zero(const cdouble& z) { return z == cdouble(0.0, 0.0); }
inline bool is_zero(double v) { return v == 0.0; }
}  // namespace detail

/// c[0] + c[1] x + ... ; trailing zeros are trimmed so degree() is exact.
template <typename T>
class Poly {
public:
    Poly() = default;
    Poly(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }
    explicit Poly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
    Poly(const T& constant) : c_{constant} { trim(); }  // NOLINT

    static Poly x() { return Poly(std::vector<T>{T(0), T(1)}); }
    static Poly monomial(std::size_t k, const T& coeff = T(1)) {
        std::vector<T> v(k + 1, T(0));
        v[k] = coeff;
        return Poly(std::move(v));
    }

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<T>& coeffs() const { return c_; }
    T operator[](std::size_t k) const { return k < c_.size() ? c_[k] : T(0); }

    template <typename U>
    U operator()(const U& x) const {
        U acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + U(convert<U>(*it));
        return acc;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<T> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * T(static_cast<long>(k));
        return Poly(std::move(d));
    }

    /// Smallest power with a nonzero coefficient (0 for the zero polynomial).
    std::size_t valuation() const {
        for (std::size_t k = 0; k < c_.size(); ++k)
            if (!detail::is_zero(c_[k])) return k;
        return 0;
    }

    /// Divides by x^k; the low coefficients must be zero.
    Poly shift_down(std::size_t k) const {
        if (k >= c_.size()) return {};
        return Poly(std::vector<T>(c_.begin() + static_cast<std::ptrdiff_t>(k), c_.end()));
    }

    /// p(s x).
    Poly scale_argument(const T& s) const {
        std::vector<T> v = c_;
        T f(1);
        for (auto& ck : v) {
            ck = ck * f;
            f = f * s;
        }
        return Poly(std::move(v));
    }

    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] = c_[k] + o.c_[k];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] = c_[k] - o.c_[k];
        trim();
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(const Poly& a) { return Poly() - a; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (detail::is_zero(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
        }
        return Poly(std::move(r));
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    template <typename U, typename F>
    Poly<U> map(F&& f) const {
        std::vector<U> v;
        v.reserve(c_.size());
        for (const auto& ck : c_) v.push_back(f(ck));
        return Poly<U>(std::move(v));
    }

private:
    void trim() {
        while (!c_.empty() && detail::is_zero(c_.back())) c_.pop_back();
    }

    template <typename U>
    static U convert(const T& v) {
        if constexpr (std::is_same_v<T, Rational> && std::is_same_v<U, cdouble>) {
            return cdouble(v.get_d(), 0.0);
        } else if constexpr (std::is_same_v<T, Rational> && std::is_same_v<U, double>) {
            return v.get_d();
        } else if constexpr (std::is_same_v<T, ComplexRational> && std::is_same_v<U, cdouble>) {
            return v.to_complex();
        } else {
            return U(v);
        }
    }

    std::vector<T> c_;
};

template <typename T>
Poly<T> pow(const Poly<T>& p, unsigned n) {
    Poly<T> r(T(1)), b = p;
    while (n) {
        if (n & 1u) r *= b;
        b *= b;
        n >>= 1u;
    }
    return r;
}

}  // namespace rmt
