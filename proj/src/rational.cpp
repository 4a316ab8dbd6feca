#include "rmt/rational.hpp"

#include <cctype>
#include <stdexcept>
#include <string>

namespace rmt {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    if (auto slash = s.find('/'); slash != std::string::npos) {
        Rational q;
        if (q.set_str(s, 10) != 0 || sgn(q.get_den()) == 0)
            throw std::invalid_argument("malformed rational literal '" + s + "'");
        q.canonicalize();
        return q;
    }
    // decimal with optional exponent
    bool neg = false;
    std::size_t pos = 0;
    if (s[pos] == '+' || s[pos] == '-') {
        neg = s[pos] == '-';
        ++pos;
    }
    std::string mantissa = s.substr(pos);
    long exponent = 0;
    if (auto e = mantissa.find_first_of("eE"); e != std::string::npos) {
        std::string exp_part = mantissa.substr(e + 1);
        mantissa = mantissa.substr(0, e);
        std::string_view digits = exp_part;
        if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) digits.remove_prefix(1);
        if (!all_digits(digits)) throw std::invalid_argument("malformed exponent in '" + s + "'");
        exponent = std::stol(exp_part);
    }
    std::string int_part = mantissa, frac_part;
    if (auto dot = mantissa.find('.'); dot != std::string::npos) {
        int_part = mantissa.substr(0, dot);
        frac_part = mantissa.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty()) throw std::invalid_argument("malformed number '" + s + "'");
    if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)))
        throw std::invalid_argument("malformed number '" + s + "'");
    Integer num(int_part.empty() ? std::string("0") : int_part + frac_part, 10);
    if (int_part.empty()) num = Integer(frac_part, 10);
    exponent -= static_cast<long>(frac_part.size());
    Rational q(num);
    q *= pow(Rational(10), exponent);
    if (neg) q = -q;
    return q;
}

std::string numerator_string(const Rational& q) { return q.get_num().get_str(10); }
std::string denominator_string(const Rational& q) { return q.get_den().get_str(10); }

Rational pow(const Rational& q, long n) {
    if (n < 0) {
        if (sgn(q) == 0) throw std::domain_error("zero to a negative power");
        return pow(Rational(1) / q, -n);
    }
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(n));
    mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(n));
    Rational r(num, den);
    r.canonicalize();
    return r;
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

ComplexRational& ComplexRational::operator/=(const ComplexRational& o) {
    Rational d = o.norm();
    if (sgn(d) == 0) throw std::domain_error("division by zero in Q(i)");
    Rational r = (re_ * o.re_ + im_ * o.im_) / d;
    Rational m = (im_ * o.re_ - re_ * o.im_) / d;
    re_ = std::move(r);
    im_ = std::move(m);
    return *this;
}

std::ostream& operator<<(std::ostream& os, const ComplexRational& z) {
    if (z.is_real()) return os << z.re_;
    return os << '(' << z.re_ << (sgn(z.im_) < 0 ? " - " : " + ") << abs(z.im_) << "i)";
}

ComplexRational pow(const ComplexRational& z, unsigned n) {
    ComplexRational r(1), b = z;
    while (n) {
        if (n & 1u) r *= b;
        b *= b;
        n >>= 1u;
    }
    return r;
}

}  // namespace rmt
