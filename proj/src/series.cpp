#include "rmt/series.hpp"

#include <algorithm>
#include <cstddef>

#include "rmt/errors.hpp"

namespace rmt {

namespace {
thread_local long g_default_prec = 16;
}

long Laurent::default_precision() { return g_default_prec; }

Laurent::PrecisionScope::PrecisionScope(long prec) : saved_(g_default_prec) { g_default_prec = prec; }
Laurent::PrecisionScope::~PrecisionScope() { g_default_prec = saved_; }

Laurent::Laurent(const Rational& q, long prec) : val_(0), prec_(prec), c_{q} { normalise(); }

Laurent::Laurent(long val, std::vector<Rational> coeffs, long prec) : val_(val), prec_(prec), c_(std::move(coeffs)) {
    if (val_ + static_cast<long>(c_.size()) > prec_) c_.resize(static_cast<std::size_t>(std::max(0L, prec_ - val_)));
    normalise();
}

Laurent Laurent::monomial(long n) { return Laurent(n, {Rational(1)}, n + default_precision()); }

Rational Laurent::coeff(long e) const {
    if (e < val_ || e - val_ >= static_cast<long>(c_.size())) return Rational(0);
    return c_[static_cast<std::size_t>(e - val_)];
}

Laurent Laurent::shifted(long n) const {
    Laurent r = *this;
    r.val_ += n;
    r.prec_ += n;
    return r;
}

Laurent Laurent::derivative() const {
    std::vector<Rational> d;
    for (long e = val_; e < val_ + static_cast<long>(c_.size()); ++e) d.push_back(coeff(e) * e);
    return Laurent(val_ - 1, std::move(d), prec_ - 1);
}

Laurent Laurent::truncated(long prec) const {
    if (prec >= prec_) return *this;
    return Laurent(val_, c_, prec);
}

Laurent operator+(const Laurent& a, const Laurent& b) {
    Laurent r;
    r.prec_ = std::min(a.prec_, b.prec_);
    r.val_ = std::min(a.valuation(), b.valuation());
    for (long e = r.val_; e < r.prec_; ++e) r.c_.push_back(a.coeff(e) + b.coeff(e));
    r.normalise();
    return r;
}

Laurent operator-(const Laurent& a) {
    Laurent r = a;
    for (auto& q : r.c_) q = -q;
    return r;
}

Laurent operator*(const Laurent& a, const Laurent& b) {
    Laurent r;
    r.val_ = a.valuation() + b.valuation();
    r.prec_ = std::min(a.prec_ + b.valuation(), b.prec_ + a.valuation());
    for (long e = r.val_; e < r.prec_; ++e) {
        Rational s(0);
        const long lo = std::max(a.val_, e - b.val_ - static_cast<long>(b.c_.size()) + 1);
        const long hi = std::min(e - b.val_, a.val_ + static_cast<long>(a.c_.size()) - 1);
        for (long i = lo; i <= hi; ++i) s += a.coeff(i) * b.coeff(e - i);
        r.c_.push_back(s);
    }
    r.normalise();
    return r;
}

Laurent operator/(const Laurent& a, const Laurent& b) {
    if (b.is_zero()) throw DegenerateParameterError("series division by a value that vanishes to working order");
    // 1/b = t^-vb (1/b0)(1 + ...), same relative precision as b
    const long rb = b.prec_ - b.val_;
    std::vector<Rational> inv(static_cast<std::size_t>(rb), Rational(0));
    inv[0] = 1 / b.c_[0];
    for (long n = 1; n < rb; ++n) {
        Rational s(0);
        const long top = std::min(n, static_cast<long>(b.c_.size()) - 1);
        for (long j = 1; j <= top; ++j) s += b.c_[static_cast<std::size_t>(j)] * inv[static_cast<std::size_t>(n - j)];
        inv[static_cast<std::size_t>(n)] = -s / b.c_[0];
    }
    return a * Laurent(-b.val_, std::move(inv), -b.val_ + rb);
}

void Laurent::normalise() {
    std::size_t lead = 0;
    while (lead < c_.size() && sgn(c_[lead]) == 0) ++lead;
    if (lead == c_.size()) {
        c_.clear();
        val_ = prec_;
        return;
    }
    c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
    val_ += static_cast<long>(lead);
    while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

}  // namespace rmt
