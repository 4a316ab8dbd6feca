#include "rmt/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <sstream>

#include "rmt/errors.hpp"

namespace rmt {

namespace {

void require(const QuadResult& r, double tol, const char* what) {
    if (!std::isfinite(r.value) || r.error > tol * std::max(1.0, std::abs(r.value))) {
        std::ostringstream os;
        os << what << ": error estimate " << r.error << " above tolerance " << tol << " (value " << r.value << ")";
        throw ToleranceError(os.str());
    }
}

}  // namespace

QuadResult integrate_with_fallback(const std::function<double(double)>& f, double lo, double hi, double tol) {
    try {
        return integrate(f, lo, hi, tol);
    } catch (const ToleranceError&) {
        // fractional powers at the endpoints defeat the Kronrod estimate
        return integrate_tanh_sinh(f, lo, hi, tol);
    }
}

QuadResult integrate(const std::function<double(double)>& f, double lo, double hi, double tol, unsigned max_depth) {
    QuadResult r;
    double l1 = 0.0;
    r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, lo, hi, max_depth, tol, &r.error, &l1);
    require(r, std::max(tol, 1e-15) * 10, "integrate");
    return r;
}

QuadResult integrate_tanh_sinh(const std::function<double(double)>& f, double lo, double hi, double tol) {
    boost::math::quadrature::tanh_sinh<double> ts;
    QuadResult r;
    double l1 = 0.0;
    r.value = ts.integrate(f, lo, hi, tol, &r.error, &l1);
    require(r, std::max(tol, 1e-15) * 10, "integrate_tanh_sinh");
    return r;
}

QuadResult integrate_interval(const std::function<double(double)>& f, double tol) {
    const auto g = [&f](double th) { return f(std::cos(th)) * std::sin(th); };
    return integrate_with_fallback(g, 0.0, std::numbers::pi, tol);
}

QuadResult integrate_line(const std::function<double(double)>& f, double tol) {
    const double h = 0.5 * std::numbers::pi;
    const auto g = [&f](double t) {
        const double c = std::cos(t);
        if (c == 0.0) return 0.0;
        return f(std::tan(t)) / (c * c);
    };
    return integrate_with_fallback(g, -h, h, tol);
}

}  // namespace rmt
