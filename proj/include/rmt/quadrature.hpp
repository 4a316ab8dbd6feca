#pragma once

// Thin adaptive-quadrature layer over Boost.Math with the two variable changes the
// ensembles need: x = cos(theta) on (-1, 1) and x = tan(t) on the real line.

#include <cmath>
#include <functional>
#include <numbers>

namespace rmt {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // Kronrod error estimate
};

/// Adaptive Gauss-Kronrod (15-point) on [lo, hi]. Throws ToleranceError when the
/// estimated relative error stays above tol after max_depth bisections.
QuadResult integrate(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12,
                     unsigned max_depth = 20);

/// tanh-sinh on [lo, hi]; for integrands with endpoint singularities.
QuadResult integrate_tanh_sinh(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12);

/// Gauss-Kronrod first, tanh-sinh if its error estimate is not met.
QuadResult integrate_with_fallback(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12);

/// int_{-1}^{1} f(x) dx through x = cos(theta).
QuadResult integrate_interval(const std::function<double(double)>& f, double tol = 1e-12);

/// int_{-inf}^{inf} f(x) dx through x = tan(t).
QuadResult integrate_line(const std::function<double(double)>& f, double tol = 1e-12);

}  // namespace rmt
