#include "ltlab/gaussian.hpp"

#include <cmath>

namespace ltl {

double factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial: negative argument");
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

double hermite(int n, double x) {
    if (n < 0) throw std::invalid_argument("hermite: order must be non-negative");
    if (n == 0) return 1.0;
    if (n == 1) return x;
    // three-term recurrence; stable for this scaling since the coefficients
    // 1/(k+1) keep the values from blowing up
    double hm1 = 1.0, h = x;
    for (int k = 1; k < n; ++k) {
        double hp1 = (x * h - hm1) / (k + 1);
        hm1 = h;
        h = hp1;
    }
    return h;
}

double hermite_even_at_zero(int m) {
    if (m < 0) throw std::invalid_argument("hermite_even_at_zero: m must be >= 0");
    double v = 1.0;
    for (int k = 1; k <= m; ++k) v *= -0.5 / k;
    return v;
}

double heat_kernel(double t, double y) {
    if (t <= 0) throw std::invalid_argument("heat_kernel: t must be positive");
    return std::exp(-y * y / (2.0 * t)) / std::sqrt(2.0 * M_PI * t);
}

double heat_kernel_deriv(int n, double t, double y) {
    if (t <= 0) throw std::invalid_argument("heat_kernel_deriv: t must be positive");
    if (n < 0) throw std::invalid_argument("heat_kernel_deriv: order must be >= 0");
    if (n == 0) return heat_kernel(t, y);
    const double z = y / std::sqrt(t);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return factorial(n) * std::pow(t, -0.5 * n) * sign * heat_kernel(t, y) * hermite(n, z);
}

double expected_heat_deriv(int n, double t, double mean, double var) {
    if (t <= 0) throw std::invalid_argument("expected_heat_deriv: t must be positive");
    if (var < 0) throw std::invalid_argument("expected_heat_deriv: var must be >= 0");
    return heat_kernel_deriv(n, t + var, mean);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace ltl
