#pragma once

#include <cstdint>
#include <stdexcept>

namespace ltl {

// Scaled Hermite polynomials H_n(x) = ((-1)^n / n!) e^{x^2/2} d^n/dx^n e^{-x^2/2},
// i.e. the probabilists' polynomials divided by n!. Under this scaling
//   (n+1) H_{n+1}(x) = x H_n(x) - H_{n-1}(x),   H_{2m}(0) = (-1)^m / (2^m m!).
double hermite(int n, double x);

// H_{2m}(0) without cancellation.
double hermite_even_at_zero(int m);

// Heat kernel p_t(y) = (2*pi*t)^{-1/2} exp(-y^2 / (2t)) and its y-derivatives
//   d^n/dy^n p_t(y) = n! t^{-n/2} (-1)^n p_t(y) H_n(y / sqrt(t)).
double heat_kernel(double t, double y);
double heat_kernel_deriv(int n, double t, double y);

// E[p_t^{(n)}(N)] for N ~ Normal(mean, var); equals p_{t+var}^{(n)}(mean).
double expected_heat_deriv(int n, double t, double mean, double var);

// Standard normal distribution function.
double normal_cdf(double x);

double factorial(int n);

}  // namespace ltl
