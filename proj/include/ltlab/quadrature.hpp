#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ltl {

struct QuadratureConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-9;
    int max_subdivisions = 2000;
    double tail_cutoff = 1e4;

    void validate() const {
        if (abs_tol <= 0 || rel_tol <= 0)
            throw std::invalid_argument("QuadratureConfig: tolerances must be positive");
        if (max_subdivisions < 1)
            throw std::invalid_argument("QuadratureConfig: max_subdivisions must be >= 1");
    }
};

class quadrature_error : public std::runtime_error {
  public:
    explicit quadrature_error(const std::string& what) : std::runtime_error(what) {}
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;   // error-budget estimate (quadrature + truncation)
};

using Fn1 = std::function<double(double)>;

// Adaptive Gauss-Kronrod (15-point) on a finite interval.
QuadResult integrate(const Fn1& f, double a, double b, const QuadratureConfig& q);

// Integrand behaving like (x - sing)^sing_exponent (exponent > -1) at endpoint
// `sing` (= a or b): the leading power is removed by substitution and the rule
// never samples the singular point.
QuadResult integrate_endpoint_singular(const Fn1& f, double a, double b, double sing,
                                       const QuadratureConfig& q,
                                       double sing_exponent = 0.0);

// Same, with the integrand given as f(x, dist) where dist = |x - sing| is
// supplied exactly (avoids cancellation when sing != 0).
using Fn2 = std::function<double(double, double)>;
QuadResult integrate_endpoint_singular(const Fn2& f, double a, double b, double sing,
                                       const QuadratureConfig& q, double sing_exponent);

// Integrand smooth on octaves but spanning many scales (e.g. ~1/x over
// [a, b] with b/a large): per-octave adaptive panels, summed exactly.
QuadResult integrate_octaves(const Fn1& f, double a, double b, const QuadratureConfig& q);

// Semi-infinite [a, inf): truncates at a + scale*tail_cutoff and adds the caller's
// analytic tail bound at the truncation point to the error budget.
QuadResult integrate_semi_infinite(const Fn1& f, double a, const QuadratureConfig& q,
                                   double scale = 1.0,
                                   const std::function<double(double)>& tail_bound = {});

// Oscillatory integrand on [a, inf): the domain is split at the zeros
// a + k*segment of the oscillating factor and segments are summed until both
// the segment magnitude and the tail bound fall below tolerance.
QuadResult integrate_oscillatory(const Fn1& f, double a, double segment,
                                 const QuadratureConfig& q,
                                 const std::function<double(double)>& tail_bound = {});

// Non-adaptive n-point Gauss-Legendre on [a, b] (building block; no error estimate).
double gauss_legendre(const Fn1& f, double a, double b, int n);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre_nodes(int n, std::vector<double>& x, std::vector<double>& w);

// int_Xi^inf xi^p cos(omega xi) dxi for p < -1: exact for omega = 0, otherwise
// a two-term integration-by-parts expansion with the remainder in `error`.
QuadResult power_cos_tail(double p, double omega, double Xi);

}  // namespace ltl
