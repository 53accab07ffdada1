#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ltlab/quadrature.hpp"

namespace ltl {

// Chaos-projection kernels built from the window moment
//   phi_{h,2m}(t1, t2) = int_0^h d^{2m-2}p_tau/dy^{2m-2} (y) (h - y) dy,  tau = t2 - t1.
struct ChaosSpec {
    int m = 1;          // chaos order n = 2m
    double h = 0.1;     // window shift (1-d)
    double t = 1.0;     // time horizon
    int dim = 1;

    void validate() const;
};

// 2-d coordinate multi-index (entries in {1,2}, even length).
struct IndexVector {
    std::vector<int> i;
    void validate() const;
    int count_ones() const;
};

// Symmetric kernel of 2m time arguments that depends only on (min, max).
struct MinMaxKernel {
    std::function<double(double, double)> eval;  // (t_min, t_max) -> value
    int m = 1;
    double h = 0.0;
    bool gap_only = false;  // value depends only on t_max - t_min
};

// phi_{h,2m} by adaptive quadrature of the defining window integral.
double phi_1d(int m, double h, double t1, double t2,
              const QuadratureConfig& q = QuadratureConfig{});

// Fast closed-form evaluation of the same quantity (erf form for m = 1,
// antiderivative pair for m >= 2); used inside the heavy inner loops and
// pinned to phi_1d by tests.
double phi_1d_closed(int m, double h, double tau);

// f_h(t_1..t_2m) = phi_{h,2m}(min, max)
double kernel_f_h(const ChaosSpec& spec, std::span<const double> times,
                  const QuadratureConfig& q);

// g_{h,t}(t_1..t_2m) = -phi(min, t) + phi(0, t) - phi(0, max)
double kernel_g_h_t(const ChaosSpec& spec, std::span<const double> times,
                    const QuadratureConfig& q);

MinMaxKernel make_f_kernel(int m, double h);
MinMaxKernel make_g_kernel(int m, double h, double horizon);
MinMaxKernel make_sum_kernel(int m, double h, double horizon);  // f_h + g_{h,t}

// L^2 pairing of two min/max kernels over [0, min(s,t)]^{2m}, reduced to the
// two-dimensional weighted integral
//   (2m)!/(2m-2)! * int_{0<t1<t2<s} k1 k2 (t2-t1)^{2m-2} dt1 dt2.
double minmax_inner_product(const MinMaxKernel& k1, const MinMaxKernel& k2, int m, double s,
                            double t, const QuadratureConfig& q);

struct ContractionEstimate {
    double ratio;            // ||f_h (x)_r f_h||^2 / (h^8 ln^2(1/h))
    double ratio_std_error;
    double norm_sq;          // raw ||f_h (x)_r f_h||^2
    double norm_sq_std_error;
};

// Monte Carlo contraction norm over the reduced (min,max) representation;
// deterministic given seed, block-parallel with order-independent merge.
ContractionEstimate contraction_ratio(int m, int r, double h, double t, std::int64_t n_mc,
                                      std::uint64_t seed, bool parallel = true);

// 2-d Fourier window moment
//   int_{R^2} (prod_k xi_{i_k}) (1 - cos<h,xi>) |xi|^{-4} e^{-(t-s)|xi|^2/2} dxi
// evaluated in polar coordinates (angular trapezoid x radial adaptive).
double phi_2d(const IndexVector& idx, double h1, double h2, double t, double s,
              const QuadratureConfig& q);

}  // namespace ltl
