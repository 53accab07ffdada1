#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace ltl {

struct Path {
    int dim = 1;
    double dt = 0.0;
    // flattened values, length (n_steps+1)*dim, starting at the origin
    std::vector<double> values;
    std::uint64_t seed = 0;

    int n_steps() const { return static_cast<int>(values.size()) / dim - 1; }
    double horizon() const { return n_steps() * dt; }
    double at(int k, int c = 0) const { return values[static_cast<std::size_t>(k) * dim + c]; }
};

struct LocalTimeField {
    double grid_min = 0.0;
    double grid_max = 0.0;
    double bin_width = 0.0;
    std::vector<double> mass;  // occupation density per bin
    double horizon = 0.0;

    int bin_of(double x) const;
    double value_at(double x) const;           // density of the bin containing x
    double total_mass() const;                 // sum(mass) * bin_width == horizon
};

struct Discretization {
    double dt = 0.0;
    double bin_width = 0.0;
    double mollifier_eps = 0.0;
};

struct PathFunctionalResult {
    double value = 0.0;
    Discretization discretization;
    std::uint64_t path_seed = 0;
};

Path sample_path(int dim, int n_steps, double T, std::uint64_t seed);

// Occupation histogram of a 1-d path: time within each step is apportioned
// across bins by linear interpolation, so sum(mass)*bin_width == horizon
// exactly. Bin edges sit at half-integer multiples of bin_width (0 is a bin
// center).
LocalTimeField local_time_field(const Path& path, double bin_width);

// Occupation field up to each requested horizon index (single pass).
std::vector<LocalTimeField> local_time_fields_at(const Path& path, double bin_width,
                                                 const std::vector<int>& step_indices);

// int (L(x+h) - L(x))^2 dx on matched grids. The grid step is snapped to
// h/round(h/bin_width) so the shift is a whole number of bins.
PathFunctionalResult l2_modulus_H(const Path& path, double h, double bin_width);

// c_gamma * sum over time-grid pairs of
//   [2 f_beta - f_beta(.+h) - f_beta(.-h)](B_v - B_u) dt^2,
// f_beta floored at `clip`. The production path bins the samples and applies
// the kernel over bin lags (FFT autocorrelation); `riesz_hamiltonian_direct`
// is the quadratic-cost reference.
PathFunctionalResult riesz_hamiltonian(const Path& path, double h, double gamma, double clip,
                                       double c_gamma = 1.0);
PathFunctionalResult riesz_hamiltonian_direct(const Path& path, double h, double gamma,
                                              double clip, double c_gamma = 1.0);

// Mollified self-intersection time sum_{u<v} p_eps(B_v - B_u) dt^2 with a
// Gaussian mollifier; histogram fast path plus a direct reference.
PathFunctionalResult self_intersection_lt(const Path& path, double eps);
PathFunctionalResult self_intersection_lt_direct(const Path& path, double eps);

// Riemann approximation of int_0^r e^{i xi (B_r - B_u)} du.
std::complex<double> oscillatory_time_integral(const Path& path, double r, double xi);

// Gaussian-bracket window functional sum [p_eps(z+h)+p_eps(z-h)-2 p_eps(z)]
// over time pairs: mollified counterpart of the L^2 modulus.
PathFunctionalResult mollified_modulus(const Path& path, double h, double eps);

}  // namespace ltl
