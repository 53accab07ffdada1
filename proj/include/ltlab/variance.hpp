#pragma once

#include <array>
#include <optional>
#include <string>

#include "ltlab/quadrature.hpp"

namespace ltl {

struct VarianceLimit {
    int m;
    double sigma_sq;
    std::string normalization;  // "h^4 ln(1/h)" or "|h|^2"
    double quad_error = 0.0;
};

struct UnitVector2 {
    double x, y;
    void validate() const;
    static UnitVector2 from_angle(double theta);
};

// a(h) = int_{h/sqrt(s)}^inf u^-3 (s - h^2/u^2) G(u)^2 du with
// G(u) = int_0^u e^{-z^2/2} H_{2m-2}(z) (1 - z/u) dz. The inner integral is
// precomputed cumulatively on a z-grid and splined; a(h)/ln(1/h) tends to
// (s/4) H_{2m-2}(0)^2.
double a_of_h(int m, double h, double s, const QuadratureConfig& q);

// Closed-form variance coefficient of the 1-d window chaos projections:
// sigma_m^2 = (256/pi) (2m-2)! / (2^{2m} ((m-1)!)^2), built by recurrence so
// sigma_{m+1}^2 / sigma_m^2 = (2m-1)/(2m) holds exactly.
VarianceLimit sigma_sq_1d(int m);

// varphi(x, y) = int_0^inf u^-3 (1 - cos ux)(1 - cos uy) du
double varphi_2d(double x, double y, const QuadratureConfig& q);

// L_{2m} = int int <xi,eta>^{2m} |xi|^-4 |eta|^-4 varphi(<xi,e>, <eta,e>)
//          e^{-(|xi|^2+|eta|^2)/2} dxi deta  (rotation invariant in e).
// phi_cutoff replaces varphi by its tail-truncated version (lower limit moved
// up to the cutoff), used for monotone-convergence checks.
double L_2m_phi(int m, const UnitVector2& e, std::optional<double> phi_cutoff,
                const QuadratureConfig& q);

// sigma_m^2 = 2 L_{2m} / (2m-2)!, up to the universal constant of the 2-d
// chaos normalization (see docs/derivations.md).
VarianceLimit sigma_sq_2d(int m, const QuadratureConfig& q);

// E|X_t - X_s|^2 / (h^4 ln(1/h)) from the polarization of the kernel pairing.
double increment_variance_bound(int m, double h, double s, double t,
                                const QuadratureConfig& q);

}  // namespace ltl
