#pragma once

#include <optional>

#include "ltlab/quadrature.hpp"

namespace ltl {

// Kernel family of the shifted Riesz-potential machinery:
//   psi(xi)  = sin^2(xi/2)
//   f_h(xi)  = h^{-(5/2-beta)} psi(h xi) / |xi|^{3-beta}
//   g_h      = unitary Fourier transform of f_h (non-negative, even)
//   K^beta_t = f_beta * p_t'  with f_beta(x) = |x|^{-beta}
struct RieszSpec {
    double beta;                  // in (1/2, 1]
    double h;                     // > 0
    std::optional<double> gamma;  // in (3/4, 1), with beta = 2*gamma - 1

    void validate() const;
    static RieszSpec from_gamma(double gamma, double h);
};

double psi(double xi);

// f_h evaluated in Fourier variables; rejects xi == 0 (pole).
double f_h_fourier(const RieszSpec& spec, double xi);

struct GhValue {
    double value;
    double closed_form_constant;  // calibrated constant of the spatial representation
};

// g_h(x) by the closed form  c/h^{5/2-beta} * int_{x-h}^{x+h} (h-|x-y|) |y|^-beta dy.
// The constant c is calibrated once per beta against the Fourier route
// (least squares over 8 reference points) and cached.
GhValue g_h_eval(const RieszSpec& spec, double x, const QuadratureConfig& q);

// g_h(x) straight from the Fourier definition (oscillatory quadrature); the
// independent route used for calibration and cross-checks.
double g_h_fourier_transform(const RieszSpec& spec, double x, const QuadratureConfig& q);

struct GhL2Norm {
    double fourier;  // int psi^2(xi) |xi|^{2 beta - 6} dxi  (h-free)
    double spatial;  // int g_h(x)^2 dx by direct quadrature
};
GhL2Norm g_h_l2_norm(const RieszSpec& spec, const QuadratureConfig& q);

// int g_h(x) p_t(x) dx via the Fourier route; bounded by c h^{beta-1/2} t^{-beta/2}.
double g_h_heat_pairing(const RieszSpec& spec, double t, const QuadratureConfig& q);

// K^beta_t(x) = (f_beta * p_t')(x), an odd function of x, evaluated as
//   -(C_beta/pi) int_0^inf xi^beta sin(xi x) e^{-t xi^2/2} dxi,
// C_beta = 2 Gamma(1-beta) sin(pi beta / 2).
double riesz_K(double beta, double t, double x, const QuadratureConfig& q);

// c_gamma = int |y|^-gamma |1-y|^-gamma dy (the convolution f_gamma*f_gamma at 1).
double riesz_constant_c_gamma(double gamma, const QuadratureConfig& q);

// Calibrated closed-form constant for the current beta (exposed for reporting).
double g_h_closed_form_constant(double beta, const QuadratureConfig& q);

}  // namespace ltl
