#pragma once

#include <string>

namespace twolevel {

// Waiting-time densities for the joint emission/arrival model.
//
//   g1(gamma_s, t_l) = gamma_s exp(-gamma_s t_l)   (spontaneous decay,
//                                                   observed at the lifetime t_l)
//   g2(gamma_l, t_s) = gamma_l exp(-gamma_l t_s)   (laser-limited rate,
//                                                   observed at t_s)
//   g(t_l, t_s) = g1(1/t_s, t_l) g2(1/t_l, t_s)
//               = (1/(t_l t_s)) exp(-(t_l^2 + t_s^2)/(t_l t_s))
//
// All rates/times strictly positive and finite.
double g1(double gamma_s, double t_l);
double g2(double gamma_l, double t_s);
double g_joint(double t_l, double t_s);

// Normalised Lorentzian line profile value at `detuning` from centre:
//   L(dw) = (fwhm/2)^2 / (dw^2 + (fwhm/2)^2),  L(0) = 1, L(+-fwhm/2) = 1/2.
double lorentzian_profile(double detuning, double fwhm);

// The self-consistency condition X = exp(X - 2) has exactly two positive
// roots; the larger sits a fraction of a percent above pi.
struct FixedPointRoots {
    double x_small;         // ~0.1586
    double x_large;         // ~3.1462 ("pi-star")
    double residual_small;  // |x - exp(x-2)| at each root
    double residual_large;
};

// Bracketing bisection + Newton polish; postcondition: residuals <= tolerance.
// Requires 0 < tolerance <= 1e-6.
FixedPointRoots solve_fixed_point(double tolerance = 1e-12);

// Derived rate bundle for a measured spontaneous-emission time t_s.
struct LifetimeModel {
    double t_s;            // input [s]
    double gamma_s;        // 1/t_s [1/s]
    double pi_star;        // large fixed-point root
    double x_small;        // small fixed-point root
    double residual_large; // |f| at pi_star
    double residual_small; // |f| at x_small
    double gamma_l;        // pi_star / (19 t_s): laser-limited observed rate
    double gamma_lg;       // pi_star / (20 t_s): ensemble (grouped) variant
    double ratio_19;       // 19 / pi_star, the dimensionless rate ratio
    double t_l1;           // t_s / pi_star: short candidate timescale
    double t_l2;           // 20 t_s / pi_star: long candidate timescale
};

// Throws DomainError unless t_s is finite and > 0.
LifetimeModel lifetime_constants(double t_s);

// JSON document for the model: SI fields, display-unit duplicates (ns, MHz),
// and comparison entries using the literal pi in place of pi_star.
std::string lifetime_model_json(const LifetimeModel& m);

} // namespace twolevel
