#pragma once

#include <optional>

namespace twolevel {

enum class DriveKind {
    Monochromatic,
    BichromaticSymmetric, // two equal-amplitude components at carrier +- detuning
};

// A drive field. `detuning` means: monochromatic -> offset of the atomic
// resonance from the laser, bichromatic -> half the component splitting.
// `carrier` (the optical frequency itself) is only needed to synthesise the
// real-time waveform; the probability formulas never look at it.
struct DriveSpec {
    DriveKind kind = DriveKind::Monochromatic;
    double omega_rabi = 0.0; // rad/s, angular convention (pi * d E0 / hbar)
    double detuning = 0.0;   // rad/s
    std::optional<double> carrier; // rad/s

    void validate() const; // DomainError on non-finite / negative omega_rabi
};

struct DimensionlessPoint {
    double x; // tau * Omega
    double y; // detuning / Omega
};

// Monochromatic excitation probability after pulse length tau:
//   P1 = [4 O^2 / (4 O^2 + dw^2)] sin^2( (tau/2) sqrt(4 O^2 + dw^2) )
// Even in dw exactly (enters through dw^2 only). Omega >= 0, tau >= 0.
double p1(double omega_rabi, double detuning, double tau);

// Detuning envelope of p1: 4 O^2 / (4 O^2 + dw^2). Maximum of p1 over tau.
// Throws DomainError when both arguments vanish (0/0).
double p1_envelope(double omega_rabi, double detuning);

// Symmetric bichromatic excitation probability:
//   P2 = sin^2( (O/dw) sin(dw tau) )
// Evaluated through |dw| (the expression is even), with a series branch for
// the removable dw -> 0 limit: P2 -> sin^2(O tau) when |dw tau| < 1e-8 and
// |dw| < 1e-8 O, and exactly at dw = 0.
double p2(double omega_rabi, double detuning, double tau);

// Unit-free forms with X = tau*Omega, Y = detuning/Omega:
//   p1 = [4/(4+Y^2)] sin^2( (X/2) sqrt(4+Y^2) ),  p2 = sin^2( sin(Y X)/Y )
double p1_dimensionless(DimensionlessPoint p);
double p2_dimensionless(DimensionlessPoint p);

// Real-time electric field at time t >= 0 for amplitude e0 per component:
//   mono      -> e0 cos((carrier - detuning) t)
//   bichrom   -> e0 [cos((carrier - detuning) t) + cos((carrier + detuning) t)]
// Requires spec.carrier; throws ConfigError if absent.
double field_waveform(const DriveSpec& spec, double e0, double t);

} // namespace twolevel
