#include "core/dynamics.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace twolevel {

namespace {

void check_finite(double v, const char* what) {
    if (!std::isfinite(v))
        throw DomainError(std::string(what) + " must be finite");
}

void check_args(double omega, double detuning, double tau) {
    check_finite(omega, "omega_rabi");
    check_finite(detuning, "detuning");
    check_finite(tau, "tau");
    if (omega < 0.0)
        throw DomainError("omega_rabi must be >= 0");
    if (tau < 0.0)
        throw DomainError("tau must be >= 0");
}

inline double sin_sq(double x) {
    const double s = std::sin(x);
    return s * s;
}

// Threshold pair below which (1/|dw|) sin(|dw| tau) is replaced by tau,
// i.e. p2 falls back to the resonant flopping curve.
constexpr double kP2TauPhase = 1e-8;  // on |dw * tau|
constexpr double kP2Ratio    = 1e-8;  // on |dw| / omega

} // namespace

void DriveSpec::validate() const {
    check_finite(omega_rabi, "omega_rabi");
    check_finite(detuning, "detuning");
    if (omega_rabi < 0.0)
        throw DomainError("omega_rabi must be >= 0");
    if (carrier) {
        check_finite(*carrier, "carrier");
        if (*carrier <= 0.0)
            throw DomainError("carrier must be > 0");
    }
}

double p1(double omega_rabi, double detuning, double tau) {
    check_args(omega_rabi, detuning, tau);
    if (omega_rabi == 0.0)
        return 0.0; // no drive, no transfer (also covers the 0/0 corner)
    const double four_o2 = 4.0 * omega_rabi * omega_rabi;
    const double w2 = four_o2 + detuning * detuning; // even in detuning by construction
    return (four_o2 / w2) * sin_sq(0.5 * tau * std::sqrt(w2));
}

double p1_envelope(double omega_rabi, double detuning) {
    check_finite(omega_rabi, "omega_rabi");
    check_finite(detuning, "detuning");
    if (omega_rabi < 0.0)
        throw DomainError("omega_rabi must be >= 0");
    if (omega_rabi == 0.0 && detuning == 0.0)
        throw DomainError("p1_envelope undefined at omega_rabi = detuning = 0");
    const double four_o2 = 4.0 * omega_rabi * omega_rabi;
    return four_o2 / (four_o2 + detuning * detuning);
}

double p2(double omega_rabi, double detuning, double tau) {
    check_args(omega_rabi, detuning, tau);
    const double ad = std::abs(detuning); // p2 is even in detuning: use |dw|
    if (ad == 0.0)
        return sin_sq(omega_rabi * tau);
    if (ad * tau < kP2TauPhase && ad < kP2Ratio * omega_rabi)
        return sin_sq(omega_rabi * tau);
    return sin_sq(omega_rabi / ad * std::sin(ad * tau));
}

double p1_dimensionless(DimensionlessPoint p) {
    check_finite(p.x, "X");
    check_finite(p.y, "Y");
    if (p.x < 0.0)
        throw DomainError("X = tau*Omega must be >= 0");
    const double w2 = 4.0 + p.y * p.y;
    return (4.0 / w2) * sin_sq(0.5 * p.x * std::sqrt(w2));
}

double p2_dimensionless(DimensionlessPoint p) {
    check_finite(p.x, "X");
    check_finite(p.y, "Y");
    if (p.x < 0.0)
        throw DomainError("X = tau*Omega must be >= 0");
    const double ay = std::abs(p.y);
    if (ay == 0.0)
        return sin_sq(p.x);
    if (ay * p.x < kP2TauPhase && ay < kP2Ratio)
        return sin_sq(p.x);
    return sin_sq(std::sin(ay * p.x) / ay);
}

double field_waveform(const DriveSpec& spec, double e0, double t) {
    spec.validate();
    check_finite(e0, "field amplitude");
    check_finite(t, "t");
    if (t < 0.0)
        throw DomainError("t must be >= 0");
    if (!spec.carrier)
        throw ConfigError("field_waveform needs DriveSpec.carrier");
    const double c = *spec.carrier;
    if (spec.kind == DriveKind::Monochromatic)
        return e0 * std::cos((c - spec.detuning) * t);
    return e0 * (std::cos((c - spec.detuning) * t) + std::cos((c + spec.detuning) * t));
}

} // namespace twolevel
