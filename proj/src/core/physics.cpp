#include "core/physics.hpp"

#include <cmath>

#include "core/constants.hpp"
#include "core/errors.hpp"

namespace twolevel {

namespace {

void require_nonneg_finite(double v, const char* what) {
    if (!std::isfinite(v))
        throw DomainError(std::string(what) + " must be finite");
    if (v < 0.0)
        throw DomainError(std::string(what) + " must be >= 0");
}

} // namespace

RabiValue rabi_from_field(const AtomPreset& atom, double e0) {
    atom.validate();
    require_nonneg_finite(e0, "field amplitude");
    const double omega_nu = atom.dipole * e0 / constants::hbar;
    return {constants::pi * omega_nu, omega_nu};
}

double intensity_from_field(double e0) {
    require_nonneg_finite(e0, "field amplitude");
    return 0.5 * constants::epsilon0 * constants::c0 * e0 * e0;
}

double field_from_intensity(double intensity) {
    require_nonneg_finite(intensity, "intensity");
    return std::sqrt(2.0 * intensity / (constants::epsilon0 * constants::c0));
}

RabiValue rabi_from_intensity(const AtomPreset& atom, double intensity) {
    atom.validate();
    require_nonneg_finite(intensity, "intensity");
    const double k = atom.dipole / constants::hbar *
                     std::sqrt(2.0 / (constants::epsilon0 * constants::c0));
    const double omega_nu = k * std::sqrt(intensity);
    return {constants::pi * omega_nu, omega_nu};
}

double spontaneous_emission_time(const AtomPreset& atom) {
    atom.validate(); // rules out omega0 <= 0 and dipole <= 0
    const double w = atom.omega0;
    const double d = atom.dipole;
    return 3.0 * constants::pi * constants::hbar * constants::epsilon0 *
           constants::c0 * constants::c0 * constants::c0 / (w * w * w * d * d);
}

} // namespace twolevel
