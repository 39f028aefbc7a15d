#pragma once

#include <string_view>

#include "core/presets.hpp"

namespace twolevel {

// Rabi frequency of a drive field, carried in both conventions at once:
//   omega_nu = d E0 / hbar          (linear measure, 1/s)
//   omega    = pi * omega_nu        (angular measure used by the flopping
//                                    formulas, rad/s)
// The pi (not 2 pi) relation is the convention used throughout; every
// probability formula below takes `omega`.
struct RabiValue {
    double omega;    // rad/s
    double omega_nu; // 1/s
};

inline constexpr std::string_view kRabiConvention = "omega = pi * omega_nu";

// d E0 / hbar from a peak field amplitude E0 [V/m]. E0 >= 0, finite.
RabiValue rabi_from_field(const AtomPreset& atom, double e0);

// Time-averaged intensity of a plane wave, I = epsilon0 c0 E0^2 / 2 [W/m^2].
double intensity_from_field(double e0);

// Inverse of the above. I >= 0, finite.
double field_from_intensity(double intensity);

// Rabi value straight from intensity: omega_nu = K sqrt(I) with
// K = (d/hbar) sqrt(2/(epsilon0 c0)). Consistent with composing the two
// conversions above to ~1 ulp.
RabiValue rabi_from_intensity(const AtomPreset& atom, double intensity);

// Spontaneous-emission (natural) lifetime of the upper level:
//   t_S = 3 pi hbar epsilon0 c0^3 / (omega0^3 d^2)
// Throws DomainError for non-physical presets (zero dipole would mean an
// infinitely long-lived excited state).
double spontaneous_emission_time(const AtomPreset& atom);

} // namespace twolevel
