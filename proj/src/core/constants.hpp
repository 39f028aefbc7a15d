#pragma once

#include <numbers>

namespace twolevel {

// Fundamental constants in SI units, CODATA 2018.
struct PhysicalConstants {
    double hbar;     // reduced Planck constant [J s]
    double epsilon0; // vacuum permittivity [F/m]
    double c0;       // speed of light in vacuum [m/s]
};

inline constexpr PhysicalConstants kSi{
    1.054571817e-34,
    8.8541878128e-12,
    299792458.0,
};

namespace constants {

inline constexpr double hbar     = kSi.hbar;
inline constexpr double epsilon0 = kSi.epsilon0;
inline constexpr double c0       = kSi.c0;
inline constexpr double pi       = std::numbers::pi;

// 1 atomic unit of electric dipole moment (e*a0) in C m.
inline constexpr double dipole_au = 8.47835e-30;

} // namespace constants

} // namespace twolevel
