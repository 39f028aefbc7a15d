#pragma once

#include <optional>
#include <string>
#include <vector>

namespace twolevel {

// Transition data for one two-level system. All angular frequencies in rad/s.
struct AtomPreset {
    std::string name;
    double omega0 = 0.0;                   // transition angular frequency [rad/s]
    double dipole = 0.0;                   // transition dipole moment [C m]
    std::optional<double> fine_splitting;  // doublet splitting [rad/s], if any
    std::string notes;

    // Throws DomainError unless omega0 > 0, dipole > 0, splitting >= 0 (all finite).
    void validate() const;
};

// Frequency-stability figures for a CW laser source, as specified by the vendor.
// These are data for linewidth/drift modelling, not behaviour.
struct LaserPreset {
    std::string name;
    double linewidth_hz = 0.0;            // short-term linewidth (FWHM) [Hz]
    double drift_hz_per_hour = 0.0;       // long-term drift [Hz/h]
    double temp_sensitivity_hz_per_c = 0.0; // cavity temperature coefficient [Hz/degC]
    std::optional<double> power_w;        // typical single-mode output power [W]
    std::string notes;
};

// Built-in atoms. Lookup is by exact name; unknown names throw ConfigError
// listing the known ones.
const AtomPreset& builtin_atom(const std::string& name);
std::vector<std::string> builtin_atom_names();

const std::vector<LaserPreset>& builtin_lasers();

// Parses a preset config file: blocks of "key = value" lines separated by
// blank lines, '#' starts a comment line. Keys: name, omega0_rad_s, dipole_Cm,
// fine_splitting_rad_s (optional), notes (optional). Unknown keys, missing
// required keys, unparsable numbers and duplicate names throw ConfigError.
std::vector<AtomPreset> load_atom_presets(const std::string& path);

// Built-in atoms plus (optionally) a preset file; file entries may shadow
// built-ins. Unknown name throws ConfigError.
AtomPreset find_atom(const std::string& name, const std::string& presets_path = "");

// Converts a dipole moment given in atomic units to C m.
double dipole_from_atomic_units(double d_au);

} // namespace twolevel
