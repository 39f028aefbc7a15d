#include "core/presets.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "core/constants.hpp"
#include "core/errors.hpp"

namespace twolevel {

void AtomPreset::validate() const {
    if (name.empty())
        throw DomainError("atom preset: name must not be empty");
    if (!std::isfinite(omega0) || omega0 <= 0.0)
        throw DomainError("atom preset '" + name + "': omega0 must be finite and > 0");
    if (!std::isfinite(dipole) || dipole <= 0.0)
        throw DomainError("atom preset '" + name + "': dipole must be finite and > 0");
    if (fine_splitting && (!std::isfinite(*fine_splitting) || *fine_splitting < 0.0))
        throw DomainError("atom preset '" + name + "': fine_splitting must be finite and >= 0");
}

namespace {

const std::vector<AtomPreset>& builtin_atoms() {
    static const std::vector<AtomPreset> atoms = [] {
        std::vector<AtomPreset> v;
        AtomPreset li;
        li.name = "lithium";
        li.omega0 = 2.0 * constants::pi * 4.468e14; // 2S1/2 - 2P resonance doublet
        li.dipole = 1.988e-29;                      // 2.3448 a.u.
        li.fine_splitting = 2.0 * constants::pi * 1.0e10;
        li.notes = "resonance doublet near 671 nm; splitting ~10 GHz";
        v.push_back(li);
        return v;
    }();
    return atoms;
}

} // namespace

const AtomPreset& builtin_atom(const std::string& name) {
    for (const auto& a : builtin_atoms())
        if (a.name == name)
            return a;
    std::string known;
    for (const auto& a : builtin_atoms())
        known += (known.empty() ? "" : ", ") + a.name;
    throw ConfigError("unknown atom preset '" + name + "' (built-in: " + known + ")");
}

std::vector<std::string> builtin_atom_names() {
    std::vector<std::string> names;
    for (const auto& a : builtin_atoms())
        names.push_back(a.name);
    return names;
}

const std::vector<LaserPreset>& builtin_lasers() {
    static const std::vector<LaserPreset> lasers = [] {
        std::vector<LaserPreset> v;
        LaserPreset ring;
        ring.name = "coherent-899-21";
        ring.linewidth_hz = 5.0e5;
        ring.drift_hz_per_hour = 5.0e7;
        ring.notes = "actively stabilised ring dye laser";
        v.push_back(ring);

        LaserPreset sw;
        sw.name = "spectra-physics-375d";
        sw.linewidth_hz = 0.0; // multimode standing-wave cavity; linewidth not quoted
        sw.temp_sensitivity_hz_per_c = 9.0e7;
        sw.notes = "standing-wave dye laser; 4.1e8 Hz/degC including air-index variation";
        v.push_back(sw);

        LaserPreset ecdl;
        ecdl.name = "new-focus-6202";
        ecdl.linewidth_hz = 1.0e5;
        ecdl.power_w = 6.0e-3;
        ecdl.notes = "external-cavity diode laser (Littman-Metcalf)";
        v.push_back(ecdl);
        return v;
    }();
    return lasers;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& key, int line_no) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size())
        throw ConfigError("preset file line " + std::to_string(line_no) + ": value for '" +
                          key + "' is not a number: '" + t + "'");
    return v;
}

} // namespace

std::vector<AtomPreset> load_atom_presets(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open preset file: " + path);

    std::vector<AtomPreset> out;
    AtomPreset cur;
    bool in_block = false;
    bool have_omega0 = false, have_dipole = false;

    auto flush = [&](int line_no) {
        if (!in_block)
            return;
        if (cur.name.empty())
            throw ConfigError("preset file line " + std::to_string(line_no) +
                              ": block is missing 'name'");
        if (!have_omega0 || !have_dipole)
            throw ConfigError("preset '" + cur.name + "': missing " +
                              std::string(!have_omega0 ? "'omega0_rad_s'" : "'dipole_Cm'"));
        cur.validate();
        for (const auto& a : out)
            if (a.name == cur.name)
                throw ConfigError("preset file: duplicate name '" + cur.name + "'");
        out.push_back(cur);
        cur = AtomPreset{};
        in_block = false;
        have_omega0 = have_dipole = false;
    };

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) {
            flush(line_no);
            continue;
        }
        if (t[0] == '#')
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("preset file line " + std::to_string(line_no) +
                              ": expected 'key = value', got '" + t + "'");
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        in_block = true;
        if (key == "name") {
            cur.name = val;
        } else if (key == "omega0_rad_s") {
            cur.omega0 = parse_double(val, key, line_no);
            have_omega0 = true;
        } else if (key == "dipole_Cm") {
            cur.dipole = parse_double(val, key, line_no);
            have_dipole = true;
        } else if (key == "fine_splitting_rad_s") {
            cur.fine_splitting = parse_double(val, key, line_no);
        } else if (key == "notes") {
            cur.notes = val;
        } else {
            throw ConfigError("preset file line " + std::to_string(line_no) +
                              ": unknown key '" + key + "'");
        }
    }
    flush(line_no + 1);
    return out;
}

AtomPreset find_atom(const std::string& name, const std::string& presets_path) {
    if (!presets_path.empty()) {
        for (const auto& a : load_atom_presets(presets_path))
            if (a.name == name)
                return a;
    }
    return builtin_atom(name);
}

double dipole_from_atomic_units(double d_au) {
    if (!std::isfinite(d_au) || d_au < 0.0)
        throw DomainError("dipole in atomic units must be finite and >= 0");
    return d_au * constants::dipole_au;
}

} // namespace twolevel
