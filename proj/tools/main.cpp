// twolevel CLI: drives the shared library through its public C API only.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "twolevel/twolevel.h"

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;

struct CliFailure {
    int exit_code;
    std::string message;
};

int exit_code_for(tl_status st) {
    switch (st) {
    case TL_OK:
        return 0;
    case TL_ERR_RESOURCE:
        return 3; // guard rails get their own code
    case TL_ERR_INTEGRATION:
    case TL_ERR_INTERNAL:
        return 1;
    default:
        return 2; // domain / config / usage / io: caller gave us something bad
    }
}

void check(tl_status st) {
    if (st != TL_OK)
        throw CliFailure{exit_code_for(st), tl_last_error()};
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// "-" or empty -> stdout
void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f)
        throw CliFailure{2, "cannot open for writing: " + out_path};
    f << text;
    if (!f)
        throw CliFailure{2, "write failed: " + out_path};
}

struct StringGuard {
    char* p = nullptr;
    ~StringGuard() { tl_string_free(p); }
};

int parse_format_tag(const std::string& name) {
    if (name == "csv")
        return TL_FORMAT_CSV;
    if (name == "json")
        return TL_FORMAT_JSON;
    if (name == "matrix")
        return TL_FORMAT_MATRIX;
    throw CliFailure{2, "unknown format '" + name + "' (use csv, json or matrix)"};
}

int parse_kind_tag(const std::string& name) {
    if (name == "p1")
        return TL_KIND_P1;
    if (name == "p2")
        return TL_KIND_P2;
    throw CliFailure{2, "unknown kind '" + name + "' (use p1 or p2)"};
}

/* ---------------------------------------------------------------- constants */

struct ConstantsArgs {
    std::string atom = "lithium";
    std::string presets;
    bool list = false;
    bool lasers = false;
    std::string format = "text";
    std::string out = "-";
};

void run_constants(const ConstantsArgs& a) {
    if (a.list) {
        StringGuard names;
        check(tl_atom_names_json(&names.p));
        if (a.format == "json") {
            emit(a.out, std::string(names.p) + "\n");
        } else {
            std::string text;
            for (const auto& n : ordered_json::parse(names.p))
                text += n.get<std::string>() + "\n";
            emit(a.out, text);
        }
        return;
    }

    tl_atom atom{};
    check(tl_atom_find(a.atom.c_str(), a.presets.empty() ? nullptr : a.presets.c_str(), &atom));
    double t_s = 0.0;
    check(tl_spontaneous_emission_time(&atom, &t_s));
    const double gamma_s = 1.0 / t_s;
    double au_unit = 0.0;
    check(tl_dipole_from_au(1.0, &au_unit));

    StringGuard lasers;
    if (a.lasers)
        check(tl_lasers_json(&lasers.p));

    if (a.format == "json") {
        ordered_json j;
        j["type"] = "twolevel-constants";
        j["version"] = tl_version();
        j["atom"] = atom.name;
        j["omega0_rad_s"] = atom.omega0_rad_s;
        j["dipole_Cm"] = atom.dipole_Cm;
        if (atom.fine_splitting_rad_s >= 0.0)
            j["fine_splitting_rad_s"] = atom.fine_splitting_rad_s;
        j["t_s_s"] = t_s;
        j["gamma_s_per_s"] = gamma_s;
        j["notes"] = atom.notes;
        j["display"] = {
            {"omega0_thz", atom.omega0_rad_s / (2.0 * kPi) / 1e12},
            {"dipole_au", atom.dipole_Cm / au_unit},
            {"t_s_ns", t_s * 1e9},
            {"gamma_s_mhz", gamma_s * 1e-6},
        };
        if (atom.fine_splitting_rad_s >= 0.0)
            j["display"]["fine_splitting_ghz"] = atom.fine_splitting_rad_s / (2.0 * kPi) / 1e9;
        if (a.lasers)
            j["lasers"] = ordered_json::parse(lasers.p);
        emit(a.out, j.dump(2) + "\n");
        return;
    }

    std::string text;
    text += "atom: " + std::string(atom.name) + "\n";
    text += "omega0_rad_s: " + fmt(atom.omega0_rad_s) + "  (" +
            fmt_short(atom.omega0_rad_s / (2.0 * kPi) / 1e12) + " THz)\n";
    text += "dipole_Cm: " + fmt(atom.dipole_Cm) + "  (" +
            fmt_short(atom.dipole_Cm / au_unit) + " a.u.)\n";
    if (atom.fine_splitting_rad_s >= 0.0)
        text += "fine_splitting_rad_s: " + fmt(atom.fine_splitting_rad_s) + "  (" +
                fmt_short(atom.fine_splitting_rad_s / (2.0 * kPi) / 1e9) + " GHz)\n";
    text += "t_s_s: " + fmt(t_s) + "  (" + fmt_short(t_s * 1e9) + " ns)\n";
    text += "gamma_s_per_s: " + fmt(gamma_s) + "  (" + fmt_short(gamma_s * 1e-6) + " MHz)\n";
    if (atom.notes[0] != '\0')
        text += "notes: " + std::string(atom.notes) + "\n";
    if (a.lasers) {
        text += "lasers:\n";
        for (const auto& l : ordered_json::parse(lasers.p)) {
            text += "  " + l.at("name").get<std::string>() + ": linewidth " +
                    fmt_short(l.at("linewidth_hz").get<double>()) + " Hz, drift " +
                    fmt_short(l.at("drift_hz_per_hour").get<double>()) + " Hz/h, temp " +
                    fmt_short(l.at("temp_sensitivity_hz_per_c").get<double>()) + " Hz/degC";
            if (l.contains("power_w"))
                text += ", power " + fmt_short(l.at("power_w").get<double>()) + " W";
            text += "\n";
        }
    }
    emit(a.out, text);
}

/* ------------------------------------------------------------------ surface */

struct SurfaceArgs {
    std::string kind = "p1";
    bool dimensionless = false;
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;
    int nx = 241, ny = 241;
    double tau_min = 0.0, tau_max = 0.0;
    double det_min = 0.0, det_max = 0.0;
    double omega_rabi = 0.0;
    int threads = 0;
    std::string format = "matrix";
    std::string out = "-";
    // which flags were actually given
    bool has_x_min = false, has_x_max = false, has_y_min = false, has_y_max = false;
    bool has_tau_min = false, has_tau_max = false, has_det_min = false, has_det_max = false;
    bool has_omega = false;
};

void run_surface(const SurfaceArgs& a) {
    tl_grid_spec spec{};
    spec.kind = parse_kind_tag(a.kind);
    spec.nx = a.nx;
    spec.ny = a.ny;

    if (a.dimensionless) {
        const int given = a.has_x_min + a.has_x_max + a.has_y_min + a.has_y_max;
        if (given != 0 && given != 4)
            throw CliFailure{2, "give all of --x-min/--x-max/--y-min/--y-max or none"};
        spec.dimensionless = 1;
        if (given == 0) {
            spec.x_min = 0.0;
            spec.x_max = 4.0 * kPi;
            spec.y_min = -8.0;
            spec.y_max = 8.0;
            spec.default_axes = 1;
        } else {
            spec.x_min = a.x_min;
            spec.x_max = a.x_max;
            spec.y_min = a.y_min;
            spec.y_max = a.y_max;
        }
    } else {
        if (!(a.has_tau_min && a.has_tau_max && a.has_det_min && a.has_det_max))
            throw CliFailure{2, "physical surfaces need --tau-min-s, --tau-max-s, "
                                "--detuning-min-radps and --detuning-max-radps "
                                "(no unit-bearing defaults are guessed)"};
        if (!a.has_omega)
            throw CliFailure{2, "physical surfaces need --omega-rabi-radps"};
        spec.dimensionless = 0;
        spec.x_min = a.tau_min;
        spec.x_max = a.tau_max;
        spec.y_min = a.det_min;
        spec.y_max = a.det_max;
        spec.omega_rabi_rad_s = a.omega_rabi;
    }

    tl_surface* surf = nullptr;
    check(tl_surface_generate(&spec, a.threads, &surf));
    std::unique_ptr<tl_surface, decltype(&tl_surface_free)> guard(surf, &tl_surface_free);
    StringGuard text;
    check(tl_surface_export(surf, parse_format_tag(a.format), &text.p));
    emit(a.out, text.p);
}

/* -------------------------------------------------------------------- slice */

struct SliceArgs {
    std::string kind = "p2";
    double omega_rabi = 0.0;
    double tau = 0.0;
    double det_min = 0.0, det_max = 0.0;
    int n = 512;
    bool find_peaks = false;
    double peak_tol = 1e-9;
    std::string format = "csv";
    std::string out = "-";
};

void run_slice(const SliceArgs& a) {
    tl_slice* slice = nullptr;
    check(tl_slice_generate(parse_kind_tag(a.kind), a.omega_rabi, a.tau, a.det_min, a.det_max,
                            a.n, &slice));
    std::unique_ptr<tl_slice, decltype(&tl_slice_free)> guard(slice, &tl_slice_free);
    if (a.find_peaks)
        check(tl_slice_find_peaks(slice, a.peak_tol));
    StringGuard text;
    check(tl_slice_export(slice, parse_format_tag(a.format), &text.p));
    emit(a.out, text.p);
}

/* ----------------------------------------------------------------- lifetime */

struct LifetimeArgs {
    std::string atom;
    std::string presets;
    double t_s_ns = 0.0;
    bool has_t_s = false;
    std::string format = "json";
    std::string out = "-";
};

void run_lifetime(const LifetimeArgs& a) {
    double t_s = 0.0;
    if (a.has_t_s) {
        t_s = a.t_s_ns * 1e-9;
    } else {
        tl_atom atom{};
        const std::string name = a.atom.empty() ? "lithium" : a.atom;
        check(tl_atom_find(name.c_str(), a.presets.empty() ? nullptr : a.presets.c_str(), &atom));
        check(tl_spontaneous_emission_time(&atom, &t_s));
    }
    tl_lifetime_model m{};
    check(tl_lifetime_constants(t_s, &m));
    if (a.format == "json") {
        StringGuard text;
        check(tl_lifetime_model_json(&m, &text.p));
        emit(a.out, text.p);
        return;
    }
    std::string text;
    text += "t_s_s: " + fmt(m.t_s_s) + "  (" + fmt_short(m.t_s_s * 1e9) + " ns)\n";
    text += "gamma_s_per_s: " + fmt(m.gamma_s_per_s) + "  (" +
            fmt_short(m.gamma_s_per_s * 1e-6) + " MHz)\n";
    text += "pi_star: " + fmt(m.pi_star) + "  (pi + " + fmt_short(m.pi_star - kPi) + ")\n";
    text += "x_small: " + fmt(m.x_small) + "\n";
    text += "gamma_l_per_s: " + fmt(m.gamma_l_per_s) + "  (" +
            fmt_short(m.gamma_l_per_s * 1e-6) + " MHz)\n";
    text += "gamma_lg_per_s: " + fmt(m.gamma_lg_per_s) + "  (" +
            fmt_short(m.gamma_lg_per_s * 1e-6) + " MHz)\n";
    text += "ratio_19: " + fmt(m.ratio_19) + "\n";
    text += "t_l1_s: " + fmt(m.t_l1_s) + "  (" + fmt_short(m.t_l1_s * 1e9) + " ns)\n";
    text += "t_l2_s: " + fmt(m.t_l2_s) + "  (" + fmt_short(m.t_l2_s * 1e9) + " ns)\n";
    emit(a.out, text);
}

/* ----------------------------------------------------------------- validate */

struct ValidateArgs {
    std::string suite;
    double bar = 0.0; // 0 = library default
    double rel_tol = 0.0, abs_tol = 0.0, max_step = 0.0;
    bool informational = false;
    std::string out = "-";
};

int run_validate(const ValidateArgs& a) {
    tl_ode_config cfg{a.rel_tol, a.abs_tol, a.max_step};
    int passed = 0;
    StringGuard report;
    check(tl_validate(a.suite.c_str(), &cfg, a.bar, a.informational ? 1 : 0, &passed,
                      &report.p));
    emit(a.out, report.p);
    return passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-level atom toolkit: flopping probabilities, lifetime statistics, "
                 "probability surfaces and an ODE cross-check"};
    app.set_version_flag("--version", tl_version());
    app.require_subcommand(1);
    std::string presets_path;
    app.add_option("--presets", presets_path, "preset config file (key = value blocks)");

    ConstantsArgs ca;
    auto* c = app.add_subcommand("constants", "atom/laser preset data and derived rates");
    c->add_option("--atom", ca.atom, "atom preset name")->capture_default_str();
    c->add_flag("--list", ca.list, "list built-in atom names and exit");
    c->add_flag("--lasers", ca.lasers, "include the laser instrument table");
    c->add_option("--format", ca.format, "text|json")->capture_default_str();
    c->add_option("--out", ca.out, "output path ('-' = stdout)")->capture_default_str();

    SurfaceArgs sa;
    auto* s = app.add_subcommand("surface", "probability surface over (tau, detuning)");
    s->add_option("--kind", sa.kind, "p1|p2")->required();
    s->add_flag("--dimensionless", sa.dimensionless,
                "unit-free axes X = tau*Omega, Y = detuning/Omega");
    auto* xo1 = s->add_option("--x-min", sa.x_min, "dimensionless X minimum");
    auto* xo2 = s->add_option("--x-max", sa.x_max, "dimensionless X maximum");
    auto* yo1 = s->add_option("--y-min", sa.y_min, "dimensionless Y minimum");
    auto* yo2 = s->add_option("--y-max", sa.y_max, "dimensionless Y maximum");
    s->add_option("--nx", sa.nx, "samples along x")->capture_default_str();
    s->add_option("--ny", sa.ny, "samples along y")->capture_default_str();
    auto* to1 = s->add_option("--tau-min-s", sa.tau_min, "pulse length minimum [s]");
    auto* to2 = s->add_option("--tau-max-s", sa.tau_max, "pulse length maximum [s]");
    auto* do1 = s->add_option("--detuning-min-radps", sa.det_min, "detuning minimum [rad/s]");
    auto* do2 = s->add_option("--detuning-max-radps", sa.det_max, "detuning maximum [rad/s]");
    auto* oo = s->add_option("--omega-rabi-radps", sa.omega_rabi,
                             "angular Rabi frequency [rad/s] (physical surfaces)");
    s->add_option("--threads", sa.threads, "worker threads (0 = auto)")->capture_default_str();
    s->add_option("--format", sa.format, "csv|json|matrix")->capture_default_str();
    s->add_option("--out", sa.out, "output path ('-' = stdout)")->capture_default_str();

    SliceArgs la;
    auto* sl = app.add_subcommand("slice", "probability vs detuning at fixed pulse length");
    sl->add_option("--kind", la.kind, "p1|p2")->capture_default_str();
    sl->add_option("--omega-rabi-radps", la.omega_rabi, "angular Rabi frequency [rad/s]")
        ->required();
    sl->add_option("--tau-s", la.tau, "pulse length [s]")->required();
    sl->add_option("--detuning-min-radps", la.det_min, "detuning minimum [rad/s]")->required();
    sl->add_option("--detuning-max-radps", la.det_max, "detuning maximum [rad/s]")->required();
    sl->add_option("--n", la.n, "sample count")->capture_default_str();
    sl->add_flag("--find-peaks", la.find_peaks, "locate unit-probability peaks");
    sl->add_option("--peak-tol", la.peak_tol, "peak acceptance tolerance on 1 - P")
        ->capture_default_str();
    sl->add_option("--format", la.format, "csv|json|matrix")->capture_default_str();
    sl->add_option("--out", la.out, "output path ('-' = stdout)")->capture_default_str();

    LifetimeArgs lf;
    auto* lt = app.add_subcommand("lifetime", "fixed-point rates from a lifetime");
    auto* lt_atom = lt->add_option("--atom", lf.atom, "atom preset name (default lithium)");
    auto* lt_ts = lt->add_option("--t-s-ns", lf.t_s_ns, "spontaneous-emission time [ns]");
    lt_atom->excludes(lt_ts);
    lt_ts->excludes(lt_atom);
    lt->add_option("--format", lf.format, "json|text")->capture_default_str();
    lt->add_option("--out", lf.out, "output path ('-' = stdout)")->capture_default_str();

    ValidateArgs va;
    auto* v = app.add_subcommand("validate", "ODE cross-check of the closed forms");
    v->add_option("--suite", va.suite, "rwa|bichromatic|damped")->required();
    v->add_option("--bar", va.bar, "max-abs-error acceptance bar (default 1e-6)");
    v->add_option("--rel-tol", va.rel_tol, "ODE relative tolerance (default 1e-11)");
    v->add_option("--abs-tol", va.abs_tol, "ODE absolute tolerance (default 1e-13)");
    v->add_option("--max-step-s", va.max_step, "ODE max step [s] (default auto)");
    v->add_flag("--informational", va.informational,
                "bichromatic: report the closed-form-P2 mismatch without failing");
    v->add_option("--out", va.out, "output path ('-' = stdout)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2; // help/version exit 0; every parse problem is usage
    }

    try {
        ca.presets = presets_path;
        lf.presets = presets_path;
        if (c->parsed()) {
            run_constants(ca);
        } else if (s->parsed()) {
            sa.has_x_min = xo1->count() > 0;
            sa.has_x_max = xo2->count() > 0;
            sa.has_y_min = yo1->count() > 0;
            sa.has_y_max = yo2->count() > 0;
            sa.has_tau_min = to1->count() > 0;
            sa.has_tau_max = to2->count() > 0;
            sa.has_det_min = do1->count() > 0;
            sa.has_det_max = do2->count() > 0;
            sa.has_omega = oo->count() > 0;
            run_surface(sa);
        } else if (sl->parsed()) {
            run_slice(la);
        } else if (lt->parsed()) {
            lf.has_t_s = lt_ts->count() > 0;
            run_lifetime(lf);
        } else if (v->parsed()) {
            return run_validate(va);
        }
    } catch (const CliFailure& f) {
        std::cerr << "error: " << f.message << "\n";
        return f.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
