#include "twolevel/twolevel.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "core/dynamics.hpp"
#include "core/errors.hpp"
#include "core/io.hpp"
#include "core/lifetime.hpp"
#include "core/oracle.hpp"
#include "core/physics.hpp"
#include "core/presets.hpp"
#include "core/surface.hpp"
#include "core/validate.hpp"
#include "core/version.hpp"

struct tl_surface {
    twolevel::Surface impl;
};
struct tl_slice {
    twolevel::SpectralSlice impl;
};
struct tl_trace {
    twolevel::Trace impl;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

// Runs the body, translating the C++ error taxonomy into status codes.
template <typename F>
tl_status guarded(F&& f) noexcept {
    try {
        f();
        g_last_error.clear();
        return TL_OK;
    } catch (const twolevel::DomainError& e) {
        set_error(e.what());
        return TL_ERR_DOMAIN;
    } catch (const twolevel::ConfigError& e) {
        set_error(e.what());
        return TL_ERR_CONFIG;
    } catch (const twolevel::ResourceError& e) {
        set_error(e.what());
        return TL_ERR_RESOURCE;
    } catch (const twolevel::IntegrationError& e) {
        set_error(e.what());
        return TL_ERR_INTEGRATION;
    } catch (const twolevel::UsageError& e) {
        set_error(e.what());
        return TL_ERR_USAGE;
    } catch (const twolevel::IoError& e) {
        set_error(e.what());
        return TL_ERR_IO;
    } catch (const std::exception& e) {
        set_error(e.what());
        return TL_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown error");
        return TL_ERR_INTERNAL;
    }
}

void require(bool cond, const char* what) {
    if (!cond)
        throw twolevel::UsageError(what);
}

char* dup_string(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p)
        throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

void copy_capped(char* dst, std::size_t cap, const std::string& src) {
    const std::size_t n = src.size() < cap - 1 ? src.size() : cap - 1;
    std::memcpy(dst, src.data(), n);
    dst[n] = '\0';
}

tl_atom to_c(const twolevel::AtomPreset& a) {
    tl_atom out{};
    copy_capped(out.name, sizeof out.name, a.name);
    out.omega0_rad_s = a.omega0;
    out.dipole_Cm = a.dipole;
    out.fine_splitting_rad_s = a.fine_splitting ? *a.fine_splitting : -1.0;
    copy_capped(out.notes, sizeof out.notes, a.notes);
    return out;
}

twolevel::AtomPreset from_c(const tl_atom& a) {
    twolevel::AtomPreset out;
    out.name = a.name;
    out.omega0 = a.omega0_rad_s;
    out.dipole = a.dipole_Cm;
    if (a.fine_splitting_rad_s >= 0.0)
        out.fine_splitting = a.fine_splitting_rad_s;
    out.notes = a.notes;
    return out;
}

twolevel::ProbabilityKind kind_from_c(int kind) {
    if (kind == TL_KIND_P1)
        return twolevel::ProbabilityKind::P1;
    if (kind == TL_KIND_P2)
        return twolevel::ProbabilityKind::P2;
    throw twolevel::UsageError("kind must be TL_KIND_P1 or TL_KIND_P2");
}

twolevel::ExportFormat format_from_c(int format) {
    switch (format) {
    case TL_FORMAT_CSV:
        return twolevel::ExportFormat::Csv;
    case TL_FORMAT_JSON:
        return twolevel::ExportFormat::Json;
    case TL_FORMAT_MATRIX:
        return twolevel::ExportFormat::Matrix;
    default:
        throw twolevel::UsageError("format must be TL_FORMAT_CSV/JSON/MATRIX");
    }
}

twolevel::OdeConfig ode_from_c(const tl_ode_config* cfg) {
    twolevel::OdeConfig out; // defaults
    if (cfg) {
        if (cfg->rel_tol != 0.0)
            out.rel_tol = cfg->rel_tol;
        if (cfg->abs_tol != 0.0)
            out.abs_tol = cfg->abs_tol;
        if (cfg->max_step_s != 0.0)
            out.max_step = cfg->max_step_s;
    }
    return out;
}

twolevel::LifetimeModel model_from_c(const tl_lifetime_model& m) {
    twolevel::LifetimeModel out;
    out.t_s = m.t_s_s;
    out.gamma_s = m.gamma_s_per_s;
    out.pi_star = m.pi_star;
    out.x_small = m.x_small;
    out.residual_large = m.residual_large;
    out.residual_small = m.residual_small;
    out.gamma_l = m.gamma_l_per_s;
    out.gamma_lg = m.gamma_lg_per_s;
    out.ratio_19 = m.ratio_19;
    out.t_l1 = m.t_l1_s;
    out.t_l2 = m.t_l2_s;
    return out;
}

} // namespace

extern "C" {

const char* tl_version(void) { return twolevel::kVersion; }

const char* tl_last_error(void) { return g_last_error.c_str(); }

void tl_string_free(char* s) { std::free(s); }

void tl_doubles_free(double* p) { std::free(p); }

/* ---- presets ---- */

tl_status tl_atom_builtin(const char* name, tl_atom* out) {
    return guarded([&] {
        require(name && out, "tl_atom_builtin: name and out must be non-NULL");
        *out = to_c(twolevel::builtin_atom(name));
    });
}

tl_status tl_atom_find(const char* name, const char* presets_path, tl_atom* out) {
    return guarded([&] {
        require(name && out, "tl_atom_find: name and out must be non-NULL");
        *out = to_c(twolevel::find_atom(name, presets_path ? presets_path : ""));
    });
}

tl_status tl_atom_names_json(char** out_json) {
    return guarded([&] {
        require(out_json != nullptr, "tl_atom_names_json: out must be non-NULL");
        nlohmann::ordered_json j = twolevel::builtin_atom_names();
        *out_json = dup_string(j.dump());
    });
}

tl_status tl_lasers_json(char** out_json) {
    return guarded([&] {
        require(out_json != nullptr, "tl_lasers_json: out must be non-NULL");
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& l : twolevel::builtin_lasers()) {
            nlohmann::ordered_json j;
            j["name"] = l.name;
            j["linewidth_hz"] = l.linewidth_hz;
            j["drift_hz_per_hour"] = l.drift_hz_per_hour;
            j["temp_sensitivity_hz_per_c"] = l.temp_sensitivity_hz_per_c;
            if (l.power_w)
                j["power_w"] = *l.power_w;
            j["notes"] = l.notes;
            arr.push_back(j);
        }
        *out_json = dup_string(arr.dump(2));
    });
}

tl_status tl_dipole_from_au(double d_au, double* out) {
    return guarded([&] {
        require(out != nullptr, "tl_dipole_from_au: out must be non-NULL");
        *out = twolevel::dipole_from_atomic_units(d_au);
    });
}

/* ---- conversions ---- */

tl_status tl_rabi_from_field(const tl_atom* atom, double e0_v_per_m, tl_rabi* out) {
    return guarded([&] {
        require(atom && out, "tl_rabi_from_field: atom and out must be non-NULL");
        const auto r = twolevel::rabi_from_field(from_c(*atom), e0_v_per_m);
        *out = {r.omega, r.omega_nu};
    });
}

tl_status tl_rabi_from_intensity(const tl_atom* atom, double intensity_w_per_m2, tl_rabi* out) {
    return guarded([&] {
        require(atom && out, "tl_rabi_from_intensity: atom and out must be non-NULL");
        const auto r = twolevel::rabi_from_intensity(from_c(*atom), intensity_w_per_m2);
        *out = {r.omega, r.omega_nu};
    });
}

tl_status tl_intensity_from_field(double e0_v_per_m, double* out_w_per_m2) {
    return guarded([&] {
        require(out_w_per_m2 != nullptr, "tl_intensity_from_field: out must be non-NULL");
        *out_w_per_m2 = twolevel::intensity_from_field(e0_v_per_m);
    });
}

tl_status tl_field_from_intensity(double intensity_w_per_m2, double* out_v_per_m) {
    return guarded([&] {
        require(out_v_per_m != nullptr, "tl_field_from_intensity: out must be non-NULL");
        *out_v_per_m = twolevel::field_from_intensity(intensity_w_per_m2);
    });
}

tl_status tl_spontaneous_emission_time(const tl_atom* atom, double* out_s) {
    return guarded([&] {
        require(atom && out_s, "tl_spontaneous_emission_time: atom and out must be non-NULL");
        *out_s = twolevel::spontaneous_emission_time(from_c(*atom));
    });
}

/* ---- probabilities ---- */

tl_status tl_p1(double omega_rabi, double detuning, double tau_s, double* out) {
    return guarded([&] {
        require(out != nullptr, "tl_p1: out must be non-NULL");
        *out = twolevel::p1(omega_rabi, detuning, tau_s);
    });
}

tl_status tl_p1_envelope(double omega_rabi, double detuning, double* out) {
    return guarded([&] {
        require(out != nullptr, "tl_p1_envelope: out must be non-NULL");
        *out = twolevel::p1_envelope(omega_rabi, detuning);
    });
}

tl_status tl_p2(double omega_rabi, double detuning, double tau_s, double* out) {
    return guarded([&] {
        require(out != nullptr, "tl_p2: out must be non-NULL");
        *out = twolevel::p2(omega_rabi, detuning, tau_s);
    });
}

tl_status tl_p1_dimensionless(double x, double y, double* out) {
    return guarded([&] {
        require(out != nullptr, "tl_p1_dimensionless: out must be non-NULL");
        *out = twolevel::p1_dimensionless({x, y});
    });
}

tl_status tl_p2_dimensionless(double x, double y, double* out) {
    return guarded([&] {
        require(out != nullptr, "tl_p2_dimensionless: out must be non-NULL");
        *out = twolevel::p2_dimensionless({x, y});
    });
}

/* ---- lifetime ---- */

tl_status tl_g1(double gamma_s, double t_l_s, double* out) {
    return guarded([&] {
        require(out != nullptr, "tl_g1: out must be non-NULL");
        *out = twolevel::g1(gamma_s, t_l_s);
    });
}

tl_status tl_g2(double gamma_l, double t_s_s, double* out) {
    return guarded([&] {
        require(out != nullptr, "tl_g2: out must be non-NULL");
        *out = twolevel::g2(gamma_l, t_s_s);
    });
}

tl_status tl_g_joint(double t_l_s, double t_s_s, double* out) {
    return guarded([&] {
        require(out != nullptr, "tl_g_joint: out must be non-NULL");
        *out = twolevel::g_joint(t_l_s, t_s_s);
    });
}

tl_status tl_lorentzian(double detuning, double fwhm, double* out) {
    return guarded([&] {
        require(out != nullptr, "tl_lorentzian: out must be non-NULL");
        *out = twolevel::lorentzian_profile(detuning, fwhm);
    });
}

tl_status tl_fixed_point(double tolerance, double* x_small, double* x_large,
                         double* residual_small, double* residual_large) {
    return guarded([&] {
        const auto r = twolevel::solve_fixed_point(tolerance);
        if (x_small)
            *x_small = r.x_small;
        if (x_large)
            *x_large = r.x_large;
        if (residual_small)
            *residual_small = r.residual_small;
        if (residual_large)
            *residual_large = r.residual_large;
    });
}

tl_status tl_lifetime_constants(double t_s_s, tl_lifetime_model* out) {
    return guarded([&] {
        require(out != nullptr, "tl_lifetime_constants: out must be non-NULL");
        const auto m = twolevel::lifetime_constants(t_s_s);
        *out = {m.t_s,      m.gamma_s,       m.pi_star,  m.x_small, m.residual_large,
                m.residual_small, m.gamma_l, m.gamma_lg, m.ratio_19, m.t_l1, m.t_l2};
    });
}

tl_status tl_lifetime_model_json(const tl_lifetime_model* model, char** out_json) {
    return guarded([&] {
        require(model && out_json, "tl_lifetime_model_json: model and out must be non-NULL");
        *out_json = dup_string(twolevel::lifetime_model_json(model_from_c(*model)));
    });
}

/* ---- surfaces ---- */

tl_status tl_surface_generate(const tl_grid_spec* spec, int threads, tl_surface** out) {
    return guarded([&] {
        require(spec && out, "tl_surface_generate: spec and out must be non-NULL");
        twolevel::GridSpec g;
        g.kind = kind_from_c(spec->kind);
        g.dimensionless = spec->dimensionless != 0;
        g.x_min = spec->x_min;
        g.x_max = spec->x_max;
        g.nx = spec->nx;
        g.y_min = spec->y_min;
        g.y_max = spec->y_max;
        g.ny = spec->ny;
        g.omega_rabi = spec->omega_rabi_rad_s;
        g.default_axes = spec->default_axes != 0;
        *out = new tl_surface{twolevel::generate_surface(g, threads)};
    });
}

void tl_surface_free(tl_surface* s) { delete s; }

tl_status tl_surface_dims(const tl_surface* s, int* nx, int* ny) {
    return guarded([&] {
        require(s != nullptr, "tl_surface_dims: surface must be non-NULL");
        if (nx)
            *nx = s->impl.nx();
        if (ny)
            *ny = s->impl.ny();
    });
}

tl_status tl_surface_axes(const tl_surface* s, double* xs, double* ys) {
    return guarded([&] {
        require(s != nullptr, "tl_surface_axes: surface must be non-NULL");
        if (xs)
            std::memcpy(xs, s->impl.xs.data(), s->impl.xs.size() * sizeof(double));
        if (ys)
            std::memcpy(ys, s->impl.ys.data(), s->impl.ys.size() * sizeof(double));
    });
}

tl_status tl_surface_value(const tl_surface* s, int ix, int iy, double* out) {
    return guarded([&] {
        require(s && out, "tl_surface_value: surface and out must be non-NULL");
        if (ix < 0 || ix >= s->impl.nx() || iy < 0 || iy >= s->impl.ny())
            throw twolevel::UsageError("tl_surface_value: index out of range");
        *out = s->impl.value(ix, iy);
    });
}

tl_status tl_surface_checksum(const tl_surface* s, uint64_t* out) {
    return guarded([&] {
        require(s && out, "tl_surface_checksum: surface and out must be non-NULL");
        *out = s->impl.checksum();
    });
}

tl_status tl_surface_export(const tl_surface* s, int format, char** out_text) {
    return guarded([&] {
        require(s && out_text, "tl_surface_export: surface and out must be non-NULL");
        *out_text = dup_string(twolevel::export_surface(s->impl, format_from_c(format)));
    });
}

tl_status tl_surface_import(const char* text, int format, tl_surface** out) {
    return guarded([&] {
        require(text && out, "tl_surface_import: text and out must be non-NULL");
        *out = new tl_surface{twolevel::import_surface(text, format_from_c(format))};
    });
}

tl_status tl_surface_write(const tl_surface* s, const char* path, int format) {
    return guarded([&] {
        require(s && path, "tl_surface_write: surface and path must be non-NULL");
        twolevel::write_surface_file(s->impl, path, format_from_c(format));
    });
}

tl_status tl_surface_read(const char* path, int format, tl_surface** out) {
    return guarded([&] {
        require(path && out, "tl_surface_read: path and out must be non-NULL");
        *out = new tl_surface{twolevel::read_surface_file(path, format_from_c(format))};
    });
}

/* ---- slices ---- */

tl_status tl_slice_generate(int kind, double omega_rabi, double tau_s, double det_min,
                            double det_max, int n, tl_slice** out) {
    return guarded([&] {
        require(out != nullptr, "tl_slice_generate: out must be non-NULL");
        *out = new tl_slice{
            twolevel::spectral_slice(kind_from_c(kind), omega_rabi, tau_s, det_min, det_max, n)};
    });
}

void tl_slice_free(tl_slice* s) { delete s; }

tl_status tl_slice_size(const tl_slice* s, int* n) {
    return guarded([&] {
        require(s && n, "tl_slice_size: slice and out must be non-NULL");
        *n = static_cast<int>(s->impl.detunings.size());
    });
}

tl_status tl_slice_data(const tl_slice* s, double* detunings, double* values) {
    return guarded([&] {
        require(s != nullptr, "tl_slice_data: slice must be non-NULL");
        if (detunings)
            std::memcpy(detunings, s->impl.detunings.data(),
                        s->impl.detunings.size() * sizeof(double));
        if (values)
            std::memcpy(values, s->impl.values.data(), s->impl.values.size() * sizeof(double));
    });
}

tl_status tl_slice_find_peaks(tl_slice* s, double tol) {
    return guarded([&] {
        require(s != nullptr, "tl_slice_find_peaks: slice must be non-NULL");
        twolevel::attach_peaks(s->impl, tol);
    });
}

tl_status tl_slice_peaks(const tl_slice* s, double* peaks, int* count) {
    return guarded([&] {
        require(s && count, "tl_slice_peaks: slice and count must be non-NULL");
        if (!s->impl.peaks_computed)
            throw twolevel::UsageError("tl_slice_peaks: call tl_slice_find_peaks first");
        if (peaks) {
            if (*count < static_cast<int>(s->impl.peaks.size()))
                throw twolevel::UsageError("tl_slice_peaks: buffer too small");
            std::memcpy(peaks, s->impl.peaks.data(), s->impl.peaks.size() * sizeof(double));
        }
        *count = static_cast<int>(s->impl.peaks.size());
    });
}

tl_status tl_slice_export(const tl_slice* s, int format, char** out_text) {
    return guarded([&] {
        require(s && out_text, "tl_slice_export: slice and out must be non-NULL");
        *out_text = dup_string(twolevel::export_slice(s->impl, format_from_c(format)));
    });
}

tl_status tl_slice_import(const char* text, int format, tl_slice** out) {
    return guarded([&] {
        require(text && out, "tl_slice_import: text and out must be non-NULL");
        *out = new tl_slice{twolevel::import_slice(text, format_from_c(format))};
    });
}

tl_status tl_slice_write(const tl_slice* s, const char* path, int format) {
    return guarded([&] {
        require(s && path, "tl_slice_write: slice and path must be non-NULL");
        twolevel::write_slice_file(s->impl, path, format_from_c(format));
    });
}

tl_status tl_slice_read(const char* path, int format, tl_slice** out) {
    return guarded([&] {
        require(path && out, "tl_slice_read: path and out must be non-NULL");
        *out = new tl_slice{twolevel::read_slice_file(path, format_from_c(format))};
    });
}

tl_status tl_find_unit_peaks(int kind, double omega_rabi, double tau_s, double det_min,
                             double det_max, double tol, double** out, int* count) {
    return guarded([&] {
        require(out && count, "tl_find_unit_peaks: out and count must be non-NULL");
        const auto peaks = twolevel::find_unit_peaks(kind_from_c(kind), omega_rabi, tau_s,
                                                     det_min, det_max, tol);
        double* buf = static_cast<double*>(std::malloc(sizeof(double) * std::max<size_t>(1, peaks.size())));
        if (!buf)
            throw std::bad_alloc();
        std::memcpy(buf, peaks.data(), peaks.size() * sizeof(double));
        *out = buf;
        *count = static_cast<int>(peaks.size());
    });
}

/* ---- oracle ---- */

tl_status tl_trace_rwa(double omega_rabi, double detuning, double t_end_s, int n_samples,
                       const tl_ode_config* cfg, tl_trace** out) {
    return guarded([&] {
        require(out != nullptr, "tl_trace_rwa: out must be non-NULL");
        *out = new tl_trace{twolevel::integrate_rwa_monochromatic(omega_rabi, detuning, t_end_s,
                                                                  n_samples, ode_from_c(cfg))};
    });
}

tl_status tl_trace_bichromatic(double omega_rabi, double detuning, double t_end_s,
                               int n_samples, const tl_ode_config* cfg, tl_trace** out) {
    return guarded([&] {
        require(out != nullptr, "tl_trace_bichromatic: out must be non-NULL");
        *out = new tl_trace{twolevel::integrate_bichromatic(omega_rabi, detuning, t_end_s,
                                                            n_samples, ode_from_c(cfg))};
    });
}

tl_status tl_trace_damped(double omega_rabi, double detuning, double gamma_s, double t_end_s,
                          int n_samples, const tl_ode_config* cfg, tl_trace** out) {
    return guarded([&] {
        require(out != nullptr, "tl_trace_damped: out must be non-NULL");
        *out = new tl_trace{twolevel::integrate_damped(omega_rabi, detuning, gamma_s, t_end_s,
                                                       n_samples, ode_from_c(cfg))};
    });
}

void tl_trace_free(tl_trace* t) { delete t; }

tl_status tl_trace_size(const tl_trace* t, int* n) {
    return guarded([&] {
        require(t && n, "tl_trace_size: trace and out must be non-NULL");
        *n = static_cast<int>(t->impl.times.size());
    });
}

tl_status tl_trace_data(const tl_trace* t, double* times, double* populations) {
    return guarded([&] {
        require(t != nullptr, "tl_trace_data: trace must be non-NULL");
        if (times)
            std::memcpy(times, t->impl.times.data(), t->impl.times.size() * sizeof(double));
        if (populations)
            std::memcpy(populations, t->impl.populations.data(),
                        t->impl.populations.size() * sizeof(double));
    });
}

tl_status tl_trace_norm_drift(const tl_trace* t, double* out) {
    return guarded([&] {
        require(t && out, "tl_trace_norm_drift: trace and out must be non-NULL");
        *out = t->impl.norm_drift;
    });
}

tl_status tl_trace_compare(const tl_trace* numeric, const tl_trace* reference, double* max_abs,
                           double* rms) {
    return guarded([&] {
        require(numeric && reference, "tl_trace_compare: traces must be non-NULL");
        const auto c = twolevel::compare_traces(numeric->impl, reference->impl);
        if (max_abs)
            *max_abs = c.max_abs_error;
        if (rms)
            *rms = c.rms_error;
    });
}

namespace {

twolevel::TraceComparison closed_form_comparison(const tl_trace* numeric, int kind,
                                                double omega_rabi, double detuning) {
    const auto k = kind_from_c(kind);
    return twolevel::compare_traces(numeric->impl, [=](double t) {
        return k == twolevel::ProbabilityKind::P1 ? twolevel::p1(omega_rabi, detuning, t)
                                                  : twolevel::p2(omega_rabi, detuning, t);
    });
}

} // namespace

tl_status tl_trace_compare_closed_form(const tl_trace* numeric, int kind, double omega_rabi,
                                       double detuning, double* max_abs, double* rms) {
    return guarded([&] {
        require(numeric != nullptr, "tl_trace_compare_closed_form: trace must be non-NULL");
        const auto c = closed_form_comparison(numeric, kind, omega_rabi, detuning);
        if (max_abs)
            *max_abs = c.max_abs_error;
        if (rms)
            *rms = c.rms_error;
    });
}

tl_status tl_trace_comparison_json(const tl_trace* numeric, int kind, double omega_rabi,
                                   double detuning, char** out_json) {
    return guarded([&] {
        require(numeric && out_json,
                "tl_trace_comparison_json: trace and out must be non-NULL");
        *out_json = dup_string(
            twolevel::trace_comparison_json(closed_form_comparison(numeric, kind, omega_rabi, detuning)));
    });
}

/* ---- validation ---- */

tl_status tl_validate(const char* suite, const tl_ode_config* cfg, double bar,
                      int informational, int* passed, char** report_json) {
    return guarded([&] {
        require(suite != nullptr, "tl_validate: suite must be non-NULL");
        twolevel::ValidationOptions opt;
        opt.ode = ode_from_c(cfg);
        if (bar > 0.0)
            opt.bar = bar;
        opt.informational = informational != 0;
        const auto outcome = twolevel::run_validation_suite(suite, opt);
        if (passed)
            *passed = outcome.passed ? 1 : 0;
        if (report_json)
            *report_json = dup_string(outcome.report_json);
    });
}

} // extern "C"
