/* twolevel: closed-form two-level-atom transition probabilities, lifetime
 * statistics and a numerical reference integrator, behind a C ABI.
 *
 * Conventions
 *   - SI units everywhere; angular frequencies in rad/s.
 *   - Rabi convention: omega = pi * omega_nu with omega_nu = d E0 / hbar.
 *     Every `omega_rabi` argument below means the angular `omega`.
 *   - All functions returning tl_status are non-throwing and thread-safe with
 *     respect to distinct handles. On failure they return a status code and
 *     leave a message in tl_last_error() (thread-local, valid until the next
 *     tl_* call on the same thread). Output parameters are untouched on error.
 *   - Strings and arrays handed back through out-pointers are heap-allocated;
 *     release them with tl_string_free / tl_doubles_free. Handles have their
 *     own tl_*_free.
 */

#ifndef TWOLEVEL_H
#define TWOLEVEL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tl_status {
    TL_OK = 0,
    TL_ERR_DOMAIN = 1,      /* invalid physical argument        */
    TL_ERR_CONFIG = 2,      /* bad preset / configuration       */
    TL_ERR_RESOURCE = 3,    /* guard rail (e.g. grid too large) */
    TL_ERR_INTEGRATION = 4, /* ODE solver failure               */
    TL_ERR_USAGE = 5,       /* API misuse                       */
    TL_ERR_IO = 6,          /* file/parse/checksum failure      */
    TL_ERR_INTERNAL = 7     /* unexpected                       */
} tl_status;

/* Library semantic version, e.g. "0.1.0". Static storage; do not free. */
const char* tl_version(void);

/* Message for the most recent failing tl_* call on this thread ("" if none). */
const char* tl_last_error(void);

void tl_string_free(char* s);
void tl_doubles_free(double* p);

/* ---------------------------------------------------------------- presets */

typedef struct tl_atom {
    char name[64];
    double omega0_rad_s;          /* transition angular frequency */
    double dipole_Cm;             /* transition dipole moment     */
    double fine_splitting_rad_s;  /* < 0 when the preset has none */
    char notes[160];
} tl_atom;

tl_status tl_atom_builtin(const char* name, tl_atom* out);

/* Looks in `presets_path` first (NULL or "" to skip), then built-ins.
 * Preset files are blocks of `key = value` lines separated by blank lines;
 * keys: name, omega0_rad_s, dipole_Cm, fine_splitting_rad_s?, notes?. */
tl_status tl_atom_find(const char* name, const char* presets_path, tl_atom* out);

/* JSON array of built-in atom names. */
tl_status tl_atom_names_json(char** out_json);

/* JSON array of laser instrument presets (linewidth, drift, ...). */
tl_status tl_lasers_json(char** out_json);

/* Dipole moment given in atomic units -> C m (1 a.u. = 8.47835e-30 C m). */
tl_status tl_dipole_from_au(double d_au, double* out);

/* ------------------------------------------------------------ conversions */

typedef struct tl_rabi {
    double omega_rad_s;    /* angular Rabi frequency, pi * omega_nu */
    double omega_nu_per_s; /* d E0 / hbar                           */
} tl_rabi;

tl_status tl_rabi_from_field(const tl_atom* atom, double e0_v_per_m, tl_rabi* out);
tl_status tl_rabi_from_intensity(const tl_atom* atom, double intensity_w_per_m2, tl_rabi* out);

/* I = epsilon0 c0 E0^2 / 2 and its inverse. */
tl_status tl_intensity_from_field(double e0_v_per_m, double* out_w_per_m2);
tl_status tl_field_from_intensity(double intensity_w_per_m2, double* out_v_per_m);

/* Natural lifetime t_S = 3 pi hbar epsilon0 c0^3 / (omega0^3 d^2). */
tl_status tl_spontaneous_emission_time(const tl_atom* atom, double* out_s);

/* ---------------------------------------------------------- probabilities */

/* Monochromatic: P1 = [4 O^2/(4 O^2 + dw^2)] sin^2((tau/2) sqrt(4 O^2 + dw^2)). */
tl_status tl_p1(double omega_rabi, double detuning, double tau_s, double* out);

/* Detuning envelope 4 O^2/(4 O^2 + dw^2) (the tau-maximum of P1). */
tl_status tl_p1_envelope(double omega_rabi, double detuning, double* out);

/* Symmetric bichromatic: P2 = sin^2((O/dw) sin(dw tau)), even in dw, with the
 * removable dw -> 0 limit handled (-> sin^2(O tau)). */
tl_status tl_p2(double omega_rabi, double detuning, double tau_s, double* out);

/* Unit-free forms over X = tau*Omega, Y = detuning/Omega. */
tl_status tl_p1_dimensionless(double x, double y, double* out);
tl_status tl_p2_dimensionless(double x, double y, double* out);

/* --------------------------------------------------------------- lifetime */

/* g1 = gamma_s exp(-gamma_s t_l); g2 = gamma_l exp(-gamma_l t_s);
 * g_joint = (1/(t_l t_s)) exp(-(t_l^2 + t_s^2)/(t_l t_s)) = g1*g2 at the
 * reciprocal rates. */
tl_status tl_g1(double gamma_s, double t_l_s, double* out);
tl_status tl_g2(double gamma_l, double t_s_s, double* out);
tl_status tl_g_joint(double t_l_s, double t_s_s, double* out);

/* Lorentzian line profile (fwhm/2)^2 / (dw^2 + (fwhm/2)^2), peak 1. */
tl_status tl_lorentzian(double detuning, double fwhm, double* out);

/* Both positive roots of X = exp(X - 2); residuals |x - exp(x-2)| <= tol.
 * tol in (0, 1e-6]. The larger root ("pi-star") is ~0.0046 above pi. */
tl_status tl_fixed_point(double tolerance, double* x_small, double* x_large,
                         double* residual_small, double* residual_large);

typedef struct tl_lifetime_model {
    double t_s_s;
    double gamma_s_per_s;  /* 1/t_s                      */
    double pi_star;        /* large fixed-point root     */
    double x_small;        /* small fixed-point root     */
    double residual_large;
    double residual_small;
    double gamma_l_per_s;  /* pi_star / (19 t_s)         */
    double gamma_lg_per_s; /* pi_star / (20 t_s)         */
    double ratio_19;       /* 19 / pi_star               */
    double t_l1_s;         /* t_s / pi_star              */
    double t_l2_s;         /* 20 t_s / pi_star           */
} tl_lifetime_model;

tl_status tl_lifetime_constants(double t_s_s, tl_lifetime_model* out);

/* JSON document for the model: SI fields, ns/MHz display duplicates, and the
 * same rates computed with the literal pi for comparison. */
tl_status tl_lifetime_model_json(const tl_lifetime_model* model, char** out_json);

/* --------------------------------------------------------------- surfaces */

enum { TL_KIND_P1 = 0, TL_KIND_P2 = 1 };
enum { TL_FORMAT_CSV = 0, TL_FORMAT_JSON = 1, TL_FORMAT_MATRIX = 2 };

typedef struct tl_grid_spec {
    int kind;              /* TL_KIND_*                                   */
    int dimensionless;     /* nonzero: x = tau*Omega, y = detuning/Omega  */
    double x_min, x_max;   /* dimensionless X or tau [s]; x_min >= 0      */
    int nx;
    double y_min, y_max;   /* dimensionless Y or detuning [rad/s]         */
    int ny;
    double omega_rabi_rad_s; /* read only when !dimensionless             */
    int default_axes;      /* metadata flag: axes came from defaults      */
} tl_grid_spec;

typedef struct tl_surface tl_surface; /* opaque */

/* Evaluates the closed form on the grid. threads = 0: automatic; output is
 * bit-identical for every thread count. Grids above 1e8 samples are refused
 * with TL_ERR_RESOURCE before any allocation. */
tl_status tl_surface_generate(const tl_grid_spec* spec, int threads, tl_surface** out);
void tl_surface_free(tl_surface* s);

tl_status tl_surface_dims(const tl_surface* s, int* nx, int* ny);
/* xs: buffer of nx doubles, ys: buffer of ny (either may be NULL to skip). */
tl_status tl_surface_axes(const tl_surface* s, double* xs, double* ys);
/* value at (ix, iy); bounds-checked. */
tl_status tl_surface_value(const tl_surface* s, int ix, int iy, double* out);
/* FNV-1a 64 over dims + bit patterns of axes and values. */
tl_status tl_surface_checksum(const tl_surface* s, uint64_t* out);

/* Serialization is deterministic (17-significant-digit text, fixed key
 * order): export -> import -> export is byte-identical, and import verifies
 * the embedded checksum (TL_ERR_IO on mismatch). */
tl_status tl_surface_export(const tl_surface* s, int format, char** out_text);
tl_status tl_surface_import(const char* text, int format, tl_surface** out);
tl_status tl_surface_write(const tl_surface* s, const char* path, int format);
tl_status tl_surface_read(const char* path, int format, tl_surface** out);

/* ----------------------------------------------------------------- slices */

typedef struct tl_slice tl_slice; /* opaque */

/* Probability vs detuning at fixed pulse length. */
tl_status tl_slice_generate(int kind, double omega_rabi, double tau_s, double det_min,
                            double det_max, int n, tl_slice** out);
void tl_slice_free(tl_slice* s);

tl_status tl_slice_size(const tl_slice* s, int* n);
/* detunings/values: buffers of n doubles (either may be NULL to skip). */
tl_status tl_slice_data(const tl_slice* s, double* detunings, double* values);

/* Finds all interior local maxima with P >= 1 - tol over the slice range and
 * stores them on the slice. tol in (0, 1e-3]. */
tl_status tl_slice_find_peaks(tl_slice* s, double tol);
/* Call with peaks = NULL to query the count, then with a buffer of *count. */
tl_status tl_slice_peaks(const tl_slice* s, double* peaks, int* count);

tl_status tl_slice_export(const tl_slice* s, int format, char** out_text);
tl_status tl_slice_import(const char* text, int format, tl_slice** out);
tl_status tl_slice_write(const tl_slice* s, const char* path, int format);
tl_status tl_slice_read(const char* path, int format, tl_slice** out);

/* Standalone peak search (no slice needed); *out is tl_doubles_free'd by the
 * caller. */
tl_status tl_find_unit_peaks(int kind, double omega_rabi, double tau_s, double det_min,
                             double det_max, double tol, double** out, int* count);

/* ----------------------------------------------------------------- oracle */

/* Tolerances must lie in (1e-14, 1e-3]; zeros select the defaults
 * (rel 1e-11, abs 1e-13, max_step auto). */
typedef struct tl_ode_config {
    double rel_tol;
    double abs_tol;
    double max_step_s;
} tl_ode_config;

typedef struct tl_trace tl_trace; /* opaque */

/* Monochromatic rotating-frame Schroedinger equation, c(0) = (1,0); the exact
 * upper population is the closed-form P1. */
tl_status tl_trace_rwa(double omega_rabi, double detuning, double t_end_s, int n_samples,
                       const tl_ode_config* cfg /* nullable */, tl_trace** out);

/* Symmetric bichromatic model (coupling 2 O cos(dw t)); detuning != 0. */
tl_status tl_trace_bichromatic(double omega_rabi, double detuning, double t_end_s,
                               int n_samples, const tl_ode_config* cfg, tl_trace** out);

/* Amplitude-damped model, started excited; omega_rabi = 0 gives exp(-gamma t). */
tl_status tl_trace_damped(double omega_rabi, double detuning, double gamma_s,
                          double t_end_s, int n_samples, const tl_ode_config* cfg,
                          tl_trace** out);

void tl_trace_free(tl_trace* t);
tl_status tl_trace_size(const tl_trace* t, int* n);
/* times/populations: buffers of n doubles (either may be NULL to skip). */
tl_status tl_trace_data(const tl_trace* t, double* times, double* populations);
/* Max |norm - 1| over the trace; NaN for the damped model. */
tl_status tl_trace_norm_drift(const tl_trace* t, double* out);

/* Max-abs and RMS error between two traces on the identical time grid. */
tl_status tl_trace_compare(const tl_trace* numeric, const tl_trace* reference,
                           double* max_abs, double* rms);

/* Compare a trace against the closed form (TL_KIND_P1 -> p1, TL_KIND_P2 -> p2)
 * evaluated with the given drive parameters. */
tl_status tl_trace_compare_closed_form(const tl_trace* numeric, int kind, double omega_rabi,
                                       double detuning, double* max_abs, double* rms);

/* Full comparison report (times + both curves + error summary) as JSON. */
tl_status tl_trace_comparison_json(const tl_trace* numeric, int kind, double omega_rabi,
                                   double detuning, char** out_json);

/* ------------------------------------------------------------- validation */

/* Runs a named validation suite: "rwa", "bichromatic" or "damped".
 * bar <= 0 selects the default 1e-6. `informational` != 0 keeps the
 * bichromatic closed-form-P2 comparison out of the pass/fail decision.
 * *passed is 1/0; *report_json receives the full JSON report (always
 * produced, also on failure). */
tl_status tl_validate(const char* suite, const tl_ode_config* cfg /* nullable */,
                      double bar, int informational, int* passed, char** report_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TWOLEVEL_H */
