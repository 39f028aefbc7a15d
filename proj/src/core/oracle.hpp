#pragma once

#include <functional>
#include <string>
#include <vector>

namespace twolevel {

// Adaptive-integration settings for the numerical reference solutions.
// Tolerances must lie in (1e-14, 1e-3]; max_step = 0 picks one automatically
// from the fastest dynamical timescale. The defaults keep norm drift below
// 1e-9 on every validation-suite case with an order of magnitude to spare.
struct OdeConfig {
    double rel_tol = 1e-11;
    double abs_tol = 1e-13;
    double max_step = 0.0; // seconds

    void validate() const;
};

// Upper-level population sampled on a uniform time grid.
struct Trace {
    std::vector<double> times;
    std::vector<double> populations;
    // Max deviation of |c1|^2 + |c2|^2 from 1 over the samples; NaN for the
    // damped model, whose norm is not conserved.
    double norm_drift = 0.0;
};

// Rotating-frame two-level Schroedinger equation for a monochromatic drive,
//   c1' =  i (dw/2) c1 - i O c2
//   c2' = -i O c1 - i (dw/2) c2,     c(0) = (1, 0),
// integrated with a dense-output Dormand-Prince 5(4) stepper. Its exact upper
// population is the closed-form p1.
Trace integrate_rwa_monochromatic(double omega_rabi, double detuning, double t_end,
                                  int n_samples, const OdeConfig& cfg = {});

// Symmetric bichromatic drive in the carrier rotating frame, keeping the
// co-rotating term of each component: the coupling becomes 2 O cos(dw t),
//   c1' = -i 2 O cos(dw t) c2,  c2' = -i 2 O cos(dw t) c1,  c(0) = (1, 0).
// Requires detuning != 0 (the bichromatic pair degenerates otherwise).
Trace integrate_bichromatic(double omega_rabi, double detuning, double t_end,
                            int n_samples, const OdeConfig& cfg = {});

// Decaying upper level: same frame as the monochromatic model plus an
// amplitude-damping term -(gamma_s/2) c2, started excited, c(0) = (0, 1).
// With omega_rabi = 0 the population is exactly exp(-gamma_s t).
Trace integrate_damped(double omega_rabi, double detuning, double gamma_s, double t_end,
                       int n_samples, const OdeConfig& cfg = {});

// Pointwise comparison of a numeric trace against a reference.
struct TraceComparison {
    std::vector<double> times, reference, numeric;
    double max_abs_error = 0.0;
    double rms_error = 0.0;
};

TraceComparison compare_traces(const Trace& numeric, const std::function<double(double)>& reference);
// Both traces must share the identical time grid; UsageError otherwise.
TraceComparison compare_traces(const Trace& numeric, const Trace& reference);

std::string trace_comparison_json(const TraceComparison& c);

} // namespace twolevel
