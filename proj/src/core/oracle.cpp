#include "core/oracle.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include <boost/numeric/odeint.hpp>
#include <json.hpp>

#include "core/constants.hpp"
#include "core/errors.hpp"
#include "core/version.hpp"

namespace twolevel {

namespace {

namespace ode = boost::numeric::odeint;
using state_type = std::array<std::complex<double>, 2>;
constexpr std::complex<double> kI{0.0, 1.0};

void check_finite(double v, const char* what) {
    if (!std::isfinite(v))
        throw DomainError(std::string(what) + " must be finite");
}

void check_trace_args(double omega, double detuning, double t_end, int n_samples) {
    check_finite(omega, "omega_rabi");
    check_finite(detuning, "detuning");
    check_finite(t_end, "t_end");
    if (omega < 0.0)
        throw DomainError("omega_rabi must be >= 0");
    if (t_end <= 0.0)
        throw DomainError("t_end must be > 0");
    if (n_samples < 2)
        throw DomainError("trace needs at least 2 samples");
    if (n_samples > 10'000'000)
        throw ResourceError("trace sample count exceeds the 1e7 guard");
}

std::vector<double> sample_times(double t_end, int n) {
    std::vector<double> t(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        t[static_cast<size_t>(i)] = t_end * i / (n - 1);
    t.back() = t_end;
    return t;
}

double auto_max_step(double t_end, double fastest_angular_rate) {
    if (fastest_angular_rate <= 0.0)
        return t_end / 10.0;
    // ~20 steps per fastest period, never coarser than the full interval
    return std::min(t_end, 2.0 * constants::pi / fastest_angular_rate / 20.0);
}

// Runs the dense-output integrator over the sample grid, recording |c2|^2.
template <typename Rhs>
Trace run_integration(Rhs rhs, const state_type& c0, double t_end, int n, const OdeConfig& cfg,
                      double fastest_rate, bool norm_conserved) {
    cfg.validate();
    const double max_dt = cfg.max_step > 0.0 ? cfg.max_step : auto_max_step(t_end, fastest_rate);

    Trace tr;
    tr.times = sample_times(t_end, n);
    tr.populations.reserve(static_cast<size_t>(n));
    double drift = 0.0;
    double t_reached = 0.0;
    auto observe = [&](const state_type& c, double t) {
        tr.populations.push_back(std::norm(c[1]));
        drift = std::max(drift, std::abs(std::norm(c[0]) + std::norm(c[1]) - 1.0));
        t_reached = t;
    };

    auto stepper =
        ode::make_dense_output(cfg.abs_tol, cfg.rel_tol, max_dt, ode::runge_kutta_dopri5<state_type>());
    state_type c = c0;
    try {
        ode::integrate_times(stepper, rhs, c, tr.times.begin(), tr.times.end(), max_dt / 4.0,
                             observe);
    } catch (const std::exception& e) {
        throw IntegrationError("adaptive integration failed near t = " +
                               std::to_string(t_reached) + ": " + e.what());
    }
    tr.norm_drift = norm_conserved ? drift : std::numeric_limits<double>::quiet_NaN();
    return tr;
}

} // namespace

void OdeConfig::validate() const {
    auto check_tol = [](double v, const char* what) {
        if (!std::isfinite(v) || v <= 1e-14 || v > 1e-3)
            throw DomainError(std::string(what) + " must lie in (1e-14, 1e-3]");
    };
    check_tol(rel_tol, "rel_tol");
    check_tol(abs_tol, "abs_tol");
    if (!std::isfinite(max_step) || max_step < 0.0)
        throw DomainError("max_step must be finite and >= 0 (0 = auto)");
}

Trace integrate_rwa_monochromatic(double omega_rabi, double detuning, double t_end,
                                  int n_samples, const OdeConfig& cfg) {
    check_trace_args(omega_rabi, detuning, t_end, n_samples);
    const double o = omega_rabi, dw = detuning;
    auto rhs = [o, dw](const state_type& c, state_type& dc, double) {
        dc[0] = kI * (0.5 * dw) * c[0] - kI * o * c[1];
        dc[1] = -kI * o * c[0] - kI * (0.5 * dw) * c[1];
    };
    const double fastest = std::max(2.0 * o, std::abs(dw));
    return run_integration(rhs, state_type{{{1.0, 0.0}, {0.0, 0.0}}}, t_end, n_samples, cfg,
                           fastest, true);
}

Trace integrate_bichromatic(double omega_rabi, double detuning, double t_end, int n_samples,
                            const OdeConfig& cfg) {
    check_trace_args(omega_rabi, detuning, t_end, n_samples);
    if (detuning == 0.0)
        throw DomainError("bichromatic drive needs detuning != 0");
    const double o = omega_rabi, dw = detuning;
    auto rhs = [o, dw](const state_type& c, state_type& dc, double t) {
        const double coupling = 2.0 * o * std::cos(dw * t);
        dc[0] = -kI * coupling * c[1];
        dc[1] = -kI * coupling * c[0];
    };
    const double fastest = std::max(2.0 * o, std::abs(dw));
    return run_integration(rhs, state_type{{{1.0, 0.0}, {0.0, 0.0}}}, t_end, n_samples, cfg,
                           fastest, true);
}

Trace integrate_damped(double omega_rabi, double detuning, double gamma_s, double t_end,
                       int n_samples, const OdeConfig& cfg) {
    check_trace_args(omega_rabi, detuning, t_end, n_samples);
    check_finite(gamma_s, "gamma_s");
    if (gamma_s < 0.0)
        throw DomainError("gamma_s must be >= 0");
    const double o = omega_rabi, dw = detuning, g = gamma_s;
    auto rhs = [o, dw, g](const state_type& c, state_type& dc, double) {
        dc[0] = kI * (0.5 * dw) * c[0] - kI * o * c[1];
        dc[1] = -kI * o * c[0] - kI * (0.5 * dw) * c[1] - 0.5 * g * c[1];
    };
    const double fastest = std::max({2.0 * o, std::abs(dw), g});
    return run_integration(rhs, state_type{{{0.0, 0.0}, {1.0, 0.0}}}, t_end, n_samples, cfg,
                           fastest, false);
}

namespace {

void finish_comparison(TraceComparison& c) {
    double mx = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < c.times.size(); ++i) {
        const double e = std::abs(c.numeric[i] - c.reference[i]);
        mx = std::max(mx, e);
        sum2 += e * e;
    }
    c.max_abs_error = mx;
    c.rms_error = c.times.empty() ? 0.0 : std::sqrt(sum2 / static_cast<double>(c.times.size()));
}

} // namespace

TraceComparison compare_traces(const Trace& numeric,
                               const std::function<double(double)>& reference) {
    if (numeric.times.size() != numeric.populations.size())
        throw UsageError("trace is internally inconsistent");
    TraceComparison c;
    c.times = numeric.times;
    c.numeric = numeric.populations;
    c.reference.reserve(c.times.size());
    for (double t : c.times)
        c.reference.push_back(reference(t));
    finish_comparison(c);
    return c;
}

TraceComparison compare_traces(const Trace& numeric, const Trace& reference) {
    if (numeric.times != reference.times)
        throw UsageError("traces must share the identical time grid");
    TraceComparison c;
    c.times = numeric.times;
    c.numeric = numeric.populations;
    c.reference = reference.populations;
    finish_comparison(c);
    return c;
}

std::string trace_comparison_json(const TraceComparison& c) {
    nlohmann::ordered_json j;
    j["type"] = "twolevel-comparison";
    j["version"] = kVersion;
    j["n"] = c.times.size();
    j["max_abs_error"] = c.max_abs_error;
    j["rms_error"] = c.rms_error;
    j["times"] = c.times;
    j["reference"] = c.reference;
    j["numeric"] = c.numeric;
    return j.dump(2) + "\n";
}

} // namespace twolevel
