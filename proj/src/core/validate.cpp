#include "core/validate.hpp"

#include <cmath>

#include <json.hpp>

#include "core/constants.hpp"
#include "core/dynamics.hpp"
#include "core/errors.hpp"
#include "core/version.hpp"

namespace twolevel {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json ode_json(const OdeConfig& c) {
    return {{"rel_tol", c.rel_tol}, {"abs_tol", c.abs_tol}, {"max_step_s", c.max_step}};
}

ordered_json suite_skeleton(const std::string& suite, const ValidationOptions& opt) {
    ordered_json j;
    j["type"] = "twolevel-validation";
    j["version"] = kVersion;
    j["suite"] = suite;
    j["ode"] = ode_json(opt.ode);
    j["bar"] = opt.bar;
    j["norm_bar"] = opt.norm_bar;
    j["cases"] = ordered_json::array();
    return j;
}

ValidationOutcome run_rwa(const ValidationOptions& opt) {
    ordered_json j = suite_skeleton("rwa", opt);
    bool all = true;
    const double omegas[] = {0.5, 1.0, 2.0, 4.0};
    const double ratios[] = {0.0, 0.5, 2.0, 8.0};
    for (double o : omegas) {
        for (double r : ratios) {
            const double dw = r * o;
            const double w_flop = std::sqrt(4.0 * o * o + dw * dw);
            const double t_end = 6.0 * 2.0 * constants::pi / w_flop;
            const Trace tr = integrate_rwa_monochromatic(o, dw, t_end, 1000, opt.ode);
            const TraceComparison cmp =
                compare_traces(tr, [o, dw](double t) { return p1(o, dw, t); });
            const bool ok = cmp.max_abs_error <= opt.bar && tr.norm_drift <= opt.norm_bar;
            all = all && ok;
            j["cases"].push_back({{"omega_rabi", o},
                                  {"detuning", dw},
                                  {"t_end", t_end},
                                  {"n", 1000},
                                  {"max_abs_error", cmp.max_abs_error},
                                  {"rms_error", cmp.rms_error},
                                  {"norm_drift", tr.norm_drift},
                                  {"passed", ok}});
        }
    }
    j["all_passed"] = all;
    return {all, j.dump(2) + "\n"};
}

ValidationOutcome run_bichromatic(const ValidationOptions& opt) {
    ordered_json j = suite_skeleton("bichromatic", opt);
    j["informational_p2"] = opt.informational;
    bool all = true;
    const double dw = 1.0;
    const double ratios[] = {0.1, 0.2, 0.5, 1.0, 2.0, 5.0};
    // 1200 intervals over 3 beat periods: samples land on every t = k pi
    const int n = 1201;
    const double t_end = 6.0 * constants::pi;
    for (double r : ratios) {
        const double o = r * dw;
        const Trace tr = integrate_bichromatic(o, dw, t_end, n, opt.ode);
        const TraceComparison model = compare_traces(tr, [o, dw](double t) {
            return std::pow(std::sin(2.0 * o / dw * std::sin(dw * t)), 2);
        });
        const TraceComparison vs_p2 =
            compare_traces(tr, [o, dw](double t) { return p2(o, dw, t); });
        // the drive integral vanishes at beat half-periods, so the population
        // must return to zero there
        double zero_max = 0.0;
        for (int k = 1; k <= 6; ++k)
            zero_max = std::max(zero_max, tr.populations[static_cast<size_t>(200 * k)]);
        bool ok = model.max_abs_error <= opt.bar && zero_max <= opt.bar &&
                  tr.norm_drift <= opt.norm_bar;
        if (!opt.informational)
            ok = ok && vs_p2.max_abs_error <= opt.bar;
        all = all && ok;
        j["cases"].push_back({{"omega_rabi", o},
                              {"detuning", dw},
                              {"ratio", r},
                              {"t_end", t_end},
                              {"n", n},
                              {"model_max_abs_error", model.max_abs_error},
                              {"model_rms_error", model.rms_error},
                              {"zero_population_max", zero_max},
                              {"p2_max_abs_error", vs_p2.max_abs_error},
                              {"p2_rms_error", vs_p2.rms_error},
                              {"norm_drift", tr.norm_drift},
                              {"passed", ok}});
    }
    j["all_passed"] = all;
    return {all, j.dump(2) + "\n"};
}

ValidationOutcome run_damped(const ValidationOptions& opt) {
    ordered_json j = suite_skeleton("damped", opt);
    bool all = true;
    const double g = 1.0 / 27.1e-9; // a natural-lifetime-scale decay rate

    {
        // free decay against the exact exponential
        const double t_end = 5.0 / g;
        const Trace tr = integrate_damped(0.0, 0.0, g, t_end, 1000, opt.ode);
        const TraceComparison cmp =
            compare_traces(tr, [g](double t) { return std::exp(-g * t); });
        // spot checks at one and two lifetimes (grid may not contain them):
        const Trace spot = integrate_damped(0.0, 0.0, g, 2.0 / g, 3, opt.ode);
        const double e1 = std::abs(spot.populations[1] - std::exp(-1.0)) / std::exp(-1.0);
        const double e2 = std::abs(spot.populations[2] - std::exp(-2.0)) / std::exp(-2.0);
        const bool ok = cmp.max_abs_error <= opt.bar && e1 <= 1e-8 && e2 <= 1e-8;
        all = all && ok;
        j["cases"].push_back({{"name", "free-decay"},
                              {"gamma_s", g},
                              {"t_end", t_end},
                              {"n", 1000},
                              {"max_abs_error", cmp.max_abs_error},
                              {"rms_error", cmp.rms_error},
                              {"rel_error_one_lifetime", e1},
                              {"rel_error_two_lifetimes", e2},
                              {"passed", ok}});
    }
    {
        // driven and damped: population must stay a probability and die out
        const double o = g;
        const double t_end = 10.0 / g;
        const Trace tr = integrate_damped(o, 0.0, g, t_end, 1000, opt.ode);
        double lo = 1.0, hi = 0.0;
        for (double p : tr.populations) {
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
        const double final_pop = tr.populations.back();
        const bool ok = lo >= -1e-12 && hi <= 1.0 + 1e-12 && final_pop <= 0.05;
        all = all && ok;
        j["cases"].push_back({{"name", "driven-damped"},
                              {"omega_rabi", o},
                              {"gamma_s", g},
                              {"t_end", t_end},
                              {"n", 1000},
                              {"min_population", lo},
                              {"max_population", hi},
                              {"final_population", final_pop},
                              {"passed", ok}});
    }
    j["all_passed"] = all;
    return {all, j.dump(2) + "\n"};
}

} // namespace

ValidationOutcome run_validation_suite(const std::string& suite, const ValidationOptions& opt) {
    opt.ode.validate();
    if (!std::isfinite(opt.bar) || opt.bar <= 0.0)
        throw DomainError("validation bar must be finite and > 0");
    if (!std::isfinite(opt.norm_bar) || opt.norm_bar <= 0.0)
        throw DomainError("norm bar must be finite and > 0");
    if (suite == "rwa")
        return run_rwa(opt);
    if (suite == "bichromatic")
        return run_bichromatic(opt);
    if (suite == "damped")
        return run_damped(opt);
    throw UsageError("unknown validation suite '" + suite + "' (use rwa, bichromatic or damped)");
}

} // namespace twolevel
