#include "core/lifetime.hpp"

#include <cmath>

#include <json.hpp>

#include "core/constants.hpp"
#include "core/errors.hpp"
#include "core/version.hpp"

namespace twolevel {

namespace {

void require_pos(double v, const char* what) {
    if (!std::isfinite(v) || v <= 0.0)
        throw DomainError(std::string(what) + " must be finite and > 0");
}

void require_non_neg(double v, const char* what) {
    if (!std::isfinite(v) || v < 0.0)
        throw DomainError(std::string(what) + " must be finite and >= 0");
}

inline double fixed_point_f(double x) { return x - std::exp(x - 2.0); }

// One root of f in [lo, hi] (f changes sign there): bisect to ~1e-3 width,
// then Newton with f'(x) = 1 - exp(x-2).
double refine_root(double lo, double hi) {
    double flo = fixed_point_f(lo);
    for (int i = 0; i < 24; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = fixed_point_f(mid);
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double x = 0.5 * (lo + hi);
    double best = x, best_abs = std::abs(fixed_point_f(x));
    for (int i = 0; i < 50; ++i) {
        const double fx = fixed_point_f(x);
        if (std::abs(fx) < best_abs) {
            best = x;
            best_abs = std::abs(fx);
        }
        const double dfx = 1.0 - std::exp(x - 2.0);
        if (dfx == 0.0)
            break;
        const double step = fx / dfx;
        x -= step;
        if (std::abs(step) < 1e-17 * std::abs(x))
            break;
    }
    if (std::abs(fixed_point_f(x)) < best_abs)
        best = x;
    return best;
}

} // namespace

double g1(double gamma_s, double t_l) {
    require_pos(gamma_s, "gamma_s");
    require_non_neg(t_l, "t_l"); // density is well defined at t = 0
    return gamma_s * std::exp(-gamma_s * t_l);
}

double g2(double gamma_l, double t_s) {
    require_pos(gamma_l, "gamma_l");
    require_non_neg(t_s, "t_s");
    return gamma_l * std::exp(-gamma_l * t_s);
}

double g_joint(double t_l, double t_s) {
    require_pos(t_l, "t_l");
    require_pos(t_s, "t_s");
    return 1.0 / (t_l * t_s) * std::exp(-(t_l * t_l + t_s * t_s) / (t_l * t_s));
}

double lorentzian_profile(double detuning, double fwhm) {
    if (!std::isfinite(detuning))
        throw DomainError("detuning must be finite");
    require_pos(fwhm, "fwhm");
    const double h = 0.5 * fwhm;
    return h * h / (detuning * detuning + h * h);
}

FixedPointRoots solve_fixed_point(double tolerance) {
    if (!std::isfinite(tolerance) || tolerance <= 0.0 || tolerance > 1e-6)
        throw DomainError("fixed-point tolerance must be in (0, 1e-6]");
    // f(0.1) > 0 > f(0.2) and f(3) > 0 > f(3.5): both brackets are fixed.
    FixedPointRoots r;
    r.x_small = refine_root(0.1, 0.2);
    r.x_large = refine_root(3.0, 3.5);
    r.residual_small = std::abs(fixed_point_f(r.x_small));
    r.residual_large = std::abs(fixed_point_f(r.x_large));
    if (r.residual_small > tolerance || r.residual_large > tolerance)
        throw IntegrationError("fixed-point solve did not reach requested tolerance");
    return r;
}

LifetimeModel lifetime_constants(double t_s) {
    require_pos(t_s, "t_s");
    const FixedPointRoots roots = solve_fixed_point();
    LifetimeModel m;
    m.t_s = t_s;
    m.gamma_s = 1.0 / t_s;
    m.pi_star = roots.x_large;
    m.x_small = roots.x_small;
    m.residual_large = roots.residual_large;
    m.residual_small = roots.residual_small;
    m.gamma_l = roots.x_large / (19.0 * t_s);
    m.gamma_lg = roots.x_large / (20.0 * t_s);
    m.ratio_19 = 19.0 / roots.x_large;
    m.t_l1 = t_s / roots.x_large;
    m.t_l2 = 20.0 * t_s / roots.x_large;
    return m;
}

std::string lifetime_model_json(const LifetimeModel& m) {
    nlohmann::ordered_json j;
    j["type"] = "twolevel-lifetime";
    j["version"] = kVersion;
    j["t_s_s"] = m.t_s;
    j["gamma_s_per_s"] = m.gamma_s;
    j["fixed_point"] = {
        {"pi_star", m.pi_star},
        {"x_small", m.x_small},
        {"residual_large", m.residual_large},
        {"residual_small", m.residual_small},
        {"pi_star_minus_pi", m.pi_star - constants::pi},
    };
    j["gamma_l_per_s"] = m.gamma_l;
    j["gamma_lg_per_s"] = m.gamma_lg;
    j["ratio_19"] = m.ratio_19;
    j["t_l1_s"] = m.t_l1;
    j["t_l2_s"] = m.t_l2;
    // same rates with the literal pi, for judging how much pi-star matters
    j["pi_literal"] = {
        {"gamma_l_per_s", constants::pi / (19.0 * m.t_s)},
        {"gamma_lg_per_s", constants::pi / (20.0 * m.t_s)},
        {"ratio_19", 19.0 / constants::pi},
    };
    j["display"] = {
        {"t_s_ns", m.t_s * 1e9},
        {"gamma_s_mhz", m.gamma_s * 1e-6},
        {"gamma_l_mhz", m.gamma_l * 1e-6},
        {"gamma_lg_mhz", m.gamma_lg * 1e-6},
        {"t_l1_ns", m.t_l1 * 1e9},
        {"t_l2_ns", m.t_l2 * 1e9},
    };
    return j.dump(2) + "\n";
}

} // namespace twolevel
