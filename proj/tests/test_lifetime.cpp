#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <json.hpp>
#include <random>

#include "core/constants.hpp"
#include "core/errors.hpp"
#include "core/lifetime.hpp"

using namespace twolevel;

namespace {

constexpr double kPi = constants::pi;

// independent root finder for X = exp(X - 2): 200 plain bisection steps,
// no reuse of the library's Newton polish
double bisect_fixed_point(double lo, double hi) {
    auto f = [](double x) { return x - std::exp(x - 2.0); };
    double flo = f(lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("g1 and g2 basics") {
    CHECK(g1(1.0, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(g2(1.0, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(g1(2.0, 0.0) == 2.0);
    const double gamma = 1.0 / 27.1e-9;
    CHECK(g1(gamma, 27.1e-9) == doctest::Approx(1.3574887128097503e7).epsilon(1e-13));
    CHECK(g_joint(27.1e-9, 27.1e-9) == doctest::Approx(1.8427756054058725e14).epsilon(1e-13));
}

TEST_CASE("g_joint factorizes into the two conditional densities") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> dist(5e-9, 2e-7);
    for (int i = 0; i < 2000; ++i) {
        const double tl = dist(rng);
        const double ts = dist(rng);
        const double lhs = g_joint(tl, ts);
        // (1/(tl ts)) exp(-(tl^2+ts^2)/(tl ts)) = g1(1/tl, ts) * g2(1/ts, tl)
        const double rhs = g1(1.0 / tl, ts) * g2(1.0 / ts, tl);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
    }
}

TEST_CASE("g1 integrates to one") {
    using boost::math::quadrature::gauss_kronrod;
    for (double gamma : {3.69e7, 6.101e6, 1.0}) {
        auto f = [gamma](double t) { return g1(gamma, t); };
        const double integral =
            gauss_kronrod<double, 15>::integrate(f, 0.0, 40.0 / gamma, 10, 1e-12);
        CHECK(std::abs(integral - 1.0) <= 1e-9);
    }
}

TEST_CASE("g2 peaks at gamma = 1/t_s") {
    const double ts = 27.1e-9;
    // golden-section search over gamma
    double a = 0.1 / ts, b = 10.0 / ts;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    for (int i = 0; i < 200; ++i) {
        if (g2(c, ts) > g2(d, ts)) {
            b = d;
        } else {
            a = c;
        }
        c = b - inv_phi * (b - a);
        d = a + inv_phi * (b - a);
    }
    const double gamma_star = 0.5 * (a + b);
    CHECK(std::abs(gamma_star - 1.0 / ts) <= 1e-6 / ts);
}

TEST_CASE("g_joint maximum over t_l sits at the golden ratio point") {
    const double ts = 27.1e-9;
    const double golden = 0.6180339887498949; // (sqrt(5)-1)/2
    const double tl_star = golden * ts;
    const double peak = g_joint(tl_star, ts);
    // stationarity: tiny symmetric displacements only lower the density
    CHECK(g_joint(tl_star * (1.0 + 1e-6), ts) <= peak);
    CHECK(g_joint(tl_star * (1.0 - 1e-6), ts) <= peak);
    // coarse grid never beats it
    for (int i = 1; i <= 400; ++i) {
        const double tl = ts * i / 100.0;
        CHECK(g_joint(tl, ts) <= peak * (1.0 + 1e-12));
    }
}

TEST_CASE("lorentzian profile") {
    const double fwhm = 2.0 * kPi * 5e5;
    CHECK(lorentzian_profile(0.0, fwhm) == 1.0);
    CHECK(lorentzian_profile(fwhm / 2.0, fwhm) == 0.5);
    CHECK(lorentzian_profile(-fwhm / 2.0, fwhm) == 0.5);
    CHECK(lorentzian_profile(3.7 * fwhm, fwhm) == lorentzian_profile(-3.7 * fwhm, fwhm));
    CHECK_THROWS_AS(lorentzian_profile(0.0, 0.0), DomainError);
    CHECK_THROWS_AS(lorentzian_profile(0.0, -1.0), DomainError);
}

TEST_CASE("fixed point roots of X = exp(X - 2)") {
    const auto roots = solve_fixed_point();
    CHECK(std::abs(roots.residual_small) <= 1e-12);
    CHECK(std::abs(roots.residual_large) <= 1e-12);
    CHECK(roots.x_large == doctest::Approx(3.1461932206205825).epsilon(1e-13));
    CHECK(roots.x_small == doctest::Approx(0.15859433956303937).epsilon(1e-13));
    CHECK(roots.x_large - kPi >= 0.004);
    CHECK(roots.x_large - kPi <= 0.005);

    // cross-check against an independent bisection
    CHECK(std::abs(roots.x_large - bisect_fixed_point(3.0, 3.5)) <= 1e-13);
    CHECK(std::abs(roots.x_small - bisect_fixed_point(0.1, 0.2)) <= 1e-13);

    CHECK_THROWS_AS(solve_fixed_point(0.0), DomainError);
    CHECK_THROWS_AS(solve_fixed_point(2e-6), DomainError);
    CHECK_THROWS_AS(solve_fixed_point(std::nan("")), DomainError);
}

TEST_CASE("lifetime constants at t_s = 27.1 ns") {
    const auto m = lifetime_constants(27.1e-9);
    CHECK(m.t_s == 27.1e-9);
    CHECK(m.gamma_s == doctest::Approx(1.0 / 27.1e-9).epsilon(1e-14));
    CHECK(m.pi_star == doctest::Approx(3.1461932206205825).epsilon(1e-13));
    CHECK(m.x_small == doctest::Approx(0.15859433956303937).epsilon(1e-13));
    CHECK(m.gamma_l == doctest::Approx(6110299.515674078).epsilon(1e-13));
    CHECK(m.gamma_lg == doctest::Approx(5804784.539890374).epsilon(1e-13));
    CHECK(m.ratio_19 == doctest::Approx(6.039044225088081).epsilon(1e-13));
    CHECK(m.t_l1 == doctest::Approx(8.613584131573e-9).epsilon(1e-12));
    CHECK(m.t_l2 == doctest::Approx(1.7227168263146e-7).epsilon(1e-12));

    // published operating values
    CHECK(std::abs(m.gamma_l - 6.101e6) / 6.101e6 <= 2e-3);
    CHECK(std::abs(m.gamma_lg - 5.796e6) / 5.796e6 <= 2e-3);
    CHECK(std::abs(m.gamma_s - 3.69e7) / 3.69e7 <= 5e-3);

    // the starred ratio is slightly below the literal-pi one
    CHECK(m.ratio_19 < 19.0 / kPi);
    CHECK(m.t_l2 / m.t_l1 == doctest::Approx(20.0).epsilon(1e-14));

    CHECK_THROWS_AS(lifetime_constants(0.0), DomainError);
    CHECK_THROWS_AS(lifetime_constants(-1e-9), DomainError);
    CHECK_THROWS_AS(lifetime_constants(std::nan("")), DomainError);
}

TEST_CASE("lifetime model json") {
    const auto m = lifetime_constants(27.1e-9);
    const auto j = nlohmann::json::parse(lifetime_model_json(m));
    CHECK(j["type"] == "twolevel-lifetime");
    CHECK(j["t_s_s"].get<double>() == 27.1e-9);
    CHECK(j["display"]["t_s_ns"].get<double>() == doctest::Approx(27.1).epsilon(1e-12));
    CHECK(j["display"]["gamma_l_mhz"].get<double>()
          == doctest::Approx(6.110299515674078).epsilon(1e-12));
    CHECK(j["fixed_point"]["pi_star"].get<double>()
          == doctest::Approx(3.1461932206205825).epsilon(1e-13));
    const double diff = j["fixed_point"]["pi_star_minus_pi"].get<double>();
    CHECK(diff >= 0.004);
    CHECK(diff <= 0.005);
    CHECK(j["pi_literal"]["ratio_19"].get<double>()
          == doctest::Approx(6.047887837492023).epsilon(1e-13));
}

TEST_CASE("domain errors for the conditional densities") {
    CHECK_THROWS_AS(g1(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(g1(1.0, -1.0), DomainError);
    CHECK_THROWS_AS(g2(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(g_joint(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(g_joint(1.0, -1.0), DomainError);
    CHECK_THROWS_AS(g_joint(std::nan(""), 1.0), DomainError);
}
