#include "core/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <thread>

#include "core/constants.hpp"
#include "core/errors.hpp"
#include "core/physics.hpp"
#include "core/version.hpp"

namespace twolevel {

namespace {

void check_finite(double v, const char* what) {
    if (!std::isfinite(v))
        throw DomainError(std::string(what) + " must be finite");
}

constexpr double kMaxSamples = 1e8;

struct Fnv1a {
    std::uint64_t h = 14695981039346656037ull;
    void feed(const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 1099511628211ull;
        }
    }
    void feed_u64(std::uint64_t v) { feed(&v, sizeof v); }
    void feed_double(double d) {
        std::uint64_t u;
        std::memcpy(&u, &d, sizeof u);
        feed_u64(u);
    }
    void feed_doubles(const std::vector<double>& v) {
        for (double d : v)
            feed_double(d);
    }
};

} // namespace

std::vector<double> make_axis(double lo, double hi, int n) {
    check_finite(lo, "axis minimum");
    check_finite(hi, "axis maximum");
    if (n < 2)
        throw DomainError("axis needs at least 2 samples");
    if (hi <= lo)
        throw DomainError("axis maximum must exceed minimum");
    std::vector<double> v(static_cast<size_t>(n));
    if (lo == -hi) {
        // Mirror the upper half so v[j] == -v[n-1-j] bit-for-bit.
        for (int i = n / 2; i < n; ++i)
            v[i] = hi * (2.0 * i - (n - 1)) / (n - 1);
        if (n % 2 == 1)
            v[(n - 1) / 2] = 0.0;
        for (int i = 0; i < n / 2; ++i)
            v[i] = -v[n - 1 - i];
    } else {
        const double span = hi - lo;
        for (int i = 0; i < n; ++i)
            v[i] = lo + span * i / (n - 1);
        v[n - 1] = hi;
    }
    v[0] = lo;
    return v;
}

void GridSpec::validate() const {
    check_finite(x_min, "x_min");
    check_finite(x_max, "x_max");
    check_finite(y_min, "y_min");
    check_finite(y_max, "y_max");
    if (nx < 2 || ny < 2)
        throw DomainError("grid needs nx >= 2 and ny >= 2");
    if (x_max <= x_min || y_max <= y_min)
        throw DomainError("grid bounds must satisfy min < max");
    if (x_min < 0.0)
        throw DomainError(dimensionless ? "X = tau*Omega must be >= 0" : "tau must be >= 0");
    if (!dimensionless) {
        check_finite(omega_rabi, "omega_rabi");
        if (omega_rabi < 0.0)
            throw DomainError("omega_rabi must be >= 0");
    }
    if (static_cast<double>(nx) * static_cast<double>(ny) > kMaxSamples)
        throw ResourceError("grid sample count " + std::to_string(nx) + "x" +
                            std::to_string(ny) + " exceeds the 1e8 guard");
}

std::uint64_t Surface::checksum() const {
    Fnv1a f;
    f.feed_u64(static_cast<std::uint64_t>(xs.size()));
    f.feed_u64(static_cast<std::uint64_t>(ys.size()));
    f.feed_doubles(xs);
    f.feed_doubles(ys);
    f.feed_doubles(values);
    return f.h;
}

std::uint64_t SpectralSlice::checksum() const {
    Fnv1a f;
    f.feed_u64(static_cast<std::uint64_t>(detunings.size()));
    f.feed_doubles(detunings);
    f.feed_doubles(values);
    return f.h;
}

Surface generate_surface(const GridSpec& spec, int threads) {
    spec.validate();
    if (threads < 0)
        throw DomainError("threads must be >= 0");

    Surface s;
    s.xs = make_axis(spec.x_min, spec.x_max, spec.nx);
    s.ys = make_axis(spec.y_min, spec.y_max, spec.ny);
    s.values.assign(static_cast<size_t>(spec.nx) * spec.ny, 0.0);

    const bool dimless = spec.dimensionless;
    const bool is_p1 = spec.kind == ProbabilityKind::P1;
    const double omega = spec.omega_rabi;
    auto fill_rows = [&](int i0, int i1) {
        for (int i = i0; i < i1; ++i) {
            const double x = s.xs[static_cast<size_t>(i)];
            double* row = s.values.data() + static_cast<size_t>(i) * spec.ny;
            for (int j = 0; j < spec.ny; ++j) {
                const double y = s.ys[static_cast<size_t>(j)];
                row[j] = dimless ? (is_p1 ? p1_dimensionless({x, y}) : p2_dimensionless({x, y}))
                                 : (is_p1 ? p1(omega, y, x) : p2(omega, y, x));
            }
        }
    };

    int nthreads = threads;
    if (nthreads == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        nthreads = static_cast<int>(std::clamp(hw, 1u, 8u));
    }
    nthreads = std::min(nthreads, spec.nx);

    if (nthreads <= 1) {
        fill_rows(0, spec.nx);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errs(static_cast<size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) {
            const int i0 = static_cast<int>(static_cast<long long>(spec.nx) * t / nthreads);
            const int i1 = static_cast<int>(static_cast<long long>(spec.nx) * (t + 1) / nthreads);
            pool.emplace_back([&, t, i0, i1] {
                try {
                    fill_rows(i0, i1);
                } catch (...) {
                    errs[static_cast<size_t>(t)] = std::current_exception();
                }
            });
        }
        for (auto& th : pool)
            th.join();
        for (auto& e : errs)
            if (e)
                std::rethrow_exception(e);
    }

    s.meta.version = kVersion;
    s.meta.kind = spec.kind;
    s.meta.dimensionless = dimless;
    s.meta.omega_rabi = dimless ? 0.0 : omega;
    s.meta.x_axis = dimless ? "X" : "tau_s";
    s.meta.y_axis = dimless ? "Y" : "detuning_radps";
    s.meta.convention = std::string(kRabiConvention);
    s.meta.time_direction = "forward";
    s.meta.axis_source = spec.default_axes ? "default" : "user";
    return s;
}

Surface generate_surface(const GridSpec& spec, const DriveSpec& drive, int threads) {
    if (spec.dimensionless)
        throw UsageError("drive must be omitted for dimensionless grids");
    drive.validate();
    const bool match =
        (spec.kind == ProbabilityKind::P1 && drive.kind == DriveKind::Monochromatic) ||
        (spec.kind == ProbabilityKind::P2 && drive.kind == DriveKind::BichromaticSymmetric);
    if (!match)
        throw UsageError("drive kind does not match the surface kind");
    GridSpec with_drive = spec;
    with_drive.omega_rabi = drive.omega_rabi;
    return generate_surface(with_drive, threads);
}

SpectralSlice spectral_slice(ProbabilityKind kind, double omega_rabi, double tau,
                             double det_min, double det_max, int n) {
    check_finite(omega_rabi, "omega_rabi");
    check_finite(tau, "tau");
    if (omega_rabi < 0.0)
        throw DomainError("omega_rabi must be >= 0");
    if (tau < 0.0)
        throw DomainError("tau must be >= 0");
    if (n < 2)
        throw DomainError("slice needs at least 2 samples");
    if (static_cast<double>(n) > kMaxSamples)
        throw ResourceError("slice sample count exceeds the 1e8 guard");

    SpectralSlice s;
    s.kind = kind;
    s.omega_rabi = omega_rabi;
    s.tau = tau;
    s.detunings = make_axis(det_min, det_max, n);
    s.values.resize(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double w = s.detunings[static_cast<size_t>(j)];
        s.values[static_cast<size_t>(j)] =
            kind == ProbabilityKind::P1 ? p1(omega_rabi, w, tau) : p2(omega_rabi, w, tau);
    }
    return s;
}

namespace {

double dp1_dw(double omega, double tau, double w) {
    if (omega == 0.0)
        return 0.0;
    const double fo2 = 4.0 * omega * omega;
    const double w2 = fo2 + w * w;
    const double wr = std::sqrt(w2);
    const double phi = 0.5 * tau * wr;
    const double s = std::sin(phi);
    return fo2 * w * (-2.0 * s * s / (w2 * w2) + 0.5 * tau * std::sin(2.0 * phi) / (w2 * wr));
}

// Inner argument of p2, g(w) = Omega sin(tau w)/w, and its derivative; series
// branch kills the cancellation near w = 0.
void p2_arg(double omega, double tau, double w, double& g, double& dg) {
    const double u = tau * w;
    if (std::abs(u) < 1e-6) {
        g = omega * tau * (1.0 - u * u / 6.0);
        dg = -omega * tau * tau * u / 3.0;
    } else {
        g = omega * std::sin(u) / w;
        dg = omega * (u * std::cos(u) - std::sin(u)) / (w * w);
    }
}

double dp2_dw(double omega, double tau, double w) {
    if (omega == 0.0 || tau == 0.0)
        return 0.0;
    double g, dg;
    p2_arg(omega, tau, w, g, dg);
    return std::sin(2.0 * g) * dg;
}

// Scan density from a bound on how fast the probability can oscillate in w.
int scan_count(ProbabilityKind kind, double omega, double tau, double w_lo, double w_hi) {
    const double wmax = std::max(std::abs(w_lo), std::abs(w_hi));
    double n_osc;
    if (kind == ProbabilityKind::P1) {
        n_osc = tau * std::sqrt(4.0 * omega * omega + wmax * wmax) / (2.0 * constants::pi) + 2.0;
    } else {
        const double lobes = std::ceil(tau * wmax / constants::pi) + 1.0;
        // total variation of g is O(Omega tau log(lobes)); each pi/2 of it can
        // host a peak, and each sinc lobe adds its own extremum
        n_osc = 2.0 * omega * tau * (1.0 + std::log(lobes + 1.0)) / constants::pi + lobes + 2.0;
    }
    return static_cast<int>(std::clamp(64.0 * n_osc, 1024.0, 4.0e6));
}

} // namespace

std::vector<double> find_unit_peaks(ProbabilityKind kind, double omega_rabi, double tau,
                                    double det_min, double det_max, double tol) {
    check_finite(omega_rabi, "omega_rabi");
    check_finite(tau, "tau");
    check_finite(det_min, "det_min");
    check_finite(det_max, "det_max");
    if (omega_rabi < 0.0)
        throw DomainError("omega_rabi must be >= 0");
    if (tau < 0.0)
        throw DomainError("tau must be >= 0");
    if (det_max <= det_min)
        throw DomainError("detuning range must satisfy min < max");
    if (!(tol > 0.0) || tol > 1e-3 || !std::isfinite(tol))
        throw DomainError("peak tolerance must be in (0, 1e-3]");

    auto deriv = [&](double w) {
        return kind == ProbabilityKind::P1 ? dp1_dw(omega_rabi, tau, w)
                                           : dp2_dw(omega_rabi, tau, w);
    };
    auto value = [&](double w) {
        return kind == ProbabilityKind::P1 ? p1(omega_rabi, w, tau) : p2(omega_rabi, w, tau);
    };

    const int n = scan_count(kind, omega_rabi, tau, det_min, det_max);
    const double h = (det_max - det_min) / n;
    std::vector<double> peaks;
    double prev_w = det_min;
    double prev_d = deriv(det_min);
    for (int k = 1; k <= n; ++k) {
        const double w = (k == n) ? det_max : det_min + k * h;
        const double d = deriv(w);
        if (prev_d > 0.0 && d < 0.0) {
            double a = prev_w, b = w;
            for (int it = 0; it < 200 && (b - a) > 1e-16 * (std::abs(a) + std::abs(b)) + 5e-324;
                 ++it) {
                const double m = 0.5 * (a + b);
                if (deriv(m) > 0.0)
                    a = m;
                else
                    b = m;
            }
            const double peak = 0.5 * (a + b);
            if (value(peak) >= 1.0 - tol)
                peaks.push_back(peak);
        } else if (d == 0.0 && k < n) {
            // stationary point exactly on the scan grid
            const double v = value(w);
            if (v >= 1.0 - tol && v >= value(w - 0.5 * h) && v >= value(w + 0.5 * h))
                peaks.push_back(w);
        }
        prev_w = w;
        prev_d = d;
    }

    std::vector<double> out;
    for (double p : peaks) {
        if (!out.empty() && p - out.back() <= 0.5 * h) {
            if (value(p) > value(out.back()))
                out.back() = p;
        } else {
            out.push_back(p);
        }
    }
    return out;
}

void attach_peaks(SpectralSlice& slice, double tol) {
    slice.peaks = find_unit_peaks(slice.kind, slice.omega_rabi, slice.tau,
                                  slice.detunings.front(), slice.detunings.back(), tol);
    slice.peaks_computed = true;
    slice.peak_tol = tol;
}

} // namespace twolevel
