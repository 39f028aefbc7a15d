#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/dynamics.hpp"

namespace twolevel {

enum class ProbabilityKind {
    P1, // monochromatic
    P2, // symmetric bichromatic
};

// Rectangular evaluation grid. Dimensionless: x = tau*Omega, y = detuning/Omega.
// Physical: x = tau [s], y = detuning [rad/s], and omega_rabi supplies the drive.
struct GridSpec {
    ProbabilityKind kind = ProbabilityKind::P1;
    bool dimensionless = true;
    double x_min = 0.0, x_max = 1.0;
    int nx = 2;
    double y_min = -1.0, y_max = 1.0;
    int ny = 2;
    double omega_rabi = 0.0;  // rad/s; read only when !dimensionless
    bool default_axes = false; // provenance note carried into metadata

    // DomainError on bad bounds/counts, ResourceError when nx*ny > 1e8.
    // The guard fires before any allocation.
    void validate() const;
};

struct SurfaceMetadata {
    std::string version;
    ProbabilityKind kind = ProbabilityKind::P1;
    bool dimensionless = true;
    double omega_rabi = 0.0;
    std::string x_axis, y_axis;     // "X"/"Y" or "tau_s"/"detuning_radps"
    std::string convention;         // rabi-frequency convention tag
    std::string time_direction;     // "forward"
    std::string axis_source;        // "default" | "user"
};

// Sampled probability surface. values is row-major with x outermost:
// value(ix, iy) = values[ix*ny + iy].
struct Surface {
    std::vector<double> xs, ys;
    std::vector<double> values;
    SurfaceMetadata meta;

    int nx() const { return static_cast<int>(xs.size()); }
    int ny() const { return static_cast<int>(ys.size()); }
    double value(int ix, int iy) const { return values[static_cast<size_t>(ix) * ys.size() + iy]; }

    // FNV-1a 64 over nx, ny and the raw bit patterns of xs, ys, values.
    std::uint64_t checksum() const;
};

// Evaluates the closed-form probability on the grid. `threads` = 0 picks a
// hardware-based count; 1 forces serial. Output bytes are identical for any
// thread count (each cell is written independently to a preallocated buffer).
Surface generate_surface(const GridSpec& spec, int threads = 0);

// Physical-surface convenience taking the drive separately. The drive kind
// must match spec.kind (monochromatic -> P1, bichromatic -> P2) and the spec
// must not be dimensionless; UsageError otherwise.
Surface generate_surface(const GridSpec& spec, const DriveSpec& drive, int threads = 0);

// Fixed-tau cut: probability vs detuning, plus (optionally) the detunings of
// unit-probability peaks.
struct SpectralSlice {
    ProbabilityKind kind = ProbabilityKind::P2;
    double omega_rabi = 0.0; // rad/s
    double tau = 0.0;        // s
    std::vector<double> detunings, values;
    bool peaks_computed = false;
    double peak_tol = 0.0;
    std::vector<double> peaks;

    std::uint64_t checksum() const; // over n + detunings + values
};

SpectralSlice spectral_slice(ProbabilityKind kind, double omega_rabi, double tau,
                             double det_min, double det_max, int n);

// All interior local maxima of the probability (as a function of detuning)
// with P >= 1 - tol, sorted ascending. Dense scan of the analytic derivative
// (sampling density derived from a phase-variation bound), bracketed sign
// changes refined by bisection. tol in (0, 1e-3].
std::vector<double> find_unit_peaks(ProbabilityKind kind, double omega_rabi, double tau,
                                    double det_min, double det_max, double tol);

// Fills slice.peaks from find_unit_peaks over the slice's detuning range.
void attach_peaks(SpectralSlice& slice, double tol);

// Shared axis builder: endpoints exact; for symmetric ranges (lo == -hi) the
// negative half mirrors the positive half bit-for-bit (centre exactly 0.0
// when n is odd).
std::vector<double> make_axis(double lo, double hi, int n);

} // namespace twolevel
