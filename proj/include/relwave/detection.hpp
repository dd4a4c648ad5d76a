#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relwave/amplitude.hpp"
#include "relwave/errors.hpp"
#include "relwave/experiment.hpp"
#include "relwave/stationarity.hpp"

namespace relwave {

/// Spherical detector screen of radius R around the source's spatial centre,
/// with quadrature counts in cos(theta), phi and detection time dX0.
struct Screen {
    double radius = 20.0;
    int n_theta = 4;
    int n_phi = 4;
    int n_t = 128;
    double t_max = 200.0;  ///< scan window for dX0; must exceed the radius
};

void validate_screen(const Screen& s);

/// Screen with every grid count multiplied by `factor`.
Screen refined(const Screen& s, int factor);

enum DetectionFlag : unsigned {
    kSpacelike = 1u << 0,
    kOffShell = 1u << 1,
    kLowConfidence = 1u << 2,
    kNoQuasiclassicalRoot = 1u << 3,
    kDegenerateQuadratic = 1u << 4,
    kNoAdmissibleRoot = 1u << 5,
    kNoStationaryPoint = 1u << 6,
    kAmplitudeOutOfRange = 1u << 7,
    kRefined = 1u << 8,
};

/// Flag names joined by '|', in bit order; empty when no flag is set.
std::string flags_to_string(unsigned flags);

struct ScreenPoint {
    double theta = 0.0;
    double phi = 0.0;
    double dx0 = 0.0;
};

/// (dX0, R sin(theta) cos(phi), R sin(theta) sin(phi), R cos(theta)).
FourVector screen_displacement(double radius, const ScreenPoint& pt);

/// Outcome of the life-time policy for one fully specified experiment.
struct LifetimeResolution {
    std::optional<StationarySolution> solution;
    unsigned flags = 0;
    DerivativeSamples derivative_samples;  ///< filled when kNoStationaryPoint is set
};

/// Quasi-classical root with branch selection, refined by the exact solver
/// whenever hbar C / sigma^2 > opts.refine_threshold on some axis or the
/// quasi-classical step failed on a timelike displacement. A failed exact
/// refinement leaves no solution.
LifetimeResolution resolve_lifetime(const Experiment& exp, const SolverOptions& opts);

struct DetectorAmplitude {
    FourVector displacement{};
    LifetimeResolution lifetime;
    std::optional<AmplitudeResult> amplitude;
    double lambda = 0.0;
};

DetectorAmplitude amplitude_at_detector(const Experiment& tmpl, double radius, const ScreenPoint& pt,
                                        const SolverOptions& opts = {});

struct DetectionRow {
    double theta = 0.0;
    double phi = 0.0;
    FourVector displacement{};
    double c_stationary = 0.0;
    std::string branch = "none";
    double lambda = 0.0;
    std::complex<double> k{};
    double k_abs2 = 0.0;
    unsigned flags = 0;
    double weight = 0.0;  ///< quadrature weight of the node (dOmega d(dX0))
    DerivativeSamples derivative_samples;
};

struct DetectionTable {
    std::vector<DetectionRow> rows;
};

/// Rows ordered by (cos theta node, phi node, dX0 node). dX0 nodes are
/// Gauss-Legendre on [0, t_max]; phi uses the periodic midpoint rule.
DetectionTable screen_scan(const Experiment& tmpl, const Screen& screen, const SolverOptions& opts = {});

void write_detection_csv(std::ostream& os, const DetectionTable& table);

/// int dOmega int_0^inf d(dX0) |K|^2 at the screen's resolution, using the
/// template's amplitude constant. Per direction, [0, Ts] (Ts: switch onto the
/// far-field branch) is cut at every flip of the selected root and each piece
/// gets n_t/4 Gauss-Legendre nodes; the tail uses dX0 = Ts + T0 u / (1 - u),
/// T0 = 2 m R, with n_t nodes.
double screen_integral(const Experiment& tmpl, const Screen& screen, const SolverOptions& opts = {});

/// Partial sums of the same rule restricted to dX0 <= t for each t.
/// Non-decreasing in t by construction.
std::vector<double> partial_time_integrals(const Experiment& tmpl, const Screen& screen,
                                           std::span<const double> t_values,
                                           const SolverOptions& opts = {});

struct Normalization {
    double amplitude = 0.0;         ///< A such that the rescaled density integrates to 1
    double integral = 0.0;          ///< integral with A = 1 at doubled resolution
    double integral_coarse = 0.0;   ///< integral with A = 1 at the given resolution
    double error_estimate = 0.0;    ///< |integral - integral_coarse|
    double relative_error = 0.0;    ///< error_estimate / integral
};

/// Throws QuadratureError when grid doubling moves the integral by > 1e-3 relative.
Normalization normalization_constant(const Experiment& tmpl, const Screen& screen,
                                     const SolverOptions& opts = {});

struct NonrelRow {
    double t = 0.0;
    double c_stationary = 0.0;
    double newtonian = 0.0;     ///< T / 2m
    double relative_gap = 0.0;  ///< |C* - T/2m| / (T/2m)
    double lambda = 0.0;
    double rest_phase = 0.0;    ///< m T
    double phase_gap = 0.0;     ///< |Lambda - m T| / (m T)
    unsigned flags = 0;
};

/// Detector placed on the drifting packet, dX = (T, p_k T / m). Requires
/// |p_k| / m <= 1e-3 on every spatial axis.
std::vector<NonrelRow> nonrel_limit_report(const Experiment& tmpl, std::span<const double> t_values,
                                           const SolverOptions& opts = {});

void write_nonrel_csv(std::ostream& os, std::span<const NonrelRow> rows);

/// Least-squares slope of log(prefactor modulus) against log C on `samples`
/// log-spaced points of [c_lo, c_hi]. Requires two decades and
/// 4 hbar^2 c_lo^2 / sigma^4 >= 100 on at least one axis.
double prefactor_decay_slope(const Experiment& tmpl, double c_lo, double c_hi, int samples = 64);

}  // namespace relwave
