#pragma once

#include <array>
#include <complex>
#include <span>

#include "relwave/experiment.hpp"

namespace relwave {

/// Fixed Gauss-Legendre discretization of the per-axis momentum integral.
struct QuadratureSpec {
    int nodes = 256;          ///< starting node count per axis; even, >= 16
    double window = 12.0;     ///< half-width of the momentum window in units of hbar/sigma
    int max_nodes = 16384;    ///< node doubling stops here
    double tolerance = 1e-6;  ///< largest accepted relative change under node doubling
};

void validate_quadrature_spec(const QuadratureSpec& q);

struct QuadratureResult {
    std::complex<double> value;
    std::array<std::complex<double>, 4> axis_values{};
    std::array<int, 4> nodes{};       ///< node count of the accepted estimate, per axis
    double max_relative_change = 0.0; ///< last node-doubling change, worst axis
};

/// One axis of the momentum-space amplitude with a fixed n-node rule:
///   int dp exp[-(i/hbar) theta p^2 C - (s/2hbar^2)(p - pbar)^2 + (i/hbar) theta p dX],
/// s = sigma0^2 + sigma1^2, pbar = (sigma0^2 p0 + sigma1^2 p1)/s, integrated over
/// pbar +- window * hbar / sqrt(s). The constant exp(s pbar^2 / 2hbar^2) is omitted.
std::complex<double> quadrature_axis(const Experiment& exp, const FinalPacket& fin, LifeTime c,
                                     std::size_t mu, int nodes, double window);

/// Product of the four axis integrals times exp(i m^2 C / hbar). Each axis is
/// refined by node doubling until it settles; a final doubling change above
/// q.tolerance raises QuadratureError.
QuadratureResult quadrature_amplitude(const Experiment& exp, const FinalPacket& fin, LifeTime c,
                                      const QuadratureSpec& q = {});

/// One axis of a freely evolved Gaussian:
///   psi(x) = amplitude * exp(-(x - center)^2 / (2 width_sq) + i wavenumber (x - origin)).
struct EvolvedAxis {
    double origin = 0.0;
    double center = 0.0;
    std::complex<double> width_sq;
    double wavenumber = 0.0;
    std::complex<double> amplitude;

    std::complex<double> operator()(double x) const;
    /// Analytic int |psi|^2 dx.
    double norm() const;
    /// Spatial scale of |psi|^2 (sigma |q| in the closed form).
    double width() const;
};

struct EvolvedPacket {
    std::array<EvolvedAxis, 4> axes{};
    double inner_time = 0.0;
    double mass_phase = 0.0;  ///< m^2 c / hbar

    /// psi(c, x) at an absolute space-time point x.
    std::complex<double> value(const FourVector& x) const;
    double norm() const;
};

/// Exact solution of i hbar dpsi/dc = -(hbar^2 theta_mu d_mu^2 + m^2) psi for the
/// source packet, normalized like quadrature_amplitude with a sharp detector.
EvolvedPacket evolve_packet(const Experiment& exp, double c);

struct NormDrift {
    double analytic = 0.0;  ///< max |N(c)/N(0) - 1|, closed-form Gaussian norms
    double grid = 0.0;      ///< same, per-axis uniform-grid quadrature
};

/// Throws QuadratureError when a grid norm departs from the analytic norm
/// by more than 1e-6 relative.
NormDrift norm_conservation_check(const Experiment& exp, std::span<const double> c_samples);

/// Per-axis grid norm: trapezoid over center +- 10 width with `points` samples.
double grid_axis_norm(const EvolvedAxis& axis, int points = 4096);

struct PlaneWaveActionCheck {
    double boundary = 0.0;   ///< s(C, x1) - s(0, x0)
    double classical = 0.0;  ///< classical action for dX = x1 - x0
};

/// Phase function s(c, x) = sum theta p x - (sum theta p^2 - m^2) c of the
/// plane-wave solution exp(i s / hbar).
double plane_wave_phase(const FourVector& p, double mass, double c, const FourVector& x);
std::complex<double> plane_wave_value(const FourVector& p, double mass, double hbar, double c,
                                      const FourVector& x);

PlaneWaveActionCheck plane_wave_action_check(const FourVector& p, const FourVector& x0,
                                             const FourVector& x1, LifeTime c, double mass);

}  // namespace relwave
