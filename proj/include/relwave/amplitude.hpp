#pragma once

#include <complex>

#include "relwave/experiment.hpp"

namespace relwave {

/// Transition amplitude evaluated at one life time.
struct AmplitudeResult {
    std::complex<double> value;
    double phase = 0.0;              ///< quantum action Lambda (continuous in C)
    double modulus_sq = 0.0;         ///< |value|^2
    double prefactor_modulus = 1.0;  ///< prod_mu |1 + 2i hbar theta_mu C / sigma_mu^2|^(-1/2)
    double log_modulus = 0.0;        ///< log|value|, available even when |value|^2 underflows
};

/// Exponent magnitude (natural log) beyond which the amplitude is reported
/// as out of range instead of saturating.
inline constexpr double kMaxLogModulus = 700.0;

/// Closed-form Gaussian transition amplitude for a sharp detector.
///
/// K = A prod_mu z_mu^(-1/2) exp[ sum_mu (sigma^2/2hbar^2) ((p + i hbar theta dX/sigma^2)^2 / z_mu - p^2)
///                                + (i/hbar) m^2 C ],   z_mu = 1 + 2i hbar theta_mu C / sigma_mu^2.
///
/// The term -sigma^2 p^2 / 2hbar^2 is independent of C and of the displacement
/// and is carried inside A; with it the real part of the exponent is exactly
/// the (non-positive) log-envelope. z_mu has Re z = 1, so the principal square
/// root is continuous in C and equals 1 at C = 0.
///
/// Requires hbar > 0. Throws AmplitudeRangeError when |log|K|| > kMaxLogModulus.
AmplitudeResult closed_form_amplitude(const Experiment& exp, LifeTime c);

/// K / |K| from the same closed form, without forming |K|; defined where
/// closed_form_amplitude reports the exponent out of range.
std::complex<double> amplitude_direction(const Experiment& exp, LifeTime c);

/// Quantum action: the continuous phase of K times hbar.
double quantum_action(const Experiment& exp, LifeTime c);

/// Classical action sum theta p dX - (sum theta p^2 - m^2) C.
double classical_action(const FourVector& momentum, const FourVector& displacement, double mass,
                        LifeTime c);
double classical_action(const Experiment& exp, LifeTime c);

/// hbar^2 coefficient of the small-hbar expansion of the quantum action.
double action_correction(const Experiment& exp, LifeTime c);

/// Analytic derivative of action_correction with respect to C.
double action_correction_derivative(const Experiment& exp, LifeTime c);

/// exp[-sum (dX - 2 p C)^2 / (2 (sigma^2 + 4 hbar^2 C^2 / sigma^2))]; equals 1 on
/// the classical ray dX = 2 p C and is proportional to |K| at fixed C.
double envelope(const Experiment& exp, LifeTime c);

/// d(quantum_action)/dC, differentiated term by term.
double action_derivative(const Experiment& exp, LifeTime c);

}  // namespace relwave
