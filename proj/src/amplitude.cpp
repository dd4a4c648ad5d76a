#include "relwave/amplitude.hpp"

#include <cmath>

#include "relwave/errors.hpp"

namespace relwave {

namespace {

using cplx = std::complex<double>;

}  // namespace

namespace {

struct ClosedFormParts {
    cplx exponent;        // log of the Gaussian factor, including i m^2 C / hbar
    cplx prefactor;       // prod z^(-1/2), principal roots
    double prefactor_modulus = 1.0;
};

ClosedFormParts closed_form_parts(const Experiment& exp, double c) {
    const double hbar = exp.hbar;
    if (!(hbar > 0.0)) throw DomainError("transition amplitude requires hbar > 0");
    const auto& pk = exp.packet;
    ClosedFormParts parts{cplx{0.0, exp.mass * exp.mass * c / hbar}, cplx{1.0, 0.0}};
    for (std::size_t mu = 0; mu < 4; ++mu) {
        const double s2 = pk.sigma[mu] * pk.sigma[mu];
        const double p = pk.momentum[mu];
        const double a = 2.0 * hbar * theta(mu) * c / s2;
        const double y = hbar * theta(mu) * exp.displacement[mu] / s2;
        const cplx z{1.0, a};
        // (p + iy)^2 - p^2 z, expanded so that the constant p^2 cancels exactly.
        const cplx numer{-y * y, 2.0 * p * y - a * p * p};
        parts.exponent += (s2 / (2.0 * hbar * hbar)) * numer / z;
        const cplx root = std::sqrt(z);
        parts.prefactor /= root;
        parts.prefactor_modulus /= std::abs(root);
    }
    return parts;
}

}  // namespace

AmplitudeResult closed_form_amplitude(const Experiment& exp, LifeTime lifetime) {
    const ClosedFormParts parts = closed_form_parts(exp, lifetime.value());
    const double a = exp.packet.amplitude;
    AmplitudeResult r;
    r.prefactor_modulus = parts.prefactor_modulus;
    r.log_modulus = std::log(a) + std::log(parts.prefactor_modulus) + parts.exponent.real();
    if (!(std::abs(r.log_modulus) <= kMaxLogModulus))
        throw AmplitudeRangeError("amplitude exponent out of range (log|K| = " +
                                      std::to_string(r.log_modulus) + ")",
                                  r.log_modulus);
    r.value = a * parts.prefactor * std::exp(parts.exponent);
    r.modulus_sq = std::norm(r.value);
    r.phase = quantum_action(exp, lifetime);
    return r;
}

std::complex<double> amplitude_direction(const Experiment& exp, LifeTime lifetime) {
    const ClosedFormParts parts = closed_form_parts(exp, lifetime.value());
    return parts.prefactor / parts.prefactor_modulus * std::polar(1.0, parts.exponent.imag());
}

double quantum_action(const Experiment& exp, LifeTime lifetime) {
    const double c = lifetime.value();
    const double hbar = exp.hbar;
    const auto& pk = exp.packet;
    double bracket = 0.0;
    for (std::size_t mu = 0; mu < 4; ++mu) {
        const double s2 = pk.sigma[mu] * pk.sigma[mu];
        const double s4 = s2 * s2;
        const double p = pk.momentum[mu];
        const double dx = exp.displacement[mu];
        const double spread = 1.0 + 4.0 * hbar * hbar * c * c / s4;
        bracket += 0.5 * hbar * std::atan(2.0 * hbar * theta(mu) * c / s2);
        bracket += theta(mu) * ((p * p - hbar * hbar * dx * dx / s4) * c - p * dx) / spread;
    }
    return exp.mass * exp.mass * c - bracket;
}

double action_derivative(const Experiment& exp, LifeTime lifetime) {
    const double c = lifetime.value();
    const double hbar = exp.hbar;
    const auto& pk = exp.packet;
    double bracket = 0.0;
    for (std::size_t mu = 0; mu < 4; ++mu) {
        const double s2 = pk.sigma[mu] * pk.sigma[mu];
        const double s4 = s2 * s2;
        const double p = pk.momentum[mu];
        const double dx = exp.displacement[mu];
        const double g = 4.0 * hbar * hbar / s4;
        const double spread = 1.0 + g * c * c;
        const double b = p * p - hbar * hbar * dx * dx / s4;
        // d/dC (hbar/2) atan(k C) with k^2 = g
        bracket += hbar * hbar * theta(mu) / (s2 * spread);
        bracket += theta(mu) * (b * spread - (b * c - p * dx) * 2.0 * g * c) / (spread * spread);
    }
    return exp.mass * exp.mass - bracket;
}

double classical_action(const FourVector& momentum, const FourVector& displacement, double mass,
                        LifeTime c) {
    return minkowski_dot(momentum, displacement) -
           (minkowski_square(momentum) - mass * mass) * c.value();
}

double classical_action(const Experiment& exp, LifeTime c) {
    return classical_action(exp.packet.momentum, exp.displacement, exp.mass, c);
}

double action_correction(const Experiment& exp, LifeTime lifetime) {
    const double c = lifetime.value();
    const auto& pk = exp.packet;
    double sum = 0.0;
    for (std::size_t mu = 0; mu < 4; ++mu) {
        const double s2 = pk.sigma[mu] * pk.sigma[mu];
        const double s4 = s2 * s2;
        const double p = pk.momentum[mu];
        const double dx = exp.displacement[mu];
        sum += 4.0 * theta(mu) * (p * dx - p * p * c) * c * c / s4;
        sum += theta(mu) * (1.0 / s2 - dx * dx / s4) * c;
    }
    return -sum;
}

double action_correction_derivative(const Experiment& exp, LifeTime lifetime) {
    const double c = lifetime.value();
    const auto& pk = exp.packet;
    double sum = 0.0;
    for (std::size_t mu = 0; mu < 4; ++mu) {
        const double s2 = pk.sigma[mu] * pk.sigma[mu];
        const double s4 = s2 * s2;
        const double p = pk.momentum[mu];
        const double dx = exp.displacement[mu];
        sum += 4.0 * theta(mu) * (2.0 * p * dx * c - 3.0 * p * p * c * c) / s4;
        sum += theta(mu) * (1.0 / s2 - dx * dx / s4);
    }
    return -sum;
}

double envelope(const Experiment& exp, LifeTime lifetime) {
    const double c = lifetime.value();
    const double hbar = exp.hbar;
    const auto& pk = exp.packet;
    double log_env = 0.0;
    for (std::size_t mu = 0; mu < 4; ++mu) {
        const double s2 = pk.sigma[mu] * pk.sigma[mu];
        const double off = exp.displacement[mu] - 2.0 * pk.momentum[mu] * c;
        log_env -= off * off / (2.0 * (s2 + 4.0 * hbar * hbar * c * c / s2));
    }
    return std::exp(log_env);
}

}  // namespace relwave
