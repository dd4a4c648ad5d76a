#pragma once

#include <cmath>
#include <random>

#include "relwave/experiment.hpp"

namespace relwave::testing {

// m = 1, sigma = 1, p = (1, 0, 0, 0), dX = (20, 0, 0, 0), hbar = 1.
inline Experiment reference() {
    Experiment e;
    e.packet.momentum = {1.0, 0.0, 0.0, 0.0};
    e.displacement = {20.0, 0.0, 0.0, 0.0};
    return e;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// On-shell momentum with the given spatial part.
inline FourVector on_shell(double mass, double p1, double p2, double p3) {
    return {std::sqrt(mass * mass + p1 * p1 + p2 * p2 + p3 * p3), p1, p2, p3};
}

// Random experiment with timelike dX; half of the draws are off shell.
inline Experiment random_experiment(std::mt19937_64& rng, double hbar_lo = 1e-2, double hbar_hi = 1.0) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto between = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
    Experiment e;
    e.mass = between(0.5, 2.0);
    e.hbar = std::exp(between(std::log(hbar_lo), std::log(hbar_hi)));
    for (auto& s : e.packet.sigma) s = between(0.7, 2.0);
    e.packet.momentum = on_shell(e.mass, between(-0.8, 0.8), between(-0.8, 0.8), between(-0.8, 0.8));
    if (unit(rng) < 0.5) {
        // Off shell but still timelike.
        auto& p = e.packet.momentum.x;
        const double spatial = std::sqrt(p[1] * p[1] + p[2] * p[2] + p[3] * p[3]);
        p[0] = std::max(p[0] * between(0.8, 1.2), 1.05 * spatial + 0.05);
    }
    const double r = between(0.0, 3.0);
    const double ct = between(-1.0, 1.0), ph = between(0.0, 6.283185307179586);
    const double st = std::sqrt(1.0 - ct * ct);
    e.displacement = {r + between(0.5, 4.0), r * st * std::cos(ph), r * st * std::sin(ph), r * ct};
    return e;
}

// Detector within a few spreads of the classical ray dX = 2 p C, where |K| is
// not exponentially small; dX0 is pushed forward if needed to stay timelike.
inline FourVector near_ray(std::mt19937_64& rng, const Experiment& e, double c) {
    std::normal_distribution<double> normal(0.0, 1.0);
    FourVector dx;
    for (std::size_t mu = 0; mu < 4; ++mu) {
        const double s = e.packet.sigma[mu];
        const double spread = std::sqrt(s * s + 4.0 * e.hbar * e.hbar * c * c / (s * s));
        dx.x[mu] = 2.0 * e.packet.momentum[mu] * c + 0.7 * spread * normal(rng);
    }
    const double r = std::sqrt(dx[1] * dx[1] + dx[2] * dx[2] + dx[3] * dx[3]);
    if (dx[0] <= r) dx.x[0] = r + 0.5;
    return dx;
}

}  // namespace relwave::testing
