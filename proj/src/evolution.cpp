#include "relwave/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "relwave/amplitude.hpp"
#include "relwave/errors.hpp"
#include "relwave/gauss_legendre.hpp"

namespace relwave {

namespace {

using cplx = std::complex<double>;

constexpr double kSettledChange = 1e-13;

}  // namespace

void validate_quadrature_spec(const QuadratureSpec& q) {
    if (q.nodes < 16 || q.nodes % 2 != 0)
        throw ConfigError("quadrature.nodes must be even and >= 16");
    if (!(q.window >= 6.0)) throw ConfigError("quadrature.window must be >= 6");
    if (q.max_nodes < 2 * q.nodes) throw ConfigError("quadrature.max_nodes must be >= 2 * nodes");
    if (!(q.tolerance > 0.0)) throw ConfigError("quadrature.tolerance must be positive");
}

cplx quadrature_axis(const Experiment& exp, const FinalPacket& fin, LifeTime lifetime,
                     std::size_t mu, int nodes, double window) {
    const double hbar = exp.hbar;
    if (!(hbar > 0.0)) throw DomainError("momentum quadrature requires hbar > 0");
    const double c = lifetime.value();
    const double s0 = exp.packet.sigma[mu] * exp.packet.sigma[mu];
    const double s1 = fin.sigma[mu] * fin.sigma[mu];
    const double s = s0 + s1;
    const double pbar = (s0 * exp.packet.momentum[mu] + s1 * fin.momentum[mu]) / s;
    const double half = window * hbar / std::sqrt(s);
    const double th = theta(mu);
    const double dx = exp.displacement[mu];

    const auto& rule = gauss_legendre(static_cast<std::size_t>(nodes));
    cplx sum{0.0, 0.0};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double p = pbar + half * rule.nodes[i];
        const double dp = p - pbar;
        const double magnitude = std::exp(-s * dp * dp / (2.0 * hbar * hbar));
        const double phase = (th * p * dx - th * p * p * c) / hbar;
        sum += rule.weights[i] * std::polar(magnitude, phase);
    }
    return half * sum;
}

QuadratureResult quadrature_amplitude(const Experiment& exp, const FinalPacket& fin,
                                      LifeTime lifetime, const QuadratureSpec& q) {
    validate_quadrature_spec(q);
    validate_final_packet(fin);
    QuadratureResult r;
    double worst_change = 0.0;
    cplx product{1.0, 0.0};
    for (std::size_t mu = 0; mu < 4; ++mu) {
        int n = q.nodes;
        cplx prev = quadrature_axis(exp, fin, lifetime, mu, n, q.window);
        double change = 0.0;
        while (2 * n <= q.max_nodes) {
            const cplx next = quadrature_axis(exp, fin, lifetime, mu, 2 * n, q.window);
            change = std::abs(next - prev) / std::max(std::abs(next), 1e-300);
            prev = next;
            n *= 2;
            if (change <= kSettledChange) break;
        }
        if (change > q.tolerance)
            throw QuadratureError("momentum quadrature on axis " + std::to_string(mu) +
                                      " did not converge: node-doubling change " +
                                      std::to_string(change) + " at " + std::to_string(n) +
                                      " nodes",
                                  0.0, change);
        worst_change = std::max(worst_change, change);
        r.axis_values[mu] = prev;
        r.nodes[mu] = n;
        product *= prev;
    }
    const double mass_phase = exp.mass * exp.mass * lifetime.value() / exp.hbar;
    r.value = product * std::polar(1.0, mass_phase);
    r.max_relative_change = worst_change;
    return r;
}

cplx EvolvedAxis::operator()(double x) const {
    const double d = x - center;
    return amplitude * std::exp(-d * d / (2.0 * width_sq) + cplx{0.0, wavenumber * (x - origin)});
}

double EvolvedAxis::norm() const {
    const double curvature = (1.0 / width_sq).real();
    return std::norm(amplitude) * std::sqrt(std::numbers::pi / curvature);
}

double EvolvedAxis::width() const { return 1.0 / std::sqrt((1.0 / width_sq).real()); }

cplx EvolvedPacket::value(const FourVector& x) const {
    cplx v = std::polar(1.0, mass_phase);
    for (std::size_t mu = 0; mu < 4; ++mu) v *= axes[mu](x[mu]);
    return v;
}

double EvolvedPacket::norm() const {
    double n = 1.0;
    for (const auto& a : axes) n *= a.norm();
    return n;
}

EvolvedPacket evolve_packet(const Experiment& exp, double c) {
    if (!(exp.hbar > 0.0)) throw DomainError("packet evolution requires hbar > 0");
    if (!(c >= 0.0)) throw DomainError("inner time must be non-negative");
    const double hbar = exp.hbar;
    EvolvedPacket out;
    out.inner_time = c;
    out.mass_phase = exp.mass * exp.mass * c / hbar;
    for (std::size_t mu = 0; mu < 4; ++mu) {
        const double sigma = exp.packet.sigma[mu];
        const double s2 = sigma * sigma;
        const double p = exp.packet.momentum[mu];
        const cplx q{1.0, 2.0 * hbar * theta(mu) * c / s2};
        EvolvedAxis& a = out.axes[mu];
        a.origin = exp.packet.center[mu];
        a.center = exp.packet.center[mu] + 2.0 * p * c;
        a.width_sq = s2 * q;
        a.wavenumber = theta(mu) * p / hbar;
        a.amplitude = (std::sqrt(2.0 * std::numbers::pi) * hbar / sigma) / std::sqrt(q) *
                      std::polar(1.0, -theta(mu) * p * p * c / hbar);
    }
    return out;
}

double grid_axis_norm(const EvolvedAxis& axis, int points) {
    const double half = 10.0 * axis.width();
    const double lo = axis.center - half;
    const double h = 2.0 * half / static_cast<double>(points - 1);
    CompensatedSum acc;
    for (int i = 0; i < points; ++i) {
        const double w = (i == 0 || i == points - 1) ? 0.5 : 1.0;
        acc.add(w * std::norm(axis(lo + h * i)));
    }
    return h * acc.value();
}

NormDrift norm_conservation_check(const Experiment& exp, std::span<const double> c_samples) {
    if (c_samples.empty()) throw DomainError("norm check needs at least one inner-time sample");
    const EvolvedPacket initial = evolve_packet(exp, 0.0);
    const double analytic0 = initial.norm();
    double grid0 = 1.0;
    for (const auto& a : initial.axes) grid0 *= grid_axis_norm(a);

    NormDrift drift;
    for (double c : c_samples) {
        const EvolvedPacket packet = evolve_packet(exp, c);
        double grid = 1.0;
        for (const auto& a : packet.axes) grid *= grid_axis_norm(a);
        const double analytic = packet.norm();
        const double mismatch = std::abs(grid / analytic - 1.0);
        if (mismatch > 1e-6)
            throw QuadratureError("norm grid under-resolved at c = " + std::to_string(c) +
                                      " (relative mismatch " + std::to_string(mismatch) + ")",
                                  analytic, grid);
        drift.analytic = std::max(drift.analytic, std::abs(analytic / analytic0 - 1.0));
        drift.grid = std::max(drift.grid, std::abs(grid / grid0 - 1.0));
    }
    return drift;
}

double plane_wave_phase(const FourVector& p, double mass, double c, const FourVector& x) {
    return minkowski_dot(p, x) - (minkowski_square(p) - mass * mass) * c;
}

cplx plane_wave_value(const FourVector& p, double mass, double hbar, double c, const FourVector& x) {
    return std::polar(1.0, plane_wave_phase(p, mass, c, x) / hbar);
}

PlaneWaveActionCheck plane_wave_action_check(const FourVector& p, const FourVector& x0,
                                             const FourVector& x1, LifeTime c, double mass) {
    PlaneWaveActionCheck r;
    r.boundary = plane_wave_phase(p, mass, c.value(), x1) - plane_wave_phase(p, mass, 0.0, x0);
    r.classical = classical_action(p, x1 - x0, mass, c);
    return r;
}

}  // namespace relwave
