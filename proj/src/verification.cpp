#include "relwave/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "relwave/amplitude.hpp"
#include "relwave/errors.hpp"
#include "relwave/format.hpp"
#include "relwave/stationarity.hpp"

namespace relwave {

namespace {

using cplx = std::complex<double>;

double wrapped(double d) { return std::remainder(d, 2.0 * std::numbers::pi); }

double arg_at(const Experiment& exp, double c) { return std::arg(amplitude_direction(exp, LifeTime{c})); }

CheckResult make_check(std::string name, double value, double limit, std::string detail = {}) {
    CheckResult r;
    r.name = std::move(name);
    r.value = value;
    r.limit = limit;
    r.passed = std::isfinite(value) && value <= limit;
    r.detail = std::move(detail);
    return r;
}

double reference_lifetime(const Experiment& exp) {
    if (minkowski_square(exp.displacement) > 0.0) return classical_lifetime(exp.displacement, exp.mass).value();
    return 1.0;
}

Experiment on_ray(const Experiment& exp, double c, double offset_scale) {
    Experiment e = exp;
    for (std::size_t mu = 0; mu < 4; ++mu) {
        const double sign = (mu % 2 == 0) ? 1.0 : -1.0;
        e.displacement[mu] = 2.0 * exp.packet.momentum[mu] * c + sign * offset_scale * exp.packet.sigma[mu];
    }
    return e;
}

}  // namespace

bool VerificationReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

double unwrapped_phase_change(const Experiment& exp, double c_end) {
    if (!(c_end >= 0.0)) throw DomainError("phase path must end at C >= 0");
    constexpr double kMaxStep = 0.125 * std::numbers::pi;
    double c = 0.0;
    double phase = 0.0;
    double a0 = arg_at(exp, 0.0);
    double h = 1e-6 * std::max(1.0, c_end);
    while (c < c_end) {
        h = std::min(h, c_end - c);
        for (;;) {
            const double a1 = arg_at(exp, c + h);
            const double am = arg_at(exp, c + 0.5 * h);
            const double full = wrapped(a1 - a0);
            const double halves = wrapped(am - a0) + wrapped(a1 - am);
            if (std::abs(full) < 2.0 * kMaxStep && std::abs(halves - full) < 1e-9) {
                phase += full;
                c += h;
                a0 = a1;
                // Grow by at most 1.5x and keep the predicted increment below
                // kMaxStep so a whole turn can never fit into one step.
                const double rate = std::abs(full) / h;
                h = rate > 0.0 ? std::min(1.5 * h, kMaxStep / rate) : 1.5 * h;
                break;
            }
            h *= 0.5;
            if (h < 1e-14 * std::max(1.0, c_end)) throw DomainError("phase unwrapping step underflow");
        }
    }
    return phase;
}

VerificationReport run_verification(const Experiment& exp, const QuadratureSpec& quad) {
    VerificationReport report;
    const double c_ref = reference_lifetime(exp);
    const FinalPacket sharp = FinalPacket::sharp();

    // Closed form against momentum-space quadrature, one-point calibrated.
    {
        double worst = 0.0;
        double doubling = 0.0;
        cplx calibration{};
        bool first = true;
        for (double frac : {1.0, 0.25, 0.5, 1.5}) {
            for (double off : {0.0, 0.5}) {
                const Experiment e = on_ray(exp, frac * c_ref, off);
                const LifeTime c{frac * c_ref};
                const QuadratureResult q = quadrature_amplitude(e, sharp, c, quad);
                doubling = std::max(doubling, q.max_relative_change);
                const cplx ratio = q.value / closed_form_amplitude(e, c).value;
                if (first) {
                    calibration = ratio;
                    first = false;
                } else {
                    worst = std::max(worst, std::abs(ratio / calibration - 1.0));
                }
            }
        }
        report.checks.push_back(make_check("closed_form_vs_quadrature", worst, 1e-8,
                                           "max |ratio/ratio0 - 1| over 8 (C, dX) points"));
        report.checks.push_back(make_check("quadrature_node_doubling", doubling, 1e-8,
                                           "largest accepted node-doubling change"));
    }

    // Exact evolution evaluated at the detector against quadrature.
    {
        const Experiment e = on_ray(exp, c_ref, 0.5);
        const LifeTime c{c_ref};
        const cplx q = quadrature_amplitude(e, sharp, c, quad).value;
        const cplx psi = evolve_packet(e, c_ref).value(e.packet.center + e.displacement);
        report.checks.push_back(make_check("evolution_vs_quadrature", std::abs(psi / q - 1.0), 1e-8));
    }

    // Quantum action against the unwrapped phase of the closed form.
    {
        const double lambda0 = quantum_action(exp, LifeTime{0.0});
        const double lambda = quantum_action(exp, LifeTime{c_ref});
        const double unwrapped = exp.hbar * unwrapped_phase_change(exp, c_ref);
        const double gap = std::abs((lambda - lambda0) - unwrapped);
        report.checks.push_back(make_check("phase_identity", gap, 1e-10 * std::max(1.0, std::abs(lambda)),
                                           "|Lambda(C) - Lambda(0) - hbar * unwrapped arg K|"));
    }

    // |K| / envelope is displacement-independent at fixed C.
    {
        const LifeTime c{c_ref};
        double base = 0.0;
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Experiment e = on_ray(exp, c_ref, -1.0 + 0.1 * i);
            const AmplitudeResult k = closed_form_amplitude(e, c);
            const double ratio = std::sqrt(k.modulus_sq) / envelope(e, c);
            if (i == 0)
                base = ratio;
            else
                worst = std::max(worst, std::abs(ratio / base - 1.0));
        }
        report.checks.push_back(make_check("modulus_envelope_factorization", worst, 1e-9));
    }

    // Norm of the evolved packet over inner time.
    {
        std::vector<double> samples;
        for (int i = 0; i <= 20; ++i) samples.push_back(2.0 * c_ref * i / 20.0);
        const NormDrift drift = norm_conservation_check(exp, samples);
        report.checks.push_back(make_check("norm_conservation_analytic", drift.analytic, 1e-8));
        report.checks.push_back(make_check("norm_conservation_grid", drift.grid, 1e-6));
    }

    // Per-axis argmax of |K|^2 over the displacement sits at 2 p C.
    {
        const LifeTime c{c_ref};
        double worst_steps = 0.0;
        for (std::size_t mu = 0; mu < 4; ++mu) {
            const double s2 = exp.packet.sigma[mu] * exp.packet.sigma[mu];
            const double spread = std::sqrt(s2 + 4.0 * exp.hbar * exp.hbar * c_ref * c_ref / s2);
            const double centre = 2.0 * exp.packet.momentum[mu] * c_ref;
            const int n = 2001;
            const double step = 10.0 * spread / (n - 1);
            Experiment e = on_ray(exp, c_ref, 0.0);
            double best = -1.0, best_x = 0.0;
            for (int i = 0; i < n; ++i) {
                e.displacement[mu] = centre - 5.0 * spread + step * i;
                const double v = closed_form_amplitude(e, c).modulus_sq;
                if (v > best) {
                    best = v;
                    best_x = e.displacement[mu];
                }
            }
            worst_steps = std::max(worst_steps, std::abs(best_x - centre) / step);
        }
        report.checks.push_back(make_check("center_motion", worst_steps, 1.0, "argmax offset in grid steps"));
    }

    // Plane-wave boundary phase equals the classical action.
    {
        const FourVector x0 = exp.packet.center;
        const FourVector x1 = exp.packet.center + exp.displacement;
        const auto pw = plane_wave_action_check(exp.packet.momentum, x0, x1, LifeTime{c_ref}, exp.mass);
        const double scale = std::max({1.0, std::abs(pw.boundary), std::abs(pw.classical)});
        report.checks.push_back(make_check("plane_wave_action", std::abs(pw.boundary - pw.classical) / scale, 1e-12));
    }

    // Quasi-classical roots are stationary points of the correction term.
    try {
        const QuasiclassicalRoots roots = quasiclassical_lifetimes(exp);
        double a = 0.0, b = 0.0, cc = 0.0;
        for (std::size_t mu = 0; mu < 4; ++mu) {
            const double s2 = exp.packet.sigma[mu] * exp.packet.sigma[mu];
            const double p = exp.packet.momentum[mu];
            const double dx = exp.displacement[mu];
            a += std::abs(p * p) / (s2 * s2);
            b += std::abs(p * dx) / (s2 * s2);
            cc += 1.0 / s2 + dx * dx / (s2 * s2);
        }
        double worst = 0.0;
        for (double root : {roots.plus, roots.minus}) {
            if (root < 0.0) continue;
            const double scale = 12.0 * a * root * root + 8.0 * b * root + cc;
            worst = std::max(worst, std::abs(action_correction_derivative(exp, LifeTime{root})) / scale);
        }
        report.checks.push_back(make_check("quasiclassical_root_identity", worst, 1e-9));
    } catch (const StationarityError& e) {
        report.checks.push_back(make_check("quasiclassical_root_identity", 0.0, 1.0,
                                           std::string("skipped: ") + e.what()));
    }
    return report;
}

void write_report(std::ostream& os, const VerificationReport& report) {
    for (const auto& c : report.checks) {
        os << (c.passed ? "PASS " : "FAIL ") << c.name << " value=" << format_double(c.value)
           << " limit=" << format_double(c.limit);
        if (!c.detail.empty()) os << " (" << c.detail << ')';
        os << '\n';
    }
}

}  // namespace relwave
