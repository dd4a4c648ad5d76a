#include "relwave/stationarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "relwave/amplitude.hpp"
#include "relwave/errors.hpp"

namespace relwave {

std::string_view to_string(Branch b) {
    switch (b) {
        case Branch::plus: return "plus";
        case Branch::minus: return "minus";
        case Branch::exact: return "exact";
    }
    return "unknown";
}

void validate_solver_options(const SolverOptions& o) {
    if (!(o.tolerance > 0.0)) throw ConfigError("solver.tolerance must be positive");
    if (!(o.far_field_threshold > 0.0)) throw ConfigError("solver.far_field_threshold must be positive");
    if (!(o.refine_threshold >= 0.0)) throw ConfigError("solver.refine_threshold must be non-negative");
    if (o.max_iterations < 1) throw ConfigError("solver.max_iterations must be >= 1");
    if (o.bracket_samples < 2) throw ConfigError("solver.bracket_samples must be >= 2");
}

LifeTime classical_lifetime(const FourVector& displacement, double mass) {
    if (!(mass > 0.0)) throw DomainError("mass must be positive");
    const double interval = minkowski_square(displacement);
    if (!(interval > 0.0)) throw DomainError("displacement not timelike");
    return LifeTime{std::sqrt(interval) / (2.0 * mass)};
}

double mass_shell_residual(const FourVector& momentum, double mass) {
    return minkowski_square(momentum) - mass * mass;
}

bool is_on_shell(const FourVector& momentum, double mass) {
    double scale = mass * mass;
    for (double v : momentum.x) scale = std::max(scale, v * v);
    return std::abs(mass_shell_residual(momentum, mass)) <= 1e-12 * std::max(1.0, scale);
}

FourVector classical_momentum(const FourVector& displacement, LifeTime c) {
    if (!(c.value() > 0.0)) throw DomainError("classical momentum needs C > 0");
    return displacement * (1.0 / (2.0 * c.value()));
}

QuasiclassicalRoots quasiclassical_lifetimes(const Experiment& exp) {
    double a = 0.0, b = 0.0, c = 0.0, scale = 0.0;
    for (std::size_t mu = 0; mu < 4; ++mu) {
        const double s2 = exp.packet.sigma[mu] * exp.packet.sigma[mu];
        const double s4 = s2 * s2;
        const double p = exp.packet.momentum[mu];
        const double dx = exp.displacement[mu];
        a += theta(mu) * p * p / s4;
        b += theta(mu) * p * dx / s4;
        c += theta(mu) * (1.0 / s2 - dx * dx / s4);
        scale += p * p / s4;
    }
    if (scale == 0.0 || std::abs(a) < 1e-14 * scale)
        throw DegenerateQuadraticError(
            "quasi-classical quadratic is degenerate (sum theta p^2/sigma^4 = 0); use the exact solver");

    QuasiclassicalRoots r;
    r.discriminant = 64.0 * b * b + 48.0 * a * c;
    if (r.discriminant < 0.0)
        throw NoRealRootError("no real quasi-classical stationary point (D = " +
                                  std::to_string(r.discriminant) + ")",
                              r.discriminant);
    const double root = std::sqrt(r.discriminant);
    r.plus = (8.0 * b + root) / (24.0 * a);
    r.minus = (8.0 * b - root) / (24.0 * a);
    r.off_shell = !is_on_shell(exp.packet.momentum, exp.mass);
    return r;
}

bool widths_balanced(const Widths& sigma) {
    double denom = 0.0, scale = 0.0;
    for (std::size_t mu = 0; mu < 4; ++mu) {
        denom += theta(mu) / (sigma[mu] * sigma[mu]);
        scale += 1.0 / (sigma[mu] * sigma[mu]);
    }
    return std::abs(denom) <= 1e-12 * scale;
}

FarFieldRatio far_field_ratio(const Experiment& exp) {
    if (widths_balanced(exp.packet.sigma)) return {std::numeric_limits<double>::infinity(), true};
    double numer = 0.0, denom = 0.0;
    for (std::size_t mu = 0; mu < 4; ++mu) {
        const double s2 = exp.packet.sigma[mu] * exp.packet.sigma[mu];
        const double dx = exp.displacement[mu];
        numer += theta(mu) * dx * dx / (s2 * s2);
        denom += theta(mu) / s2;
    }
    return {numer / std::abs(denom), false};
}

StationarySolution select_branch(const QuasiclassicalRoots& roots, const Experiment& exp,
                                 const SolverOptions& opts) {
    const bool plus_ok = roots.plus >= 0.0;
    const bool minus_ok = roots.minus >= 0.0;
    if (!plus_ok && !minus_ok)
        throw NoAdmissibleRootError("no admissible life time: both quasi-classical roots negative");

    const bool timelike = minkowski_square(exp.displacement) > 0.0;
    const FarFieldRatio ratio = far_field_ratio(exp);

    Branch preferred = Branch::plus;
    bool low_confidence = false;
    if (timelike && (ratio.balanced || ratio.value >= opts.far_field_threshold)) {
        preferred = Branch::plus;
    } else if (timelike) {
        const double target = classical_lifetime(exp.displacement, exp.mass).value();
        const double dp = plus_ok ? std::abs(roots.plus - target) : std::numeric_limits<double>::infinity();
        const double dm = minus_ok ? std::abs(roots.minus - target) : std::numeric_limits<double>::infinity();
        preferred = dm < dp ? Branch::minus : Branch::plus;
    } else {
        low_confidence = true;
    }
    if (preferred == Branch::plus && !plus_ok) {
        preferred = Branch::minus;
        low_confidence = true;
    } else if (preferred == Branch::minus && !minus_ok) {
        preferred = Branch::plus;
        low_confidence = true;
    }

    StationarySolution s{LifeTime{preferred == Branch::plus ? roots.plus : roots.minus}};
    s.branch = preferred;
    s.discriminant = roots.discriminant;
    s.residual = action_derivative(exp, s.c);
    s.off_shell = roots.off_shell;
    s.low_confidence = low_confidence;
    return s;
}

StationarySolution stationary_lifetime_exact(const Experiment& exp, LifeTime initial,
                                             const SolverOptions& opts) {
    const double c0 = initial.value();
    if (!(c0 > 0.0)) throw DomainError("exact solver needs a positive initial life time");
    const bool on_shell = is_on_shell(exp.packet.momentum, exp.mass);
    if (on_shell && exp.hbar == 0.0)
        throw DomainError("classical on-shell action is flat in C; stationary point is not unique");

    // On shell dLambda/dC is O(hbar^2); rescale so the sign test and the
    // polishing work on O(1) values.
    const double scale = on_shell ? 1.0 / (exp.hbar * exp.hbar) : 1.0;
    auto f = [&](double c) { return scale * action_derivative(exp, LifeTime{c}); };

    DerivativeSamples samples;
    bool bracket = false;
    double bracket_lo = 0.0, bracket_hi = 0.0;
    std::optional<double> exact_zero;
    const int n = opts.bracket_samples;
    for (int k = 0; k <= 6 && !bracket && !exact_zero; ++k) {
        const double w = 0.1 * c0 * static_cast<double>(1 << k);
        const double lo = std::max(0.0, c0 - w);
        const double hi = c0 + w;
        double best = std::numeric_limits<double>::infinity();
        double prev_c = lo;
        double prev_f = f(lo);
        samples.emplace_back(prev_c, prev_f / scale);
        if (prev_f == 0.0) {
            exact_zero = prev_c;
            best = std::abs(prev_c - c0);
        }
        for (int i = 1; i <= n; ++i) {
            const double c = lo + (hi - lo) * static_cast<double>(i) / n;
            const double fc = f(c);
            samples.emplace_back(c, fc / scale);
            if (fc == 0.0 && std::abs(c - c0) < best) {
                best = std::abs(c - c0);
                exact_zero = c;
                bracket = false;
            } else if ((prev_f < 0.0) != (fc < 0.0) && prev_f != 0.0 && fc != 0.0) {
                const double mid = 0.5 * (prev_c + c);
                if (std::abs(mid - c0) < best) {
                    best = std::abs(mid - c0);
                    bracket = true;
                    bracket_lo = prev_c;
                    bracket_hi = c;
                    exact_zero.reset();
                }
            }
            prev_c = c;
            prev_f = fc;
        }
    }
    if (!bracket && !exact_zero)
        throw NoStationaryPointError("no stationary point near initial guess C = " + std::to_string(c0),
                                     std::move(samples));

    StationarySolution s{LifeTime{0.0}};
    s.branch = Branch::exact;
    s.off_shell = !on_shell;
    int iterations = 0;
    double root = 0.0;
    if (exact_zero) {
        root = *exact_zero;
    } else {
        double a = bracket_lo, b = bracket_hi;
        double fa = f(a), fb = f(b);
        double width = b - a;
        bool bisect = false;
        while (iterations < opts.max_iterations) {
            ++iterations;
            double c = 0.5 * (a + b);
            if (!bisect) {
                const double secant = b - fb * (b - a) / (fb - fa);
                if (secant > a && secant < b) c = secant;
            }
            if (c <= a || c >= b) break;  // a and b are adjacent doubles
            const double fc = f(c);
            if (fc == 0.0) {
                a = b = c;
                fa = fb = 0.0;
                break;
            }
            if ((fa < 0.0) == (fc < 0.0)) {
                a = c;
                fa = fc;
            } else {
                b = c;
                fb = fc;
            }
            bisect = (b - a) > 0.5 * width;
            width = b - a;
        }
        root = std::abs(fa) <= std::abs(fb) ? a : b;
    }
    s.c = LifeTime{root};
    s.iterations = iterations;
    s.residual = action_derivative(exp, s.c);
    const double limit = opts.tolerance * std::max(1.0, exp.mass * exp.mass);
    if (!(std::abs(s.residual) <= limit))
        throw StationarityError("stationary point near C = " + std::to_string(root) +
                                " not resolved: |dLambda/dC| = " + std::to_string(std::abs(s.residual)));
    return s;
}

}  // namespace relwave
