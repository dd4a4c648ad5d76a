#include "relwave/detection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string_view>

#include "relwave/format.hpp"
#include "relwave/gauss_legendre.hpp"

namespace relwave {

namespace {

constexpr std::array<std::string_view, 9> kFlagNames{
    "spacelike",          "off_shell",         "low_confidence",
    "no_quasiclassical_root", "degenerate_quadratic", "no_admissible_root",
    "no_stationary_point", "amplitude_out_of_range", "refined"};

bool needs_refinement(const Experiment& exp, double c, double threshold) {
    for (std::size_t mu = 0; mu < 4; ++mu) {
        const double s2 = exp.packet.sigma[mu] * exp.packet.sigma[mu];
        if (exp.hbar * c / s2 > threshold) return true;
    }
    return false;
}

struct AngularNode {
    double theta;
    double phi;
    double weight;
};

std::vector<AngularNode> angular_nodes(const Screen& screen) {
    const auto& rule = gauss_legendre(static_cast<std::size_t>(screen.n_theta));
    const double dphi = 2.0 * std::numbers::pi / screen.n_phi;
    std::vector<AngularNode> nodes;
    nodes.reserve(static_cast<std::size_t>(screen.n_theta * screen.n_phi));
    for (int i = 0; i < screen.n_theta; ++i) {
        const double theta = std::acos(rule.nodes[static_cast<std::size_t>(i)]);
        for (int j = 0; j < screen.n_phi; ++j)
            nodes.push_back({theta, dphi * (j + 0.5), rule.weights[static_cast<std::size_t>(i)] * dphi});
    }
    return nodes;
}

Experiment with_displacement(const Experiment& tmpl, const FourVector& dx) {
    Experiment exp = tmpl;
    exp.displacement = dx;
    return exp;
}

void require_amplitude_hbar(const Experiment& tmpl) {
    if (!(tmpl.hbar > 0.0)) throw ConfigError("hbar must be positive for detection amplitudes");
}

double density(const Experiment& tmpl, double radius, const ScreenPoint& pt, const SolverOptions& opts) {
    const DetectorAmplitude d = amplitude_at_detector(tmpl, radius, pt, opts);
    return d.amplitude ? d.amplitude->modulus_sq : 0.0;
}

}  // namespace

void validate_screen(const Screen& s) {
    if (!(s.radius > 0.0) || !std::isfinite(s.radius)) throw ConfigError("screen.radius must be positive");
    if (s.n_theta < 2) throw ConfigError("screen.n_theta must be >= 2");
    if (s.n_phi < 2) throw ConfigError("screen.n_phi must be >= 2");
    if (s.n_t < 2) throw ConfigError("screen.n_t must be >= 2");
    if (!(s.t_max > s.radius) || !std::isfinite(s.t_max))
        throw ConfigError("screen.t_max must exceed screen.radius");
}

Screen refined(const Screen& s, int factor) {
    if (factor < 1) throw ConfigError("grid scale must be >= 1");
    Screen r = s;
    r.n_theta *= factor;
    r.n_phi *= factor;
    r.n_t *= factor;
    return r;
}

std::string flags_to_string(unsigned flags) {
    std::string out;
    for (std::size_t bit = 0; bit < kFlagNames.size(); ++bit) {
        if (flags & (1u << bit)) {
            if (!out.empty()) out += '|';
            out += kFlagNames[bit];
        }
    }
    return out;
}

FourVector screen_displacement(double radius, const ScreenPoint& pt) {
    const double st = std::sin(pt.theta);
    return {pt.dx0, radius * st * std::cos(pt.phi), radius * st * std::sin(pt.phi),
            radius * std::cos(pt.theta)};
}

LifetimeResolution resolve_lifetime(const Experiment& exp, const SolverOptions& opts) {
    LifetimeResolution res;
    const bool timelike = minkowski_square(exp.displacement) > 0.0;
    if (!timelike) res.flags |= kSpacelike;
    if (!is_on_shell(exp.packet.momentum, exp.mass)) res.flags |= kOffShell;

    std::optional<StationarySolution> quasi;
    try {
        quasi = select_branch(quasiclassical_lifetimes(exp), exp, opts);
        if (quasi->low_confidence) res.flags |= kLowConfidence;
    } catch (const NoRealRootError&) {
        res.flags |= kNoQuasiclassicalRoot;
    } catch (const DegenerateQuadraticError&) {
        res.flags |= kDegenerateQuadratic;
    } catch (const NoAdmissibleRootError&) {
        res.flags |= kNoAdmissibleRoot;
    }

    std::optional<double> initial;
    bool refine = false;
    if (quasi) {
        initial = quasi->c.value();
        refine = needs_refinement(exp, *initial, opts.refine_threshold);
    } else if (timelike) {
        initial = classical_lifetime(exp.displacement, exp.mass).value();
        refine = true;
    }
    if (!initial) return res;
    if (!refine || !(*initial > 0.0) || exp.hbar == 0.0) {
        res.solution = quasi;
        return res;
    }
    try {
        res.solution = stationary_lifetime_exact(exp, LifeTime{*initial}, opts);
        res.solution->discriminant = quasi ? quasi->discriminant : 0.0;
        res.flags |= kRefined;
    } catch (const NoStationaryPointError& e) {
        res.flags |= kNoStationaryPoint;
        res.derivative_samples = e.samples();
    } catch (const StationarityError&) {
        res.flags |= kNoStationaryPoint;
    }
    return res;
}

DetectorAmplitude amplitude_at_detector(const Experiment& tmpl, double radius, const ScreenPoint& pt,
                                        const SolverOptions& opts) {
    require_amplitude_hbar(tmpl);
    DetectorAmplitude out;
    out.displacement = screen_displacement(radius, pt);
    const Experiment exp = with_displacement(tmpl, out.displacement);
    out.lifetime = resolve_lifetime(exp, opts);
    if (!out.lifetime.solution) return out;
    const LifeTime c = out.lifetime.solution->c;
    out.lambda = quantum_action(exp, c);
    try {
        out.amplitude = closed_form_amplitude(exp, c);
    } catch (const AmplitudeRangeError&) {
        out.lifetime.flags |= kAmplitudeOutOfRange;
    }
    return out;
}

DetectionTable screen_scan(const Experiment& tmpl, const Screen& screen, const SolverOptions& opts) {
    validate_screen(screen);
    require_amplitude_hbar(tmpl);
    const auto angular = angular_nodes(screen);
    const auto& trule = gauss_legendre(static_cast<std::size_t>(screen.n_t));
    const double half_t = 0.5 * screen.t_max;

    DetectionTable table;
    table.rows.reserve(angular.size() * trule.nodes.size());
    for (const auto& an : angular) {
        for (std::size_t k = 0; k < trule.nodes.size(); ++k) {
            const ScreenPoint pt{an.theta, an.phi, half_t * (trule.nodes[k] + 1.0)};
            const DetectorAmplitude d = amplitude_at_detector(tmpl, screen.radius, pt, opts);
            DetectionRow row;
            row.theta = an.theta;
            row.phi = an.phi;
            row.displacement = d.displacement;
            row.flags = d.lifetime.flags;
            row.weight = an.weight * half_t * trule.weights[k];
            row.derivative_samples = d.lifetime.derivative_samples;
            if (d.lifetime.solution) {
                row.c_stationary = d.lifetime.solution->c.value();
                row.branch = std::string(to_string(d.lifetime.solution->branch));
                row.lambda = d.lambda;
            }
            if (d.amplitude) {
                row.k = d.amplitude->value;
                row.k_abs2 = d.amplitude->modulus_sq;
            }
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

void write_detection_csv(std::ostream& os, const DetectionTable& table) {
    os << "theta,phi,dx0,dx1,dx2,dx3,c_stationary,branch,lambda,k_re,k_im,k_abs2,flags\n";
    for (const auto& r : table.rows) {
        os << format_double(r.theta) << ',' << format_double(r.phi);
        for (double v : r.displacement.x) os << ',' << format_double(v);
        os << ',' << format_double(r.c_stationary) << ',' << r.branch << ',' << format_double(r.lambda)
           << ',' << format_double(r.k.real()) << ',' << format_double(r.k.imag()) << ','
           << format_double(r.k_abs2) << ',' << flags_to_string(r.flags) << '\n';
    }
}

namespace {

struct TimeNode {
    double dx0;
    double weight;
};

// dX0 at which the density switches onto the far-field "+" branch in this
// direction: timelike and far_field_ratio >= threshold. Below it the selected
// root sits near the light cone and |K|^2 is negligible, but the jump would
// spoil the convergence of a single rule across it.
double branch_switch_time(const Experiment& tmpl, double radius, double polar, double phi,
                          const SolverOptions& opts) {
    const FourVector n = screen_displacement(radius, {polar, phi, 0.0});
    const auto& s = tmpl.packet.sigma;
    double spatial = 0.0, denom = 0.0;
    for (std::size_t mu = 0; mu < 4; ++mu) denom += theta(mu) / (s[mu] * s[mu]);
    for (std::size_t k = 1; k < 4; ++k) spatial += n[k] * n[k] / (s[k] * s[k] * s[k] * s[k]);
    const double s0sq = s[0] * s[0];
    double t_ratio = 0.0;
    if (!widths_balanced(s)) t_ratio = s0sq * std::sqrt(opts.far_field_threshold * std::abs(denom) + spatial);
    return std::max(radius, t_ratio);
}

// Which quasi-classical root the branch rule picks at dX0: 0 none, 1 plus,
// 2 minus. The selected life time jumps wherever this changes.
int selected_root(const Experiment& tmpl, double radius, double polar, double phi, double dx0,
                  const SolverOptions& opts) {
    Experiment exp = tmpl;
    exp.displacement = screen_displacement(radius, {polar, phi, dx0});
    try {
        return select_branch(quasiclassical_lifetimes(exp), exp, opts).branch == Branch::plus ? 1 : 2;
    } catch (const StationarityError&) {
        return 0;
    }
}

// Segment ends on [0, Ts]: every branch flip, located by sampling and
// bisection, then Ts itself.
std::vector<double> branch_breakpoints(const Experiment& tmpl, double radius, double polar, double phi,
                                       double ts, const SolverOptions& opts) {
    constexpr int kSamples = 64;
    std::vector<double> ends;
    double prev_t = 0.0;
    int prev = selected_root(tmpl, radius, polar, phi, prev_t, opts);
    for (int i = 1; i <= kSamples; ++i) {
        const double t = ts * static_cast<double>(i) / kSamples;
        const int cur = selected_root(tmpl, radius, polar, phi, t, opts);
        if (cur != prev) {
            double lo = prev_t, hi = t;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                (selected_root(tmpl, radius, polar, phi, mid, opts) == prev ? lo : hi) = mid;
            }
            ends.push_back(hi);
        }
        prev_t = t;
        prev = cur;
    }
    if (ends.empty() || ends.back() < ts) ends.push_back(ts);
    return ends;
}

// Gauss-Legendre (n_t/4 nodes) on each segment of [0, Ts], then the mapped
// rule dX0 = Ts + T0 u / (1 - u), T0 = 2 m R (n_t nodes) on the remainder.
std::vector<TimeNode> time_nodes(const Experiment& tmpl, const Screen& screen, std::span<const double> ends) {
    const double t0 = 2.0 * tmpl.mass * screen.radius;
    const auto& near = gauss_legendre(static_cast<std::size_t>(std::max(2, screen.n_t / 4)));
    const auto& far = gauss_legendre(static_cast<std::size_t>(screen.n_t));
    std::vector<TimeNode> nodes;
    double start = 0.0;
    for (double end : ends) {
        const double half = 0.5 * (end - start);
        for (std::size_t k = 0; k < near.nodes.size(); ++k)
            nodes.push_back({start + half * (near.nodes[k] + 1.0), half * near.weights[k]});
        start = end;
    }
    for (std::size_t k = 0; k < far.nodes.size(); ++k) {
        const double u = 0.5 * (far.nodes[k] + 1.0);
        const double one_minus = 1.0 - u;
        nodes.push_back({start + t0 * u / one_minus, 0.5 * far.weights[k] * t0 / (one_minus * one_minus)});
    }
    return nodes;
}

}  // namespace

double screen_integral(const Experiment& tmpl, const Screen& screen, const SolverOptions& opts) {
    const std::array<double, 1> all{std::numeric_limits<double>::infinity()};
    return partial_time_integrals(tmpl, screen, all, opts).front();
}

std::vector<double> partial_time_integrals(const Experiment& tmpl, const Screen& screen,
                                           std::span<const double> t_values, const SolverOptions& opts) {
    validate_screen(screen);
    require_amplitude_hbar(tmpl);
    const auto angular = angular_nodes(screen);

    // One fixed-order accumulator per requested t; each angular node carries
    // its own dX0 rule.
    std::vector<CompensatedSum> sums(t_values.size());
    for (const auto& an : angular) {
        const double ts = branch_switch_time(tmpl, screen.radius, an.theta, an.phi, opts);
        const auto ends = branch_breakpoints(tmpl, screen.radius, an.theta, an.phi, ts, opts);
        for (const auto& tn : time_nodes(tmpl, screen, ends)) {
            const double w = an.weight * tn.weight;
            double v = 0.0;
            bool evaluated = false;
            for (std::size_t i = 0; i < t_values.size(); ++i) {
                if (tn.dx0 > t_values[i]) continue;
                if (!evaluated) {
                    v = w * density(tmpl, screen.radius, {an.theta, an.phi, tn.dx0}, opts);
                    evaluated = true;
                }
                sums[i].add(v);
            }
        }
    }

    std::vector<double> out;
    out.reserve(sums.size());
    for (const auto& s : sums) out.push_back(s.value());
    return out;
}

Normalization normalization_constant(const Experiment& tmpl, const Screen& screen, const SolverOptions& opts) {
    Experiment unit = tmpl;
    unit.packet.amplitude = 1.0;
    Normalization n;
    n.integral_coarse = screen_integral(unit, screen, opts);
    n.integral = screen_integral(unit, refined(screen, 2), opts);
    if (!(n.integral > 0.0))
        throw QuadratureError("normalization integral vanished on the screen grid", n.integral_coarse,
                              n.integral);
    n.error_estimate = std::abs(n.integral - n.integral_coarse);
    n.relative_error = n.error_estimate / n.integral;
    if (n.relative_error > 1e-3)
        throw QuadratureError("screen normalization did not converge: grid doubling changed the integral by " +
                                  format_double(n.relative_error) + " relative",
                              n.integral_coarse, n.integral);
    n.amplitude = 1.0 / std::sqrt(n.integral);
    return n;
}

std::vector<NonrelRow> nonrel_limit_report(const Experiment& tmpl, std::span<const double> t_values,
                                           const SolverOptions& opts) {
    const auto& p = tmpl.packet.momentum;
    if (!(p[0] > 0.0)) throw DomainError("non-relativistic report needs positive energy p0");
    for (std::size_t k = 1; k < 4; ++k)
        if (std::abs(p[k]) / tmpl.mass > 1e-3 * (1.0 + 1e-12))
            throw DomainError("configuration not in the non-relativistic regime: |p_" + std::to_string(k) +
                              "|/m = " + format_double(std::abs(p[k]) / tmpl.mass) + " > 1e-3");

    std::vector<NonrelRow> rows;
    for (double t : t_values) {
        if (!(t > 0.0)) throw DomainError("non-relativistic report needs T > 0");
        Experiment exp = tmpl;
        exp.displacement = {t, p[1] * t / tmpl.mass, p[2] * t / tmpl.mass, p[3] * t / tmpl.mass};
        const LifetimeResolution res = resolve_lifetime(exp, opts);
        NonrelRow row;
        row.t = t;
        row.flags = res.flags;
        row.newtonian = t / (2.0 * tmpl.mass);
        row.rest_phase = tmpl.mass * t;
        if (res.solution) {
            row.c_stationary = res.solution->c.value();
            row.relative_gap = std::abs(row.c_stationary - row.newtonian) / row.newtonian;
            row.lambda = quantum_action(exp, res.solution->c);
            row.phase_gap = std::abs(row.lambda - row.rest_phase) / row.rest_phase;
        }
        rows.push_back(row);
    }
    return rows;
}

void write_nonrel_csv(std::ostream& os, std::span<const NonrelRow> rows) {
    os << "t,c_stationary,newtonian,relative_gap,lambda,rest_phase,phase_gap,flags\n";
    for (const auto& r : rows)
        os << format_double(r.t) << ',' << format_double(r.c_stationary) << ',' << format_double(r.newtonian)
           << ',' << format_double(r.relative_gap) << ',' << format_double(r.lambda) << ','
           << format_double(r.rest_phase) << ',' << format_double(r.phase_gap) << ','
           << flags_to_string(r.flags) << '\n';
}

double prefactor_decay_slope(const Experiment& tmpl, double c_lo, double c_hi, int samples) {
    if (!(c_lo > 0.0) || !(c_hi >= 100.0 * c_lo))
        throw DomainError("prefactor fit needs a C range spanning at least two decades");
    if (samples < 2) throw DomainError("prefactor fit needs at least two samples");
    bool asymptotic = false;
    for (std::size_t mu = 0; mu < 4; ++mu) {
        const double s2 = tmpl.packet.sigma[mu] * tmpl.packet.sigma[mu];
        if (4.0 * tmpl.hbar * tmpl.hbar * c_lo * c_lo / (s2 * s2) >= 100.0) asymptotic = true;
    }
    if (!asymptotic)
        throw DomainError("prefactor fit needs 4 hbar^2 C^2 / sigma^4 >> 1 at the low end of the range");

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double step = std::log(c_hi / c_lo) / (samples - 1);
    for (int i = 0; i < samples; ++i) {
        const double c = c_lo * std::exp(step * i);
        // On the classical ray the envelope is 1 and only the prefactor varies.
        Experiment exp = tmpl;
        exp.displacement = 2.0 * c * tmpl.packet.momentum;
        const double x = std::log(c);
        const double y = std::log(closed_form_amplitude(exp, LifeTime{c}).prefactor_modulus);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = samples;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace relwave
