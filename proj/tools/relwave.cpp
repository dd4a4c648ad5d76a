// relwave: transition amplitudes, stationary life times and screen
// normalization for relativistic Gaussian wave packets.
//
// Exit codes: 0 success, 1 unexpected failure, 2 configuration or input
// domain error, 3 no stationary point, 4 quadrature non-convergence,
// 5 verification failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "relwave/amplitude.hpp"
#include "relwave/config.hpp"
#include "relwave/detection.hpp"
#include "relwave/errors.hpp"
#include "relwave/stationarity.hpp"
#include "relwave/verification.hpp"

namespace {

using namespace relwave;
using nlohmann::json;

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kConfig = 2,
    kNoStationary = 3,
    kQuadrature = 4,
    kVerification = 5,
};

struct Options {
    std::string config;
    std::string out;
    bool exact = false;
    std::optional<double> hbar;
    int grid_scale = 1;
    std::optional<double> c;
};

RunConfig load(const Options& o) {
    RunConfig cfg = load_run_config(o.config);
    if (o.hbar) {
        cfg.experiment.hbar = *o.hbar;
        cfg.experiment = validate_experiment(cfg.experiment);
    }
    if (!o.out.empty()) cfg.output_path = o.out;
    return cfg;
}

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.output_path, std::ios::binary);
    if (!out) throw Error("cannot open output file '" + cfg.output_path + "'");
    out << text;
}

std::string dump(const json& record) { return record.dump(2) + "\n"; }

const Screen& require_screen(const RunConfig& cfg) {
    if (!cfg.screen) throw ConfigError("missing section 'screen'");
    return *cfg.screen;
}

struct Resolved {
    StationarySolution solution;
    QuasiclassicalRoots roots;
};

// Quasi-classical root with branch selection; refined by the exact solver on
// request or whenever the momentum is off shell.
Resolved resolve(const RunConfig& cfg, bool exact) {
    const Experiment& exp = cfg.experiment;
    Resolved r{StationarySolution{LifeTime{0.0}}, quasiclassical_lifetimes(exp)};
    r.solution = select_branch(r.roots, exp, cfg.solver);
    if (exact || r.solution.off_shell) {
        const double disc = r.solution.discriminant;
        const bool low = r.solution.low_confidence;
        r.solution = stationary_lifetime_exact(exp, r.solution.c, cfg.solver);
        r.solution.discriminant = disc;
        r.solution.low_confidence = low;
    }
    return r;
}

json solution_record(const Resolved& r, const Experiment& exp) {
    json j;
    j["c"] = r.solution.c.value();
    j["branch"] = std::string(to_string(r.solution.branch));
    j["discriminant"] = r.solution.discriminant;
    j["residual"] = r.solution.residual;
    j["iterations"] = r.solution.iterations;
    j["off_shell"] = r.solution.off_shell;
    j["low_confidence"] = r.solution.low_confidence;
    j["c_plus"] = r.roots.plus;
    j["c_minus"] = r.roots.minus;
    const FarFieldRatio ffr = far_field_ratio(exp);
    if (ffr.balanced)
        j["far_field_ratio"] = "inf";
    else
        j["far_field_ratio"] = ffr.value;
    if (minkowski_square(exp.displacement) > 0.0)
        j["classical_lifetime"] = classical_lifetime(exp.displacement, exp.mass).value();
    return j;
}

int cmd_amplitude(const Options& o) {
    const RunConfig cfg = load(o);
    json j;
    j["command"] = "amplitude";
    LifeTime c{0.0};
    if (o.c) {
        c = LifeTime{*o.c};
        j["c_source"] = "given";
    } else {
        const Resolved r = resolve(cfg, o.exact);
        c = r.solution.c;
        j["c_source"] = "stationary";
        j["stationary"] = solution_record(r, cfg.experiment);
    }
    const AmplitudeResult k = closed_form_amplitude(cfg.experiment, c);
    j["c"] = c.value();
    j["k_re"] = k.value.real();
    j["k_im"] = k.value.imag();
    j["k_abs2"] = k.modulus_sq;
    j["lambda"] = k.phase;
    j["prefactor_modulus"] = k.prefactor_modulus;
    j["log_modulus"] = k.log_modulus;
    emit(cfg, dump(j));
    return kOk;
}

int cmd_action(const Options& o) {
    const RunConfig cfg = load(o);
    const Experiment& exp = cfg.experiment;
    json j;
    j["command"] = "action";
    LifeTime c{0.0};
    if (o.c) {
        c = LifeTime{*o.c};
        j["c_source"] = "given";
    } else {
        c = resolve(cfg, o.exact).solution.c;
        j["c_source"] = "stationary";
    }
    j["c"] = c.value();
    j["hbar"] = exp.hbar;
    j["lambda"] = quantum_action(exp, c);
    j["lambda_classical"] = classical_action(exp, c);
    j["lambda_correction"] = action_correction(exp, c);
    j["dlambda_dc"] = action_derivative(exp, c);
    j["envelope"] = envelope(exp, c);
    j["mass_shell_residual"] = mass_shell_residual(exp.packet.momentum, exp.mass);
    emit(cfg, dump(j));
    return kOk;
}

int cmd_stationary(const Options& o) {
    const RunConfig cfg = load(o);
    json j = solution_record(resolve(cfg, o.exact), cfg.experiment);
    j["command"] = "stationary-c";
    emit(cfg, dump(j));
    return kOk;
}

int cmd_scan(const Options& o) {
    const RunConfig cfg = load(o);
    const Screen screen = refined(require_screen(cfg), o.grid_scale);
    std::ostringstream os;
    write_detection_csv(os, screen_scan(cfg.experiment, screen, cfg.solver));
    emit(cfg, os.str());
    return kOk;
}

int cmd_normalize(const Options& o) {
    const RunConfig cfg = load(o);
    const Screen screen = refined(require_screen(cfg), o.grid_scale);
    const Normalization n = normalization_constant(cfg.experiment, screen, cfg.solver);
    json j;
    j["command"] = "normalize";
    j["amplitude"] = n.amplitude;
    j["integral"] = n.integral;
    j["integral_coarse"] = n.integral_coarse;
    j["error_estimate"] = n.error_estimate;
    j["relative_error"] = n.relative_error;
    j["grid"] = {{"n_theta", screen.n_theta}, {"n_phi", screen.n_phi}, {"n_t", screen.n_t}};
    emit(cfg, dump(j));
    return kOk;
}

int cmd_nonrel(const Options& o) {
    const RunConfig cfg = load(o);
    if (cfg.nonrel_t.empty()) throw ConfigError("missing section 'nonrel'");
    const auto rows = nonrel_limit_report(cfg.experiment, cfg.nonrel_t, cfg.solver);
    std::ostringstream os;
    write_nonrel_csv(os, rows);
    emit(cfg, os.str());
    return kOk;
}

int cmd_verify(const Options& o) {
    const RunConfig cfg = load(o);
    const VerificationReport report = run_verification(cfg.experiment, cfg.quadrature);
    std::ostringstream os;
    write_report(os, report);
    emit(cfg, os.str());
    return report.all_passed() ? kOk : kVerification;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kConfig;
    } catch (const StationarityError& e) {
        std::cerr << "no stationary point: " << e.what() << '\n';
        return kNoStationary;
    } catch (const QuadratureError& e) {
        std::cerr << "quadrature error: " << e.what() << '\n';
        return kQuadrature;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relativistic Gaussian wave-packet amplitudes and stationary life times"};
    app.require_subcommand(1);
    Options opts;
    int code = kOk;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config, "JSON configuration file")->required();
        sub->add_option("--out", opts.out, "output file (default: stdout or output.path)");
        sub->add_option("--hbar", opts.hbar, "override experiment.hbar");
    };

    auto* amplitude = app.add_subcommand("amplitude", "transition amplitude at C (stationary C when omitted)");
    add_common(amplitude);
    amplitude->add_option("--c", opts.c, "life time C");
    amplitude->add_flag("--exact", opts.exact, "refine the stationary C with the exact solver");
    amplitude->callback([&] { code = guarded([&] { return cmd_amplitude(opts); }); });

    auto* action = app.add_subcommand("action", "quantum, classical and correction actions at C");
    add_common(action);
    action->add_option("--c", opts.c, "life time C");
    action->add_flag("--exact", opts.exact, "refine the stationary C with the exact solver");
    action->callback([&] { code = guarded([&] { return cmd_action(opts); }); });

    auto* stationary = app.add_subcommand("stationary-c", "stationary life time");
    add_common(stationary);
    stationary->add_flag("--exact", opts.exact, "refine with the exact solver");
    stationary->callback([&] { code = guarded([&] { return cmd_stationary(opts); }); });

    auto* scan = app.add_subcommand("scan", "detection table over the screen grid (CSV)");
    add_common(scan);
    scan->add_option("--grid-scale", opts.grid_scale, "multiply every screen grid count")->check(CLI::PositiveNumber);
    scan->callback([&] { code = guarded([&] { return cmd_scan(opts); }); });

    auto* normalize = app.add_subcommand("normalize", "screen normalization constant A");
    add_common(normalize);
    normalize->add_option("--grid-scale", opts.grid_scale, "multiply every screen grid count")
        ->check(CLI::PositiveNumber);
    normalize->callback([&] { code = guarded([&] { return cmd_normalize(opts); }); });

    auto* nonrel = app.add_subcommand("nonrel", "non-relativistic limit report (CSV)");
    add_common(nonrel);
    nonrel->callback([&] { code = guarded([&] { return cmd_nonrel(opts); }); });

    auto* verify = app.add_subcommand("verify", "run the oracle suite on the configured experiment");
    add_common(verify);
    verify->callback([&] { code = guarded([&] { return cmd_verify(opts); }); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }
    return code;
}
