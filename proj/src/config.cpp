#include "relwave/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <string_view>

#include "relwave/errors.hpp"

namespace relwave {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("unknown key '" + (where.empty() ? key : where + "." + key) + "'");
    }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError("missing field '" + where + "." + key + "'");
    return *it;
}

double as_number(const json& v, const std::string& field) {
    if (!v.is_number()) throw ConfigError("field '" + field + "' must be a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& field) {
    if (!v.is_number_integer()) throw ConfigError("field '" + field + "' must be an integer");
    return v.get<int>();
}

FourVector as_four_vector(const json& v, const std::string& field) {
    if (!v.is_array() || v.size() != 4) throw ConfigError("field '" + field + "' must be an array of 4 numbers");
    FourVector out;
    for (std::size_t mu = 0; mu < 4; ++mu) out[mu] = as_number(v[mu], field + "[" + std::to_string(mu) + "]");
    return out;
}

template <typename T, typename Fn>
void optional_field(const json& obj, const std::string& key, const std::string& where, T& target, Fn convert) {
    auto it = obj.find(key);
    if (it != obj.end()) target = convert(*it, where + "." + key);
}

Experiment parse_experiment(const json& e) {
    reject_unknown(e, "experiment", {"mass", "hbar", "displacement", "packet"});
    Experiment exp;
    exp.mass = as_number(require(e, "mass", "experiment"), "experiment.mass");
    exp.hbar = as_number(require(e, "hbar", "experiment"), "experiment.hbar");
    exp.displacement = as_four_vector(require(e, "displacement", "experiment"), "experiment.displacement");

    const json& p = require(e, "packet", "experiment");
    reject_unknown(p, "experiment.packet", {"sigma", "momentum", "center", "amplitude"});
    const FourVector sigma = as_four_vector(require(p, "sigma", "experiment.packet"), "experiment.packet.sigma");
    exp.packet.sigma = sigma.x;
    exp.packet.momentum =
        as_four_vector(require(p, "momentum", "experiment.packet"), "experiment.packet.momentum");
    optional_field(p, "center", "experiment.packet", exp.packet.center, as_four_vector);
    optional_field(p, "amplitude", "experiment.packet", exp.packet.amplitude, as_number);
    try {
        return validate_experiment(exp);
    } catch (const ConfigError& err) {
        throw ConfigError(std::string("experiment: ") + err.what());
    }
}

Screen parse_screen(const json& s) {
    reject_unknown(s, "screen", {"radius", "n_theta", "n_phi", "n_t", "t_max"});
    Screen screen;
    screen.radius = as_number(require(s, "radius", "screen"), "screen.radius");
    screen.n_theta = as_int(require(s, "n_theta", "screen"), "screen.n_theta");
    screen.n_phi = as_int(require(s, "n_phi", "screen"), "screen.n_phi");
    screen.n_t = as_int(require(s, "n_t", "screen"), "screen.n_t");
    screen.t_max = as_number(require(s, "t_max", "screen"), "screen.t_max");
    validate_screen(screen);
    return screen;
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
    reject_unknown(doc, "", {"experiment", "screen", "quadrature", "solver", "nonrel", "output"});
    RunConfig cfg;
    cfg.experiment = parse_experiment(require(doc, "experiment", "config"));

    if (auto it = doc.find("screen"); it != doc.end()) cfg.screen = parse_screen(*it);

    if (auto it = doc.find("quadrature"); it != doc.end()) {
        reject_unknown(*it, "quadrature", {"nodes", "window", "max_nodes", "tolerance"});
        optional_field(*it, "nodes", "quadrature", cfg.quadrature.nodes, as_int);
        optional_field(*it, "window", "quadrature", cfg.quadrature.window, as_number);
        optional_field(*it, "max_nodes", "quadrature", cfg.quadrature.max_nodes, as_int);
        optional_field(*it, "tolerance", "quadrature", cfg.quadrature.tolerance, as_number);
        validate_quadrature_spec(cfg.quadrature);
    }

    if (auto it = doc.find("solver"); it != doc.end()) {
        reject_unknown(*it, "solver",
                       {"tolerance", "far_field_threshold", "refine_threshold", "max_iterations", "bracket_samples"});
        optional_field(*it, "tolerance", "solver", cfg.solver.tolerance, as_number);
        optional_field(*it, "far_field_threshold", "solver", cfg.solver.far_field_threshold, as_number);
        optional_field(*it, "refine_threshold", "solver", cfg.solver.refine_threshold, as_number);
        optional_field(*it, "max_iterations", "solver", cfg.solver.max_iterations, as_int);
        optional_field(*it, "bracket_samples", "solver", cfg.solver.bracket_samples, as_int);
        validate_solver_options(cfg.solver);
    }

    if (auto it = doc.find("nonrel"); it != doc.end()) {
        reject_unknown(*it, "nonrel", {"t_values"});
        const json& t = require(*it, "t_values", "nonrel");
        if (!t.is_array() || t.empty()) throw ConfigError("field 'nonrel.t_values' must be a non-empty array");
        for (std::size_t i = 0; i < t.size(); ++i)
            cfg.nonrel_t.push_back(as_number(t[i], "nonrel.t_values[" + std::to_string(i) + "]"));
    }

    if (auto it = doc.find("output"); it != doc.end()) {
        reject_unknown(*it, "output", {"path"});
        const json& p = require(*it, "path", "output");
        if (!p.is_string()) throw ConfigError("field 'output.path' must be a string");
        cfg.output_path = p.get<std::string>();
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_run_config(doc);
}

}  // namespace relwave
