#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "relwave/detection.hpp"
#include "relwave/evolution.hpp"
#include "relwave/experiment.hpp"
#include "relwave/stationarity.hpp"

namespace relwave {

/// Everything a CLI run reads from its configuration file.
///
/// Schema (JSON; every object rejects keys not listed here):
///   experiment: { mass, hbar, displacement[4],
///                 packet: { sigma[4], momentum[4], center[4]?, amplitude? } }
///   screen?:     { radius, n_theta, n_phi, n_t, t_max }
///   quadrature?: { nodes?, window?, max_nodes?, tolerance? }
///   solver?:     { tolerance?, far_field_threshold?, refine_threshold?,
///                  max_iterations?, bracket_samples? }
///   nonrel?:     { t_values[] }
///   output?:     { path }
struct RunConfig {
    Experiment experiment;
    std::optional<Screen> screen;
    QuadratureSpec quadrature;
    SolverOptions solver;
    std::vector<double> nonrel_t;
    std::string output_path;
};

RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace relwave
