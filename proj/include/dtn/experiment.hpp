#pragma once

// Named experiments behind the CLI: parse one JSON config into an
// ExperimentConfig, validate it fully without running, or execute it into
// <output_dir>/<experiment>/ as CSV tables (each with a JSON schema sidecar),
// optional SVG plots, and a manifest.json written last.

#include <filesystem>
#include <string>
#include <vector>

#include "dtn/conductivity.hpp"
#include "dtn/geometry.hpp"
#include "dtn/harmonic_lift.hpp"

namespace dtn {

struct TransportConfig {
    double R = 1.0;
    double R0 = 2.0;
    double D = 1.0;
    double C0 = 1.0;
    bool shell = false;
    std::vector<double> mu_list;  // W_list entries arrive here as mu = D/W
};

struct ExperimentConfig {
    std::string experiment;
    Domain domain = Circle{1.0};
    ConductivityField gamma;
    int resolution = 32;

    std::vector<double> t_list;
    std::vector<int> n_list;
    std::vector<int> k_list;                // localization mode indices
    std::vector<double> radius_fractions;   // localization radii, in (0, 1]
    int weyl_k_lo = 0, weyl_k_hi = 0;       // 0 = automatic window
    double approx_s = 1.0;
    bool export_matrix = false;
    LiftOptions lift;
    TransportConfig transport;

    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 0;

    std::vector<std::string> defaulted;  // keys that fell back to defaults
    std::string raw_text;                // config file as read, echoed in the manifest
};

// Strict parse: unknown keys, wrong types, and constraint violations all
// throw ErrorKind::config naming the offending key. Defaults are recorded.
ExperimentConfig parse_config(const std::filesystem::path& path);

// Parse plus every experiment-specific precondition, without executing.
struct ValidationReport {
    std::string experiment;
    std::vector<std::string> defaulted;
};
ValidationReport validate_config(const std::filesystem::path& path);

struct ExperimentReport {
    std::filesystem::path dir;        // <output_dir>/<experiment>/
    std::vector<std::string> files;   // artifacts, manifest.json last
    std::string summary;
};

// Execute into its own subdirectory. On failure the manifest still lands,
// with status "failed" and the error message, before the Error propagates.
ExperimentReport run_experiment(const ExperimentConfig& config);

const std::vector<std::string>& experiment_names();

}  // namespace dtn
