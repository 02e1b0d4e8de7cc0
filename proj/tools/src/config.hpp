#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gsv/model.hpp"
#include "gsv/rates.hpp"

namespace gsv::cli {

enum class Task { simulate, rate, exit_rate, callprice, impliedvol, explode, verify };

std::string to_string(Task task);
Task parse_task(const std::string& name);

enum class OutputFormat { json, csv, both };

struct ExperimentConfig {
    Task task = Task::simulate;

    // model
    std::string kernel;  // fbm | rl | fou
    double H = 0.0;
    double a = 0.0;      // fou only
    double T = 1.0;
    std::string sigma;   // constant | affine | exp | poly_plus | bounded_smooth
    double sigma_c0 = 0.0;
    double sigma_c1 = 0.0;
    int sigma_k = 2;
    double rho = 0.0;

    // scaling
    double beta = 0.0;
    double alpha = 0.0;
    std::vector<double> eps;

    std::size_t n = 64;
    std::size_t mc_count = 0;
    std::uint64_t seed = 1;
    std::string tilt = "none";  // none | constant | control
    bool bridge = false;

    // task parameters
    std::optional<double> x;
    std::optional<std::vector<double>> path;  // node values for the path rate
    std::optional<double> lower;
    std::optional<double> upper;
    std::optional<double> t;
    std::optional<double> gamma;
    std::vector<double> M;
    std::vector<std::size_t> levels{16, 32, 64, 128};
    std::size_t restarts = 8;

    std::string out_dir = ".";
    OutputFormat format = OutputFormat::json;

    ModelSpec model() const;
    ScalingParams scaling(double e) const;
    SolverOptions solver() const;
    PathGrid grid() const { return {n, T}; }

    /// Flat key/value mirror; parsing it back gives an equal config.
    nlohmann::json to_json() const;
};

/// Typed flat object from "key = value" text.
nlohmann::json config_text_to_json(const std::string& text);
/// Flat "key = value" text. Lists are comma separated; '#' starts a comment.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_json(const nlohmann::json& j);
/// JSON if the first non-blank character is '{', key/value text otherwise.
nlohmann::json read_config_file(const std::string& path);
ExperimentConfig load_config(const std::string& path);

}  // namespace gsv::cli
