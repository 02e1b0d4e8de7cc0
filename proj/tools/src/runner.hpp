#pragma once

#include <string>
#include <variant>
#include <vector>

#include "config.hpp"
#include "json.hpp"

namespace gsv::cli {

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

struct TaskOutput {
    nlohmann::json results;
    Table table;
    bool passed = true;  // verify only
};

TaskOutput run_task(const ExperimentConfig& config);

/// Report object; timing lives under "timing" so the rest is reproducible.
nlohmann::json make_report(const ExperimentConfig& config, const TaskOutput& output, double wall_seconds);

/// CSV with a header row and %.16e numbers.
std::string to_csv(const Table& table);

/// Write to path.tmp then rename over path.
void write_atomic(const std::string& path, const std::string& contents);

}  // namespace gsv::cli
