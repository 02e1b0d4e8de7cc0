#include <chrono>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "config.hpp"
#include "gsv/error.hpp"
#include "runner.hpp"

namespace {

int report_error(const std::string& category, const std::string& message, int status) {
    std::cerr << nlohmann::json{{"error", category}, {"message", message}}.dump() << "\n";
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian stochastic volatility experiments"};
    std::string task;
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::string format;
    app.add_option("task", task, "simulate | rate | exit-rate | callprice | impliedvol | explode | verify")->required();
    app.add_option("--config", config_path, "key = value or JSON configuration")->required();
    auto* out_opt = app.add_option("--out", out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "overrides mc.seed");
    auto* fmt_opt = app.add_option("--format", format, "json | csv | both")->check(CLI::IsMember({"json", "csv", "both"}));
    app.footer("GSV_THREADS sets the worker count. Exit status 2: invalid configuration, 3: task error.");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    using gsv::cli::ExperimentConfig;
    ExperimentConfig config;
    try {
        nlohmann::json raw = gsv::cli::read_config_file(config_path);
        if (raw.contains("task") && raw["task"] != task)
            gsv::fail(gsv::ErrorCode::config_invalid, "task: config says " + raw["task"].dump() + " but the command line says " + task);
        raw["task"] = task;
        if (*seed_opt) raw["mc.seed"] = seed;
        if (*out_opt) raw["output.dir"] = out_dir;
        if (*fmt_opt) raw["output.format"] = format;
        config = gsv::cli::parse_config_json(raw);
    } catch (const gsv::Error& e) {
        return report_error(std::string(gsv::to_string(gsv::ErrorCode::config_invalid)), e.what(), 2);
    }

    const auto start = std::chrono::steady_clock::now();
    gsv::cli::TaskOutput output;
    try {
        output = gsv::cli::run_task(config);
    } catch (const gsv::Error& e) {
        const int status = e.code() == gsv::ErrorCode::config_invalid ? 2 : 3;
        return report_error(std::string(gsv::to_string(e.code())), e.what(), status);
    } catch (const std::exception& e) {
        return report_error("INTERNAL", e.what(), 3);
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    try {
        std::filesystem::create_directories(config.out_dir);
        const std::filesystem::path dir(config.out_dir);
        using gsv::cli::OutputFormat;
        if (config.format != OutputFormat::csv)
            gsv::cli::write_atomic((dir / "report.json").string(),
                                   gsv::cli::make_report(config, output, wall).dump(2) + "\n");
        if (config.format != OutputFormat::json)
            gsv::cli::write_atomic((dir / (gsv::cli::to_string(config.task) + ".csv")).string(),
                                   gsv::cli::to_csv(output.table));
    } catch (const std::exception& e) {
        return report_error("IO", e.what(), 3);
    }

    if (!output.passed) return report_error("VERIFY_FAILED", "one or more checks failed", 3);
    return 0;
}
