#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "extremal/lab/config.hpp"
#include "extremal/minimax.hpp"

namespace extremal::lab {

/// Column-major-by-name numeric table; one CSV per sweep.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::vector<double> column(const std::string& name) const;
};

/// Everything a check predicate may look at besides the table.
struct CheckContext {
    double S = 0.0;  // entropy of the sweep's measure
    double r = 2.0;
    bool z0_infinite = true;
    Tolerances tolerances;
};

struct CheckOutcome {
    bool passed = false;
    std::string detail;
};

struct CheckDef {
    std::string id;
    SweepKind kind;
    std::string statement;
    std::function<CheckOutcome(const Table&, const CheckContext&)> predicate;
};

/// All registered checks; the runner and the acceptance suite both use it.
const std::vector<CheckDef>& check_registry();

struct CheckResult {
    std::string id;
    std::string statement;
    bool passed = false;
    std::string detail;
};

enum class SweepStatus { Pass, Fail, Failed };
const char* to_string(SweepStatus s) noexcept;

struct SweepResult {
    std::string name;  // also the CSV stem
    SweepKind kind;
    double r = 2.0;
    Table table;
    CheckContext context;
    std::vector<CheckResult> checks;
    SweepStatus status = SweepStatus::Failed;
    std::string error;     // solver error for FAILED sweeps
    nlohmann::json extra;  // sweep-specific attachments
};

struct RunReport {
    nlohmann::json config;
    std::vector<SweepResult> sweeps;
    std::uint64_t seed = 0;
    int grid_M = 0;

    bool all_passed() const;
    nlohmann::json to_json() const;
};

/// Runs every requested sweep (concurrently when jobs > 1) and evaluates
/// the registered checks. Solver errors mark only their own sweep FAILED.
RunReport run(const ExperimentConfig& config, int jobs = 1);

/// Fixed column order, 17 significant digits.
std::string table_to_csv(const Table& t);

/// Writes <name>.csv per sweep and report.json into `dir`.
void write_outputs(const RunReport& report, const std::filesystem::path& dir);

nlohmann::json to_json(const ResidualSolution& sol);

std::string list_presets_text();
nlohmann::json list_presets_json();

}  // namespace extremal::lab
