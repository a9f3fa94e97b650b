#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "extremal/lab/config.hpp"
#include "extremal/lab/runner.hpp"

namespace lab = extremal::lab;

int main(int argc, char** argv) {
    CLI::App app{"Christoffel functions, Widom factors and minimax residuals on Jordan regions"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int jobs = 1;
    auto* run = app.add_subcommand("run", "run the sweeps of an experiment config");
    run->add_option("config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "output directory (default: the config's 'outputs')");
    run->add_option("--jobs", jobs, "sweeps run concurrently")->check(CLI::PositiveNumber);

    bool as_json = false;
    auto* presets = app.add_subcommand("list-presets", "list geometry presets, density kinds and checks");
    presets->add_flag("--json", as_json, "machine-readable output");

    CLI11_PARSE(app, argc, argv);

    if (*presets) {
        if (as_json) std::cout << lab::list_presets_json().dump(2) << '\n';
        else std::cout << lab::list_presets_text();
        return 0;
    }

    try {
        const auto cfg = lab::load_config(config_path);
        const auto report = lab::run(cfg, jobs);
        const std::filesystem::path dir = out_dir.empty() ? cfg.outputs : out_dir;
        lab::write_outputs(report, dir);
        for (const auto& s : report.sweeps) {
            std::cout << lab::to_string(s.status) << "  " << s.name;
            if (!s.error.empty()) std::cout << "  (" << s.error << ")";
            std::cout << '\n';
            for (const auto& c : s.checks)
                std::cout << "    " << (c.passed ? "PASS" : "FAIL") << "  " << c.id << ": " << c.detail << '\n';
        }
        std::cout << "report: " << (dir / "report.json").string() << '\n';
        return report.all_passed() ? 0 : 1;
    } catch (const extremal::ConfigInvalid& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
