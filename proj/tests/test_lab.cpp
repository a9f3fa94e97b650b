#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "extremal/lab/config.hpp"
#include "extremal/lab/runner.hpp"

using namespace extremal;
using namespace extremal::lab;
using nlohmann::json;

namespace {

json disk_config() {
    return json::parse(R"({
        "geometry": {"preset": "disk", "params": {"radius": 1}},
        "z0": 2,
        "density": {"kind": "constant"},
        "weight": {"kind": "constant"},
        "r_list": [2],
        "n_range": [2, 10, 4],
        "sweeps": ["widom", "residual", "ahlfors", "continuity"],
        "seed": 5
    })");
}

std::string field_of(const json& j) {
    try {
        parse_config(j);
    } catch (const ConfigInvalid& e) {
        return e.field();
    }
    return "";
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
    const auto cfg = parse_config(disk_config());
    CHECK(cfg.grid_M == 256);
    CHECK(cfg.degrees() == std::vector<int>{2, 6, 10});
    CHECK_FALSE(cfg.z0.is_infinite());
    CHECK(cfg.seed == 5);

    auto j = disk_config();
    j["sweeps"] = json::array({"widom"});
    j["z0"] = "inf";
    CHECK(parse_config(j).z0.is_infinite());
    j["z0"] = json::array({0.0, 3.0});
    CHECK(parse_config(j).z0.value() == cplx{0.0, 3.0});
}

TEST_CASE("config validation names the field") {
    auto j = disk_config();
    j["z0"] = 0.5;
    CHECK(field_of(j) == "z0");
    j = disk_config();
    j["grid_M"] = 64;
    CHECK(field_of(j) == "grid_M");
    j = disk_config();
    j["n_range"] = json::array({5, 2});
    CHECK(field_of(j) == "n_range");
    j = disk_config();
    j["geometry"]["preset"] = "square";
    CHECK(field_of(j) == "geometry.preset");
    j = disk_config();
    j["density"] = {{"kind", "gaussian"}};
    CHECK(field_of(j) == "density.kind");
    j = disk_config();
    j["atoms"] = json::array({{{"z", 3.0}, {"mass", 0.1}}});
    CHECK(field_of(j) == "atoms[0].z");
    j = disk_config();
    j["r_list"] = json::array({2, -1});
    CHECK(field_of(j) == "r_list");
    j = disk_config();
    j["sweeps"] = json::array({"widom", "plots"});
    CHECK(field_of(j) == "sweeps[1]");
    j = disk_config();
    j["z0"] = "inf";
    CHECK(field_of(j) == "sweeps[2]");  // ahlfors needs a finite z0
    j = disk_config();
    j.erase("n_range");
    CHECK(field_of(j) == "n_range");
}

TEST_CASE("density round trip") {
    for (const auto& d : {DensitySpec::constant(2.0), DensitySpec::abs_linear({1.0, 2.0}),
                          DensitySpec::exp_trig({0.1, 0.2}, {0.3}, 0.5), DensitySpec::vanishing({1.0, 0.0}, 1.5),
                          DensitySpec::zero_on_arc(0.0, 1.0, 2.0)}) {
        const auto back = parse_density(density_to_json(d), "density");
        CHECK(back.kind == d.kind);
        const BoundaryGrid grid(ExteriorMap::disk(1.0), 32);
        CHECK(back.on_grid(grid) == d.on_grid(grid));
    }
}

TEST_CASE("disk run reproduces Bernstein-Walsh and passes every check") {
    const auto cfg = parse_config(disk_config());
    const auto report = run(cfg);
    REQUIRE(report.sweeps.size() == 4);
    CHECK(report.all_passed());
    for (const auto& s : report.sweeps) CHECK(s.status == SweepStatus::Pass);

    const auto& residual = report.sweeps[1];
    CHECK(residual.name == "residual");
    for (double w : residual.table.column("widom_inf")) CHECK(std::abs(w - 1.0) < 1e-3);
    const auto& ahlfors = report.sweeps[2];
    CHECK(std::abs(ahlfors.table.column("scaled").back() / 3.0 - 1.0) <= 3e-2);

    const auto j = report.to_json();
    CHECK(j["sweeps"].size() == 4);
    CHECK(j["seed"] == 5);
    CHECK(j["sweeps"][1]["extra"]["solution_n_max"]["n"] == 10);
    CHECK(j["config"] == disk_config());
}

TEST_CASE("outputs are deterministic and complete") {
    auto j = disk_config();
    j["r_list"] = json::array({1, 2});
    j["sweeps"] = json::array({"widom", "residual"});
    const auto cfg = parse_config(j);
    const auto dir = std::filesystem::temp_directory_path() / "extremal_lab_test";
    std::filesystem::remove_all(dir);
    write_outputs(run(cfg, 1), dir / "a");
    write_outputs(run(cfg, 2), dir / "b");
    for (const char* name : {"widom_r1.csv", "widom_r2.csv", "residual.csv", "report.json"})
        CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
    const auto csv = slurp(dir / "a" / "widom_r2.csv");
    CHECK(csv.rfind("n,lambda,widom_r,lower_bound,gap\n", 0) == 0);
    CHECK(csv.find("\n2,0.0625,1,0.0625,0\n") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("solver errors mark only their own sweep") {
    auto j = disk_config();
    j["weight"] = {{"kind", "custom"}, {"values", json::array({1.0, 2.0})}};
    const auto report = run(parse_config(j));
    CHECK_FALSE(report.all_passed());
    for (const auto& s : report.sweeps) {
        if (s.kind == SweepKind::Residual) {
            CHECK(s.status == SweepStatus::Failed);
            CHECK_FALSE(s.error.empty());
        } else {
            CHECK(s.status == SweepStatus::Pass);
        }
    }
}

TEST_CASE("csv formatting") {
    Table t{{"a", "b"}, {{0.1, 1.0 / 3.0}, {std::nan(""), 1e300}}};
    CHECK(table_to_csv(t) == "a,b\n0.10000000000000001,0.33333333333333331\nnan,1.0000000000000001e+300\n");
}

TEST_CASE("presets listing") {
    const auto text = list_presets_text();
    for (const char* s : {"disk", "ellipse", "perturbed_circle", "constant", "abs_linear", "exp_trig", "vanishing"})
        CHECK(text.find(s) != std::string::npos);
    const auto j = list_presets_json();
    CHECK(j["geometry"].size() == 3);
    CHECK(j["geometry"][2]["name"] == "perturbed_circle");
    bool found = false;
    for (const auto& d : j["density"]) found = found || d["name"] == "vanishing";
    CHECK(found);
    CHECK(j["checks"].size() == check_registry().size());
}
