#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "extremal/geometry.hpp"
#include "extremal/measure.hpp"

namespace extremal::lab {

enum class SweepKind { Widom, Residual, Ahlfors, Opm, Continuity };

const char* to_string(SweepKind k) noexcept;

struct GeometrySpec {
    std::string preset;
    nlohmann::json params;
};

struct Tolerances {
    double lawson_gap = 1e-3;
    double sweep_tol = 3e-2;
};

struct ExperimentConfig {
    GeometrySpec geometry;
    ExtendedPoint z0;
    DensitySpec density = DensitySpec::constant(1.0);
    DensitySpec weight = DensitySpec::constant(1.0);
    std::vector<Atom> atoms;
    std::vector<double> r_list{2.0};
    int n_min = 1;
    int n_max = 10;
    int n_step = 1;
    int grid_M = 0;  // 0: smallest power of two >= 16 n_max
    Tolerances tolerances;
    std::vector<SweepKind> sweeps;
    std::uint64_t seed = 1;
    std::string outputs = "out";
    nlohmann::json source;  // the document as read

    std::vector<int> degrees() const;
};

ExteriorMap build_geometry(const GeometrySpec& g);
DensitySpec parse_density(const nlohmann::json& j, const std::string& field);
nlohmann::json density_to_json(const DensitySpec& d);
cplx parse_complex(const nlohmann::json& j, const std::string& field);

/// Parses and validates; every failure is a ConfigInvalid naming the field.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

}  // namespace extremal::lab
