#include "extremal/lab/config.hpp"

#include <algorithm>
#include <fstream>

namespace extremal::lab {

using nlohmann::json;

const char* to_string(SweepKind k) noexcept {
    switch (k) {
        case SweepKind::Widom: return "widom";
        case SweepKind::Residual: return "residual";
        case SweepKind::Ahlfors: return "ahlfors";
        case SweepKind::Opm: return "opm";
        case SweepKind::Continuity: return "continuity";
    }
    return "unknown";
}

std::vector<int> ExperimentConfig::degrees() const {
    std::vector<int> ns;
    for (int n = n_min; n <= n_max; n += n_step) ns.push_back(n);
    return ns;
}

namespace {

double number(const json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigInvalid(field, "expected a number");
    return j.get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& field) {
    if (!obj.contains(key)) return fallback;
    return number(obj.at(key), field + "." + key);
}

std::vector<double> number_list(const json& j, const std::string& field) {
    if (!j.is_array()) throw ConfigInvalid(field, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

int integer(const json& j, const std::string& field) {
    if (!j.is_number_integer()) throw ConfigInvalid(field, "expected an integer");
    return j.get<int>();
}

}  // namespace

cplx parse_complex(const json& j, const std::string& field) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw ConfigInvalid(field, "expected a number or a [re, im] pair");
}

ExteriorMap build_geometry(const GeometrySpec& g) {
    const json& p = g.params.is_null() ? json::object() : g.params;
    if (!p.is_object()) throw ConfigInvalid("geometry.params", "expected an object");
    try {
        const cplx center = p.contains("center") ? parse_complex(p["center"], "geometry.params.center") : cplx{};
        if (g.preset == "disk") return ExteriorMap::disk(number_or(p, "radius", 1.0, "geometry.params"), center);
        if (g.preset == "ellipse")
            return ExteriorMap::ellipse(number_or(p, "c", 1.0, "geometry.params"),
                                        number_or(p, "d", 0.25, "geometry.params"), center);
        if (g.preset == "perturbed_circle") {
            std::vector<cplx> tail;
            if (p.contains("tail")) {
                if (!p["tail"].is_array()) throw ConfigInvalid("geometry.params.tail", "expected an array");
                for (std::size_t i = 0; i < p["tail"].size(); ++i)
                    tail.push_back(parse_complex(p["tail"][i], "geometry.params.tail[" + std::to_string(i) + "]"));
            }
            const cplx c0 = p.contains("c0") ? parse_complex(p["c0"], "geometry.params.c0") : cplx{};
            return ExteriorMap::perturbed_circle(number_or(p, "cap", 1.0, "geometry.params"), c0, tail);
        }
    } catch (const ConfigInvalid&) {
        throw;
    } catch (const Error& e) {
        throw ConfigInvalid("geometry.params", e.what());
    }
    throw ConfigInvalid("geometry.preset", "unknown preset '" + g.preset + "'");
}

DensitySpec parse_density(const json& j, const std::string& field) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw ConfigInvalid(field, "expected an object with a string 'kind'");
    const auto kind = j["kind"].get<std::string>();
    try {
        DensitySpec d;
        if (kind == "constant") {
            d = DensitySpec::constant(number_or(j, "value", 1.0, field));
        } else if (kind == "abs_linear") {
            d = DensitySpec::abs_linear(parse_complex(j.value("a", json(0.0)), field + ".a"));
        } else if (kind == "abs_linear_squared") {
            d = DensitySpec::abs_linear_squared(parse_complex(j.value("a", json(0.0)), field + ".a"));
        } else if (kind == "exp_trig") {
            const auto cs = j.contains("cos") ? number_list(j["cos"], field + ".cos") : std::vector<double>{};
            const auto ss = j.contains("sin") ? number_list(j["sin"], field + ".sin") : std::vector<double>{};
            d = DensitySpec::exp_trig(cs, ss, number_or(j, "a0", 0.0, field));
        } else if (kind == "vanishing") {
            d = DensitySpec::vanishing(parse_complex(j.value("a", json(0.0)), field + ".a"),
                                       number_or(j, "p", 1.0, field));
        } else if (kind == "zero_on_arc") {
            d = DensitySpec::zero_on_arc(number_or(j, "begin", 0.0, field), number_or(j, "end", kPi / 2, field),
                                         number_or(j, "value", 1.0, field));
        } else if (kind == "custom") {
            if (!j.contains("values")) throw ConfigInvalid(field + ".values", "required for custom densities");
            d = DensitySpec::custom(number_list(j["values"], field + ".values"));
        } else {
            throw ConfigInvalid(field + ".kind", "unknown density kind '" + kind + "'");
        }
        if (j.contains("scale")) d = d.scaled(number(j["scale"], field + ".scale"));
        return d;
    } catch (const ConfigInvalid&) {
        throw;
    } catch (const Error& e) {
        throw ConfigInvalid(field, e.what());
    }
}

json density_to_json(const DensitySpec& d) {
    json j;
    j["kind"] = d.kind_name();
    auto pair = [](cplx z) { return json::array({z.real(), z.imag()}); };
    switch (d.kind) {
        case DensitySpec::Kind::Constant: j["value"] = d.value; break;
        case DensitySpec::Kind::AbsLinear:
        case DensitySpec::Kind::AbsLinearSquared: j["a"] = pair(d.anchor); j["scale"] = d.value; break;
        case DensitySpec::Kind::ExpTrig:
            j["cos"] = d.cos_coeffs;
            j["sin"] = d.sin_coeffs;
            j["a0"] = d.a0;
            j["scale"] = d.value;
            break;
        case DensitySpec::Kind::Vanishing: j["a"] = pair(d.anchor); j["p"] = d.power; j["scale"] = d.value; break;
        case DensitySpec::Kind::ZeroOnArc: j["begin"] = d.arc_begin; j["end"] = d.arc_end; j["value"] = d.value; break;
        case DensitySpec::Kind::Custom: j["values"] = d.table; break;
    }
    return j;
}

ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigInvalid("<root>", "expected a JSON object");
    ExperimentConfig c;
    c.source = j;

    if (!j.contains("geometry") || !j["geometry"].is_object()) throw ConfigInvalid("geometry", "required object");
    const auto& g = j["geometry"];
    if (!g.contains("preset") || !g["preset"].is_string()) throw ConfigInvalid("geometry.preset", "required string");
    c.geometry.preset = g["preset"].get<std::string>();
    c.geometry.params = g.value("params", json::object());
    const auto map = build_geometry(c.geometry);

    if (!j.contains("z0")) throw ConfigInvalid("z0", "required (\"inf\", a number, or [re, im])");
    if (j["z0"].is_string()) {
        if (j["z0"].get<std::string>() != "inf") throw ConfigInvalid("z0", "the only string value allowed is \"inf\"");
        c.z0 = ExtendedPoint::infinity();
    } else {
        c.z0 = parse_complex(j["z0"], "z0");
        try {
            NormalizedMap probe(map, c.z0);
        } catch (const Error& e) {
            throw ConfigInvalid("z0", std::string("must lie strictly outside the region: ") + e.what());
        }
    }

    if (j.contains("density")) c.density = parse_density(j["density"], "density");
    if (j.contains("weight")) c.weight = parse_density(j["weight"], "weight");

    if (j.contains("atoms")) {
        if (!j["atoms"].is_array()) throw ConfigInvalid("atoms", "expected an array");
        for (std::size_t i = 0; i < j["atoms"].size(); ++i) {
            const auto field = "atoms[" + std::to_string(i) + "]";
            const auto& a = j["atoms"][i];
            if (!a.is_object() || !a.contains("z") || !a.contains("mass"))
                throw ConfigInvalid(field, "expected {\"z\": ..., \"mass\": ...}");
            Atom atom{parse_complex(a["z"], field + ".z"), number(a["mass"], field + ".mass")};
            if (!(atom.mass > 0.0)) throw ConfigInvalid(field + ".mass", "must be positive");
            if (!in_region(map, atom.z)) throw ConfigInvalid(field + ".z", "atom must lie in the region");
            c.atoms.push_back(atom);
        }
    }

    if (j.contains("r_list")) {
        c.r_list = number_list(j["r_list"], "r_list");
        if (c.r_list.empty()) throw ConfigInvalid("r_list", "must not be empty");
        for (double r : c.r_list)
            if (!(r > 0.0) || !std::isfinite(r)) throw ConfigInvalid("r_list", "entries must be positive and finite");
    }

    if (!j.contains("n_range")) throw ConfigInvalid("n_range", "required [n_min, n_max, step]");
    const auto& nr = j["n_range"];
    if (!nr.is_array() || nr.size() < 2 || nr.size() > 3) throw ConfigInvalid("n_range", "expected [n_min, n_max, step]");
    c.n_min = integer(nr[0], "n_range[0]");
    c.n_max = integer(nr[1], "n_range[1]");
    c.n_step = nr.size() == 3 ? integer(nr[2], "n_range[2]") : 1;
    if (c.n_min < 1) throw ConfigInvalid("n_range", "n_min must be at least 1");
    if (c.n_max < c.n_min) throw ConfigInvalid("n_range", "n_max must be >= n_min");
    if (c.n_step < 1) throw ConfigInvalid("n_range", "step must be positive");

    if (j.contains("grid_M")) {
        c.grid_M = integer(j["grid_M"], "grid_M");
        if (c.grid_M < 16 || (c.grid_M & (c.grid_M - 1)) != 0)
            throw ConfigInvalid("grid_M", "must be a power of two >= 16");
        if (c.grid_M < 16 * c.n_max)
            throw ConfigInvalid("grid_M", "must be at least 16 * n_max = " + std::to_string(16 * c.n_max));
    } else {
        c.grid_M = grid_size_for_degree(c.n_max);
    }

    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (!t.is_object()) throw ConfigInvalid("tolerances", "expected an object");
        c.tolerances.lawson_gap = number_or(t, "lawson_gap", c.tolerances.lawson_gap, "tolerances");
        c.tolerances.sweep_tol = number_or(t, "sweep_tol", c.tolerances.sweep_tol, "tolerances");
        if (!(c.tolerances.lawson_gap > 0.0)) throw ConfigInvalid("tolerances.lawson_gap", "must be positive");
        if (!(c.tolerances.sweep_tol > 0.0)) throw ConfigInvalid("tolerances.sweep_tol", "must be positive");
    }

    if (!j.contains("sweeps") || !j["sweeps"].is_array() || j["sweeps"].empty())
        throw ConfigInvalid("sweeps", "required non-empty array");
    for (std::size_t i = 0; i < j["sweeps"].size(); ++i) {
        const auto field = "sweeps[" + std::to_string(i) + "]";
        if (!j["sweeps"][i].is_string()) throw ConfigInvalid(field, "expected a string");
        const auto s = j["sweeps"][i].get<std::string>();
        SweepKind k;
        if (s == "widom") k = SweepKind::Widom;
        else if (s == "residual") k = SweepKind::Residual;
        else if (s == "ahlfors") k = SweepKind::Ahlfors;
        else if (s == "opm") k = SweepKind::Opm;
        else if (s == "continuity") k = SweepKind::Continuity;
        else throw ConfigInvalid(field, "unknown sweep '" + s + "'");
        if (std::find(c.sweeps.begin(), c.sweeps.end(), k) != c.sweeps.end())
            throw ConfigInvalid(field, "sweep '" + s + "' listed twice");
        if (k == SweepKind::Ahlfors && c.z0.is_infinite())
            throw ConfigInvalid(field, "the ahlfors sweep needs a finite z0");
        c.sweeps.push_back(k);
    }

    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ConfigInvalid("seed", "expected a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("outputs")) {
        if (!j["outputs"].is_string()) throw ConfigInvalid("outputs", "expected a directory path");
        c.outputs = j["outputs"].get<std::string>();
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("<file>", "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigInvalid("<file>", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

}  // namespace extremal::lab
