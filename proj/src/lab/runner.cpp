#include "extremal/lab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>

#include <Eigen/Core>

#include "extremal/christoffel.hpp"
#include "extremal/measure.hpp"
#include "extremal/szego.hpp"

namespace extremal::lab {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kBoundSlack = 1e-9;
// The OPM trace needs near-exact minimizers; the default gap leaves KS at
// the level of the gap itself.
constexpr double kOpmGap = 1e-9;
constexpr int kOpmIterations = 20000;

std::string format_r(double r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", r);
    return buf;
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CheckOutcome outcome(bool ok, std::string detail) { return {ok, std::move(detail)}; }

// Ratio test used for both Szego limits; non-Szego weights must decay instead.
CheckOutcome limit_or_decay(const std::vector<double>& w, double S, double tol) {
    if (w.empty()) return outcome(false, "empty table");
    if (S > 0.0) {
        const double dev = std::abs(w.back() / S - 1.0);
        return outcome(dev <= tol, "final |W/S - 1| = " + fmt(dev) + ", tolerance " + fmt(tol));
    }
    const bool ok = w.back() <= 0.5 * w.front();
    return outcome(ok, "S = 0: final W = " + fmt(w.back()) + " vs first W = " + fmt(w.front()));
}

std::vector<CheckDef> build_registry() {
    std::vector<CheckDef> r;
    r.push_back({"christoffel_entropy_lower_bound", SweepKind::Widom,
                 "lambda_n >= S C^{nr} for every degree",
                 [](const Table& t, const CheckContext&) {
                     const auto lam = t.column("lambda");
                     const auto lb = t.column("lower_bound");
                     int bad = 0;
                     for (std::size_t i = 0; i < lam.size(); ++i)
                         if (lam[i] < lb[i] * (1.0 - kBoundSlack)) ++bad;
                     return outcome(bad == 0, std::to_string(bad) + " violations in " + std::to_string(lam.size()));
                 }});
    r.push_back({"widom_entropy_limit", SweepKind::Widom,
                 "W_{r,n}^r / S -> 1 (or W -> 0 when S = 0)",
                 [](const Table& t, const CheckContext& c) {
                     return limit_or_decay(t.column("widom_r"), c.S, c.tolerances.sweep_tol);
                 }});
    r.push_back({"residual_entropy_lower_bound", SweepKind::Residual,
                 "t_n >= S(rho) C^n for every degree",
                 [](const Table& t, const CheckContext&) {
                     const auto tv = t.column("t");
                     const auto lb = t.column("lower_bound");
                     int bad = 0;
                     for (std::size_t i = 0; i < tv.size(); ++i)
                         if (tv[i] < lb[i] * (1.0 - kBoundSlack)) ++bad;
                     return outcome(bad == 0, std::to_string(bad) + " violations in " + std::to_string(tv.size()));
                 }});
    r.push_back({"minimax_duality_gap", SweepKind::Residual,
                 "every converged Lawson run closes the duality gap to lawson_gap",
                 [](const Table& t, const CheckContext& c) {
                     const auto gap = t.column("gap_rel");
                     const auto stalled = t.column("stalled");
                     int bad = 0, stalls = 0;
                     for (std::size_t i = 0; i < gap.size(); ++i) {
                         if (stalled[i] != 0.0) ++stalls;
                         else if (gap[i] > c.tolerances.lawson_gap) ++bad;
                     }
                     return outcome(bad == 0, std::to_string(bad) + " converged runs above tolerance, " +
                                                  std::to_string(stalls) + " stalled");
                 }});
    r.push_back({"extreme_point_count", SweepKind::Residual,
                 "a converged minimizer attains its norm at >= n + 1 points",
                 [](const Table& t, const CheckContext&) {
                     const auto n = t.column("n");
                     const auto cnt = t.column("extreme_count");
                     const auto stalled = t.column("stalled");
                     int bad = 0;
                     for (std::size_t i = 0; i < n.size(); ++i)
                         if (stalled[i] == 0.0 && cnt[i] < n[i] + 1) ++bad;
                     return outcome(bad == 0, std::to_string(bad) + " rows with too few extreme points");
                 }});
    r.push_back({"residual_widom_limit", SweepKind::Residual,
                 "W_{inf,n} / S(rho) -> 1 (or W -> 0 when S = 0)",
                 [](const Table& t, const CheckContext& c) {
                     return limit_or_decay(t.column("widom_inf"), c.S, c.tolerances.sweep_tol);
                 }});
    r.push_back({"ahlfors_limit", SweepKind::Ahlfors,
                 "|Phi'(z0)| |Phi(z0)|^n A_n -> |Phi(z0)|^2 - 1",
                 [](const Table& t, const CheckContext& c) {
                     const auto e = t.column("rel_error");
                     if (e.empty()) return outcome(false, "empty table");
                     return outcome(e.back() <= c.tolerances.sweep_tol,
                                    "final relative error " + fmt(e.back()) + ", tolerance " + fmt(c.tolerances.sweep_tol));
                 }});
    r.push_back({"opm_weakstar_trend", SweepKind::Opm,
                 "optimal prediction measures approach harmonic measure",
                 [](const Table& t, const CheckContext&) {
                     const auto ks = t.column("ks");
                     if (ks.empty()) return outcome(false, "empty table");
                     const bool ok = ks.back() <= std::max(0.5 * ks.front(), 1e-8);
                     return outcome(ok, "KS first " + fmt(ks.front()) + ", last " + fmt(ks.back()));
                 }});
    r.push_back({"widom_point_continuity", SweepKind::Continuity,
                 "W_{r,n}(mu, zeta) -> W_{r,n}(mu, z0) as zeta -> z0",
                 [](const Table& t, const CheckContext& c) {
                     const auto d = t.column("difference");
                     const auto w = t.column("widom");
                     if (d.empty()) return outcome(false, "empty table");
                     const bool ok = d.back() <= d.front() && d.back() <= c.tolerances.sweep_tol * w.back();
                     return outcome(ok, "difference first " + fmt(d.front()) + ", last " + fmt(d.back()));
                 }});
    return r;
}

struct Shared {
    ExteriorMap map;
    std::shared_ptr<const BoundaryGrid> grid;
};

Table widom_table(const ExperimentConfig& cfg, const Shared& sh, double r, CheckContext& ctx) {
    const NormalizedMap nm(sh.map, cfg.z0);
    const auto m = build_measure(nm, sh.grid, cfg.density, cfg.atoms);
    ctx.S = entropy(nm, *sh.grid, cfg.density);
    LrOptions opts;
    opts.seed = cfg.seed;
    const auto degrees = cfg.degrees();
    Table t{{"n", "lambda", "widom_r", "lower_bound", "gap"}, {}};
    for (const auto& row : widom_sweep(nm, m, r, degrees, opts))
        t.rows.push_back({double(row.n), row.lambda, row.widom_r, row.lower_bound, row.gap});
    return t;
}

Table residual_table(const ExperimentConfig& cfg, const Shared& sh, CheckContext& ctx, json& extra) {
    const NormalizedMap nm(sh.map, cfg.z0);
    ctx.S = entropy(nm, *sh.grid, cfg.weight);
    LawsonOptions opts;
    opts.tol = cfg.tolerances.lawson_gap;
    const auto degrees = cfg.degrees();
    Table t{{"n", "t", "widom_inf", "S", "lower_bound", "gap_rel", "level_error", "extreme_count", "ks", "stalled"}, {}};
    for (const auto& row : residual_widom_sweep(nm, sh.grid, cfg.weight, degrees, opts))
        t.rows.push_back({double(row.n), row.t, row.widom_inf, row.S, row.lower_bound, row.gap_rel, row.level_error,
                          double(row.extreme_count), row.ks, row.stalled ? 1.0 : 0.0});
    extra["solution_n_max"] = to_json(lawson_solve(nm, sh.grid, cfg.weight, {}, degrees.back(), opts));
    return t;
}

Table ahlfors_table(const ExperimentConfig& cfg, const Shared& sh, CheckContext& ctx) {
    const NormalizedMap nm(sh.map, cfg.z0);
    const cplx z0 = cfg.z0.value();
    const auto lim = ahlfors_limit_closed_form(sh.map, z0);
    const double mod = std::abs(invert_phi(sh.map, z0));
    const double dphi = std::abs(phi_derivative(sh.map, z0));
    ctx.S = 1.0;
    LawsonOptions opts;
    opts.tol = cfg.tolerances.lawson_gap;
    Table t{{"n", "A", "scaled", "scaled_limit", "rel_error", "gap_rel"}, {}};
    for (int n : cfg.degrees()) {
        const auto sol = ahlfors_solve(nm, sh.grid, n, opts);
        const double scaled = dphi * std::exp(n * std::log(mod)) * sol.A;
        t.rows.push_back({double(n), sol.A, scaled, lim.scaled_limit, std::abs(scaled / lim.scaled_limit - 1.0),
                          sol.residual.gap_rel});
    }
    return t;
}

Table opm_table(const ExperimentConfig& cfg, const Shared& sh, CheckContext& ctx) {
    const NormalizedMap nm(sh.map, cfg.z0);
    ctx.S = entropy(nm, *sh.grid, cfg.weight);
    LawsonOptions opts;
    opts.tol = std::min(kOpmGap, cfg.tolerances.lawson_gap);
    opts.max_iterations = kOpmIterations;
    const auto degrees = cfg.degrees();
    std::vector<std::vector<double>> rows(degrees.size());
    std::vector<std::exception_ptr> errors(degrees.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        try {
            const auto sol = lawson_solve(nm, sh.grid, cfg.weight, {}, degrees[i], opts);
            rows[i] = {double(degrees[i]), opm_weakstar_distance(sol, nm, *sh.grid), sol.gap_rel,
                       double(sol.iterations), sol.stalled ? 1.0 : 0.0};
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return {{"n", "ks", "gap_rel", "iterations", "stalled"}, std::move(rows)};
}

// zeta_k -> z0 along the ray away from the centre of the map (outward for
// star-shaped K); at infinity the path runs out along the positive axis.
std::vector<ExtendedPoint> continuity_path(const ExperimentConfig& cfg, const ExteriorMap& map) {
    std::vector<ExtendedPoint> path;
    if (cfg.z0.is_infinite()) {
        for (int k = 1; k <= 4; ++k) path.emplace_back(map.c0() + map.cap() * std::pow(10.0, k));
        return path;
    }
    const cplx z0 = cfg.z0.value();
    cplx dir = z0 - map.c0();
    dir = std::abs(dir) > 0.0 ? dir / std::abs(dir) : cplx{1.0, 0.0};
    const double dist = std::abs(invert_phi(map, z0)) - 1.0;  // scale of the gap to K in the w-plane
    for (int k = 1; k <= 6; ++k) {
        const cplx zeta = z0 + dir * std::min(1.0, dist) * std::pow(10.0, -k);
        if (in_region(map, zeta)) continue;
        path.emplace_back(zeta);
    }
    return path;
}

Table continuity_table(const ExperimentConfig& cfg, const Shared& sh, double r, CheckContext& ctx) {
    const NormalizedMap nm(sh.map, cfg.z0);
    const auto m = build_measure(nm, sh.grid, cfg.density, cfg.atoms);
    ctx.S = entropy(nm, *sh.grid, cfg.density);
    LrOptions opts;
    opts.seed = cfg.seed;
    const auto path = continuity_path(cfg, sh.map);
    Table t{{"step", "zeta_re", "zeta_im", "widom", "difference"}, {}};
    const auto rows = widom_continuity_probe(sh.map, m, r, cfg.n_max, cfg.z0, path, opts);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const cplx z = rows[k].zeta.value();
        t.rows.push_back({double(k + 1), z.real(), z.imag(), rows[k].widom, rows[k].difference});
    }
    return t;
}

struct Job {
    SweepKind kind;
    double r;
};

SweepResult execute(const ExperimentConfig& cfg, const Shared& sh, const Job& job) {
    SweepResult res;
    res.kind = job.kind;
    res.r = job.r;
    res.name = to_string(job.kind);
    if (job.kind == SweepKind::Widom || job.kind == SweepKind::Continuity) res.name += "_r" + format_r(job.r);
    res.context.r = job.r;
    res.context.z0_infinite = cfg.z0.is_infinite();
    res.context.tolerances = cfg.tolerances;
    res.extra = json::object();
    try {
        switch (job.kind) {
            case SweepKind::Widom: res.table = widom_table(cfg, sh, job.r, res.context); break;
            case SweepKind::Residual: res.table = residual_table(cfg, sh, res.context, res.extra); break;
            case SweepKind::Ahlfors: res.table = ahlfors_table(cfg, sh, res.context); break;
            case SweepKind::Opm: res.table = opm_table(cfg, sh, res.context); break;
            case SweepKind::Continuity: res.table = continuity_table(cfg, sh, job.r, res.context); break;
        }
    } catch (const std::exception& e) {
        res.status = SweepStatus::Failed;
        res.error = e.what();
        return res;
    }
    bool ok = true;
    for (const auto& def : check_registry()) {
        if (def.kind != job.kind) continue;
        CheckOutcome o;
        try {
            o = def.predicate(res.table, res.context);
        } catch (const std::exception& e) {
            o = {false, std::string("predicate error: ") + e.what()};
        }
        res.checks.push_back({def.id, def.statement, o.passed, o.detail});
        ok = ok && o.passed;
    }
    res.status = ok ? SweepStatus::Pass : SweepStatus::Fail;
    return res;
}

json table_json(const Table& t) {
    json rows = json::array();
    for (const auto& row : t.rows) rows.push_back(row);
    return {{"columns", t.columns}, {"rows", rows}};
}

json cplx_list(const std::vector<cplx>& v) {
    json out = json::array();
    for (const auto& z : v) out.push_back({z.real(), z.imag()});
    return out;
}

}  // namespace

std::vector<double> Table::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw InvalidArgument("table has no column '" + name + "'");
    const auto idx = static_cast<std::size_t>(it - columns.begin());
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row.at(idx));
    return out;
}

const std::vector<CheckDef>& check_registry() {
    static const std::vector<CheckDef> registry = build_registry();
    return registry;
}

const char* to_string(SweepStatus s) noexcept {
    switch (s) {
        case SweepStatus::Pass: return "PASS";
        case SweepStatus::Fail: return "FAIL";
        case SweepStatus::Failed: return "FAILED";
    }
    return "FAILED";
}

bool RunReport::all_passed() const {
    return !sweeps.empty() &&
           std::all_of(sweeps.begin(), sweeps.end(), [](const SweepResult& s) { return s.status == SweepStatus::Pass; });
}

json RunReport::to_json() const {
    json j;
    j["config"] = config;
    j["versions"] = {{"extremal", "0.1.0"},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
    j["seed"] = seed;
    j["grid_M"] = grid_M;
    j["all_passed"] = all_passed();
    json sw = json::array();
    for (const auto& s : sweeps) {
        json e;
        e["name"] = s.name;
        e["kind"] = to_string(s.kind);
        e["r"] = s.r;
        e["status"] = to_string(s.status);
        e["S"] = s.context.S;
        if (!s.error.empty()) e["error"] = s.error;
        e["csv"] = s.name + ".csv";
        e["table"] = table_json(s.table);
        json checks = json::array();
        for (const auto& c : s.checks)
            checks.push_back({{"id", c.id}, {"statement", c.statement}, {"verdict", c.passed ? "PASS" : "FAIL"},
                              {"detail", c.detail}});
        e["checks"] = checks;
        if (!s.extra.empty()) e["extra"] = s.extra;
        sw.push_back(e);
    }
    j["sweeps"] = sw;
    return j;
}

RunReport run(const ExperimentConfig& cfg, int jobs) {
    const auto map = build_geometry(cfg.geometry);
    const Shared sh{map, std::make_shared<const BoundaryGrid>(map, cfg.grid_M)};

    std::vector<Job> plan;
    for (auto kind : cfg.sweeps) {
        if (kind == SweepKind::Widom || kind == SweepKind::Continuity) {
            for (double r : cfg.r_list) plan.push_back({kind, r});
        } else {
            plan.push_back({kind, 2.0});
        }
    }

    std::vector<SweepResult> results(plan.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < plan.size(); ++i) results[i] = execute(cfg, sh, plan[i]);
    } else {
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
        for (std::size_t i = 0; i < plan.size(); ++i) results[i] = execute(cfg, sh, plan[i]);
    }

    RunReport report;
    report.config = cfg.source;
    report.seed = cfg.seed;
    report.grid_M = cfg.grid_M;
    report.sweeps = std::move(results);
    return report;
}

std::string table_to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + fmt(row[i]);
        out += '\n';
    }
    return out;
}

void write_outputs(const RunReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& s : report.sweeps) {
        std::ofstream(dir / (s.name + ".csv"), std::ios::binary) << table_to_csv(s.table);
    }
    std::ofstream(dir / "report.json", std::ios::binary) << report.to_json().dump(2) << '\n';
}

json to_json(const ResidualSolution& sol) {
    const auto mono = sol.poly.to_monomial();
    return {{"n", sol.n},
            {"basis", "monomial"},
            {"normalization", to_string(sol.poly.normalization)},
            {"coefficients", cplx_list(mono.coeffs)},
            {"t_value", sol.t_value},
            {"widom_inf", sol.widom_inf},
            {"dual", sol.dual},
            {"gap_rel", sol.gap_rel},
            {"iterations", sol.iterations},
            {"stalled", sol.stalled},
            {"offgrid_inflation", sol.offgrid_inflation},
            {"extreme_points", sol.extreme_points},
            {"extreme_values", sol.extreme_values},
            {"opm", sol.opm}};
}

namespace {

struct PresetDoc {
    const char* name;
    const char* description;
    std::vector<std::pair<const char*, const char*>> params;
};

const std::vector<PresetDoc>& geometry_docs() {
    static const std::vector<PresetDoc> docs{
        {"disk", "closed disk", {{"radius", "number > 0, default 1"}, {"center", "complex, default 0"}}},
        {"ellipse",
         "ellipse Psi(w) = c w + d / w, semi-axes c + d and c - d",
         {{"c", "number > 0, default 1"}, {"d", "real with |d| < c, default 0.25"}, {"center", "complex, default 0"}}},
        {"perturbed_circle",
         "Psi(w) = cap w + c0 + sum tail[k-1] w^-k with sum k |tail[k-1]| < cap",
         {{"cap", "number > 0, default 1"}, {"c0", "complex, default 0"}, {"tail", "array of complex"}}},
    };
    return docs;
}

const std::vector<PresetDoc>& density_docs() {
    static const std::vector<PresetDoc> docs{
        {"constant", "f = value", {{"value", "number >= 0, default 1"}}},
        {"abs_linear", "f = |z - a|", {{"a", "complex"}}},
        {"abs_linear_squared", "f = |z - a|^2", {{"a", "complex"}}},
        {"exp_trig",
         "f = exp(a0 + sum cos[k-1] cos(k t) + sin[k-1] sin(k t))",
         {{"cos", "array of numbers"}, {"sin", "array of numbers"}, {"a0", "number, default 0"}}},
        {"vanishing", "f = |z - a|^p", {{"a", "complex"}, {"p", "number > 0"}}},
        {"zero_on_arc",
         "f = 0 for begin <= t <= end, value elsewhere",
         {{"begin", "number"}, {"end", "number"}, {"value", "number > 0, default 1"}}},
        {"custom", "f = values[j] at grid node j", {{"values", "array of grid_M numbers"}}},
    };
    return docs;
}

json docs_json(const std::vector<PresetDoc>& docs) {
    json out = json::array();
    for (const auto& d : docs) {
        json params = json::object();
        for (const auto& [k, v] : d.params) params[k] = v;
        out.push_back({{"name", d.name}, {"description", d.description}, {"params", params}});
    }
    return out;
}

void docs_text(std::string& out, const std::vector<PresetDoc>& docs) {
    for (const auto& d : docs) {
        out += "  " + std::string(d.name) + ": " + d.description + "\n";
        for (const auto& [k, v] : d.params) out += "      " + std::string(k) + " : " + v + "\n";
    }
}

}  // namespace

json list_presets_json() {
    json sweeps = json::array();
    for (auto k : {SweepKind::Widom, SweepKind::Residual, SweepKind::Ahlfors, SweepKind::Opm, SweepKind::Continuity})
        sweeps.push_back(to_string(k));
    json checks = json::array();
    for (const auto& c : check_registry())
        checks.push_back({{"id", c.id}, {"sweep", to_string(c.kind)}, {"statement", c.statement}});
    return {{"geometry", docs_json(geometry_docs())},
            {"density", docs_json(density_docs())},
            {"sweeps", sweeps},
            {"checks", checks}};
}

std::string list_presets_text() {
    std::string out = "geometry presets:\n";
    docs_text(out, geometry_docs());
    out += "density kinds (density and weight; optional 'scale' multiplies f):\n";
    docs_text(out, density_docs());
    out += "sweeps: widom residual ahlfors opm continuity\n";
    out += "checks:\n";
    for (const auto& c : check_registry())
        out += "  " + c.id + " [" + to_string(c.kind) + "]: " + c.statement + "\n";
    return out;
}

}  // namespace extremal::lab
