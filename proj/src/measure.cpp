#include "extremal/measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "extremal/kernels.hpp"

namespace extremal {

// ---------------------------------------------------------------- DensitySpec

DensitySpec DensitySpec::constant(double c) {
    if (!(c >= 0.0)) throw InvalidArgument("constant density must be nonnegative");
    DensitySpec d;
    d.kind = Kind::Constant;
    d.value = c;
    return d;
}

DensitySpec DensitySpec::abs_linear(cplx a) {
    DensitySpec d;
    d.kind = Kind::AbsLinear;
    d.anchor = a;
    return d;
}

DensitySpec DensitySpec::abs_linear_squared(cplx a) {
    DensitySpec d;
    d.kind = Kind::AbsLinearSquared;
    d.anchor = a;
    return d;
}

DensitySpec DensitySpec::exp_trig(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs, double a0) {
    DensitySpec d;
    d.kind = Kind::ExpTrig;
    d.cos_coeffs = std::move(cos_coeffs);
    d.sin_coeffs = std::move(sin_coeffs);
    d.a0 = a0;
    return d;
}

DensitySpec DensitySpec::vanishing(cplx a, double p) {
    if (!(p > 0.0)) throw InvalidArgument("vanishing density needs a positive exponent");
    DensitySpec d;
    d.kind = Kind::Vanishing;
    d.anchor = a;
    d.power = p;
    return d;
}

DensitySpec DensitySpec::zero_on_arc(double begin, double end, double elsewhere) {
    if (!(end > begin) || !(end - begin < kTwoPi)) throw InvalidArgument("zero_on_arc: need begin < end < begin + 2pi");
    if (!(elsewhere > 0.0)) throw InvalidArgument("zero_on_arc: value off the arc must be positive");
    DensitySpec d;
    d.kind = Kind::ZeroOnArc;
    d.arc_begin = begin;
    d.arc_end = end;
    d.value = elsewhere;
    return d;
}

DensitySpec DensitySpec::custom(std::vector<double> values) {
    for (double v : values)
        if (!(v >= 0.0)) throw InvalidArgument("custom density values must be nonnegative");
    DensitySpec d;
    d.kind = Kind::Custom;
    d.table = std::move(values);
    return d;
}

double DensitySpec::at_boundary(int j, double theta, cplx z) const {
    switch (kind) {
        case Kind::ExpTrig: {
            double e = a0;
            for (std::size_t k = 0; k < cos_coeffs.size(); ++k) e += cos_coeffs[k] * std::cos((k + 1.0) * theta);
            for (std::size_t k = 0; k < sin_coeffs.size(); ++k) e += sin_coeffs[k] * std::sin((k + 1.0) * theta);
            return value * std::exp(e);
        }
        case Kind::ZeroOnArc: {
            double t = std::fmod(theta - arc_begin, kTwoPi);
            if (t < 0) t += kTwoPi;
            return t <= arc_end - arc_begin ? 0.0 : value;
        }
        case Kind::Custom:
            if (j < 0 || j >= static_cast<int>(table.size()))
                throw InvalidArgument("custom density table does not match the grid");
            return table[j];
        default:
            return *at_point(z);
    }
}

std::optional<double> DensitySpec::at_point(cplx z) const {
    switch (kind) {
        case Kind::Constant: return value;
        case Kind::AbsLinear: return value * std::abs(z - anchor);
        case Kind::AbsLinearSquared: return value * std::norm(z - anchor);
        case Kind::Vanishing: return value * std::pow(std::abs(z - anchor), power);
        default: return std::nullopt;
    }
}

std::vector<double> DensitySpec::on_grid(const BoundaryGrid& grid) const {
    if (kind == Kind::Custom && static_cast<int>(table.size()) != grid.size())
        throw InvalidArgument("custom density has " + std::to_string(table.size()) + " values for a grid of " +
                              std::to_string(grid.size()));
    std::vector<double> f(grid.size());
    for (int j = 0; j < grid.size(); ++j) f[j] = at_boundary(j, grid.thetas()[j], grid.nodes()[j]);
    return f;
}

std::string DensitySpec::kind_name() const {
    switch (kind) {
        case Kind::Constant: return "constant";
        case Kind::AbsLinear: return "abs_linear";
        case Kind::AbsLinearSquared: return "abs_linear_squared";
        case Kind::ExpTrig: return "exp_trig";
        case Kind::Vanishing: return "vanishing";
        case Kind::ZeroOnArc: return "zero_on_arc";
        case Kind::Custom: return "custom";
    }
    return "unknown";
}

DensitySpec DensitySpec::scaled(double c) const {
    if (!(c > 0.0)) throw InvalidArgument("density scale must be positive");
    DensitySpec d = *this;
    if (kind == Kind::Custom)
        for (auto& v : d.table) v *= c;
    else
        d.value *= c;
    return d;
}

// ------------------------------------------------------- DiscretizedMeasure

double DiscretizedMeasure::total_mass() const {
    double s = 0.0;
    for (double w : boundary_weights) s += w;
    for (const auto& a : atoms) s += a.mass;
    return s;
}

std::vector<cplx> DiscretizedMeasure::support_points() const {
    std::vector<cplx> pts(grid->nodes().begin(), grid->nodes().end());
    for (const auto& a : atoms) pts.push_back(a.z);
    return pts;
}

std::vector<double> DiscretizedMeasure::support_weights() const {
    std::vector<double> w(boundary_weights);
    for (const auto& a : atoms) w.push_back(a.mass);
    return w;
}

namespace {

void validate_atoms(const ExteriorMap& map, const std::vector<Atom>& atoms) {
    for (const auto& a : atoms) {
        if (!(a.mass > 0.0)) throw InvalidArgument("atom masses must be positive");
        if (!in_region(map, a.z)) {
            std::ostringstream os;
            os << "atom at " << a.z << " lies outside the region";
            throw AtomOutsideRegion(os.str());
        }
    }
}

}  // namespace

DiscretizedMeasure build_measure(const NormalizedMap& nm, std::shared_ptr<const BoundaryGrid> grid,
                                 const DensitySpec& f, std::vector<Atom> atoms) {
    if (!grid) throw InvalidArgument("build_measure: null grid");
    validate_atoms(nm.base(), atoms);
    DiscretizedMeasure m;
    m.harmonic = harmonic_weights(nm, *grid);
    m.density = f.on_grid(*grid);
    m.boundary_weights.resize(m.density.size());
    for (std::size_t j = 0; j < m.density.size(); ++j) m.boundary_weights[j] = m.density[j] * m.harmonic[j];
    m.atoms = std::move(atoms);
    m.grid = std::move(grid);
    return m;
}

DiscretizedMeasure measure_from_weights(std::shared_ptr<const BoundaryGrid> grid,
                                        std::vector<double> boundary_weights, std::vector<Atom> atoms) {
    if (!grid) throw InvalidArgument("measure_from_weights: null grid");
    if (static_cast<int>(boundary_weights.size()) != grid->size())
        throw InvalidArgument("measure_from_weights: weight count does not match the grid");
    for (double w : boundary_weights)
        if (!(w >= 0.0)) throw InvalidArgument("measure weights must be nonnegative");
    validate_atoms(grid->map(), atoms);
    DiscretizedMeasure m;
    const int M = grid->size();
    m.harmonic.assign(M, 1.0 / M);
    m.density.resize(M);
    for (int j = 0; j < M; ++j) m.density[j] = boundary_weights[j] * M;
    m.boundary_weights = std::move(boundary_weights);
    m.atoms = std::move(atoms);
    m.grid = std::move(grid);
    return m;
}

double entropy_from_values(std::span<const double> harmonic, std::span<const double> f) {
    const auto zeros = std::count_if(f.begin(), f.end(), [](double v) { return v <= kLogFloor; });
    if (zeros > kMaxIsolatedZeros) return 0.0;
    const double s = kernels::weighted_log_sum(harmonic, f, kLogFloor);
    if (s <= std::log(kNonSzegoCutoff)) return 0.0;
    return std::exp(s);
}

double entropy(const NormalizedMap& nm, const BoundaryGrid& grid, const DensitySpec& f) {
    const auto h = harmonic_weights(nm, grid);
    const auto values = f.on_grid(grid);
    return entropy_from_values(h, values);
}

double entropy_of(const NormalizedMap& nm, const DiscretizedMeasure& m) {
    const auto h = harmonic_weights(nm, *m.grid);
    std::vector<double> f(h.size());
    for (std::size_t j = 0; j < h.size(); ++j) f[j] = m.boundary_weights[j] / h[j];
    return entropy_from_values(h, f);
}

DiscretizedMeasure pushforward_to_circle(const NormalizedMap& nm, const DiscretizedMeasure& m) {
    const auto& grid = *m.grid;
    auto circle = std::make_shared<const BoundaryGrid>(ExteriorMap::disk(1.0), grid.size(),
                                                       grid.theta_offset() + nm.alpha());
    DiscretizedMeasure out;
    out.grid = circle;
    out.density = m.density;
    out.harmonic = m.harmonic;
    out.boundary_weights = m.boundary_weights;
    for (const auto& a : m.atoms) {
        std::optional<cplx> w;
        try {
            w = invert_phi(nm.base(), a.z);
        } catch (const Error&) {
        }
        if (!w || std::abs(std::abs(*w) - 1.0) > 1e-9) {
            std::ostringstream os;
            os << "atom at " << a.z << " is interior to K and has no boundary image";
            throw InteriorAtomNotPushable(os.str());
        }
        out.atoms.push_back({nm.rotation() * (*w / std::abs(*w)), a.mass});
    }
    return out;
}

}  // namespace extremal
