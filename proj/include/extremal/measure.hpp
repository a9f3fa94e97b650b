#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "extremal/geometry.hpp"

namespace extremal {

/// A nonnegative density (or weight) on the boundary curve. Boundary values
/// are evaluated in the circle parameter theta of Phi_inf, z = Psi(e^{i theta}).
struct DensitySpec {
    enum class Kind {
        Constant,          // f = value
        AbsLinear,         // f = |z - a|
        AbsLinearSquared,  // f = |z - a|^2
        ExpTrig,           // f = exp(a0 + sum_k cos_k cos(k t) + sin_k sin(k t))
        Vanishing,         // f = |z - a|^p
        ZeroOnArc,         // f = 0 on the arc [arc_begin, arc_end] of t, value elsewhere
        Custom,            // f = table[j] at grid node j
    };

    Kind kind = Kind::Constant;
    double value = 1.0;
    cplx anchor{};
    double power = 1.0;
    double a0 = 0.0;
    std::vector<double> cos_coeffs;
    std::vector<double> sin_coeffs;
    double arc_begin = 0.0;
    double arc_end = 0.0;
    std::vector<double> table;

    static DensitySpec constant(double c);
    static DensitySpec abs_linear(cplx a);
    static DensitySpec abs_linear_squared(cplx a);
    static DensitySpec exp_trig(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs = {}, double a0 = 0.0);
    static DensitySpec vanishing(cplx a, double p);
    static DensitySpec zero_on_arc(double begin, double end, double elsewhere = 1.0);
    static DensitySpec custom(std::vector<double> values);

    /// Value at grid node `j` with circle parameter `theta` and position `z`.
    double at_boundary(int j, double theta, cplx z) const;
    /// Value at an arbitrary point, for kinds defined by a formula in z.
    std::optional<double> at_point(cplx z) const;
    std::vector<double> on_grid(const BoundaryGrid& grid) const;
    std::string kind_name() const;
    /// Whether f = c g for a constant c > 0; used for scaling.
    DensitySpec scaled(double c) const;
};

struct Atom {
    cplx z;
    double mass;
};

/// mu = f d omega_{z0} + sum of atoms, as weights on grid nodes plus point masses.
struct DiscretizedMeasure {
    std::shared_ptr<const BoundaryGrid> grid;
    std::vector<double> density;           // f at the grid nodes
    std::vector<double> harmonic;          // harmonic weights used to build the measure
    std::vector<double> boundary_weights;  // density * harmonic
    std::vector<Atom> atoms;

    double total_mass() const;
    /// Grid nodes followed by atom locations.
    std::vector<cplx> support_points() const;
    /// Matching weights.
    std::vector<double> support_weights() const;
    int support_size() const { return static_cast<int>(boundary_weights.size() + atoms.size()); }
};

DiscretizedMeasure build_measure(const NormalizedMap& nm, std::shared_ptr<const BoundaryGrid> grid,
                                 const DensitySpec& f, std::vector<Atom> atoms = {});

/// Measure with explicit node weights (already multiplied by harmonic
/// weights), e.g. a Lawson candidate measure rho^2 nu.
DiscretizedMeasure measure_from_weights(std::shared_ptr<const BoundaryGrid> grid,
                                        std::vector<double> boundary_weights, std::vector<Atom> atoms = {});

inline constexpr double kLogFloor = 1e-300;
inline constexpr double kNonSzegoCutoff = 1e-250;
/// Isolated zeros of a Szego density touch at most this many nodes; more
/// zero nodes mean f vanishes on an arc.
inline constexpr long kMaxIsolatedZeros = 2;

/// exp(sum_j h_j log max(f_j, 1e-300)) with h the harmonic weights of z0;
/// 0 when the floored log-average falls below log(1e-250) or when f is zero
/// at more than kMaxIsolatedZeros nodes.
double entropy(const NormalizedMap& nm, const BoundaryGrid& grid, const DensitySpec& f);

/// Entropy from explicit density samples.
double entropy_from_values(std::span<const double> harmonic, std::span<const double> f);

/// Entropy of the absolutely continuous part of `m` relative to the harmonic
/// measure of nm.z0() (which may differ from the point used to build m).
double entropy_of(const NormalizedMap& nm, const DiscretizedMeasure& m);

/// Push-forward under Phi_{z0}: same weights on nodes e^{i(theta_j + alpha)}.
/// Boundary atoms move to Phi_{z0}(atom); interior atoms are rejected.
DiscretizedMeasure pushforward_to_circle(const NormalizedMap& nm, const DiscretizedMeasure& m);

}  // namespace extremal
