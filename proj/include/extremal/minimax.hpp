#pragma once

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "extremal/christoffel.hpp"

namespace extremal {

struct LawsonOptions {
    double tol = 1e-3;  // relative duality gap
    int max_iterations = 2000;
    enum class Start { Uniform, Harmonic } start = Start::Uniform;
    double extreme_threshold = 0.99;
};

/// One Lawson iterate: candidate measure nu and its L2 best response.
struct LawsonState {
    std::vector<double> nu;  // over support points (grid nodes, then atoms)
    PolynomialC poly;
    double dual = 0.0;    // lambda_n(rho^2 nu, z0, 2)^{1/2}
    double primal = 0.0;  // max_j rho_j |poly(z_j)|
    double gap = 0.0;     // primal - dual
    int iter = 0;
};

struct ResidualSolution {
    PolynomialC poly;  // best primal iterate
    int n = 0;
    double t_value = 0.0;    // primal value of poly on the support
    double widom_inf = 0.0;  // C^{-n} t
    double dual = 0.0;       // best lower bound
    double gap_rel = 0.0;    // (t_value - dual) / t_value
    std::vector<double> opm;
    std::vector<double> extreme_points;  // circle parameters of merged extreme points
    std::vector<double> extreme_values;  // rho |T| at those points
    int iterations = 0;
    bool stalled = false;
    /// Bound on sup over the curve / max over the grid for degree-n data.
    double offgrid_inflation = 1.0;
    LawsonState final_state;
};

/// Lawson iteration on explicit support points with weight values rho_j,
/// starting from nu0 (uniform when empty).
ResidualSolution lawson_on_points(const NormalizedMap& nm, std::span<const cplx> points, std::span<const double> rho,
                                  int n, const LawsonOptions& opts = {}, std::span<const double> nu0 = {});

/// Weighted Chebyshev / residual problem on the grid nodes (plus atoms).
ResidualSolution lawson_solve(const NormalizedMap& nm, std::shared_ptr<const BoundaryGrid> grid,
                              const DensitySpec& rho, const std::vector<Atom>& atoms, int n,
                              const LawsonOptions& opts = {});

/// (lower, upper) = (dual, primal) of a state.
std::pair<double, double> duality_gap_certificate(const LawsonState& state);

/// Kolmogorov-Smirnov distance between the node part of the OPM and the
/// harmonic weights of nm.z0(), both accumulated along the grid.
double opm_weakstar_distance(const ResidualSolution& sol, const NormalizedMap& nm, const BoundaryGrid& grid);

/// Nodes with values >= threshold * t that are within slack * t of the
/// maximum over their `radius` neighbourhood (circularly), merged greedily
/// from the largest so that kept nodes are more than `radius` apart.
std::vector<int> merged_extreme_points(std::span<const double> values, double t, double threshold, int radius,
                                       double slack = 0.0);

struct ResidualRow {
    int n = 0;
    double t = 0.0;
    double widom_inf = 0.0;
    double S = 0.0;
    double lower_bound = 0.0;  // S C^n
    double gap_rel = 0.0;
    double level_error = 0.0;  // NaN for non-Szego weights
    int extreme_count = 0;
    double ks = 0.0;
    bool stalled = false;
};

std::vector<ResidualRow> residual_widom_sweep(const NormalizedMap& nm, std::shared_ptr<const BoundaryGrid> grid,
                                              const DensitySpec& rho, std::span<const int> degrees,
                                              const LawsonOptions& opts = {});

/// sup over |Phi| = level of |C^{-n} Phi_{z0}^{-n} T_n - R_rho(z0)/R_rho|.
double residual_level_error(const NormalizedMap& nm, const SzegoData& sd, const PolynomialC& poly, int n,
                            double level = 1.5, int samples = 512);

struct AhlforsSolution {
    double A = 0.0;
    PolynomialC Q;  // monomial basis, Q(z0) = 0, Q'(z0) = 1
    ResidualSolution residual;
};

/// A_n(z0) as the |z - z0|-weighted residual problem of degree n - 1.
AhlforsSolution ahlfors_solve(const NormalizedMap& nm, std::shared_ptr<const BoundaryGrid> grid, int n,
                              const LawsonOptions& opts = {});

struct AhlforsLimit {
    /// lim A_n / C^{n-1} = (|Phi(z0)|^2 - 1) / (|Phi'(z0)| |Phi(z0)|).
    double entropy_limit = 0.0;
    /// lim |Phi'(z0)| |Phi(z0)|^n A_n = |Phi(z0)|^2 - 1.
    double scaled_limit = 0.0;
    /// (Phi(z) - Phi(z0)) (|Phi(z0)|^2 - 1) / (conj(Phi(z0)) Phi(z) - 1).
    std::function<cplx(cplx)> limit_function;
};

AhlforsLimit ahlfors_limit_closed_form(const ExteriorMap& map, cplx z0);

}  // namespace extremal
