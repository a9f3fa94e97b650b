#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "extremal/faber.hpp"
#include "extremal/measure.hpp"
#include "extremal/szego.hpp"

namespace extremal {

struct SolverReport {
    int iterations = 0;
    double final_residual = 0.0;  // KKT residual (r = 2) or last relative objective change
    int multi_start_best = -1;    // r < 1 only
    bool nonconvex = false;
    bool converged = true;
    bool exactly_zero = false;    // support smaller than n + 1 points
};

struct ChristoffelSolution {
    PolynomialC poly;
    double lambda = 0.0;
    double widom = 0.0;  // C^{-n} lambda^{1/r}
    double r = 2.0;
    int n = 0;
    SolverReport solver_report;
};

class ChristoffelNoConvergence : public NoConvergence {
public:
    ChristoffelNoConvergence(const std::string& what, ChristoffelSolution best)
        : NoConvergence(what), best_(std::move(best)) {}
    const ChristoffelSolution& best() const noexcept { return best_; }

private:
    ChristoffelSolution best_;
};

inline constexpr double kKktTolerance = 1e-10;

/// Minimizer of a^* G a subject to ell^T a = 1, G = V^* diag(w) V. Solved by
/// jittered Cholesky with iterative refinement; falls back to a pivoted QR of
/// diag(sqrt w) V when the KKT residual exceeds kKktTolerance.
struct ConstrainedL2 {
    Eigen::VectorXcd a;
    double lambda = 0.0;  // 1 / (v^* G^{-1} v), v = conj(ell)
    double kkt_residual = 0.0;
    bool used_qr = false;
};

ConstrainedL2 constrained_least_squares(const Eigen::MatrixXcd& V, std::span<const double> w,
                                        const Eigen::VectorXcd& ell);

/// Coefficients ell_k = ell(F_k): F_k(z0) for finite z0, cap^{-n} delta_{kn} at infinity.
Eigen::VectorXcd normalization_functional(const NormalizedMap& nm, int n);

/// Number of distinct support points carrying positive mass, counting stops at `stop_at`.
int distinct_support_size(std::span<const cplx> points, std::span<const double> w,
                          int stop_at = std::numeric_limits<int>::max());

ChristoffelSolution solve_l2(const NormalizedMap& nm, const DiscretizedMeasure& m, int n);

struct LrOptions {
    int max_iterations = 500;
    double rel_tol = 1e-11;
    int starts = 8;  // multi-starts for r < 1
    std::uint64_t seed = 20240611;
    bool throw_on_no_convergence = true;
};

ChristoffelSolution solve_lr(const NormalizedMap& nm, const DiscretizedMeasure& m, int n, double r,
                             const LrOptions& opts = {});

struct WidomRow {
    int n = 0;
    double lambda = 0.0;
    double widom_r = 0.0;      // lambda / C^{nr}
    double lower_bound = 0.0;  // S C^{nr}
    double gap = 0.0;          // widom_r - S
};

/// Rows for each degree in `degrees`, solved in parallel.
std::vector<WidomRow> widom_sweep(const NormalizedMap& nm, const DiscretizedMeasure& m, double r,
                                  std::span<const int> degrees, const LrOptions& opts = {});

/// lambda / C^{nr} computed in logs.
double widom_power(double lambda, double capacity, int n, double r);

struct ContinuityRow {
    ExtendedPoint zeta;
    double widom = 0.0;
    double difference = 0.0;  // |W(zeta) - W(z0)|
};

/// W_{r,n}(mu, zeta) along `path`, compared with the value at z0.
std::vector<ContinuityRow> widom_continuity_probe(const ExteriorMap& map, const DiscretizedMeasure& m, double r, int n,
                                                  const ExtendedPoint& z0, std::span<const ExtendedPoint> path,
                                                  const LrOptions& opts = {});

/// sup over the level curve |Phi| = level of |C^{-n} Phi_{z0}^{-n} P_n - F_{mu,z0,r}|.
double level_curve_error(const NormalizedMap& nm, const SzegoData& sd, const ChristoffelSolution& sol,
                         double level = 1.5, int samples = 512);

/// sum_j f_j h_j |C^{-n} Phi_{z0}(z_j)^{-n} P_n(z_j) - F(z_j)|^r over the grid of m.
double boundary_error(const NormalizedMap& nm, const DiscretizedMeasure& m, const SzegoData& sd,
                      const ChristoffelSolution& sol);

}  // namespace extremal
