#include "extremal/christoffel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "extremal/kernels.hpp"

namespace extremal {

namespace {

struct Problem {
    Eigen::MatrixXcd V;
    std::vector<double> w;
    Eigen::VectorXcd ell;
    std::shared_ptr<const ExteriorMap> map;
};

Problem make_problem(const NormalizedMap& nm, const DiscretizedMeasure& m, int n) {
    if (n < 0) throw InvalidArgument("degree must be non-negative");
    if (!(nm.base() == m.grid->map())) throw InvalidArgument("measure grid belongs to a different map");
    Problem p;
    p.map = std::make_shared<const ExteriorMap>(nm.base());
    const auto pts = m.support_points();
    p.V = kernels::faber_basis(*p.map, pts, n);
    p.w = m.support_weights();
    p.ell = normalization_functional(nm, n);
    return p;
}

PolynomialC wrap(const NormalizedMap& nm, const Problem& p, const Eigen::VectorXcd& a) {
    PolynomialC poly;
    poly.basis = Basis::Faber;
    poly.map = p.map;
    poly.coeffs.assign(a.data(), a.data() + a.size());
    if (nm.z0().is_infinite()) {
        poly.normalization = Normalization::Monic;
    } else {
        poly.normalization = Normalization::Point;
        poly.z0 = nm.z0().value();
    }
    return poly;
}

double capacity_of(const NormalizedMap& nm) { return normalized_capacity(nm); }

// Monomial polynomial vanishing on the (fewer than n + 1) support points.
ChristoffelSolution annihilator(const NormalizedMap& nm, const DiscretizedMeasure& m, int n, double r) {
    const auto pts = m.support_points();
    const auto w = m.support_weights();
    std::vector<cplx> roots;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (w[i] <= 0.0) continue;
        const bool seen = std::any_of(roots.begin(), roots.end(), [&](cplx q) {
            return std::abs(q - pts[i]) <= 1e-14 * std::max(1.0, std::abs(q));
        });
        if (!seen) roots.push_back(pts[i]);
    }
    std::vector<cplx> c(n + 1, cplx{0.0, 0.0});
    c[0] = 1.0;
    int deg = 0;
    for (cplx q : roots) {
        for (int k = deg + 1; k >= 1; --k) c[k] = c[k - 1] - q * c[k];
        c[0] = -q * c[0];
        ++deg;
    }
    ChristoffelSolution sol;
    sol.poly.basis = Basis::Monomial;
    if (nm.z0().is_infinite()) {
        // times z^{n - deg} to reach degree n while staying monic
        std::rotate(c.rbegin(), c.rbegin() + (n - deg), c.rend());
        sol.poly.coeffs = c;
        sol.poly.normalization = Normalization::Monic;
    } else {
        sol.poly.coeffs = c;
        const cplx v = sol.poly(nm.z0().value());
        for (auto& x : sol.poly.coeffs) x /= v;
        sol.poly.normalization = Normalization::Point;
        sol.poly.z0 = nm.z0().value();
    }
    sol.lambda = 0.0;
    sol.widom = 0.0;
    sol.r = r;
    sol.n = n;
    sol.solver_report.exactly_zero = true;
    return sol;
}

double objective(const Problem& p, const Eigen::VectorXcd& a, double r) {
    const Eigen::VectorXcd vals = p.V * a;
    return kernels::weighted_power_sum(vals, p.w, r);
}

ChristoffelSolution finish(const NormalizedMap& nm, const Problem& p, const Eigen::VectorXcd& a, double r, int n,
                           SolverReport report) {
    ChristoffelSolution sol;
    sol.poly = wrap(nm, p, a);
    sol.lambda = objective(p, a, r);
    sol.r = r;
    sol.n = n;
    sol.widom = std::pow(widom_power(sol.lambda, capacity_of(nm), n, r), 1.0 / r);
    sol.solver_report = report;
    return sol;
}

struct IrlsResult {
    Eigen::VectorXcd a;
    double obj = 0.0;
    int iterations = 0;
    double last_change = 0.0;
    bool converged = false;
};

// Safeguarded IRLS from the feasible start a0 (ell^T a0 = 1).
IrlsResult irls(const Problem& p, Eigen::VectorXcd a, double r, const LrOptions& opts) {
    IrlsResult res;
    double obj = objective(p, a, r);
    double total_w = 0.0;
    for (double x : p.w) total_w += x;
    // Below this many iterations the smoothing has not yet reached its floor.
    const int warmup = static_cast<int>(std::ceil(std::log2(0.1 / 1e-10)));
    const double damping = r > 2.0 ? 1.0 / (r - 1.0) : 1.0;
    std::vector<double> wk(p.w.size());
    for (int k = 0; k < opts.max_iterations; ++k) {
        res.iterations = k + 1;
        if (obj == 0.0) {
            res.converged = true;
            break;
        }
        const double scale = std::pow(obj / total_w, 1.0 / r);
        const double eps = std::max(1e-10, 0.1 * std::pow(0.5, k)) * scale;
        const Eigen::VectorXcd vals = p.V * a;
        for (std::size_t i = 0; i < wk.size(); ++i)
            wk[i] = p.w[i] * std::pow(std::norm(vals[static_cast<Eigen::Index>(i)]) + eps * eps, (r - 2.0) / 2.0);
        const auto step = constrained_least_squares(p.V, wk, p.ell);
        const Eigen::VectorXcd dir = step.a - a;

        double t = damping;
        bool accepted = false;
        Eigen::VectorXcd trial;
        double trial_obj = obj;
        for (int h = 0; h < 40; ++h, t *= 0.5) {
            trial = a + t * dir;
            trial_obj = objective(p, trial, r);
            if (trial_obj <= obj) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            res.last_change = 0.0;
            if (k >= warmup) {
                res.converged = true;
                break;
            }
            continue;
        }
        const double change = (obj - trial_obj) / obj;
        a = trial;
        obj = trial_obj;
        res.last_change = change;
        if (k >= warmup && change <= opts.rel_tol) {
            res.converged = true;
            break;
        }
    }
    res.a = std::move(a);
    res.obj = obj;
    return res;
}

}  // namespace

// ------------------------------------------------------------------ L2 core

namespace {

// Same problem through a pivoted QR of diag(sqrt w) V, which avoids squaring
// the condition number.
Eigen::VectorXcd constrained_qr(const Eigen::MatrixXcd& V, std::span<const double> w, const Eigen::VectorXcd& ell,
                                double& inv_lambda) {
    Eigen::MatrixXcd A = V;
    for (Eigen::Index i = 0; i < A.rows(); ++i) A.row(i) *= std::sqrt(w[static_cast<std::size_t>(i)]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(A);
    const Eigen::Index k = V.cols();
    const Eigen::MatrixXcd R = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    const Eigen::VectorXcd ell_p = qr.colsPermutation().transpose() * ell;
    // u = R^{-T} ell_p, minimizer b = conj(u) / |u|^2 of |b| subject to u^T b = 1.
    const Eigen::VectorXcd u = R.transpose().triangularView<Eigen::Lower>().solve(ell_p);
    inv_lambda = u.squaredNorm();
    const Eigen::VectorXcd b = u.conjugate() / inv_lambda;
    const Eigen::VectorXcd c = R.triangularView<Eigen::Upper>().solve(b);
    Eigen::VectorXcd a = qr.colsPermutation() * c;
    const cplx s = ell.transpose() * a;
    return a / s;
}

// Normal-equation residual, combined with the mismatch between the two
// expressions for lambda (1 / v^* x and a^* G a), which exposes solves that
// are inaccurate along small eigenvectors of G.
double kkt_residual(const Eigen::MatrixXcd& G, const Eigen::VectorXcd& a, const Eigen::VectorXcd& v,
                    double lambda) {
    const double scale = std::abs(lambda) * v.norm();
    if (!(scale > 0.0)) return 0.0;
    const double quad = (a.adjoint() * G * a)(0).real();
    return std::max((G * a - lambda * v).norm() / scale, std::abs(quad - lambda) / std::abs(lambda));
}

}  // namespace

ConstrainedL2 constrained_least_squares(const Eigen::MatrixXcd& V, std::span<const double> w,
                                        const Eigen::VectorXcd& ell) {
    const Eigen::MatrixXcd G = kernels::weighted_gram(V, w);
    const Eigen::VectorXcd v = ell.conjugate();
    const double jitter = 1e-13 * G.trace().real();
    Eigen::MatrixXcd Gj = G;
    Gj.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXcd> llt(Gj);

    ConstrainedL2 out;
    if (llt.info() == Eigen::Success) {
        Eigen::VectorXcd x = llt.solve(v);
        for (int it = 0; it < 3; ++it) x += llt.solve(v - G * x);
        const cplx denom = ell.transpose() * x;  // = v^* x
        out.a = x / denom;
        out.lambda = 1.0 / denom.real();
        out.kkt_residual = kkt_residual(G, out.a, v, out.lambda);
        if (out.kkt_residual <= kKktTolerance) return out;
    }
    double inv_lambda = 0.0;
    out.a = constrained_qr(V, w, ell, inv_lambda);
    out.lambda = 1.0 / inv_lambda;
    out.kkt_residual = kkt_residual(G, out.a, v, out.lambda);
    out.used_qr = true;
    return out;
}

Eigen::VectorXcd normalization_functional(const NormalizedMap& nm, int n) {
    Eigen::VectorXcd ell = Eigen::VectorXcd::Zero(n + 1);
    if (nm.z0().is_infinite()) {
        ell[n] = std::pow(nm.base().cap(), -static_cast<double>(n));
    } else {
        std::vector<cplx> f(n + 1);
        faber_values(nm.base(), nm.z0().value(), f);
        for (int k = 0; k <= n; ++k) ell[k] = f[k];
    }
    return ell;
}

int distinct_support_size(std::span<const cplx> points, std::span<const double> w, int stop_at) {
    std::vector<cplx> seen;
    for (std::size_t i = 0; i < points.size() && static_cast<int>(seen.size()) < stop_at; ++i) {
        if (w[i] <= 0.0) continue;
        const bool dup = std::any_of(seen.begin(), seen.end(), [&](cplx q) {
            return std::abs(q - points[i]) <= 1e-14 * std::max(1.0, std::abs(q));
        });
        if (!dup) seen.push_back(points[i]);
    }
    return static_cast<int>(seen.size());
}

double widom_power(double lambda, double capacity, int n, double r) {
    if (lambda <= 0.0) return 0.0;
    return std::exp(std::log(lambda) - n * r * std::log(capacity));
}

ChristoffelSolution solve_l2(const NormalizedMap& nm, const DiscretizedMeasure& m, int n) {
    {
        const auto pts = m.support_points();
        const auto w = m.support_weights();
        if (distinct_support_size(pts, w, n + 1) < n + 1) return annihilator(nm, m, n, 2.0);
    }
    const auto p = make_problem(nm, m, n);
    const auto core = constrained_least_squares(p.V, p.w, p.ell);
    SolverReport report;
    report.iterations = 1;
    report.final_residual = core.kkt_residual;
    return finish(nm, p, core.a, 2.0, n, report);
}

ChristoffelSolution solve_lr(const NormalizedMap& nm, const DiscretizedMeasure& m, int n, double r,
                             const LrOptions& opts) {
    if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("solve_lr: r must be positive and finite");
    if (r == 2.0) return solve_l2(nm, m, n);
    {
        const auto pts = m.support_points();
        const auto w = m.support_weights();
        if (distinct_support_size(pts, w, n + 1) < n + 1) return annihilator(nm, m, n, r);
    }
    const auto p = make_problem(nm, m, n);
    const auto start = constrained_least_squares(p.V, p.w, p.ell);

    if (r >= 1.0) {
        auto res = irls(p, start.a, r, opts);
        SolverReport report;
        report.iterations = res.iterations;
        report.final_residual = res.last_change;
        report.converged = res.converged;
        auto sol = finish(nm, p, res.a, r, n, report);
        if (!res.converged && opts.throw_on_no_convergence)
            throw ChristoffelNoConvergence("IRLS did not converge for r = " + std::to_string(r) + ", n = " +
                                               std::to_string(n),
                                           sol);
        return sol;
    }

    // 0 < r < 1: multi-start from perturbations of the L2 solution that keep
    // the normalization.
    const Eigen::VectorXcd v = p.ell.conjugate();
    const double spread = 0.1 * start.a.norm() / std::sqrt(static_cast<double>(n + 1));
    IrlsResult best;
    int best_index = -1;
    bool all_converged = true;
    for (int s = 0; s < std::max(1, opts.starts); ++s) {
        Eigen::VectorXcd a0 = start.a;
        if (s > 0) {
            std::mt19937_64 rng(opts.seed + static_cast<std::uint64_t>(s));
            std::normal_distribution<double> gauss;
            Eigen::VectorXcd d(n + 1);
            for (int k = 0; k <= n; ++k) d[k] = cplx{gauss(rng), gauss(rng)} * spread;
            const cplx along = p.ell.transpose() * d;
            d -= v * (along / v.squaredNorm());
            a0 += d;
        }
        auto res = irls(p, a0, r, opts);
        all_converged = all_converged && res.converged;
        if (best_index < 0 || res.obj < best.obj) {
            best = std::move(res);
            best_index = s;
        }
    }
    SolverReport report;
    report.iterations = best.iterations;
    report.final_residual = best.last_change;
    report.converged = all_converged;
    report.nonconvex = true;
    report.multi_start_best = best_index;
    return finish(nm, p, best.a, r, n, report);
}

std::vector<WidomRow> widom_sweep(const NormalizedMap& nm, const DiscretizedMeasure& m, double r,
                                  std::span<const int> degrees, const LrOptions& opts) {
    const double S = entropy_of(nm, m);
    const double C = normalized_capacity(nm);
    std::vector<WidomRow> rows(degrees.size());
    std::vector<std::exception_ptr> errors(degrees.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        try {
            const int n = degrees[i];
            const auto sol = solve_lr(nm, m, n, r, opts);
            WidomRow row;
            row.n = n;
            row.lambda = sol.lambda;
            row.widom_r = widom_power(sol.lambda, C, n, r);
            row.lower_bound = S * std::exp(n * r * std::log(C));
            row.gap = row.widom_r - S;
            rows[i] = row;
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

std::vector<ContinuityRow> widom_continuity_probe(const ExteriorMap& map, const DiscretizedMeasure& m, double r, int n,
                                                  const ExtendedPoint& z0, std::span<const ExtendedPoint> path,
                                                  const LrOptions& opts) {
    auto widom_at = [&](const ExtendedPoint& zeta) {
        const NormalizedMap nm(map, zeta);
        return solve_lr(nm, m, n, r, opts).widom;
    };
    const double ref = widom_at(z0);
    std::vector<ContinuityRow> rows;
    for (const auto& zeta : path) {
        ContinuityRow row;
        row.zeta = zeta;
        row.widom = widom_at(zeta);
        row.difference = std::abs(row.widom - ref);
        rows.push_back(row);
    }
    return rows;
}

double level_curve_error(const NormalizedMap& nm, const SzegoData& sd, const ChristoffelSolution& sol, double level,
                         int samples) {
    if (!(level > 1.0)) throw InvalidArgument("level_curve_error: level must exceed 1");
    const double C = normalized_capacity(nm);
    const cplx target_z0 = log_outer(nm, sd, nm.z0());
    double worst = 0.0;
    for (int j = 0; j < samples; ++j) {
        const cplx w = std::polar(level, kTwoPi * j / samples);
        const cplx z = nm.base().psi(w);
        const cplx phi = nm.rotation() * w;
        const cplx scaled = sol.poly(z) * std::exp(-static_cast<double>(sol.n) * std::log(C * phi));
        const cplx target = std::exp((target_z0 - log_outer_from_phi(sd, phi)) / sol.r);
        worst = std::max(worst, std::abs(scaled - target));
    }
    return worst;
}

double boundary_error(const NormalizedMap& nm, const DiscretizedMeasure& m, const SzegoData& sd,
                      const ChristoffelSolution& sol) {
    const double C = normalized_capacity(nm);
    const cplx target_z0 = log_outer(nm, sd, nm.z0());
    const auto& grid = *m.grid;
    double total = 0.0;
    for (int j = 0; j < grid.size(); ++j) {
        const cplx phi = nm.rotation() * std::polar(1.0, grid.thetas()[j]);
        const cplx scaled = sol.poly(grid.nodes()[j]) * std::exp(-static_cast<double>(sol.n) * std::log(C * phi));
        const cplx target = std::exp((target_z0 - log_outer_from_phi(sd, phi)) / sol.r);
        total += m.boundary_weights[j] * std::pow(std::abs(scaled - target), sol.r);
    }
    return total;
}

}  // namespace extremal
