#include "extremal/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "extremal/kernels.hpp"

namespace extremal {

namespace {

struct Eval {
    Eigen::VectorXcd a;
    double dual = 0.0;
    double primal = 0.0;
    Eigen::VectorXcd values;
};

Eval evaluate(const Eigen::MatrixXcd& V, std::span<const double> rho, const Eigen::VectorXcd& ell,
              const std::vector<double>& nu) {
    std::vector<double> w(nu.size());
    for (std::size_t j = 0; j < nu.size(); ++j) w[j] = rho[j] * rho[j] * nu[j];
    Eval e;
    e.a = constrained_least_squares(V, w, ell).a;
    e.values = V * e.a;
    e.dual = std::sqrt(kernels::weighted_power_sum(e.values, w, 2.0));
    e.primal = kernels::max_weighted_abs(e.values, rho).first;
    if (e.dual > e.primal * (1.0 + 1e-12))
        throw std::logic_error("Lawson: weak duality violated (dual " + std::to_string(e.dual) + " > primal " +
                               std::to_string(e.primal) + ")");
    return e;
}

PolynomialC wrap(const NormalizedMap& nm, const Eigen::VectorXcd& a) {
    PolynomialC poly;
    poly.basis = Basis::Faber;
    poly.map = std::make_shared<const ExteriorMap>(nm.base());
    poly.coeffs.assign(a.data(), a.data() + a.size());
    if (nm.z0().is_infinite()) {
        poly.normalization = Normalization::Monic;
    } else {
        poly.normalization = Normalization::Point;
        poly.z0 = nm.z0().value();
    }
    return poly;
}

void normalize(std::vector<double>& nu) {
    double s = 0.0;
    for (double x : nu) s += x;
    for (double& x : nu) x /= s;
}

}  // namespace

ResidualSolution lawson_on_points(const NormalizedMap& nm, std::span<const cplx> points, std::span<const double> rho,
                                  int n, const LawsonOptions& opts, std::span<const double> nu0) {
    if (n < 0) throw InvalidArgument("lawson: degree must be non-negative");
    if (points.size() != rho.size()) throw InvalidArgument("lawson: point/weight size mismatch");
    int positive = 0;
    for (double x : rho) {
        if (!(x >= 0.0)) throw InvalidArgument("lawson: rho must be nonnegative");
        if (x > 0.0) ++positive;
    }
    if (positive < n + 1)
        throw RhoTooSparse("rho is positive on " + std::to_string(positive) + " points, degree " + std::to_string(n) +
                           " needs " + std::to_string(n + 1));

    const Eigen::MatrixXcd V = kernels::faber_basis(nm.base(), points, n);
    const Eigen::VectorXcd ell = normalization_functional(nm, n);

    if (!nu0.empty() && nu0.size() != points.size()) throw InvalidArgument("lawson: initial measure size mismatch");
    std::vector<double> nu(points.size(), 0.0);
    for (std::size_t j = 0; j < nu.size(); ++j)
        if (rho[j] > 0.0) nu[j] = nu0.empty() ? 1.0 : nu0[j];
    normalize(nu);

    Eval cur = evaluate(V, rho, ell, nu);
    Eval best = cur;
    double lower = cur.dual;
    double gamma = 1.0;
    int iter = 0;
    bool stalled = false;
    auto gap_rel = [&] { return (best.primal - lower) / best.primal; };

    while (gap_rel() > opts.tol) {
        if (iter >= opts.max_iterations) {
            stalled = true;
            break;
        }
        bool accepted = false;
        std::vector<double> next(nu.size());
        while (gamma >= 1e-12) {
            for (std::size_t j = 0; j < nu.size(); ++j) {
                const double e = rho[j] * std::abs(cur.values[static_cast<Eigen::Index>(j)]);
                next[j] = nu[j] * std::pow(e / cur.primal, gamma);
            }
            normalize(next);
            Eval cand = evaluate(V, rho, ell, next);
            // Changes below rounding level count as non-decreasing.
            if (cand.dual >= cur.dual * (1.0 - 1e-13)) {
                nu = std::move(next);
                cur = std::move(cand);
                accepted = true;
                gamma = std::min(1.0, 2.0 * gamma);
                break;
            }
            gamma *= 0.5;
        }
        ++iter;
        if (!accepted) {
            stalled = true;
            break;
        }
        if (cur.primal < best.primal) best = cur;
        lower = std::max(lower, cur.dual);
    }

    ResidualSolution sol;
    sol.n = n;
    sol.poly = wrap(nm, best.a);
    sol.t_value = best.primal;
    sol.dual = lower;
    sol.gap_rel = gap_rel();
    sol.widom_inf = std::exp(std::log(sol.t_value) - n * std::log(normalized_capacity(nm)));
    sol.opm = nu;
    sol.iterations = iter;
    sol.stalled = stalled;
    sol.final_state.nu = nu;
    sol.final_state.poly = wrap(nm, cur.a);
    sol.final_state.dual = cur.dual;
    sol.final_state.primal = cur.primal;
    sol.final_state.gap = cur.primal - cur.dual;
    sol.final_state.iter = iter;
    return sol;
}

std::vector<int> merged_extreme_points(std::span<const double> values, double t, double threshold, int radius,
                                       double slack) {
    const int M = static_cast<int>(values.size());
    std::vector<int> candidates;
    for (int j = 0; j < M; ++j) {
        const double v = values[j];
        if (v < threshold * t) continue;
        double local = v;
        for (int d = -radius; d <= radius; ++d) local = std::max(local, values[((j + d) % M + M) % M]);
        if (v >= local - slack * t) candidates.push_back(j);
    }
    std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) { return values[a] > values[b]; });
    std::vector<int> kept;
    for (int j : candidates) {
        const bool near = std::any_of(kept.begin(), kept.end(), [&](int k) {
            const int d = std::abs(j - k);
            return std::min(d, M - d) <= radius;
        });
        if (!near) kept.push_back(j);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

ResidualSolution lawson_solve(const NormalizedMap& nm, std::shared_ptr<const BoundaryGrid> grid,
                              const DensitySpec& rho, const std::vector<Atom>& atoms, int n,
                              const LawsonOptions& opts) {
    if (!grid) throw InvalidArgument("lawson_solve: null grid");
    if (!(nm.base() == grid->map())) throw InvalidArgument("lawson_solve: grid belongs to a different map");
    if (n > grid->max_degree())
        throw DegreeTooLargeForGrid("degree " + std::to_string(n) + " exceeds grid capacity " +
                                    std::to_string(grid->max_degree()));
    std::vector<cplx> pts(grid->nodes().begin(), grid->nodes().end());
    auto rho_values = rho.on_grid(*grid);
    for (const auto& a : atoms) {
        if (!in_region(nm.base(), a.z)) throw AtomOutsideRegion("Lawson support atom lies outside the region");
        const auto v = rho.at_point(a.z);
        if (!v) throw InvalidArgument("weight kind " + rho.kind_name() + " cannot be evaluated at atoms");
        pts.push_back(a.z);
        rho_values.push_back(*v);
    }

    std::vector<double> nu0;
    if (opts.start == LawsonOptions::Start::Harmonic) {
        nu0 = harmonic_weights(nm, *grid);
        nu0.resize(pts.size(), 1.0 / grid->size());
    }
    auto sol = lawson_on_points(nm, pts, rho_values, n, opts, nu0);

    const int M = grid->size();
    std::vector<double> values(M);
    for (int j = 0; j < M; ++j) values[j] = rho_values[j] * std::abs(sol.poly(grid->nodes()[j]));
    // Merge radius 2 pi * 3 / M in the circle parameter. A node counts as a
    // local maximum up to the certified accuracy of the solution, so flat
    // stretches of rho |T| are not reduced to a single point by tiny tilts.
    const auto idx =
        merged_extreme_points(values, sol.t_value, opts.extreme_threshold, 3, std::max(sol.gap_rel, 1e-12));
    for (int j : idx) {
        sol.extreme_points.push_back(grid->thetas()[j]);
        sol.extreme_values.push_back(values[j]);
    }
    const double x = kPi * n * (grid->map().tail_length() + 1) / M;
    sol.offgrid_inflation = x < kPi / 2 ? 1.0 / std::sqrt(std::cos(x)) : std::numeric_limits<double>::infinity();
    return sol;
}

std::pair<double, double> duality_gap_certificate(const LawsonState& state) { return {state.dual, state.primal}; }

double opm_weakstar_distance(const ResidualSolution& sol, const NormalizedMap& nm, const BoundaryGrid& grid) {
    const auto h = harmonic_weights(nm, grid);
    double a = 0.0, b = 0.0, worst = 0.0;
    for (int j = 0; j < grid.size(); ++j) {
        a += sol.opm[j];
        b += h[j];
        worst = std::max(worst, std::abs(a - b));
    }
    return worst;
}

double residual_level_error(const NormalizedMap& nm, const SzegoData& sd, const PolynomialC& poly, int n,
                            double level, int samples) {
    const double C = normalized_capacity(nm);
    const cplx log_r0 = log_outer(nm, sd, nm.z0());
    double worst = 0.0;
    for (int j = 0; j < samples; ++j) {
        const cplx w = std::polar(level, kTwoPi * j / samples);
        const cplx phi = nm.rotation() * w;
        const cplx scaled = poly(nm.base().psi(w)) * std::exp(-static_cast<double>(n) * std::log(C * phi));
        worst = std::max(worst, std::abs(scaled - std::exp(log_r0 - log_outer_from_phi(sd, phi))));
    }
    return worst;
}

std::vector<ResidualRow> residual_widom_sweep(const NormalizedMap& nm, std::shared_ptr<const BoundaryGrid> grid,
                                              const DensitySpec& rho, std::span<const int> degrees,
                                              const LawsonOptions& opts) {
    const auto sd = make_szego(nm, *grid, rho);
    const double C = normalized_capacity(nm);
    std::vector<ResidualRow> rows(degrees.size());
    std::vector<std::exception_ptr> errors(degrees.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        try {
            const int n = degrees[i];
            const auto sol = lawson_solve(nm, grid, rho, {}, n, opts);
            ResidualRow row;
            row.n = n;
            row.t = sol.t_value;
            row.widom_inf = sol.widom_inf;
            row.S = sd.S_value;
            row.lower_bound = sd.S_value * std::exp(n * std::log(C));
            row.gap_rel = sol.gap_rel;
            row.level_error = sd.szego_condition ? residual_level_error(nm, sd, sol.poly, n)
                                                 : std::numeric_limits<double>::quiet_NaN();
            row.extreme_count = static_cast<int>(sol.extreme_points.size());
            row.ks = opm_weakstar_distance(sol, nm, *grid);
            row.stalled = sol.stalled;
            rows[i] = row;
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

AhlforsSolution ahlfors_solve(const NormalizedMap& nm, std::shared_ptr<const BoundaryGrid> grid, int n,
                              const LawsonOptions& opts) {
    if (nm.z0().is_infinite()) throw InvalidArgument("ahlfors_solve: z0 must be finite");
    if (n < 1) throw InvalidArgument("ahlfors_solve: n must be at least 1");
    const cplx z0 = nm.z0().value();
    AhlforsSolution out;
    out.residual = lawson_solve(nm, std::move(grid), DensitySpec::abs_linear(z0), {}, n - 1, opts);
    out.A = out.residual.t_value;
    const auto t = out.residual.poly.to_monomial();
    out.Q.basis = Basis::Monomial;
    out.Q.coeffs.assign(n + 1, cplx{0.0, 0.0});
    for (int k = 0; k <= n - 1; ++k) {
        out.Q.coeffs[k + 1] += t.coeffs[k];
        out.Q.coeffs[k] -= z0 * t.coeffs[k];
    }
    return out;
}

AhlforsLimit ahlfors_limit_closed_form(const ExteriorMap& map, cplx z0) {
    const cplx p0 = invert_phi(map, z0);
    const double mod = std::abs(p0);
    if (!(mod > 1.0)) throw InsideRegion("ahlfors_limit_closed_form: z0 must lie outside K");
    const double dphi = std::abs(phi_derivative(map, z0));
    AhlforsLimit lim;
    lim.scaled_limit = mod * mod - 1.0;
    lim.entropy_limit = lim.scaled_limit / (dphi * mod);
    lim.limit_function = [map, p0](cplx z) {
        const cplx p = invert_phi(map, z);
        return (p - p0) * (std::norm(p0) - 1.0) / (std::conj(p0) * p - 1.0);
    };
    return lim;
}

}  // namespace extremal
