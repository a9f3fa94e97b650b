#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include <Eigen/Dense>

#include "extremal/christoffel.hpp"

using namespace extremal;

namespace {

std::shared_ptr<const BoundaryGrid> grid_of(const ExteriorMap& map, int M) {
    return std::make_shared<const BoundaryGrid>(map, M);
}

double integral(const DiscretizedMeasure& m, const PolynomialC& p, double r) {
    const auto pts = m.support_points();
    const auto w = m.support_weights();
    double s = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) s += w[i] * std::pow(std::abs(p(pts[i])), r);
    return s;
}

// min sum w |z + c|^r over complex c, by successively refined grid search
double grid_search_monic1(const std::vector<cplx>& z, const std::vector<double>& w, double r) {
    auto obj = [&](cplx c) {
        double s = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) s += w[i] * std::pow(std::abs(z[i] + c), r);
        return s;
    };
    cplx best{0.0, 0.0};
    double half = 2.0, best_val = obj(best);
    for (int level = 0; level < 40; ++level) {
        const cplx centre = best;
        for (int a = -20; a <= 20; ++a)
            for (int b = -20; b <= 20; ++b) {
                const cplx c = centre + cplx{a * half / 20, b * half / 20};
                const double v = obj(c);
                if (v < best_val) {
                    best_val = v;
                    best = c;
                }
            }
        half *= 0.25;
    }
    return best_val;
}

}  // namespace

TEST_CASE("disk at infinity with uniform measure") {
    const auto disk = ExteriorMap::disk(1.0);
    const NormalizedMap nm(disk, ExtendedPoint::infinity());
    const auto m = build_measure(nm, grid_of(disk, 512), DensitySpec::constant(1.0));
    for (double r : {0.5, 1.0, 2.0, 4.0}) {
        for (int n : {1, 4, 9}) {
            const auto sol = solve_lr(nm, m, n, r);
            CHECK(sol.lambda == doctest::Approx(1.0).epsilon(1e-6));
            CHECK(sol.widom == doctest::Approx(1.0).epsilon(1e-6));
            const auto mono = sol.poly.to_monomial();
            for (int k = 0; k < n; ++k) CHECK(std::abs(mono.coeffs[k]) < 1e-5);
            CHECK(std::abs(mono.coeffs[n] - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("disk with z0 = 2 against a direct monomial Gram solve") {
    const auto disk = ExteriorMap::disk(1.0);
    const NormalizedMap nm(disk, cplx{2.0});
    const auto grid = grid_of(disk, 256);
    const auto m = build_measure(nm, grid, DensitySpec::constant(1.0));
    for (int n = 0; n <= 3; ++n) {
        Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(n + 1, n + 1);
        for (int j = 0; j < grid->size(); ++j) {
            const cplx z = grid->nodes()[j];
            for (int a = 0; a <= n; ++a)
                for (int b = 0; b <= n; ++b) G(a, b) += m.boundary_weights[j] * std::conj(std::pow(z, a)) * std::pow(z, b);
        }
        Eigen::VectorXcd v(n + 1);
        for (int k = 0; k <= n; ++k) v[k] = std::pow(2.0, k);
        const double oracle = 1.0 / (v.adjoint() * G.ldlt().solve(v))(0).real();
        const auto sol = solve_l2(nm, m, n);
        CHECK(sol.lambda == doctest::Approx(oracle).epsilon(1e-10));
        CHECK(std::abs(sol.poly(2.0) - 1.0) < 1e-12);
    }
}

TEST_CASE("solver invariants") {
    const auto e = ExteriorMap::ellipse(1.0, 0.25);
    const auto grid = grid_of(e, 512);
    const auto f = DensitySpec::exp_trig({0.4}, {0.1});
    for (ExtendedPoint z0 : {ExtendedPoint::infinity(), ExtendedPoint(cplx{1.0, 1.5})}) {
        const NormalizedMap nm(e, z0);
        const auto m = build_measure(nm, grid, f, {{0.2, 0.3}});
        const double S = entropy(nm, *grid, f);
        const double C = normalized_capacity(nm);
        for (double r : {0.5, 1.0, 2.0, 4.0}) {
            for (int n : {1, 5, 12}) {
                const auto sol = solve_lr(nm, m, n, r);
                CHECK(integral(m, sol.poly, r) == doctest::Approx(sol.lambda).epsilon(1e-9));
                CHECK(sol.lambda >= S * std::pow(C, n * r) * (1.0 - 1e-9));
                CHECK(sol.widom == doctest::Approx(std::pow(sol.lambda, 1.0 / r) / std::pow(C, n)).epsilon(1e-12));
                if (z0.is_infinite()) CHECK(std::abs(sol.poly.leading_monomial_coefficient() - 1.0) < 1e-9);
                else CHECK(std::abs(sol.poly(z0.value()) - 1.0) < 1e-9);
                CHECK(sol.solver_report.nonconvex == (r < 1.0));
            }
        }
        const auto l2 = solve_l2(nm, m, 8);
        CHECK(l2.solver_report.final_residual <= kKktTolerance);
        CHECK(solve_lr(nm, m, 8, 2.0).lambda == doctest::Approx(l2.lambda).epsilon(1e-12));
    }
}

TEST_CASE("homogeneity under scaling the measure") {
    const auto e = ExteriorMap::ellipse(1.0, 0.25);
    const auto grid = grid_of(e, 256);
    const NormalizedMap nm(e, cplx{2.5});
    const auto f = DensitySpec::exp_trig({0.4});
    const auto m = build_measure(nm, grid, f);
    const auto m3 = build_measure(nm, grid, f.scaled(3.0));
    for (double r : {1.0, 2.0, 4.0}) {
        const double w = solve_lr(nm, m, 6, r).widom;
        CHECK(solve_lr(nm, m3, 6, r).widom == doctest::Approx(std::pow(3.0, 1.0 / r) * w).epsilon(1e-9));
    }
}

TEST_CASE("interior atoms") {
    const auto disk = ExteriorMap::disk(1.0);
    const auto grid = grid_of(disk, 512);
    const NormalizedMap nm(disk, ExtendedPoint::infinity());
    const auto plain = build_measure(nm, grid, DensitySpec::constant(1.0));
    const auto atom = build_measure(nm, grid, DensitySpec::constant(1.0), {{0.5, 0.3}});
    for (int n : {1, 2, 3}) CHECK(solve_l2(nm, atom, n).lambda > solve_l2(nm, plain, n).lambda + 1e-6);
    CHECK(solve_l2(nm, atom, 30).widom == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("finitely supported measures") {
    const auto disk = ExteriorMap::disk(1.0);
    const auto grid = grid_of(disk, 64);
    const NormalizedMap nm(disk, cplx{2.0});
    const std::vector<Atom> atoms{{0.1, 1.0}, {cplx{0.0, 0.5}, 2.0}, {-0.4, 0.5}};
    const auto m = measure_from_weights(grid, std::vector<double>(64, 0.0), atoms);
    CHECK(distinct_support_size(m.support_points(), m.support_weights()) == 3);
    const auto sol = solve_l2(nm, m, 3);
    CHECK(sol.lambda == 0.0);
    CHECK(sol.solver_report.exactly_zero);
    CHECK(std::abs(sol.poly(2.0) - 1.0) < 1e-12);
    for (const auto& a : atoms) CHECK(std::abs(sol.poly(a.z)) < 1e-12);
    CHECK(solve_l2(nm, m, 2).lambda > 0.0);
}

TEST_CASE("tiny-degree grid-search oracle") {
    const auto disk = ExteriorMap::disk(1.0);
    const auto grid = grid_of(disk, 16);
    const NormalizedMap nm(disk, ExtendedPoint::infinity());
    const std::vector<cplx> z{{0.5, 0.1}, {-0.3, 0.6}, {0.0, -0.7}, {0.8, 0.0}, {-0.6, -0.3}};
    const std::vector<double> w{0.1, 0.3, 0.2, 0.25, 0.15};
    std::vector<Atom> atoms;
    for (int i = 0; i < 5; ++i) atoms.push_back({z[i], w[i]});
    const auto m = measure_from_weights(grid, std::vector<double>(16, 0.0), atoms);
    for (double r : {4.0, 1.0}) {
        const double oracle = grid_search_monic1(z, w, r);
        CHECK(solve_lr(nm, m, 1, r).lambda == doctest::Approx(oracle).epsilon(1e-6));
    }
}

TEST_CASE("widom sweep and continuity") {
    const auto disk = ExteriorMap::disk(1.0);
    const auto grid = grid_of(disk, 256);
    const auto m = build_measure(NormalizedMap(disk, cplx{2.0}), grid, DensitySpec::exp_trig({0.3}));

    const std::vector<int> degrees{1, 2, 3, 4};
    const NormalizedMap nm(disk, cplx{2.0});
    const auto rows = widom_sweep(nm, m, 2.0, degrees);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].n == degrees[i]);
        CHECK(rows[i].lambda == doctest::Approx(solve_l2(nm, m, degrees[i]).lambda).epsilon(1e-14));
        CHECK(rows[i].gap == doctest::Approx(rows[i].widom_r - rows[i].lower_bound / std::pow(0.5, 2 * rows[i].n)));
    }
    CHECK(widom_power(0.25, 0.5, 1, 2.0) == doctest::Approx(1.0));

    std::vector<ExtendedPoint> path;
    for (int k = 1; k <= 5; ++k) path.emplace_back(cplx{2.0 + std::pow(10.0, -k)});
    const auto probe = widom_continuity_probe(disk, m, 2.0, 3, cplx{2.0}, path);
    for (std::size_t k = 1; k < probe.size(); ++k) {
        CHECK(probe[k].difference < probe[k - 1].difference);
        CHECK(probe[k].difference / probe[k - 1].difference == doctest::Approx(0.1).epsilon(0.05));
    }

    std::vector<ExtendedPoint> far{cplx{1e3}};
    const auto at_inf = widom_continuity_probe(disk, m, 2.0, 3, ExtendedPoint::infinity(), far);
    const double monic = solve_l2(NormalizedMap(disk, ExtendedPoint::infinity()), m, 3).widom;
    CHECK(at_inf[0].difference < 1e-3 * monic);
}

TEST_CASE("strong asymptotics on the ellipse") {
    const auto e = ExteriorMap::ellipse(1.0, 0.25);
    const auto grid = grid_of(e, 1024);
    const auto f = DensitySpec::exp_trig({0.4});
    const NormalizedMap nm(e, cplx{2.5});
    const auto m = build_measure(nm, grid, f);
    const auto sd = make_szego(nm, *grid, f);
    for (double r : {1.0, 2.0}) {
        const auto s10 = solve_lr(nm, m, 10, r);
        const auto s30 = solve_lr(nm, m, 30, r);
        CHECK(level_curve_error(nm, sd, s30) < level_curve_error(nm, sd, s10));
        CHECK(level_curve_error(nm, sd, s30) < 5e-2);
        CHECK(boundary_error(nm, m, sd, s30) < 5e-2);
    }
}
