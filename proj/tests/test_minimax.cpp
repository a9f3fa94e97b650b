#include <doctest.h>

#include <array>
#include <cmath>
#include <memory>

#include "extremal/minimax.hpp"

using namespace extremal;

namespace {

std::shared_ptr<const BoundaryGrid> grid_of(const ExteriorMap& map, int M) {
    return std::make_shared<const BoundaryGrid>(map, M);
}

double coeff_distance(const PolynomialC& a, const PolynomialC& b) {
    const auto ma = a.to_monomial(), mb = b.to_monomial();
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < ma.coeffs.size(); ++k) {
        num += std::norm(ma.coeffs[k] - mb.coeffs[k]);
        den += std::norm(mb.coeffs[k]);
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("disk closed forms") {
    const auto disk = ExteriorMap::disk(1.0);
    for (int n : {1, 4, 10}) {
        const auto grid = grid_of(disk, grid_size_for_degree(n) * 4);
        const auto sol = lawson_solve(NormalizedMap(disk, cplx{2.0}), grid, DensitySpec::constant(1.0), {}, n);
        CHECK(std::abs(sol.t_value * std::pow(2.0, n) - 1.0) < 1e-3);
        CHECK(std::abs(sol.widom_inf - 1.0) < 1e-3);
        PolynomialC target{Basis::Monomial, std::vector<cplx>(n + 1, 0.0)};
        target.coeffs[n] = std::pow(0.5, n);
        CHECK(coeff_distance(sol.poly, target) < 5e-3);
        CHECK_FALSE(sol.stalled);
        CHECK(sol.gap_rel <= 1e-3);

        const auto cheb = lawson_solve(NormalizedMap(disk, ExtendedPoint::infinity()), grid,
                                       DensitySpec::constant(1.0), {}, n);
        CHECK(cheb.t_value == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("ellipse n = 2 against a coefficient grid search") {
    const auto e = ExteriorMap::ellipse(1.0, 0.25);
    const auto grid = grid_of(e, 64);
    const auto sol = lawson_solve(NormalizedMap(e, ExtendedPoint::infinity()), grid, DensitySpec::constant(1.0), {}, 2,
                                  {.tol = 1e-6});
    // max_j |z_j^2 + b z_j + c| over complex b, c
    const auto& z = grid->nodes();
    auto obj = [&](const std::array<double, 4>& x) {
        double worst = 0.0;
        for (const auto& p : z) worst = std::max(worst, std::abs(p * p + cplx{x[0], x[1]} * p + cplx{x[2], x[3]}));
        return worst;
    };
    std::array<double, 4> best{0.0, 0.0, 0.0, 0.0};
    double best_val = obj(best), half = 1.0;
    for (int level = 0; level < 30; ++level) {
        const auto centre = best;
        for (int a = -4; a <= 4; ++a)
            for (int b = -4; b <= 4; ++b)
                for (int c = -4; c <= 4; ++c)
                    for (int d = -4; d <= 4; ++d) {
                        const std::array<double, 4> x{centre[0] + a * half / 4, centre[1] + b * half / 4,
                                                      centre[2] + c * half / 4, centre[3] + d * half / 4};
                        const double v = obj(x);
                        if (v < best_val) {
                            best_val = v;
                            best = x;
                        }
                    }
        half *= 0.5;
    }
    CHECK(sol.t_value == doctest::Approx(best_val).epsilon(1e-3));
    CHECK(sol.t_value >= best_val * (1.0 - 1e-9));
}

TEST_CASE("duality certificate") {
    const auto e = ExteriorMap::ellipse(1.0, 0.25);
    const auto grid = grid_of(e, 512);
    const NormalizedMap nm(e, cplx{2.5});

    SUBCASE("first iterate obeys weak duality") {
        const auto first = lawson_solve(nm, grid, DensitySpec::exp_trig({0.2}), {}, 8, {.max_iterations = 0});
        const auto [lower, upper] = duality_gap_certificate(first.final_state);
        CHECK(lower <= upper);
        CHECK(lower == first.final_state.dual);
        CHECK(upper == first.final_state.primal);
    }
    SUBCASE("bracket holds for a weight with zeros") {
        const auto rho = DensitySpec::vanishing(e.psi(std::polar(1.0, 1.0)), 2.0);
        const auto rough = lawson_solve(nm, grid, rho, {}, 6);
        const auto fine = lawson_solve(nm, grid, rho, {}, 6, {.tol = 1e-8, .max_iterations = 20000});
        const auto [lower, upper] = duality_gap_certificate(rough.final_state);
        CHECK(rough.dual <= fine.t_value * (1.0 + 1e-12));
        CHECK(fine.dual <= rough.t_value * (1.0 + 1e-12));
        CHECK(lower <= upper);
    }
}

TEST_CASE("converged solutions") {
    const auto e = ExteriorMap::ellipse(1.0, 0.25);
    const auto grid = grid_of(e, 512);
    const auto rho = DensitySpec::exp_trig({0.2});
    for (ExtendedPoint z0 : {ExtendedPoint::infinity(), ExtendedPoint(cplx{2.5})}) {
        const NormalizedMap nm(e, z0);
        const double S = entropy(nm, *grid, rho);
        for (int n : {3, 12, 24}) {
            const auto sol = lawson_solve(nm, grid, rho, {}, n);
            REQUIRE_FALSE(sol.stalled);
            CHECK(sol.gap_rel <= 1e-3);
            CHECK(sol.dual <= sol.t_value);
            CHECK(sol.dual >= S * std::pow(normalized_capacity(nm), n) * (1.0 - 2.0 * sol.gap_rel));
            CHECK(sol.extreme_points.size() >= static_cast<std::size_t>(n + 1));
            for (double v : sol.extreme_values) CHECK(v >= 0.99 * sol.t_value);
            double mass = 0.0;
            for (double x : sol.opm) {
                CHECK(x >= 0.0);
                mass += x;
            }
            CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(sol.offgrid_inflation >= 1.0);
        }
    }
}

TEST_CASE("scale equivariance and uniqueness") {
    const auto e = ExteriorMap::ellipse(1.0, 0.25);
    const auto grid = grid_of(e, 512);
    const NormalizedMap nm(e, cplx{2.5});
    const auto rho = DensitySpec::exp_trig({0.2});
    const auto a = lawson_solve(nm, grid, rho, {}, 10);
    const auto b = lawson_solve(nm, grid, rho.scaled(5.0), {}, 10);
    CHECK(b.t_value == doctest::Approx(5.0 * a.t_value).epsilon(1e-12));
    CHECK(coeff_distance(a.poly, b.poly) < 1e-12);

    LawsonOptions harmonic;
    harmonic.start = LawsonOptions::Start::Harmonic;
    const auto c = lawson_solve(nm, grid, rho, {}, 10, harmonic);
    CHECK(coeff_distance(a.poly, c.poly) <= 1e-3);
}

TEST_CASE("optimal prediction measures approach harmonic measure") {
    const auto disk = ExteriorMap::disk(1.0);
    const auto dgrid = grid_of(disk, 512);
    const NormalizedMap dnm(disk, ExtendedPoint::infinity());
    const auto uniform = lawson_solve(dnm, dgrid, DensitySpec::constant(1.0), {}, 4);
    CHECK(opm_weakstar_distance(uniform, dnm, *dgrid) < 1e-12);

    const auto e = ExteriorMap::ellipse(1.0, 0.25);
    const auto grid = grid_of(e, 512);
    const NormalizedMap nm(e, cplx{2.5});
    const LawsonOptions tight{.tol = 1e-9, .max_iterations = 20000};
    const auto s8 = lawson_solve(nm, grid, DensitySpec::exp_trig({0.2}), {}, 8, tight);
    const auto s32 = lawson_solve(nm, grid, DensitySpec::exp_trig({0.2}), {}, 32, tight);
    CHECK(opm_weakstar_distance(s32, nm, *grid) < opm_weakstar_distance(s8, nm, *grid));
}

TEST_CASE("residual sweep limits") {
    const auto disk = ExteriorMap::disk(1.0);
    const auto grid = grid_of(disk, 512);
    const NormalizedMap nm(disk, cplx{2.0});
    const std::vector<int> degrees{4, 16, 31};
    const auto rows = residual_widom_sweep(nm, grid, DensitySpec::abs_linear(2.0), degrees);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].S == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(std::abs(rows[2].widom_inf / 1.5 - 1.0) < 3e-2);
    for (const auto& row : rows) CHECK(row.t >= row.lower_bound * (1.0 - 1e-9));

    const auto e = ExteriorMap::ellipse(1.0, 0.25);
    const auto egrid = grid_of(e, 1024);
    const NormalizedMap enm(e, ExtendedPoint::infinity());
    const std::vector<int> ns{10, 40};
    const auto quarter = residual_widom_sweep(enm, egrid, DensitySpec::zero_on_arc(0.0, kPi / 2), ns);
    CHECK(quarter[0].S == 0.0);
    CHECK(std::isnan(quarter[0].level_error));
    CHECK(quarter[1].widom_inf <= 0.5 * quarter[0].widom_inf);
}

TEST_CASE("Ahlfors problem") {
    const auto disk = ExteriorMap::disk(1.0);
    const auto grid = grid_of(disk, 1024);
    const NormalizedMap nm(disk, cplx{2.0});
    const auto a1 = ahlfors_solve(nm, grid, 1);
    CHECK(a1.A == doctest::Approx(3.0).epsilon(1e-3));
    const auto a32 = ahlfors_solve(nm, grid, 32);
    CHECK(std::abs(std::pow(2.0, 32) * a32.A / 3.0 - 1.0) <= 3e-2);
    for (const auto& sol : {a1, a32}) {
        CHECK(std::abs(sol.Q(2.0)) < 1e-12);
        CHECK(std::abs(sol.Q.derivative(2.0) - 1.0) < 1e-12);
    }

    const auto lim = ahlfors_limit_closed_form(disk, 2.0);
    CHECK(lim.scaled_limit == doctest::Approx(3.0));
    CHECK(lim.entropy_limit == doctest::Approx(1.5));
    CHECK(std::abs(lim.limit_function(2.0)) < 1e-14);
    CHECK(ahlfors_limit_closed_form(ExteriorMap::disk(2.0), 6.0).entropy_limit == doctest::Approx(16.0 / 3.0));
    const double near = ahlfors_limit_closed_form(disk, 1.0 + 1e-6).scaled_limit;
    CHECK(near < 1e-5);
    CHECK_THROWS_AS(ahlfors_solve(NormalizedMap(disk, ExtendedPoint::infinity()), grid, 3), InvalidArgument);
}

TEST_CASE("input validation") {
    const auto disk = ExteriorMap::disk(1.0);
    const auto grid = grid_of(disk, 64);
    const NormalizedMap nm(disk, cplx{2.0});
    CHECK_THROWS_AS(lawson_solve(nm, grid, DensitySpec::constant(1.0), {}, 5), DegreeTooLargeForGrid);
    std::vector<double> sparse(64, 0.0);
    sparse[0] = sparse[20] = 1.0;
    CHECK_THROWS_AS(lawson_solve(nm, grid, DensitySpec::custom(sparse), {}, 3), RhoTooSparse);
}

TEST_CASE("merged extreme points") {
    const std::vector<double> v{1.0, 0.999, 0.2, 0.1, 0.995, 0.3, 0.0, 0.0, 0.2, 1.0};
    const auto idx = merged_extreme_points(v, 1.0, 0.99, 1);
    // nodes 9 and 0 are circular neighbours, 1 is within radius of 0
    CHECK(idx.size() == 2);
}
