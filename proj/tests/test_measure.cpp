#include <doctest.h>

#include <cmath>
#include <memory>

#include "extremal/measure.hpp"

using namespace extremal;

namespace {

std::shared_ptr<const BoundaryGrid> grid_of(const ExteriorMap& map, int M) {
    return std::make_shared<const BoundaryGrid>(map, M);
}

double sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

}  // namespace

TEST_CASE("build_measure") {
    const auto disk = ExteriorMap::disk(1.0);
    const auto grid = grid_of(disk, 64);
    const NormalizedMap inf(disk, ExtendedPoint::infinity());

    SUBCASE("constant density gives harmonic weights") {
        const auto m = build_measure(inf, grid, DensitySpec::constant(1.0));
        CHECK(m.boundary_weights == harmonic_weights(inf, *grid));
        CHECK(m.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("atoms add their mass") {
        const auto m = build_measure(inf, grid, DensitySpec::constant(1.0), {{0.0, 0.3}});
        CHECK(m.total_mass() == doctest::Approx(1.3).epsilon(1e-14));
        CHECK(m.support_size() == 65);
        CHECK(m.support_points().back() == cplx{0.0});
    }
    SUBCASE("pointwise product with the Poisson kernel") {
        const NormalizedMap nm(disk, cplx{2.0});
        const auto m = build_measure(nm, grid, DensitySpec::abs_linear(2.0));
        for (int j = 0; j < grid->size(); j += 7) {
            const cplx z = std::polar(1.0, grid->thetas()[j]);
            const double poisson = 0.75 / std::norm(1.0 - 0.5 * z);
            CHECK(m.boundary_weights[j] == doctest::Approx(std::abs(z - 2.0) * poisson / 64).epsilon(1e-12));
        }
    }
    SUBCASE("atoms must lie in the region") {
        CHECK_THROWS_AS(build_measure(inf, grid, DensitySpec::constant(1.0), {{2.0, 0.1}}), AtomOutsideRegion);
    }
}

TEST_CASE("entropy") {
    const auto disk = ExteriorMap::disk(1.0);
    const auto grid = grid_of(disk, 1024);

    SUBCASE("constant density") {
        for (cplx z0 : {cplx{2.0}, cplx{0.0, -1.7}})
            CHECK(entropy(NormalizedMap(disk, z0), *grid, DensitySpec::constant(1.0)) ==
                  doctest::Approx(1.0).epsilon(1e-13));
    }
    SUBCASE("|z - 2|^2 at infinity") {
        // midpoint rule on a different node set
        const int N = 3000;
        double s = 0.0;
        for (int k = 0; k < N; ++k) s += std::log(std::norm(std::polar(1.0, kTwoPi * (k + 0.5) / N) - 2.0));
        const double oracle = std::exp(s / N);
        CHECK(oracle == doctest::Approx(4.0).epsilon(1e-12));
        const NormalizedMap inf(disk, ExtendedPoint::infinity());
        CHECK(entropy(inf, *grid, DensitySpec::abs_linear_squared(2.0)) == doctest::Approx(oracle).epsilon(1e-12));
    }
    SUBCASE("|z - 2| seen from z0 = 2") {
        const int N = 3000;
        double s = 0.0;
        for (int k = 0; k < N; ++k) {
            const cplx z = std::polar(1.0, kTwoPi * (k + 0.5) / N);
            s += 3.0 / std::norm(z - 2.0) * std::log(std::abs(z - 2.0)) / N;
        }
        const double oracle = std::exp(s);
        CHECK(oracle == doctest::Approx(1.5).epsilon(1e-10));
        CHECK(entropy(NormalizedMap(disk, cplx{2.0}), *grid, DensitySpec::abs_linear(2.0)) ==
              doctest::Approx(oracle).epsilon(1e-10));
    }
    SUBCASE("Jensen, atoms and scaling") {
        const auto e = ExteriorMap::ellipse(1.0, 0.25);
        const auto g = grid_of(e, 512);
        const NormalizedMap nm(e, cplx{2.5});
        const auto f = DensitySpec::exp_trig({0.4, -0.1}, {0.2});
        const double S = entropy(nm, *g, f);
        const auto m = build_measure(nm, g, f);
        CHECK(S < sum(m.boundary_weights));
        CHECK(entropy_of(nm, build_measure(nm, g, f, {{0.0, 0.3}})) == doctest::Approx(S).epsilon(1e-14));
        CHECK(entropy(nm, *g, f.scaled(3.0)) == doctest::Approx(3.0 * S).epsilon(1e-13));
        CHECK(entropy(nm, *g, DensitySpec::constant(2.0)) == doctest::Approx(2.0).epsilon(1e-13));
    }
    SUBCASE("non-Szego densities have zero entropy") {
        const auto e = ExteriorMap::ellipse(1.0, 0.25);
        const auto g = grid_of(e, 512);
        const NormalizedMap nm(e, ExtendedPoint::infinity());
        CHECK(entropy(nm, *g, DensitySpec::zero_on_arc(0.0, kPi / 2)) == 0.0);
        CHECK(entropy(nm, *g, DensitySpec::vanishing(e.psi(1.0), 2.0)) > 0.0);
    }
}

TEST_CASE("pushforward to the circle") {
    const auto e = ExteriorMap::ellipse(1.0, 0.25);
    const auto grid = grid_of(e, 128);
    for (ExtendedPoint z0 : {ExtendedPoint::infinity(), ExtendedPoint(cplx{0.5, 2.0})}) {
        const NormalizedMap nm(e, z0);
        const auto m = build_measure(nm, grid, DensitySpec::exp_trig({0.3}), {{e.psi(1.0), 0.2}});
        const auto c = pushforward_to_circle(nm, m);
        CHECK(c.total_mass() == m.total_mass());
        CHECK(c.boundary_weights == m.boundary_weights);
        REQUIRE(c.atoms.size() == 1);
        CHECK(std::abs(c.atoms[0].z - std::polar(1.0, nm.alpha())) < 1e-9);
        CHECK(c.atoms[0].mass == 0.2);
        for (int j = 0; j < grid->size(); j += 9)
            CHECK(std::abs(c.grid->nodes()[j] - nm.rotation() * std::polar(1.0, grid->thetas()[j])) < 1e-14);
    }
    const NormalizedMap inf(e, ExtendedPoint::infinity());
    const auto uniform = pushforward_to_circle(inf, build_measure(inf, grid, DensitySpec::constant(1.0)));
    for (double w : uniform.boundary_weights) CHECK(w == doctest::Approx(1.0 / 128).epsilon(1e-13));
    CHECK_THROWS_AS(pushforward_to_circle(inf, build_measure(inf, grid, DensitySpec::constant(1.0), {{0.0, 0.3}})),
                    InteriorAtomNotPushable);
}
