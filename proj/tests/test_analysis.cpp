#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <numeric>

#include "cisim/analysis.hpp"
#include "support/expect_error.hpp"

using namespace cisim;
using cisim::test::error_of;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

SpatialGrid gaussian_grid(const SpatialGridSpec& spec, double x0, double y0) {
    const Eigen::VectorXd axis = spec.axis();
    Eigen::MatrixXd v(spec.resolution, spec.resolution);
    for (int i = 0; i < spec.resolution; ++i)
        for (int j = 0; j < spec.resolution; ++j)
            v(i, j) = std::exp(-std::pow(axis[i] - x0, 2) - std::pow(axis[j] - y0, 2)) / kPi;
    return {spec, v, std::nullopt};
}

// Mass fraction of a unit-width Gaussian whose mean projects to m on the line normal.
double negative_side_ratio(double m) {
    const double below = 0.5 * std::erfc(m);
    return below / (1.0 - below);
}

}  // namespace

TEST_CASE("half-plane ratio of a displaced Gaussian") {
    const SpatialGridSpec spec{6.0, 401, 0.0};
    const double x0 = 0.4, y0 = -0.25;
    const auto g = gaussian_grid(spec, x0, y0);
    for (double theta : {0.0, 0.3, kPi / 4.0, 1.2, kPi / 2.0}) {
        const double m = x0 * std::cos(theta) + y0 * std::sin(theta);
        CHECK_THAT(half_plane_ratio(g, theta), WithinRel(negative_side_ratio(m), 2e-4));
    }
    const auto curve = ratio_curve(g, 5);
    REQUIRE(curve.theta.size() == 5u);
    CHECK_THAT(curve.theta.back(), WithinAbs(kPi / 2.0, 1e-15));
    CHECK_THAT(curve.ratio[0], WithinRel(negative_side_ratio(x0), 2e-4));
    for (double s : curve.sigma) CHECK(s == 0.0);
}

TEST_CASE("straddling cells are split exactly") {
    // A uniform grid is symmetric under the point reflection, so every line through the origin halves it.
    const SpatialGridSpec spec{1.0, 6, 0.0};
    const SpatialGrid flat{spec, Eigen::MatrixXd::Constant(6, 6, 1.0), std::nullopt};
    for (double theta : {0.0, 0.1, 0.77, 1.3})
        CHECK_THAT(half_plane_ratio(flat, theta), WithinAbs(1.0, 1e-12));

    // One occupied cell centred at (0.2, 0.2) with width 0.4 touches x < 0 only at theta where the line cuts it.
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(6, 6);
    v(3, 3) = 1.0;
    const SpatialGrid cell{spec, v, std::nullopt};
    const auto r = half_plane_ratio_report(cell, 0.0);
    CHECK(r.numerator == 0.0);
    CHECK_FALSE(r.floored);
    // At 3 pi / 4 the line x = y bisects the cell.
    CHECK_THAT(half_plane_ratio(cell, 3.0 * kPi / 4.0), WithinAbs(1.0, 1e-12));
}

TEST_CASE("empty denominator is floored and flagged") {
    const SpatialGridSpec spec{2.0, 21, 0.0};
    const auto g = gaussian_grid(spec, -1.0, 0.0);
    Eigen::MatrixXd v = g.values;
    v.bottomRows(11).setZero();  // x >= 0 half
    const SpatialGrid left{spec, v, std::nullopt};
    const auto r = half_plane_ratio_report(left, 0.0);
    CHECK(r.floored);
    CHECK(r.denominator == 0.0);
    CHECK_THAT(r.ratio, WithinRel(r.numerator / kRatioFloor, 1e-12));
}

TEST_CASE("distances between grids") {
    const SpatialGridSpec spec{5.0, 201, 0.0};
    const auto a = gaussian_grid(spec, 0.0, 0.0);
    CHECK(distribution_distance(a, a, DistanceMetric::L1) == 0.0);
    SpatialGrid scaled = a;
    scaled.values *= 3.0;
    CHECK(distribution_distance(a, scaled, DistanceMetric::L2) < 1e-14);

    // Two unit Gaussians one unit apart along x: L1 = 2 erf(1/2), up to the midpoint-rule error at the kink.
    const auto b = gaussian_grid(spec, 1.0, 0.0);
    CHECK_THAT(distribution_distance(a, b, DistanceMetric::L1), WithinRel(2.0 * std::erf(0.5), 1e-3));

    const auto other = gaussian_grid(SpatialGridSpec{5.0, 101, 0.0}, 0.0, 0.0);
    CHECK(error_of([&] { distribution_distance(a, other, DistanceMetric::L1); }) == ErrorCode::GridMismatch);
    SpatialGrid empty = a;
    empty.values.setZero();
    CHECK(error_of([&] { distribution_distance(a, empty, DistanceMetric::L1); }) == ErrorCode::EmptyDistribution);
}

TEST_CASE("angular centroid") {
    const SpatialGridSpec spec{5.0, 101, 0.0};
    for (double phi : {0.2, 2.0, -1.0})
        CHECK_THAT(angular_centroid(gaussian_grid(spec, std::cos(phi), std::sin(phi))), WithinAbs(phi, 1e-6));
}

TEST_CASE("Spearman rank correlation") {
    CHECK_THAT(spearman({1, 2, 3, 4}, {10, 20, 30, 40}), WithinAbs(1.0, 1e-15));
    CHECK_THAT(spearman({1, 2, 3, 4}, {4, 3, 2, 1}), WithinAbs(-1.0, 1e-15));
    // Ranks (1, 2.5, 2.5, 4) against (1, 3, 2, 4).
    CHECK_THAT(spearman({1, 2, 2, 3}, {1, 3, 2, 4}), WithinAbs(4.5 / std::sqrt(22.5), 1e-12));
    CHECK(error_of([] { spearman({1, 2}, {1}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("shot-noise sigma tracks the spread over seeds", "[slow]") {
    const ModeSpace space(12, 12);
    const auto rho = partial_trace_spin(SpinBosonState::coherent(space, {1.0, 0.0}, 0.3, 0.1));
    const KGrid grid{2.8, 25, 0.0};
    const SpatialGridSpec out{4.0, 61, 0.0};
    std::vector<double> ratios, sigmas;
    for (std::uint64_t seed = 1; seed <= 120; ++seed) {
        const auto r = half_plane_ratio_report(reconstruct(scan(rho, grid, 100, seed), out), 0.6);
        ratios.push_back(r.ratio);
        sigmas.push_back(r.sigma);
    }
    const double mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / ratios.size();
    double var = 0.0;
    for (double r : ratios) var += (r - mean) * (r - mean);
    const double spread = std::sqrt(var / (ratios.size() - 1));
    const double reported = std::accumulate(sigmas.begin(), sigmas.end(), 0.0) / sigmas.size();
    CHECK(reported > 0.0);
    CHECK_THAT(reported, WithinRel(spread, 0.25));
}
