#pragma once

// Scalar metrics on position distributions: half-plane ratios, distances, centroids.

#include <vector>

#include "cisim/tomography.hpp"

namespace cisim {

struct HalfPlaneRatio {
    double ratio = 1.0;
    double numerator = 0.0;    ///< mass on the side {x cos(theta) + y sin(theta) < 0}
    double denominator = 0.0;  ///< mass on the other side, before flooring
    bool floored = false;      ///< denominator was raised to kRatioFloor
    double sigma = 0.0;        ///< propagated shot-noise standard deviation (0 without statistics)
};

inline constexpr double kRatioFloor = 1e-9;

/// Ratio of the mass on the negative side of the line through the origin at angle theta
/// from vertical to the mass on the positive side. At theta = 0 the numerator is x < 0.
/// Cells straddling the line are split by exact area fraction.
HalfPlaneRatio half_plane_ratio_report(const SpatialGrid& dist, double theta);
double half_plane_ratio(const SpatialGrid& dist, double theta);

struct RatioCurve {
    std::vector<double> theta;
    std::vector<double> ratio;
    std::vector<double> sigma;
};

/// half_plane_ratio on n_angles uniform angles spanning [0, pi/2].
RatioCurve ratio_curve(const SpatialGrid& dist, int n_angles);

enum class DistanceMetric { L1, L2 };

/// Distance between two grids after normalizing each to unit integral.
double distribution_distance(const SpatialGrid& a, const SpatialGrid& b, DistanceMetric metric);

/// Polar angle of the mass centroid (sum P r).
double angular_centroid(const SpatialGrid& dist);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace cisim
