#pragma once

// Semiclassical Berry phase of the spin eigenstates |+-(x, y)> along planar paths.

#include <array>
#include <vector>

#include "cisim/models.hpp"

namespace cisim {

struct PlanarPath {
    std::vector<std::array<double, 2>> vertices;
    bool closed = false;

    /// Number of segments, counting the closing segment of a closed path.
    int segments() const;
    std::array<double, 2> segment_start(int k) const { return vertices[static_cast<std::size_t>(k)]; }
    std::array<double, 2> segment_end(int k) const;

    PlanarPath reversed() const;
    /// Splits every segment into `factor` equal pieces.
    PlanarPath refined(int factor) const;
};

/// Polygon approximating a circle arc from angle theta0 to theta1 (counterclockwise when theta1 > theta0).
PlanarPath arc_path(double cx, double cy, double radius, double theta0, double theta1, int segments, bool closed = false);
/// Full counterclockwise circle, closed.
PlanarPath circle_path(double cx, double cy, double radius, int segments);
/// Upper arc (cos t + eps, sin t) for t from pi down to 0, closed by the mirror-image lower arc.
PlanarPath shifted_loop(double eps, int segments_per_arc);

/// Exact per-segment antiderivative: -1/2 times the signed angle swept about the origin.
/// The same value is returned for both branches.
double berry_phase_line_integral(const PlanarPath& path, Branch branch);

/// -Im sum log <psi(r_k)|psi(r_{k+1})> over the path using spin_eigenstate.
double connection_numeric(const PlanarPath& path, Branch branch);

/// Net signed angle swept about the origin divided by 2 pi.
double winding_number(const PlanarPath& path);

/// Half the solid angle of the cone traced by the spin with splitting Delta: pi (1 - Delta / sqrt(Omega^2 + Delta^2)).
double solid_angle_phase(const ModelParams& p);

}  // namespace cisim
