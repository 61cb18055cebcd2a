#include "cisim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cisim {

namespace {

constexpr double kOriginRadius = 1e-9;

void check_path(const PlanarPath& path) {
    require(path.vertices.size() >= 2, ErrorCode::InvalidArgument, "a path needs at least two vertices");
    for (const auto& v : path.vertices)
        require(std::hypot(v[0], v[1]) >= kOriginRadius, ErrorCode::PathThroughOrigin, "path vertex at the origin");
}

// Signed angle subtended at the origin by segment a -> b.
double subtended(const std::array<double, 2>& a, const std::array<double, 2>& b) {
    const double cross = a[0] * b[1] - a[1] * b[0];
    const double dot = a[0] * b[0] + a[1] * b[1];
    // Closest approach of the segment to the origin.
    const double len2 = (b[0] - a[0]) * (b[0] - a[0]) + (b[1] - a[1]) * (b[1] - a[1]);
    const double t = len2 > 0.0 ? std::clamp((a[0] * a[0] + a[1] * a[1] - dot) / len2, 0.0, 1.0) : 0.0;
    const double px = a[0] + t * (b[0] - a[0]);
    const double py = a[1] + t * (b[1] - a[1]);
    require(std::hypot(px, py) >= kOriginRadius, ErrorCode::PathThroughOrigin, "path segment crosses the origin");
    return std::atan2(cross, dot);
}

}  // namespace

int PlanarPath::segments() const {
    const int n = static_cast<int>(vertices.size());
    return closed ? n : n - 1;
}

std::array<double, 2> PlanarPath::segment_end(int k) const {
    const auto n = vertices.size();
    return vertices[(static_cast<std::size_t>(k) + 1) % n];
}

PlanarPath PlanarPath::reversed() const {
    PlanarPath out{{vertices.rbegin(), vertices.rend()}, closed};
    return out;
}

PlanarPath PlanarPath::refined(int factor) const {
    require(factor >= 1, ErrorCode::InvalidArgument, "refinement factor must be >= 1");
    PlanarPath out{{}, closed};
    for (int k = 0; k < segments(); ++k) {
        const auto a = segment_start(k);
        const auto b = segment_end(k);
        for (int j = 0; j < factor; ++j) {
            const double u = static_cast<double>(j) / factor;
            out.vertices.push_back({a[0] + u * (b[0] - a[0]), a[1] + u * (b[1] - a[1])});
        }
    }
    if (!closed) out.vertices.push_back(vertices.back());
    return out;
}

PlanarPath arc_path(double cx, double cy, double radius, double theta0, double theta1, int segments, bool closed) {
    require(segments >= 1 && radius > 0.0, ErrorCode::InvalidArgument, "arc needs positive radius and segments");
    PlanarPath p{{}, closed};
    const int count = closed ? segments : segments + 1;
    for (int k = 0; k < count; ++k) {
        const double t = theta0 + (theta1 - theta0) * k / segments;
        p.vertices.push_back({cx + radius * std::cos(t), cy + radius * std::sin(t)});
    }
    return p;
}

PlanarPath circle_path(double cx, double cy, double radius, int segments) {
    return arc_path(cx, cy, radius, 0.0, 2.0 * std::numbers::pi, segments, true);
}

PlanarPath shifted_loop(double eps, int segments_per_arc) {
    require(segments_per_arc >= 2, ErrorCode::InvalidArgument, "need at least two segments per arc");
    PlanarPath p{{}, true};
    const double pi = std::numbers::pi;
    for (int k = 0; k <= segments_per_arc; ++k) {
        const double t = pi - pi * k / segments_per_arc;
        p.vertices.push_back({std::cos(t) + eps, std::sin(t)});
    }
    // Mirror image below the axis, skipping the shared endpoints.
    for (int k = 1; k < segments_per_arc; ++k) {
        const double t = pi * k / segments_per_arc;
        p.vertices.push_back({std::cos(t) + eps, -std::sin(t)});
    }
    return p;
}

double berry_phase_line_integral(const PlanarPath& path, Branch) {
    check_path(path);
    double swept = 0.0;
    for (int k = 0; k < path.segments(); ++k) {
        const double d = subtended(path.segment_start(k), path.segment_end(k));
        require(std::abs(d) <= std::numbers::pi - 1e-6, ErrorCode::SegmentTooCoarse,
                "segment subtends nearly pi at the origin; refine the path");
        swept += d;
    }
    return -0.5 * swept;
}

double connection_numeric(const PlanarPath& path, Branch branch) {
    check_path(path);
    double phase = 0.0;
    for (int k = 0; k < path.segments(); ++k) {
        const auto a = path.segment_start(k);
        const auto b = path.segment_end(k);
        (void)subtended(a, b);
        const auto u = spin_eigenstate(a[0], a[1], branch);
        const auto v = spin_eigenstate(b[0], b[1], branch);
        const cplx overlap = std::conj(u[0]) * v[0] + std::conj(u[1]) * v[1];
        phase -= std::arg(overlap);
    }
    return phase;
}

double winding_number(const PlanarPath& path) {
    check_path(path);
    double swept = 0.0;
    for (int k = 0; k < path.segments(); ++k) swept += subtended(path.segment_start(k), path.segment_end(k));
    return swept / (2.0 * std::numbers::pi);
}

double solid_angle_phase(const ModelParams& p) {
    require(p.omega > 0.0 || p.delta > 0.0, ErrorCode::InvalidArgument, "need omega > 0 or delta > 0");
    return std::numbers::pi * (1.0 - p.delta / std::hypot(p.omega, p.delta));
}

}  // namespace cisim
