#include "cisim/models.hpp"

#include <algorithm>
#include <cmath>

namespace cisim {

void ModelParams::validate() const {
    const bool finite = std::isfinite(nu) && std::isfinite(omega) && std::isfinite(delta) && std::isfinite(delta_z) &&
                        std::isfinite(delta_xy) && std::isfinite(eta_omega_scale);
    require(finite, ErrorCode::InvalidArgument, "model parameters must be finite");
    require(nu > 0.0, ErrorCode::InvalidArgument, "nu must be positive");
    require(omega >= 0.0, ErrorCode::InvalidArgument, "omega must be non-negative");
}

void RampSchedule::validate() const {
    require(std::isfinite(total_time) && total_time > 0.0, ErrorCode::InvalidArgument, "tau must be positive");
    require(rounds >= 1, ErrorCode::InvalidArgument, "need at least one Trotter round");
    require(substeps >= 1, ErrorCode::InvalidArgument, "need at least one substep");
}

std::array<double, 2> RampSchedule::scales_at(double t) const {
    const double u = std::clamp(t / total_time, 0.0, 1.0);
    switch (shape) {
        case RampShape::linear: return {u, u};
        case RampShape::staggered: return {std::min(1.0, 2.0 * u), std::max(0.0, 2.0 * u - 1.0)};
        case RampShape::constant: return {1.0, 1.0};
    }
    return {u, u};
}

double RampSchedule::round_sample_time(int k) const {
    const double dt = total_time / rounds;
    switch (amplitude_rule) {
        case AmplitudeRule::midpoint: return (k + 0.5) * dt;
        case AmplitudeRule::left: return k * dt;
        case AmplitudeRule::right: return (k + 1) * dt;
    }
    return (k + 0.5) * dt;
}

// -------------------------------------------------------------- builders

JahnTellerParts jahn_teller_parts(const ModeSpace& space, const ModelParams& p) {
    p.validate();
    OperatorMatrix diag = p.nu * (number(space, Mode::x) + number(space, Mode::y));
    if (p.delta != 0.0) diag += (0.5 * p.delta) * pauli(space, Pauli::z);
    OperatorMatrix px = (0.5 * p.omega) * (pauli(space, Pauli::x) * quadrature(space, Mode::x));
    OperatorMatrix py = (0.5 * p.omega) * (pauli(space, Pauli::y) * quadrature(space, Mode::y));
    return {std::move(diag), std::move(px), std::move(py)};
}

OperatorMatrix JahnTellerParts::at(double scale_x, double scale_y) const {
    return diagonal + scale_x * push_x + scale_y * push_y;
}

OperatorMatrix build_jahn_teller(const ModeSpace& space, const ModelParams& p, double coupling_scale) {
    return build_jahn_teller(space, p, coupling_scale, coupling_scale);
}

OperatorMatrix build_jahn_teller(const ModeSpace& space, const ModelParams& p, double scale_x, double scale_y) {
    return jahn_teller_parts(space, p).at(scale_x, scale_y);
}

OperatorMatrix build_split(const ModeSpace& space, const ModelParams& p, double s, SplitPart part) {
    p.validate();
    const auto push = [&](Mode m) {
        const Pauli axis = m == Mode::x ? Pauli::x : Pauli::y;
        return (0.5 * s * p.omega) * (pauli(space, axis) * quadrature(space, m));
    };
    switch (part) {
        case SplitPart::x: return p.nu * number(space, Mode::x) + push(Mode::x);
        case SplitPart::y: return p.nu * number(space, Mode::y) + push(Mode::y);
        case SplitPart::oscillator: return p.nu * (number(space, Mode::x) + number(space, Mode::y));
        case SplitPart::push_x: return push(Mode::x);
        case SplitPart::push_y: return push(Mode::y);
    }
    return OperatorMatrix::zero(space.dim());
}

NoisyParts noisy_parts(const ModeSpace& space, const ModelParams& p, CrossCoupling cross) {
    p.validate();
    const cplx i(0.0, 1.0);
    const OperatorMatrix sx = pauli(space, Pauli::x);
    const OperatorMatrix sy = pauli(space, Pauli::y);
    const OperatorMatrix qx = quadrature(space, Mode::x);
    const OperatorMatrix qy = quadrature(space, Mode::y);
    // i (a - a^dag) for each mode
    const OperatorMatrix dx = i * (ladder(space, Mode::x, Ladder::lower) - ladder(space, Mode::x, Ladder::raise));
    const OperatorMatrix dy = i * (ladder(space, Mode::y, Ladder::lower) - ladder(space, Mode::y, Ladder::raise));
    const double g = 0.5 * p.eta_omega_scale * p.omega;

    NoisyParts parts;
    parts.delta_xy = p.delta_xy;
    parts.cross = cross == CrossCoupling::on;
    parts.base = p.nu * (number(space, Mode::x) + number(space, Mode::y));
    if (p.delta_z != 0.0) parts.base += (0.5 * p.delta_z) * pauli(space, Pauli::z);
    parts.coupling_x = g * (sx * qx);
    parts.coupling_y = g * (sy * qy);
    parts.cross_cos_x = g * (sx * qy);
    parts.cross_sin_x = g * (sx * dy);
    parts.cross_cos_y = g * (sy * qx);
    parts.cross_sin_y = (-g) * (sy * dx);
    return parts;
}

OperatorMatrix NoisyParts::at(double scale_x, double scale_y, double t) const {
    OperatorMatrix h = base + scale_x * coupling_x + scale_y * coupling_y;
    if (cross) {
        const double c = std::cos(delta_xy * t);
        const double sn = std::sin(delta_xy * t);
        h += (scale_x * c) * cross_cos_x + (scale_x * sn) * cross_sin_x;
        h += (scale_y * c) * cross_cos_y + (scale_y * sn) * cross_sin_y;
    }
    return h;
}

OperatorMatrix build_noisy(const ModeSpace& space, const ModelParams& p, double s, double t, CrossCoupling cross) {
    return noisy_parts(space, p, cross).at(s, s, t);
}

OperatorMatrix build_non_ci(const ModeSpace& space, const ModelParams& p, double s) {
    p.validate();
    const OperatorMatrix qx = quadrature(space, Mode::x);
    const OperatorMatrix qy = quadrature(space, Mode::y);
    OperatorMatrix h = p.nu * (number(space, Mode::x) + number(space, Mode::y));
    if (s * p.omega == 0.0) return h;
    h -= (0.5 * s * p.omega) * operator_sqrt(qx * qx + qy * qy);
    return h;
}

// ----------------------------------------------------------- semiclassics

double semiclassical_surface(const ModelParams& p, double x, double y, Branch branch) {
    const double r2 = x * x + y * y;
    const double split = 0.5 * std::sqrt(2.0 * p.omega * p.omega * r2 + p.delta * p.delta);
    return 0.5 * p.nu * r2 + (branch == Branch::plus ? split : -split);
}

std::array<cplx, 2> spin_eigenstate(double x, double y, Branch branch) {
    const double r = std::hypot(x, y);
    require(r >= 1e-12, ErrorCode::AtSingularity, "spin eigenstates are undefined at the intersection");
    const double h = 1.0 / std::sqrt(2.0);
    const cplx phase(x / r, y / r);
    return {cplx(h), (branch == Branch::plus ? h : -h) * phase};
}

}  // namespace cisim
