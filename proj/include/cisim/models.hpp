#pragma once

// Hamiltonian builders for the Jahn-Teller spin-boson model and its variants.
//
// Frequencies are angular (rad per time unit); the library never assumes a
// particular time unit, the CLI uses microseconds.

#include <array>
#include <utility>

#include "cisim/fock.hpp"

namespace cisim {

struct ModelParams {
    double nu = 1.0;             ///< oscillator frequency of both modes
    double omega = 0.0;          ///< spin-motion coupling at full ramp
    double delta = 0.0;          ///< spin splitting, enters as (delta/2) sigma_z
    double delta_z = 0.0;        ///< detuning error in the noisy model
    double delta_xy = 0.0;       ///< x/y mode frequency difference driving laser cross-coupling
    double eta_omega_scale = 1.0;

    void validate() const;
};

enum class RampShape {
    linear,     ///< both couplings ramp together as t / tau
    staggered,  ///< x ramps over the first half, then y over the second half
    constant,   ///< full coupling for the whole run
};

enum class AmplitudeRule { midpoint, left, right };

enum class TrotterScheme {
    first_order_split,  ///< oscillator / x-push / oscillator / y-push per round
    strang,             ///< symmetric oscillator / x / y / x / oscillator per round
    mode_split,         ///< exp(-i H_x) exp(-i H_y) per round, H_q = nu n_q + push_q
    exact_simultaneous, ///< piecewise-constant full Hamiltonian
};

struct RampSchedule {
    double total_time = 1.0;
    int rounds = 16;
    RampShape shape = RampShape::linear;
    AmplitudeRule amplitude_rule = AmplitudeRule::midpoint;
    TrotterScheme scheme = TrotterScheme::first_order_split;
    /// Number of piecewise-constant steps for exact_simultaneous (>= 200 recommended).
    int substeps = 400;

    void validate() const;
    /// Coupling scale of the x and y pushes at time t, each in [0, 1].
    std::array<double, 2> scales_at(double t) const;
    /// Sampling time for round k according to amplitude_rule.
    double round_sample_time(int k) const;
};

/// nu n_x + nu n_y + (s_x Omega/2) sigma_x (a_x + a_x^dag) + (s_y Omega/2) sigma_y (a_y + a_y^dag) + (Delta/2) sigma_z.
OperatorMatrix build_jahn_teller(const ModeSpace& space, const ModelParams& p, double coupling_scale);
OperatorMatrix build_jahn_teller(const ModeSpace& space, const ModelParams& p, double scale_x, double scale_y);

enum class SplitPart {
    x,           ///< nu n_x + (s Omega/2) sigma_x (a_x + a_x^dag)
    y,           ///< nu n_y + (s Omega/2) sigma_y (a_y + a_y^dag)
    oscillator,  ///< nu (n_x + n_y)
    push_x,      ///< (s Omega/2) sigma_x (a_x + a_x^dag)
    push_y,      ///< (s Omega/2) sigma_y (a_y + a_y^dag)
};

OperatorMatrix build_split(const ModeSpace& space, const ModelParams& p, double coupling_scale, SplitPart part);

enum class CrossCoupling { off, on };

/// Noisy effective Hamiltonian with detuning error and x/y laser cross-coupling at time t.
OperatorMatrix build_noisy(const ModeSpace& space, const ModelParams& p, double coupling_scale, double t,
                           CrossCoupling cross = CrossCoupling::on);

/// Noisy Hamiltonian split by laser and time dependence:
///   H(t) = base + s_x (coupling_x + cos(Delta_xy t) cross_cos_x + sin(Delta_xy t) cross_sin_x) + (same for y).
/// The x terms carry sigma_x, the y terms sigma_y.
struct NoisyParts {
    double delta_xy = 0.0;
    OperatorMatrix base;
    OperatorMatrix coupling_x, coupling_y;
    OperatorMatrix cross_cos_x, cross_cos_y;
    OperatorMatrix cross_sin_x, cross_sin_y;
    bool cross = true;

    OperatorMatrix at(double scale_x, double scale_y, double t) const;
};

NoisyParts noisy_parts(const ModeSpace& space, const ModelParams& p, CrossCoupling cross = CrossCoupling::on);

/// nu n_x + nu n_y - (s Omega/2) sqrt((a_x + a_x^dag)^2 + (a_y + a_y^dag)^2): same lower surface, no intersection.
OperatorMatrix build_non_ci(const ModeSpace& space, const ModelParams& p, double coupling_scale);

/// Pieces of the Jahn-Teller Hamiltonian that ramps reuse: H = diag + s_x * push_x + s_y * push_y.
struct JahnTellerParts {
    OperatorMatrix diagonal;  ///< nu (n_x + n_y) + (Delta/2) sigma_z
    OperatorMatrix push_x;    ///< (Omega/2) sigma_x (a_x + a_x^dag)
    OperatorMatrix push_y;    ///< (Omega/2) sigma_y (a_y + a_y^dag)

    OperatorMatrix at(double scale_x, double scale_y) const;
};

JahnTellerParts jahn_teller_parts(const ModeSpace& space, const ModelParams& p);

enum class Branch { plus, minus };

/// V_+- = nu/2 r^2 +- (1/2) sqrt(2 Omega^2 r^2 + Delta^2).
double semiclassical_surface(const ModelParams& p, double x, double y, Branch branch);

/// (|0> +- e^{i phi} |1>)/sqrt(2) with phi = atan2(y, x); throws AtSingularity at the origin.
std::array<cplx, 2> spin_eigenstate(double x, double y, Branch branch);

}  // namespace cisim
