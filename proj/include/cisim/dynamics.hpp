#pragma once

// Time evolution: exact propagators, the Trotterized ramp used in the
// experiment, Lindblad integration and adiabaticity diagnostics.

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "cisim/fock.hpp"
#include "cisim/models.hpp"

namespace cisim {

enum class ExpBackend {
    automatic,  ///< dense below kDenseLimit, Krylov above
    dense,      ///< scaling-and-squaring matrix exponential
    krylov,     ///< Lanczos action on the vector
};

inline constexpr int kDenseLimit = 4096;

struct KrylovOptions {
    int subspace = 30;
    double tolerance = 1e-12;
    int max_substeps = 100000;
};

/// exp(-i H dt) v via a Lanczos basis with adaptive substepping.
StateVec krylov_expm_action(const SparseOp& h, const StateVec& v, double dt, const KrylovOptions& opts = {});
/// exp(-i H dt) as a dense matrix.
DenseOp dense_propagator(const OperatorMatrix& h, double dt);

SpinBosonState exact_step(const SpinBosonState& psi, const OperatorMatrix& h, double dt,
                          ExpBackend backend = ExpBackend::automatic);

struct EvolutionOptions {
    int samples = 64;               ///< trajectory samples per run (stride rounded down)
    bool guard_leakage = true;
    double leak_threshold = 1e-4;   ///< population in the top two Fock levels
    ExpBackend backend = ExpBackend::krylov;
    KrylovOptions krylov{};
};

struct TrajectorySample {
    double time = 0.0;
    std::array<double, 2> scales{0.0, 0.0};
    SpinBosonState state;
};

struct EvolutionDiagnostics {
    std::vector<double> norm_drift;   ///< |norm - 1| at each sample
    std::vector<double> j_series;     ///< <L_z + sigma_z/2> at each sample
    double max_edge_population = 0.0;
};

struct EvolutionResult {
    SpinBosonState final_state;
    std::vector<TrajectorySample> trajectory;
    EvolutionDiagnostics diagnostics;
};

/// Piecewise-constant evolution: step j uses hamiltonian((j + 1/2) dt).
EvolutionResult evolve_piecewise(const SpinBosonState& initial, double total_time, int steps,
                                 const std::function<OperatorMatrix(double)>& hamiltonian,
                                 const std::function<std::array<double, 2>(double)>& scales,
                                 const EvolutionOptions& opts = {});

/// Runs the ramp in `schedule` under the Jahn-Teller Hamiltonian with the configured scheme.
/// first_order_split applies, per round k of length tau/N, with delta = tau/(2N):
///   [diagonal delta] -> [x-push] -> [diagonal delta] -> [y-push],
/// where each push pulse lasts delta and carries the whole round's coupling area
/// (amplitude 2 Omega_k while only one mode is driven).
EvolutionResult trotter_evolve(const SpinBosonState& initial, const ModelParams& p, const RampSchedule& schedule,
                               const EvolutionOptions& opts = {});

// ------------------------------------------------------------------ open system

enum class Collapse { lower_x, raise_x, number_x, lower_y, raise_y, number_y };

struct LindbladChannel {
    Collapse op;
    double rate;  ///< per time unit
};

struct LindbladSpec {
    std::vector<LindbladChannel> channels;
    CrossCoupling cross_coupling = CrossCoupling::off;
    int steps = 2000;
    int positivity_stride = 50;
    double trace_tolerance = 1e-7;
    double positivity_floor = -1e-5;

    void validate() const;
};

OperatorMatrix collapse_operator(const ModeSpace& space, Collapse op);

struct OpenTrajectorySample {
    double time = 0.0;
    DensityMatrix state;
};

struct OpenEvolutionResult {
    DensityMatrix final_state;
    std::vector<OpenTrajectorySample> trajectory;
    double max_trace_drift = 0.0;
    double min_sampled_eigenvalue = 0.0;
    double max_edge_population = 0.0;
};

/// Fixed-step RK4 integration of the master equation under the noisy Hamiltonian.
OpenEvolutionResult lindblad_evolve(const DensityMatrix& initial, const ModelParams& p, const RampSchedule& schedule,
                                    const LindbladSpec& noise, const EvolutionOptions& opts = {});

// ------------------------------------------------------------------ diagnostics

/// Max over the ground and first n_excited eigenspaces of |<n| dH/dt |m>| / gap_nm^2.
double adiabaticity_metric(const ModeSpace& space, const ModelParams& p, const RampSchedule& schedule, double t,
                           int n_excited);

std::vector<double> conserved_j_series(const EvolutionResult& result);

/// Final population outside the J = L_z + sigma_z/2 sectors occupied by the initial state.
double j_sector_leakage(const SpinBosonState& initial, const SpinBosonState& final_state);

struct EhrenfestReport {
    std::vector<double> times;
    std::vector<double> residual_x;  ///< d^2<x>/dt^2 + nu^2 <x> + nu s_x Omega/sqrt(2) <sigma_x>
    std::vector<double> residual_y;
    double max_normalized = 0.0;     ///< max |residual| / (nu^2 max |<q>|)
};

/// Second-difference check of the equations of motion along a uniformly sampled trajectory.
EhrenfestReport ehrenfest_residual(const EvolutionResult& result, const ModelParams& p);

}  // namespace cisim
