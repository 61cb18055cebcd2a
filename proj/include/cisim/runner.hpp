#pragma once

// Orchestration behind the `sim` command line: each run writes its artifacts and a
// manifest.json (resolved config, seed, SHA-256 of every artifact) into one directory.

#include <string>
#include <vector>

#include "cisim/config.hpp"

namespace cisim {

enum class Subcommand { surface, evolve, tomo, berry, study };

struct RunReport {
    std::string dir;
    std::vector<std::string> artifacts;  ///< file names relative to dir, manifest last
    std::string summary_json;
};

RunReport run_surface(const ExperimentConfig& cfg);
RunReport run_evolve(const ExperimentConfig& cfg);
RunReport run_tomo(const ExperimentConfig& cfg);
RunReport run_berry(const ExperimentConfig& cfg);
RunReport run_study(const ExperimentConfig& cfg);
RunReport run(Subcommand cmd, const ExperimentConfig& cfg);

/// 2 for configuration problems, 3 for numerical guards, 4 for I/O.
int exit_code_for(ErrorCode code);

/// |+> (x) vacuum evolved under the configured model and schedule (unitary).
EvolutionResult ideal_evolution(const ExperimentConfig& cfg);

struct GeometricControlRuns {
    SpinBosonState ci;        ///< Jahn-Teller Hamiltonian throughout
    SpinBosonState switched;  ///< Jahn-Teller for the first half, then the non-CI Hamiltonian
    SpinBosonState non_ci;    ///< non-CI Hamiltonian throughout
};

/// Three piecewise-constant linear-ramp evolutions with schedule.substeps steps each.
GeometricControlRuns geometric_control_runs(const ExperimentConfig& cfg);

/// Caps OpenMP worker threads used by the tomography kernels (0 leaves the runtime default).
void set_worker_threads(int threads);

}  // namespace cisim
