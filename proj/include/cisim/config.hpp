#pragma once

// Experiment configuration: INI text with frequencies in kHz (cycles) and
// times in microseconds. Internally everything is rad/us and us.

#include <cstdint>
#include <string>
#include <vector>

#include "cisim/dynamics.hpp"
#include "cisim/geometry.hpp"
#include "cisim/tomography.hpp"

namespace cisim {

struct ModelSection {
    double nu_khz = 3.0;
    double omega_khz = 6.0;
    double delta_khz = 0.0;
    double delta_z_khz = 0.0;
    double delta_xy_khz = 0.0;
    double eta_omega_scale = 1.0;
    bool operator==(const ModelSection&) const = default;
};

struct ScheduleSection {
    double tau_us = 330.0;
    int rounds = 16;
    RampShape ramp = RampShape::linear;
    AmplitudeRule amplitude_rule = AmplitudeRule::midpoint;
    TrotterScheme scheme = TrotterScheme::first_order_split;
    int substeps = 400;
    bool operator==(const ScheduleSection&) const = default;
};

struct TruncationSection {
    int n_max_x = 14;
    int n_max_y = 14;
    double leak_threshold = 1e-4;
    bool operator==(const TruncationSection&) const = default;
};

/// Collapse rates are given per second, as heating rates are usually quoted.
struct NoiseSection {
    bool enabled = false;
    CrossCoupling cross_coupling = CrossCoupling::off;
    int steps = 2000;
    double lower_x_per_s = 0.0;
    double raise_x_per_s = 0.0;
    double number_x_per_s = 0.0;
    double lower_y_per_s = 0.0;
    double raise_y_per_s = 0.0;
    double number_y_per_s = 0.0;
    bool operator==(const NoiseSection&) const = default;
};

struct TomographySection {
    double k_max = 2.8;
    int k_points = 25;
    double rotation_deg = 0.0;         ///< scan axes relative to the mode axes
    double output_rotation_deg = 0.0;  ///< reconstruction axes, for de-rotating a turned state
    int shots = 100;
    double grid_half_width = 4.0;
    int grid_resolution = 101;
    double cut_angle_deg = 49.0;
    int cut_points = 101;
    int ratio_angles = 16;
    bool operator==(const TomographySection&) const = default;
};

enum class SurfaceUnits { khz, raw };

struct SurfaceSection {
    SurfaceUnits units = SurfaceUnits::khz;  ///< raw: model frequencies are used as given, no 2 pi / 1000
    double half_width = 4.0;
    int resolution = 101;
    bool operator==(const SurfaceSection&) const = default;
};

enum class BerryPathKind { circle, arc, shifted_loop };

struct BerrySection {
    BerryPathKind path = BerryPathKind::circle;
    double center_x = 0.0;
    double center_y = 0.0;
    double radius = 1.0;
    double theta0_deg = 0.0;
    double theta1_deg = 360.0;
    double eps = -0.1;
    int segments = 10000;
    bool clockwise = false;
    bool operator==(const BerrySection&) const = default;
};

enum class StudyKind { adiabaticity, fidelity, trotter_convergence, ci_vs_nonci };

struct StudySection {
    StudyKind kind = StudyKind::adiabaticity;
    int t_points = 64;
    int n_excited = 8;
    double reference_tau_us = 25000.0;
    int reference_substeps = 2000;
    std::vector<int> rounds_list{8, 16, 32, 64};
    bool operator==(const StudySection&) const = default;
};

struct OutputSection {
    std::string dir = "out";
    bool pgm = true;
    bool operator==(const OutputSection&) const = default;
};

struct RunSection {
    std::uint64_t seed = 1;
    int samples = 64;
    bool operator==(const RunSection&) const = default;
};

struct ExperimentConfig {
    ModelSection model;
    ScheduleSection schedule;
    TruncationSection truncation;
    NoiseSection noise;
    TomographySection tomography;
    SurfaceSection surface;
    BerrySection berry;
    StudySection study;
    OutputSection output;
    RunSection run;
    bool operator==(const ExperimentConfig&) const = default;

    /// Throws ConfigError when a value violates a model or schedule invariant.
    void validate() const;

    ModelParams model_params() const;
    RampSchedule ramp_schedule() const;
    ModeSpace mode_space() const;
    LindbladSpec lindblad_spec() const;
    KGrid k_grid() const;
    /// Unrotated grid used for ground-truth densities.
    SpatialGridSpec grid_spec() const;
    /// Reconstruction grid with the output rotation applied.
    SpatialGridSpec output_spec() const;
    EvolutionOptions evolution_options() const;
};

/// Angular frequency in rad/us for a frequency given in kHz.
double khz_to_rad_per_us(double khz);

ExperimentConfig parse_config_string(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);
/// INI text that parses back to an identical config.
std::string emit_config(const ExperimentConfig& cfg);

}  // namespace cisim
