#pragma once

// File formats: CSV grids and sample tables, JSON sidecars, PGM heatmaps, SHA-256 digests.
// Numbers are written in shortest round-trip form so reruns are byte-identical.

#include <string>
#include <vector>

#include "cisim/analysis.hpp"
#include "cisim/tomography.hpp"

namespace cisim {

enum class SamplePart { cos_part, sin_part };

/// Header x_index,y_index,x,y,value.
void write_grid_csv(const std::string& path, const SpatialGrid& grid);
SpatialGrid read_grid_csv(const std::string& path);
void write_grid_sidecar(const std::string& path, const SpatialGrid& grid);

/// Same header as grids; x and y hold the physical kx and ky of each node.
void write_samples_csv(const std::string& path, const FourierSamples& samples, SamplePart part);
/// Grid spec, seed, shots and rotation.
void write_samples_sidecar(const std::string& path, const FourierSamples& samples);
FourierSamples read_samples(const std::string& cos_csv, const std::string& sin_csv, const std::string& sidecar_json);

/// Header theta,ratio,sigma.
void write_ratio_curve_csv(const std::string& path, const RatioCurve& curve);
RatioCurve read_ratio_curve_csv(const std::string& path);

/// Generic numeric table with one column per header entry.
void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns);

struct PgmScale {
    double min = 0.0;
    double max = 0.0;
};

/// 8-bit binary PGM, rows ordered by descending y so the image is upright; returns the value range mapped to 0..255.
PgmScale write_pgm(const std::string& path, const Eigen::MatrixXd& values);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);
/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

std::string format_number(double v);

}  // namespace cisim
