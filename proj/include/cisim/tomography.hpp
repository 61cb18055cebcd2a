#pragma once

// Fourier-push tomography: characteristic-function scans with shot noise,
// inverse-Fourier reconstruction, and ground-truth position densities.

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cisim/fock.hpp"
#include "cisim/kernels.hpp"

namespace cisim {

struct KGrid {
    double k_max = 2.8;
    int points = 25;        ///< per axis, spanning [-k_max, k_max]
    double rotation = 0.0;  ///< radians applied to every (kx, ky)

    void validate() const;
    double spacing() const { return points > 1 ? 2.0 * k_max / (points - 1) : 0.0; }
    double axis(int i) const { return -k_max + spacing() * i; }
    /// Physical k vector of grid node (i, j), i along kx.
    kernels::KPoint at(int i, int j) const;
    /// All nodes with i slowest.
    std::vector<kernels::KPoint> nodes() const;
};

struct FourierSamples {
    KGrid grid;
    Eigen::MatrixXd cos_part;  ///< Re chi: the sigma_z-prepared signal
    Eigen::MatrixXd sin_part;  ///< Im chi: the sigma_y-prepared signal
    Eigen::MatrixXd cos_var;   ///< estimated variance of each shot-averaged entry (zero when exact)
    Eigen::MatrixXd sin_var;
    int shots = 0;             ///< 0 for exact samples
    bool noisy = false;
    std::uint64_t seed = 0;
};

struct SpatialGridSpec {
    double half_width = 4.0;
    int resolution = 101;
    double rotation = 0.0;  ///< value at grid point r is the density at R(rotation) r

    void validate() const;
    double spacing() const { return 2.0 * half_width / (resolution - 1); }
    double cell_area() const { return spacing() * spacing(); }
    Eigen::VectorXd axis() const;
    bool operator==(const SpatialGridSpec&) const = default;
};

/// Linear dependence of a reconstructed grid on its Fourier samples, kept so
/// downstream functionals can propagate shot noise.
struct ShotStatistics {
    std::vector<kernels::KPoint> k_eff;  ///< k vectors in output coordinates
    std::vector<double> coefficient;     ///< P(r) = sum_k c_k (cos_k cos(k.r) + sin_k sin(k.r))
    std::vector<double> cos_var;
    std::vector<double> sin_var;
};

struct SpatialGrid {
    SpatialGridSpec spec;
    Eigen::MatrixXd values;  ///< (x index, y index)
    std::optional<ShotStatistics> stats;

    double integral() const { return values.sum() * spec.cell_area(); }
    /// Integral of the negative part (<= 0).
    double negative_mass() const;
};

/// Tr[rho exp(i (kx x + ky y))] for a motional density matrix.
cplx characteristic_function(const DensityMatrix& rho_motion, kernels::KPoint k);

/// Exact scan when shots == 0, otherwise each entry is the mean of `shots` +-1 outcomes.
/// Draws are seeded from (seed, node index, part) so results do not depend on thread count.
FourierSamples scan(const DensityMatrix& rho_motion, const KGrid& grid, int shots = 0, std::uint64_t seed = 0);

/// Trapezoid-weighted inverse transform with a hard disk cutoff at k_max, normalized to unit integral.
SpatialGrid reconstruct(const FourierSamples& samples, const SpatialGridSpec& out);

/// Ground-truth density with the spin traced out. `out.rotation` must be zero.
SpatialGrid position_distribution(const SpinBosonState& psi, const SpatialGridSpec& out);
SpatialGrid position_distribution(const DensityMatrix& rho, const SpatialGridSpec& out);

/// exp(-4 sigma^2 (eta2_omega / delta)^2 sin^2(delta t / 2)).
double offresonant_envelope(double sigma, double eta2_omega, double delta, double t);

struct CutLine {
    std::vector<double> s;  ///< signed distance from k = 0
    std::vector<double> cos_part;
    std::vector<double> sin_part;
};

/// Bilinear extraction along the line through k = 0 at `angle` from the grid's kx axis.
CutLine cut_line(const FourierSamples& samples, double angle, int points);

}  // namespace cisim
