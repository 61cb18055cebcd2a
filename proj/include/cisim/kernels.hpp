#pragma once

// Hot loops of the tomography pipeline. Every kernel has a serial reference and
// an OpenMP version; each output element is computed independently with the
// same summation order, so both produce bit-identical results.

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "cisim/fock.hpp"

namespace cisim::kernels {

using KPoint = std::array<double, 2>;

/// <m| D(alpha) |n> for m, n < n_max, using the exact (untruncated) matrix elements.
DenseOp displacement_matrix(int n_max, cplx alpha);

/// Tr[rho exp(i (kx x + ky y))] for each k; rho is a motional density matrix on n_max_x * n_max_y levels.
std::vector<cplx> characteristic_scan_serial(const DenseOp& rho, int n_max_x, int n_max_y, const std::vector<KPoint>& ks);
std::vector<cplx> characteristic_scan_parallel(const DenseOp& rho, int n_max_x, int n_max_y,
                                               const std::vector<KPoint>& ks, int threads = 0);

/// out(i, j) = Re sum_k c_k exp(-i (kx xs_i + ky ys_j)).
/// Rotated output axes are handled by rotating the k vectors instead.
Eigen::MatrixXd fourier_sum_serial(const std::vector<KPoint>& ks, const std::vector<cplx>& c, const Eigen::VectorXd& xs,
                                   const Eigen::VectorXd& ys);
Eigen::MatrixXd fourier_sum_parallel(const std::vector<KPoint>& ks, const std::vector<cplx>& c, const Eigen::VectorXd& xs,
                                     const Eigen::VectorXd& ys, int threads = 0);

/// out(i, j) = sum_c w_c |sum_{n,m} C_c(n, m) phi_x(i, n) phi_y(j, m)|^2.
Eigen::MatrixXd position_density_serial(const std::vector<DenseOp>& components, const std::vector<double>& weights,
                                        const Eigen::MatrixXd& phi_x, const Eigen::MatrixXd& phi_y);
Eigen::MatrixXd position_density_parallel(const std::vector<DenseOp>& components, const std::vector<double>& weights,
                                          const Eigen::MatrixXd& phi_x, const Eigen::MatrixXd& phi_y, int threads = 0);

/// Harmonic-oscillator eigenfunctions psi_n(q) for n < n_max at each q, one row per point.
Eigen::MatrixXd hermite_functions(const Eigen::VectorXd& q, int n_max);

}  // namespace cisim::kernels
