#include <omp.h>

#include "detail.hpp"

namespace cisim::kernels {

namespace {

int team_size(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

}  // namespace

std::vector<cplx> characteristic_scan_parallel(const DenseOp& rho, int n_max_x, int n_max_y,
                                               const std::vector<KPoint>& ks, int threads) {
    require(rho.rows() == n_max_x * n_max_y && rho.cols() == rho.rows(), ErrorCode::DimensionMismatch,
            "characteristic scan needs a motional density matrix");
    const auto n = static_cast<long>(ks.size());
    std::vector<cplx> out(ks.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(team_size(threads))
    for (long i = 0; i < n; ++i) out[i] = detail::characteristic_at(rho, n_max_x, n_max_y, ks[i]);
    return out;
}

Eigen::MatrixXd fourier_sum_parallel(const std::vector<KPoint>& ks, const std::vector<cplx>& c, const Eigen::VectorXd& xs,
                                     const Eigen::VectorXd& ys, int threads) {
    const auto t = detail::fourier_tables(ks, c, xs, ys);
    Eigen::MatrixXd out(xs.size(), ys.size());
    const Eigen::Index nx = xs.size();
    const Eigen::Index ny = ys.size();
#pragma omp parallel for schedule(static) num_threads(team_size(threads))
    for (Eigen::Index i = 0; i < nx; ++i)
        for (Eigen::Index j = 0; j < ny; ++j) out(i, j) = detail::fourier_cell(t, i, j);
    return out;
}

Eigen::MatrixXd position_density_parallel(const std::vector<DenseOp>& components, const std::vector<double>& weights,
                                          const Eigen::MatrixXd& phi_x, const Eigen::MatrixXd& phi_y, int threads) {
    require(components.size() == weights.size(), ErrorCode::DimensionMismatch, "position_density: weights");
    const auto partials = detail::density_partials(components, phi_x);
    Eigen::MatrixXd out(phi_x.rows(), phi_y.rows());
    const Eigen::Index nx = phi_x.rows();
    const Eigen::Index ny = phi_y.rows();
#pragma omp parallel for schedule(static) num_threads(team_size(threads))
    for (Eigen::Index i = 0; i < nx; ++i)
        for (Eigen::Index j = 0; j < ny; ++j) out(i, j) = detail::density_cell(partials, weights, phi_y, i, j);
    return out;
}

}  // namespace cisim::kernels
