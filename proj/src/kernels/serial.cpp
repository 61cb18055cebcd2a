#include <cmath>
#include <numbers>

#include "detail.hpp"

namespace cisim::kernels {

DenseOp displacement_matrix(int n_max, cplx alpha) {
    require(n_max >= 1, ErrorCode::InvalidArgument, "displacement_matrix: n_max must be positive");
    const double x = std::norm(alpha);
    const double envelope = std::exp(-0.5 * x);
    DenseOp d(n_max, n_max);
    for (int m = 0; m < n_max; ++m)
        for (int n = 0; n < n_max; ++n) {
            const int lo = std::min(m, n);
            const int gap = std::abs(m - n);
            // sqrt(lo! / (lo + gap)!)
            const double ratio = std::exp(0.5 * (std::lgamma(lo + 1.0) - std::lgamma(lo + gap + 1.0)));
            const cplx base = m >= n ? alpha : -std::conj(alpha);
            const double lag = std::assoc_laguerre(static_cast<unsigned>(lo), static_cast<unsigned>(gap), x);
            d(m, n) = ratio * std::pow(base, gap) * envelope * lag;
        }
    return d;
}

std::vector<cplx> characteristic_scan_serial(const DenseOp& rho, int n_max_x, int n_max_y, const std::vector<KPoint>& ks) {
    require(rho.rows() == n_max_x * n_max_y && rho.cols() == rho.rows(), ErrorCode::DimensionMismatch,
            "characteristic scan needs a motional density matrix");
    std::vector<cplx> out(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) out[i] = detail::characteristic_at(rho, n_max_x, n_max_y, ks[i]);
    return out;
}

Eigen::MatrixXd fourier_sum_serial(const std::vector<KPoint>& ks, const std::vector<cplx>& c, const Eigen::VectorXd& xs,
                                   const Eigen::VectorXd& ys) {
    const auto t = detail::fourier_tables(ks, c, xs, ys);
    Eigen::MatrixXd out(xs.size(), ys.size());
    for (Eigen::Index i = 0; i < xs.size(); ++i)
        for (Eigen::Index j = 0; j < ys.size(); ++j) out(i, j) = detail::fourier_cell(t, i, j);
    return out;
}

Eigen::MatrixXd position_density_serial(const std::vector<DenseOp>& components, const std::vector<double>& weights,
                                        const Eigen::MatrixXd& phi_x, const Eigen::MatrixXd& phi_y) {
    require(components.size() == weights.size(), ErrorCode::DimensionMismatch, "position_density: weights");
    const auto partials = detail::density_partials(components, phi_x);
    Eigen::MatrixXd out(phi_x.rows(), phi_y.rows());
    for (Eigen::Index i = 0; i < phi_x.rows(); ++i)
        for (Eigen::Index j = 0; j < phi_y.rows(); ++j) out(i, j) = detail::density_cell(partials, weights, phi_y, i, j);
    return out;
}

Eigen::MatrixXd hermite_functions(const Eigen::VectorXd& q, int n_max) {
    require(n_max >= 1, ErrorCode::InvalidArgument, "hermite_functions: n_max must be positive");
    Eigen::MatrixXd psi(q.size(), n_max);
    const double norm0 = std::pow(std::numbers::pi, -0.25);
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        psi(i, 0) = norm0 * std::exp(-0.5 * q[i] * q[i]);
        if (n_max > 1) psi(i, 1) = std::sqrt(2.0) * q[i] * psi(i, 0);
        for (int n = 1; n + 1 < n_max; ++n)
            psi(i, n + 1) = std::sqrt(2.0 / (n + 1)) * q[i] * psi(i, n) - std::sqrt(static_cast<double>(n) / (n + 1)) * psi(i, n - 1);
    }
    return psi;
}

}  // namespace cisim::kernels
