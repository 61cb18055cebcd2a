#pragma once

// Per-element pieces shared by the serial and OpenMP kernels, so both paths
// run the exact same arithmetic in the same order.

#include <cmath>

#include "cisim/kernels.hpp"

namespace cisim::kernels::detail {

inline cplx characteristic_at(const DenseOp& rho, int n_max_x, int n_max_y, const KPoint& k) {
    const double s = 1.0 / std::sqrt(2.0);
    const DenseOp dx = displacement_matrix(n_max_x, cplx(0.0, k[0] * s));
    const DenseOp dy = displacement_matrix(n_max_y, cplx(0.0, k[1] * s));
    const DenseOp dyt = dy.transpose();
    cplx chi(0.0, 0.0);
    for (int n = 0; n < n_max_x; ++n)
        for (int np = 0; np < n_max_x; ++np) {
            const cplx inner = rho.block(n * n_max_y, np * n_max_y, n_max_y, n_max_y).cwiseProduct(dyt).sum();
            chi += dx(np, n) * inner;
        }
    return chi;
}

struct FourierTables {
    Eigen::MatrixXcd cex;  // c_k exp(-i kx x_i), k by i
    Eigen::MatrixXcd ey;   // exp(-i ky y_j), k by j
};

inline FourierTables fourier_tables(const std::vector<KPoint>& ks, const std::vector<cplx>& c, const Eigen::VectorXd& xs,
                                    const Eigen::VectorXd& ys) {
    require(ks.size() == c.size(), ErrorCode::DimensionMismatch, "fourier_sum: k and coefficient counts differ");
    const auto nk = static_cast<Eigen::Index>(ks.size());
    FourierTables t{Eigen::MatrixXcd(nk, xs.size()), Eigen::MatrixXcd(nk, ys.size())};
    for (Eigen::Index k = 0; k < nk; ++k) {
        const auto& kv = ks[static_cast<std::size_t>(k)];
        for (Eigen::Index i = 0; i < xs.size(); ++i) t.cex(k, i) = c[static_cast<std::size_t>(k)] * std::polar(1.0, -kv[0] * xs[i]);
        for (Eigen::Index j = 0; j < ys.size(); ++j) t.ey(k, j) = std::polar(1.0, -kv[1] * ys[j]);
    }
    return t;
}

inline double fourier_cell(const FourierTables& t, Eigen::Index i, Eigen::Index j) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < t.cex.rows(); ++k) acc += (t.cex(k, i) * t.ey(k, j)).real();
    return acc;
}

// phi_x * C for every component.
inline std::vector<DenseOp> density_partials(const std::vector<DenseOp>& components, const Eigen::MatrixXd& phi_x) {
    std::vector<DenseOp> out;
    out.reserve(components.size());
    for (const auto& c : components) out.push_back(phi_x.cast<cplx>() * c);
    return out;
}

inline double density_cell(const std::vector<DenseOp>& partials, const std::vector<double>& weights,
                           const Eigen::MatrixXd& phi_y, Eigen::Index i, Eigen::Index j) {
    double acc = 0.0;
    for (std::size_t c = 0; c < partials.size(); ++c) {
        cplx amp(0.0, 0.0);
        for (Eigen::Index m = 0; m < phi_y.cols(); ++m) amp += partials[c](i, m) * phi_y(j, m);
        acc += weights[c] * std::norm(amp);
    }
    return acc;
}

}  // namespace cisim::kernels::detail
