#include "cisim/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

namespace cisim {

namespace {

kernels::KPoint rotate(kernels::KPoint k, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * k[0] - s * k[1], s * k[0] + c * k[1]};
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Mean of `shots` outcomes in {-1, +1} with P(+1) = (1 + v)/2.
double shot_average(double v, int shots, std::uint64_t stream_seed) {
    std::mt19937_64 rng(stream_seed);
    const double p = std::clamp(0.5 * (1.0 + v), 0.0, 1.0);
    int ups = 0;
    for (int s = 0; s < shots; ++s) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < p) ++ups;
    }
    return 2.0 * ups / shots - 1.0;
}

DensityMatrix motional_part(const DensityMatrix& rho) {
    return rho.factor() == Factor::motional ? rho : partial_trace_spin(rho);
}

DenseOp reshape_motional(const ModeSpace& space, const Eigen::Ref<const StateVec>& v) {
    DenseOp c(space.n_max_x(), space.n_max_y());
    for (int n = 0; n < space.n_max_x(); ++n)
        for (int m = 0; m < space.n_max_y(); ++m) c(n, m) = v[space.motional_index(n, m)];
    return c;
}

SpatialGrid density_from_components(const ModeSpace& space, const std::vector<DenseOp>& comps,
                                    const std::vector<double>& weights, const SpatialGridSpec& out) {
    out.validate();
    require(out.rotation == 0.0, ErrorCode::InvalidArgument, "position_distribution is evaluated on unrotated axes");
    const Eigen::VectorXd q = out.axis();
    const Eigen::MatrixXd phi_x = kernels::hermite_functions(q, space.n_max_x());
    const Eigen::MatrixXd phi_y = kernels::hermite_functions(q, space.n_max_y());
    return {out, kernels::position_density_parallel(comps, weights, phi_x, phi_y), std::nullopt};
}

}  // namespace

void KGrid::validate() const {
    require(std::isfinite(k_max) && k_max > 0.0, ErrorCode::InvalidArgument, "k_max must be positive");
    require(points >= 2, ErrorCode::InvalidArgument, "need at least two k points per axis");
    require(std::isfinite(rotation), ErrorCode::InvalidArgument, "rotation must be finite");
}

kernels::KPoint KGrid::at(int i, int j) const { return rotate({axis(i), axis(j)}, rotation); }

std::vector<kernels::KPoint> KGrid::nodes() const {
    std::vector<kernels::KPoint> out;
    out.reserve(static_cast<std::size_t>(points) * points);
    for (int i = 0; i < points; ++i)
        for (int j = 0; j < points; ++j) out.push_back(at(i, j));
    return out;
}

void SpatialGridSpec::validate() const {
    require(std::isfinite(half_width) && half_width > 0.0, ErrorCode::InvalidArgument, "grid half width must be positive");
    require(resolution >= 2, ErrorCode::InvalidArgument, "grid resolution must be at least 2");
}

Eigen::VectorXd SpatialGridSpec::axis() const {
    return Eigen::VectorXd::LinSpaced(resolution, -half_width, half_width);
}

double SpatialGrid::negative_mass() const { return values.cwiseMin(0.0).sum() * spec.cell_area(); }

cplx characteristic_function(const DensityMatrix& rho_motion, kernels::KPoint k) {
    require(rho_motion.factor() == Factor::motional, ErrorCode::DimensionMismatch,
            "characteristic_function expects a motional density matrix");
    const ModeSpace& s = rho_motion.space();
    return kernels::characteristic_scan_serial(rho_motion.matrix(), s.n_max_x(), s.n_max_y(), {k}).front();
}

FourierSamples scan(const DensityMatrix& rho_motion, const KGrid& grid, int shots, std::uint64_t seed) {
    grid.validate();
    require(shots >= 0, ErrorCode::InvalidArgument, "shots must be >= 0");
    require(rho_motion.factor() == Factor::motional, ErrorCode::DimensionMismatch, "scan expects a motional density matrix");
    const ModeSpace& space = rho_motion.space();
    const auto chi = kernels::characteristic_scan_parallel(rho_motion.matrix(), space.n_max_x(), space.n_max_y(), grid.nodes());

    const int n = grid.points;
    FourierSamples out{grid, Eigen::MatrixXd(n, n), Eigen::MatrixXd(n, n), Eigen::MatrixXd::Zero(n, n),
                       Eigen::MatrixXd::Zero(n, n), shots, shots > 0, seed};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cplx v = chi[static_cast<std::size_t>(i * n + j)];
            out.cos_part(i, j) = v.real();
            out.sin_part(i, j) = v.imag();
        }
    if (shots == 0) return out;

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto node = static_cast<std::uint64_t>(i * n + j);
            const std::uint64_t base = splitmix64(seed ^ splitmix64(node));
            const double c = shot_average(out.cos_part(i, j), shots, splitmix64(base));
            const double s = shot_average(out.sin_part(i, j), shots, splitmix64(base + 1));
            out.cos_part(i, j) = c;
            out.sin_part(i, j) = s;
            out.cos_var(i, j) = std::max(0.0, 1.0 - c * c) / shots;
            out.sin_var(i, j) = std::max(0.0, 1.0 - s * s) / shots;
        }
    return out;
}

SpatialGrid reconstruct(const FourierSamples& samples, const SpatialGridSpec& out) {
    const KGrid& g = samples.grid;
    g.validate();
    out.validate();
    require(g.k_max * out.half_width >= std::numbers::pi, ErrorCode::InsufficientCoverage,
            "k_max * L is below pi; the k range cannot resolve the output grid");

    const int n = g.points;
    const double dk = g.spacing();
    const double prefactor = dk * dk / (4.0 * std::numbers::pi * std::numbers::pi);
    const auto edge = [n](int i) { return i == 0 || i == n - 1 ? 0.5 : 1.0; };

    ShotStatistics stats;
    std::vector<cplx> coef;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (std::hypot(g.axis(i), g.axis(j)) > g.k_max * (1.0 + 1e-12)) continue;
            const double c = prefactor * edge(i) * edge(j);
            stats.k_eff.push_back(rotate(g.at(i, j), -out.rotation));
            stats.coefficient.push_back(c);
            stats.cos_var.push_back(samples.cos_var.size() ? samples.cos_var(i, j) : 0.0);
            stats.sin_var.push_back(samples.sin_var.size() ? samples.sin_var(i, j) : 0.0);
            coef.emplace_back(c * samples.cos_part(i, j), c * samples.sin_part(i, j));
        }

    const Eigen::VectorXd axis = out.axis();
    SpatialGrid grid{out, kernels::fourier_sum_parallel(stats.k_eff, coef, axis, axis), std::nullopt};
    const double total = grid.integral();
    require(total > 0.0, ErrorCode::EmptyDistribution, "reconstruction integrates to a non-positive total");
    grid.values /= total;
    for (auto& c : stats.coefficient) c /= total;
    grid.stats = std::move(stats);
    return grid;
}

SpatialGrid position_distribution(const SpinBosonState& psi, const SpatialGridSpec& out) {
    const ModeSpace& space = psi.space();
    const int md = space.motional_dim();
    std::vector<DenseOp> comps;
    for (int s = 0; s < 2; ++s) comps.push_back(reshape_motional(space, psi.amplitudes().segment(s * md, md)));
    return density_from_components(space, comps, {1.0, 1.0}, out);
}

SpatialGrid position_distribution(const DensityMatrix& rho, const SpatialGridSpec& out) {
    const DensityMatrix m = motional_part(rho);
    const ModeSpace& space = m.space();
    Eigen::SelfAdjointEigenSolver<DenseOp> es(0.5 * (m.matrix() + m.matrix().adjoint()));
    require(es.info() == Eigen::Success, ErrorCode::ConvergenceFailure, "position_distribution: eigensolver failed");
    std::vector<DenseOp> comps;
    std::vector<double> weights;
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
        const double w = es.eigenvalues()[k];
        if (w <= 1e-15) continue;
        comps.push_back(reshape_motional(space, es.eigenvectors().col(k)));
        weights.push_back(w);
    }
    return density_from_components(space, comps, weights, out);
}

double offresonant_envelope(double sigma, double eta2_omega, double delta, double t) {
    require(delta != 0.0, ErrorCode::ZeroDetuning, "off-resonant envelope needs a nonzero detuning");
    const double r = eta2_omega / delta;
    const double s = std::sin(0.5 * delta * t);
    return std::exp(-4.0 * sigma * sigma * r * r * s * s);
}

CutLine cut_line(const FourierSamples& samples, double angle, int points) {
    const KGrid& g = samples.grid;
    g.validate();
    require(points >= 2, ErrorCode::InvalidArgument, "cut line needs at least two points");
    const int n = g.points;
    const double dk = g.spacing();
    const auto bilinear = [&](const Eigen::MatrixXd& m, double kx, double ky) {
        const double u = std::clamp((kx + g.k_max) / dk, 0.0, n - 1.0);
        const double v = std::clamp((ky + g.k_max) / dk, 0.0, n - 1.0);
        const int i = std::min(static_cast<int>(u), n - 2);
        const int j = std::min(static_cast<int>(v), n - 2);
        const double fu = u - i;
        const double fv = v - j;
        return (1 - fu) * (1 - fv) * m(i, j) + fu * (1 - fv) * m(i + 1, j) + (1 - fu) * fv * m(i, j + 1) +
               fu * fv * m(i + 1, j + 1);
    };
    CutLine out;
    for (int p = 0; p < points; ++p) {
        const double s = -g.k_max + 2.0 * g.k_max * p / (points - 1);
        const double kx = s * std::cos(angle);
        const double ky = s * std::sin(angle);
        out.s.push_back(s);
        out.cos_part.push_back(bilinear(samples.cos_part, kx, ky));
        out.sin_part.push_back(bilinear(samples.sin_part, kx, ky));
    }
    return out;
}

}  // namespace cisim
