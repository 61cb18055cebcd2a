#include "cisim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace cisim {

namespace {

// P(c u + s v < z) for u, v uniform on [-h/2, h/2].
double straddle_fraction(double z, double c, double s, double h) {
    double a = 0.5 * h * std::abs(c);
    double b = 0.5 * h * std::abs(s);
    if (a < b) std::swap(a, b);
    if (b <= 1e-15 * a) return std::clamp((z + a) / (2.0 * a), 0.0, 1.0);
    const auto ramp2 = [](double t) { return t > 0.0 ? t * t : 0.0; };
    const double area = 0.5 * (ramp2(z + a + b) - ramp2(z + a - b) - ramp2(z - a + b) + ramp2(z - a - b));
    return std::clamp(area / (4.0 * a * b), 0.0, 1.0);
}

// Fraction of every cell on the numerator side.
Eigen::MatrixXd side_fractions(const SpatialGridSpec& spec, double theta) {
    const Eigen::VectorXd axis = spec.axis();
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double h = spec.spacing();
    Eigen::MatrixXd f(axis.size(), axis.size());
    for (Eigen::Index i = 0; i < axis.size(); ++i)
        for (Eigen::Index j = 0; j < axis.size(); ++j) f(i, j) = straddle_fraction(-(c * axis[i] + s * axis[j]), c, s, h);
    return f;
}

double propagated_sigma(const SpatialGrid& dist, const Eigen::MatrixXd& f, double num, double den) {
    if (!dist.stats || den <= kRatioFloor) return 0.0;
    const ShotStatistics& st = *dist.stats;
    const Eigen::VectorXd axis = dist.spec.axis();
    const double da = dist.spec.cell_area();
    const Eigen::MatrixXcd fc = f.cast<cplx>();
    const Eigen::MatrixXcd gc = (Eigen::MatrixXd::Ones(f.rows(), f.cols()) - f).cast<cplx>();
    double var = 0.0;
    Eigen::VectorXcd ex(axis.size()), ey(axis.size());
    for (std::size_t k = 0; k < st.k_eff.size(); ++k) {
        if (st.cos_var[k] == 0.0 && st.sin_var[k] == 0.0) continue;
        for (Eigen::Index i = 0; i < axis.size(); ++i) {
            ex[i] = std::polar(1.0, st.k_eff[k][0] * axis[i]);
            ey[i] = std::polar(1.0, st.k_eff[k][1] * axis[i]);
        }
        // sum_cells side(r) exp(i k.r) dA: real part pairs with cos samples, imaginary with sin samples.
        const cplx plus = ex.cwiseProduct(fc * ey).sum() * da;
        const cplx minus = ex.cwiseProduct(gc * ey).sum() * da;
        const double dc = st.coefficient[k] * (plus.real() / den - num * minus.real() / (den * den));
        const double gs = st.coefficient[k] * (plus.imag() / den - num * minus.imag() / (den * den));
        var += st.cos_var[k] * dc * dc + st.sin_var[k] * gs * gs;
    }
    return std::sqrt(var);
}

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
        i = j + 1;
    }
    return r;
}

}  // namespace

HalfPlaneRatio half_plane_ratio_report(const SpatialGrid& dist, double theta) {
    require(std::isfinite(theta), ErrorCode::InvalidArgument, "theta must be finite");
    const double total = dist.integral();
    require(total > 0.0, ErrorCode::EmptyDistribution, "distribution integrates to a non-positive total");
    const Eigen::MatrixXd f = side_fractions(dist.spec, theta);
    const double da = dist.spec.cell_area();

    HalfPlaneRatio out;
    out.numerator = dist.values.cwiseProduct(f).sum() * da;
    out.denominator = total - out.numerator;
    double den = out.denominator;
    if (den < kRatioFloor) {
        den = kRatioFloor;
        out.floored = true;
    }
    out.ratio = out.numerator / den;
    out.sigma = propagated_sigma(dist, f, out.numerator, den);
    return out;
}

double half_plane_ratio(const SpatialGrid& dist, double theta) { return half_plane_ratio_report(dist, theta).ratio; }

RatioCurve ratio_curve(const SpatialGrid& dist, int n_angles) {
    require(n_angles >= 2, ErrorCode::InvalidArgument, "ratio_curve needs at least two angles");
    RatioCurve c;
    for (int k = 0; k < n_angles; ++k) {
        const double theta = 0.5 * std::numbers::pi * k / (n_angles - 1);
        const auto r = half_plane_ratio_report(dist, theta);
        c.theta.push_back(theta);
        c.ratio.push_back(r.ratio);
        c.sigma.push_back(r.sigma);
    }
    return c;
}

double distribution_distance(const SpatialGrid& a, const SpatialGrid& b, DistanceMetric metric) {
    require(a.spec == b.spec && a.values.rows() == b.values.rows() && a.values.cols() == b.values.cols(),
            ErrorCode::GridMismatch, "distributions live on different grids");
    const double ia = a.integral();
    const double ib = b.integral();
    require(ia > 0.0 && ib > 0.0, ErrorCode::EmptyDistribution, "cannot normalize an empty distribution");
    const Eigen::MatrixXd d = a.values / ia - b.values / ib;
    const double da = a.spec.cell_area();
    if (metric == DistanceMetric::L1) return d.cwiseAbs().sum() * da;
    return std::sqrt(d.cwiseAbs2().sum() * da);
}

double angular_centroid(const SpatialGrid& dist) {
    const Eigen::VectorXd axis = dist.spec.axis();
    const double mx = (axis.transpose() * dist.values).sum();
    const double my = (dist.values * axis).sum();
    require(std::hypot(mx, my) > 0.0, ErrorCode::EmptyDistribution, "centroid at the origin has no angle");
    return std::atan2(my, mx);
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    require(a.size() == b.size() && a.size() >= 2, ErrorCode::InvalidArgument, "spearman needs paired samples");
    const auto ra = ranks(a);
    const auto rb = ranks(b);
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
    const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    require(saa > 0.0 && sbb > 0.0, ErrorCode::InvalidArgument, "spearman of a constant series is undefined");
    return sab / std::sqrt(saa * sbb);
}

}  // namespace cisim
