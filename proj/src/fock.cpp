#include "cisim/fock.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

namespace cisim {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::NegativeSpectrum: return "NegativeSpectrum";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::TruncationLeak: return "TruncationLeak";
        case ErrorCode::PositivityViolation: return "PositivityViolation";
        case ErrorCode::TraceDrift: return "TraceDrift";
        case ErrorCode::DegenerateGap: return "DegenerateGap";
        case ErrorCode::InsufficientSampling: return "InsufficientSampling";
        case ErrorCode::AtSingularity: return "AtSingularity";
        case ErrorCode::PathThroughOrigin: return "PathThroughOrigin";
        case ErrorCode::SegmentTooCoarse: return "SegmentTooCoarse";
        case ErrorCode::InsufficientCoverage: return "InsufficientCoverage";
        case ErrorCode::ZeroDetuning: return "ZeroDetuning";
        case ErrorCode::EmptyDistribution: return "EmptyDistribution";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

// ---------------------------------------------------------------- ModeSpace

ModeSpace::ModeSpace(int n_max_x, int n_max_y) : n_max_x_(n_max_x), n_max_y_(n_max_y) {
    require(n_max_x >= 2 && n_max_y >= 2, ErrorCode::InvalidArgument, "each mode needs at least two Fock levels");
}

BasisLabel ModeSpace::label(int index) const noexcept {
    const int ny = index % n_max_y_;
    const int rest = index / n_max_y_;
    return {rest / n_max_x_, rest % n_max_x_, ny};
}

// ----------------------------------------------------------- OperatorMatrix

OperatorMatrix::OperatorMatrix(SparseOp m) : m_(std::move(m)) {
    require(m_.rows() == m_.cols(), ErrorCode::DimensionMismatch, "operator must be square");
    m_.makeCompressed();
}

OperatorMatrix OperatorMatrix::from_dense(const DenseOp& m, double prune_below) {
    SparseOp s = m.sparseView(1.0, prune_below);
    return OperatorMatrix(std::move(s));
}

OperatorMatrix OperatorMatrix::identity(int dim) {
    SparseOp s(dim, dim);
    s.setIdentity();
    return OperatorMatrix(std::move(s));
}

OperatorMatrix OperatorMatrix::zero(int dim) { return OperatorMatrix(SparseOp(dim, dim)); }

OperatorMatrix OperatorMatrix::adjoint() const { return OperatorMatrix(SparseOp(m_.adjoint())); }

double OperatorMatrix::hermiticity_error() const {
    const SparseOp d = m_ - SparseOp(m_.adjoint());
    double worst = 0.0;
    for (int k = 0; k < d.outerSize(); ++k)
        for (SparseOp::InnerIterator it(d, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
}

double OperatorMatrix::max_abs() const {
    double worst = 0.0;
    for (int k = 0; k < m_.outerSize(); ++k)
        for (SparseOp::InnerIterator it(m_, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& o) {
    require(dim() == o.dim(), ErrorCode::DimensionMismatch, "operator sum");
    m_ = m_ + o.m_;
    return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& o) {
    require(dim() == o.dim(), ErrorCode::DimensionMismatch, "operator difference");
    m_ = m_ - o.m_;
    return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(cplx s) {
    m_ *= s;
    return *this;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    require(a.dim() == b.dim(), ErrorCode::DimensionMismatch, "operator product");
    SparseOp p = (a.sparse() * b.sparse()).pruned();
    return OperatorMatrix(std::move(p));
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) { return a * b - b * a; }

// ------------------------------------------------------------------- states

SpinBosonState::SpinBosonState(ModeSpace space, StateVec amplitudes) : space_(space), amp_(std::move(amplitudes)) {
    require(amp_.size() == space_.dim(), ErrorCode::DimensionMismatch, "state length does not match space");
}

SpinBosonState SpinBosonState::product(const ModeSpace& space, std::array<cplx, 2> spin, int nx, int ny) {
    require(nx >= 0 && nx < space.n_max_x() && ny >= 0 && ny < space.n_max_y(), ErrorCode::InvalidArgument,
            "Fock index outside truncation");
    StateVec v = StateVec::Zero(space.dim());
    v[space.index(0, nx, ny)] = spin[0];
    v[space.index(1, nx, ny)] = spin[1];
    return SpinBosonState(space, std::move(v)).normalized();
}

SpinBosonState SpinBosonState::plus_vacuum(const ModeSpace& space) {
    const double h = 1.0 / std::sqrt(2.0);
    return product(space, {cplx(h), cplx(h)});
}

namespace {

StateVec coherent_amplitudes(int n_max, cplx alpha) {
    StateVec c(n_max);
    c[0] = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < n_max; ++n) c[n] = c[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    return c;
}

}  // namespace

SpinBosonState SpinBosonState::coherent(const ModeSpace& space, std::array<cplx, 2> spin, cplx alpha_x,
                                        cplx alpha_y) {
    const StateVec cx = coherent_amplitudes(space.n_max_x(), alpha_x);
    const StateVec cy = coherent_amplitudes(space.n_max_y(), alpha_y);
    StateVec v(space.dim());
    for (int s = 0; s < 2; ++s)
        for (int i = 0; i < space.n_max_x(); ++i)
            for (int j = 0; j < space.n_max_y(); ++j) v[space.index(s, i, j)] = spin[s] * cx[i] * cy[j];
    return SpinBosonState(space, std::move(v)).normalized();
}

SpinBosonState SpinBosonState::normalized() const {
    const double n = norm();
    require(n > 0.0, ErrorCode::InvalidArgument, "cannot normalize the zero vector");
    return SpinBosonState(space_, amp_ / n);
}

double SpinBosonState::edge_population(int levels) const {
    double p = 0.0;
    for (int i = 0; i < dim(); ++i) {
        const BasisLabel l = space_.label(i);
        if (l.nx >= space_.n_max_x() - levels || l.ny >= space_.n_max_y() - levels) p += std::norm(amp_[i]);
    }
    return p;
}

DensityMatrix::DensityMatrix(ModeSpace space, Factor factor, DenseOp matrix)
    : space_(space), factor_(factor), m_(std::move(matrix)) {
    const int expected = factor == Factor::full ? space_.dim() : space_.motional_dim();
    require(m_.rows() == expected && m_.cols() == expected, ErrorCode::DimensionMismatch,
            "density matrix shape does not match space");
}

DensityMatrix DensityMatrix::from_pure(const SpinBosonState& psi) {
    return DensityMatrix(psi.space(), Factor::full, psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::motional_from_pure(const ModeSpace& space, const StateVec& v) {
    require(v.size() == space.motional_dim(), ErrorCode::DimensionMismatch, "motional state length");
    const StateVec u = v / v.norm();
    return DensityMatrix(space, Factor::motional, u * u.adjoint());
}

double DensityMatrix::min_eigenvalue() const {
    const DenseOp h = 0.5 * (m_ + m_.adjoint());
    Eigen::SelfAdjointEigenSolver<DenseOp> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double DensityMatrix::hermiticity_error() const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff(); }

double DensityMatrix::edge_population(int levels) const {
    double p = 0.0;
    for (int i = 0; i < dim(); ++i) {
        int nx = 0;
        int ny = 0;
        if (factor_ == Factor::full) {
            const BasisLabel l = space_.label(i);
            nx = l.nx;
            ny = l.ny;
        } else {
            nx = i / space_.n_max_y();
            ny = i % space_.n_max_y();
        }
        if (nx >= space_.n_max_x() - levels || ny >= space_.n_max_y() - levels) p += m_(i, i).real();
    }
    return p;
}

// --------------------------------------------------------- operator builders

namespace {

using Triplet = Eigen::Triplet<cplx>;

OperatorMatrix from_triplets(int dim, const std::vector<Triplet>& t) {
    SparseOp s(dim, dim);
    s.setFromTriplets(t.begin(), t.end());
    return OperatorMatrix(std::move(s));
}

// 2x2 spin matrix in the |0>,|1> basis.
std::array<std::array<cplx, 2>, 2> spin_matrix(Pauli axis) {
    const cplx i(0.0, 1.0);
    switch (axis) {
        case Pauli::x: return {{{0.0, 1.0}, {1.0, 0.0}}};
        case Pauli::y: return {{{0.0, -i}, {i, 0.0}}};
        case Pauli::z: return {{{1.0, 0.0}, {0.0, -1.0}}};
        // sigma_+ = (sigma_x - i sigma_y)/2 and sigma_- = (sigma_x + i sigma_y)/2.
        case Pauli::plus: return {{{0.0, 0.0}, {1.0, 0.0}}};
        case Pauli::minus: return {{{0.0, 1.0}, {0.0, 0.0}}};
    }
    return {};
}

}  // namespace

OperatorMatrix ladder(const ModeSpace& space, Mode mode, Ladder kind) {
    std::vector<Triplet> t;
    t.reserve(space.dim());
    for (int s = 0; s < 2; ++s)
        for (int nx = 0; nx < space.n_max_x(); ++nx)
            for (int ny = 0; ny < space.n_max_y(); ++ny) {
                const int n = mode == Mode::x ? nx : ny;
                if (kind == Ladder::lower) {
                    if (n == 0) continue;
                    const int to = mode == Mode::x ? space.index(s, nx - 1, ny) : space.index(s, nx, ny - 1);
                    t.emplace_back(to, space.index(s, nx, ny), std::sqrt(static_cast<double>(n)));
                } else {
                    if (n + 1 >= space.n_max(mode)) continue;
                    const int to = mode == Mode::x ? space.index(s, nx + 1, ny) : space.index(s, nx, ny + 1);
                    t.emplace_back(to, space.index(s, nx, ny), std::sqrt(static_cast<double>(n + 1)));
                }
            }
    return from_triplets(space.dim(), t);
}

OperatorMatrix number(const ModeSpace& space, Mode mode) {
    std::vector<Triplet> t;
    for (int i = 0; i < space.dim(); ++i) {
        const BasisLabel l = space.label(i);
        const int n = mode == Mode::x ? l.nx : l.ny;
        if (n != 0) t.emplace_back(i, i, static_cast<double>(n));
    }
    return from_triplets(space.dim(), t);
}

OperatorMatrix quadrature(const ModeSpace& space, Mode mode) {
    return ladder(space, mode, Ladder::lower) + ladder(space, mode, Ladder::raise);
}

OperatorMatrix position(const ModeSpace& space, Mode mode) { return (1.0 / std::sqrt(2.0)) * quadrature(space, mode); }

OperatorMatrix momentum(const ModeSpace& space, Mode mode) {
    const OperatorMatrix d = ladder(space, mode, Ladder::lower) - ladder(space, mode, Ladder::raise);
    return cplx(0.0, -1.0 / std::sqrt(2.0)) * d;
}

OperatorMatrix pauli(const ModeSpace& space, Pauli axis) {
    const auto m = spin_matrix(axis);
    std::vector<Triplet> t;
    const int md = space.motional_dim();
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            if (m[r][c] == cplx(0.0)) continue;
            for (int k = 0; k < md; ++k) t.emplace_back(r * md + k, c * md + k, m[r][c]);
        }
    return from_triplets(space.dim(), t);
}

OperatorMatrix identity(const ModeSpace& space) { return OperatorMatrix::identity(space.dim()); }

OperatorMatrix angular_momentum_z(const ModeSpace& space) {
    const OperatorMatrix ax = ladder(space, Mode::x, Ladder::lower);
    const OperatorMatrix ay = ladder(space, Mode::y, Ladder::lower);
    return cplx(0.0, 1.0) * (ax * ay.adjoint() - ax.adjoint() * ay);
}

OperatorMatrix conserved_j(const ModeSpace& space) {
    return angular_momentum_z(space) + 0.5 * pauli(space, Pauli::z);
}

OperatorMatrix operator_sqrt(const OperatorMatrix& a) {
    require(a.hermiticity_error() <= 1e-9, ErrorCode::NotHermitian, "operator_sqrt needs a Hermitian input");
    const DenseOp h = a.dense();
    Eigen::SelfAdjointEigenSolver<DenseOp> es(0.5 * (h + h.adjoint()));
    require(es.info() == Eigen::Success, ErrorCode::ConvergenceFailure, "eigendecomposition failed");
    Eigen::VectorXd lam = es.eigenvalues();
    require(lam.minCoeff() >= -1e-6, ErrorCode::NegativeSpectrum,
            "eigenvalue " + std::to_string(lam.minCoeff()) + " below -1e-6");
    lam = lam.cwiseMax(0.0).cwiseSqrt();
    const DenseOp& v = es.eigenvectors();
    const DenseOp b = v * lam.cast<cplx>().asDiagonal() * v.adjoint();
    return OperatorMatrix::from_dense(0.5 * (b + b.adjoint()), 1e-15);
}

// ------------------------------------------------------ expectation, fidelity

cplx expectation(const SpinBosonState& psi, const OperatorMatrix& a) {
    require(psi.dim() == a.dim(), ErrorCode::DimensionMismatch, "expectation");
    return psi.amplitudes().dot(a.sparse() * psi.amplitudes());
}

cplx expectation(const DensityMatrix& rho, const OperatorMatrix& a) {
    require(rho.dim() == a.dim(), ErrorCode::DimensionMismatch, "expectation");
    // Tr(rho A) = sum_ij rho_ji A_ij
    cplx acc = 0.0;
    const SparseOp& s = a.sparse();
    for (int i = 0; i < s.outerSize(); ++i)
        for (SparseOp::InnerIterator it(s, i); it; ++it) acc += rho.matrix()(it.col(), it.row()) * it.value();
    return acc;
}

double fidelity(const SpinBosonState& a, const SpinBosonState& b) {
    require(a.space() == b.space(), ErrorCode::DimensionMismatch, "fidelity");
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

double fidelity(const SpinBosonState& a, const DensityMatrix& b) {
    require(b.factor() == Factor::full && a.space() == b.space(), ErrorCode::DimensionMismatch, "fidelity");
    return a.amplitudes().dot(b.matrix() * a.amplitudes()).real();
}

namespace {

DenseOp psd_sqrt(const DenseOp& m) {
    Eigen::SelfAdjointEigenSolver<DenseOp> es(0.5 * (m + m.adjoint()));
    const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * lam.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    require(a.dim() == b.dim() && a.factor() == b.factor(), ErrorCode::DimensionMismatch, "fidelity");
    const DenseOp sa = psd_sqrt(a.matrix());
    const DenseOp inner = sa * b.matrix() * sa;
    Eigen::SelfAdjointEigenSolver<DenseOp> es(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
    const double tr = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return std::clamp(tr * tr, 0.0, 1.0);
}

double subspace_fidelity(const SpinBosonState& psi, const DenseOp& basis) {
    require(basis.rows() == psi.dim(), ErrorCode::DimensionMismatch, "subspace basis");
    return (basis.adjoint() * psi.amplitudes()).squaredNorm();
}

DensityMatrix partial_trace_spin(const SpinBosonState& psi) {
    const int md = psi.space().motional_dim();
    const auto up = psi.amplitudes().head(md);
    const auto down = psi.amplitudes().tail(md);
    DenseOp r = up * up.adjoint() + down * down.adjoint();
    return DensityMatrix(psi.space(), Factor::motional, std::move(r));
}

DensityMatrix partial_trace_spin(const DensityMatrix& rho) {
    if (rho.factor() == Factor::motional) return rho;
    const int md = rho.space().motional_dim();
    DenseOp r = rho.matrix().topLeftCorner(md, md) + rho.matrix().bottomRightCorner(md, md);
    return DensityMatrix(rho.space(), Factor::motional, std::move(r));
}

DensityMatrix embed(const DensityMatrix& motional, std::array<cplx, 2> spin) {
    require(motional.factor() == Factor::motional, ErrorCode::InvalidArgument, "embed takes a motional state");
    const double n = std::sqrt(std::norm(spin[0]) + std::norm(spin[1]));
    const int md = motional.dim();
    DenseOp full = DenseOp::Zero(2 * md, 2 * md);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            full.block(r * md, c * md, md, md) = (spin[r] * std::conj(spin[c]) / (n * n)) * motional.matrix();
    return DensityMatrix(motional.space(), Factor::full, std::move(full));
}

}  // namespace cisim
