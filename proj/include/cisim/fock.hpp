#pragma once

// Operator algebra on one spin-1/2 and two truncated bosonic modes.
//
// Basis order is spin (x) mode-x (x) mode-y, with the spin index slowest:
//   index(s, nx, ny) = (s * n_max_x + nx) * n_max_y + ny.
// Spin convention: |0> is the sigma_z = +1 eigenstate, |1> is sigma_z = -1,
// and |+> = (|0> + |1>)/sqrt(2). Units are dimensionless (hbar = 1, m nu = 1),
// so the position quadrature is x = (a + a^dag)/sqrt(2).

#include <array>
#include <complex>
#include <cstddef>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cisim/error.hpp"

namespace cisim {

using cplx = std::complex<double>;
using SparseOp = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using DenseOp = Eigen::MatrixXcd;
using StateVec = Eigen::VectorXcd;

enum class Mode { x, y };
enum class Ladder { lower, raise };
enum class Pauli { x, y, z, plus, minus };

struct BasisLabel {
    int spin = 0;
    int nx = 0;
    int ny = 0;
    bool operator==(const BasisLabel&) const = default;
};

class ModeSpace {
public:
    ModeSpace(int n_max_x, int n_max_y);

    int n_max_x() const noexcept { return n_max_x_; }
    int n_max_y() const noexcept { return n_max_y_; }
    int n_max(Mode m) const noexcept { return m == Mode::x ? n_max_x_ : n_max_y_; }
    static constexpr int spin_dim() noexcept { return 2; }

    /// Dimension of the motional factor alone (mode-x (x) mode-y).
    int motional_dim() const noexcept { return n_max_x_ * n_max_y_; }
    int dim() const noexcept { return 2 * motional_dim(); }

    int index(int spin, int nx, int ny) const noexcept { return (spin * n_max_x_ + nx) * n_max_y_ + ny; }
    int motional_index(int nx, int ny) const noexcept { return nx * n_max_y_ + ny; }
    BasisLabel label(int index) const noexcept;

    bool operator==(const ModeSpace&) const = default;

private:
    int n_max_x_;
    int n_max_y_;
};

class OperatorMatrix {
public:
    OperatorMatrix() = default;
    explicit OperatorMatrix(SparseOp m);

    static OperatorMatrix from_dense(const DenseOp& m, double prune_below = 0.0);
    static OperatorMatrix identity(int dim);
    static OperatorMatrix zero(int dim);

    int dim() const noexcept { return static_cast<int>(m_.rows()); }
    const SparseOp& sparse() const noexcept { return m_; }
    DenseOp dense() const { return DenseOp(m_); }

    OperatorMatrix adjoint() const;
    /// max |A - A^dag| over entries.
    double hermiticity_error() const;
    /// max |A_ij| over entries.
    double max_abs() const;

    OperatorMatrix& operator+=(const OperatorMatrix& o);
    OperatorMatrix& operator-=(const OperatorMatrix& o);
    OperatorMatrix& operator*=(cplx s);

    friend OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b) { return a += b; }
    friend OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b) { return a -= b; }
    friend OperatorMatrix operator*(OperatorMatrix a, cplx s) { return a *= s; }
    friend OperatorMatrix operator*(cplx s, OperatorMatrix a) { return a *= s; }
    friend OperatorMatrix operator*(double s, OperatorMatrix a) { return a *= cplx(s, 0.0); }
    friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);

    StateVec apply(const StateVec& v) const { return m_ * v; }

private:
    SparseOp m_;
};

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

class SpinBosonState {
public:
    SpinBosonState(ModeSpace space, StateVec amplitudes);

    /// Spin state (c0|0> + c1|1>) times Fock state |nx, ny>; normalized.
    static SpinBosonState product(const ModeSpace& space, std::array<cplx, 2> spin, int nx = 0, int ny = 0);
    /// |+> (x) |0,0>, the experiment's preparation.
    static SpinBosonState plus_vacuum(const ModeSpace& space);
    /// Spin state times two-mode coherent state |alpha_x> |alpha_y>, renormalized on the truncated space.
    static SpinBosonState coherent(const ModeSpace& space, std::array<cplx, 2> spin, cplx alpha_x, cplx alpha_y);

    const ModeSpace& space() const noexcept { return space_; }
    const StateVec& amplitudes() const noexcept { return amp_; }
    StateVec& amplitudes() noexcept { return amp_; }
    int dim() const noexcept { return static_cast<int>(amp_.size()); }

    double norm() const { return amp_.norm(); }
    SpinBosonState normalized() const;

    /// Population in the top `levels` Fock levels of either mode.
    double edge_population(int levels = 2) const;

private:
    ModeSpace space_;
    StateVec amp_;
};

/// Which tensor factor a density matrix lives on.
enum class Factor { full, motional };

class DensityMatrix {
public:
    DensityMatrix(ModeSpace space, Factor factor, DenseOp matrix);

    static DensityMatrix from_pure(const SpinBosonState& psi);
    static DensityMatrix motional_from_pure(const ModeSpace& space, const StateVec& motional_amplitudes);

    const ModeSpace& space() const noexcept { return space_; }
    Factor factor() const noexcept { return factor_; }
    const DenseOp& matrix() const noexcept { return m_; }
    DenseOp& matrix() noexcept { return m_; }
    int dim() const noexcept { return static_cast<int>(m_.rows()); }

    cplx trace() const { return m_.trace(); }
    double purity() const { return (m_ * m_).trace().real(); }
    double min_eigenvalue() const;
    double hermiticity_error() const;
    void symmetrize() { m_ = 0.5 * (m_ + m_.adjoint()).eval(); }
    /// Population in the top `levels` Fock levels of either mode.
    double edge_population(int levels = 2) const;

private:
    ModeSpace space_;
    Factor factor_;
    DenseOp m_;
};

// Operator builders on the full spin (x) x (x) y space.
OperatorMatrix ladder(const ModeSpace& space, Mode mode, Ladder kind);
OperatorMatrix number(const ModeSpace& space, Mode mode);
/// a + a^dag for the given mode (equals sqrt(2) times the position quadrature).
OperatorMatrix quadrature(const ModeSpace& space, Mode mode);
OperatorMatrix position(const ModeSpace& space, Mode mode);
OperatorMatrix momentum(const ModeSpace& space, Mode mode);
OperatorMatrix pauli(const ModeSpace& space, Pauli axis);
OperatorMatrix identity(const ModeSpace& space);
/// L_z = i (a_x a_y^dag - a_x^dag a_y).
OperatorMatrix angular_momentum_z(const ModeSpace& space);
/// J = L_z + sigma_z / 2, conserved by the Jahn-Teller Hamiltonian.
OperatorMatrix conserved_j(const ModeSpace& space);

/// Principal square root of a Hermitian positive semidefinite operator.
/// Eigenvalues in [-1e-6, 0) are clamped to zero; anything lower throws NegativeSpectrum.
OperatorMatrix operator_sqrt(const OperatorMatrix& a);

cplx expectation(const SpinBosonState& psi, const OperatorMatrix& a);
cplx expectation(const DensityMatrix& rho, const OperatorMatrix& a);

/// |<a|b>|^2.
double fidelity(const SpinBosonState& a, const SpinBosonState& b);
/// <psi|rho|psi>.
double fidelity(const SpinBosonState& a, const DensityMatrix& b);
/// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);
/// Squared norm of the projection of psi onto span(basis columns); columns must be orthonormal.
double subspace_fidelity(const SpinBosonState& psi, const DenseOp& basis);

DensityMatrix partial_trace_spin(const SpinBosonState& psi);
DensityMatrix partial_trace_spin(const DensityMatrix& rho);
/// |spin><spin| (x) rho_motional.
DensityMatrix embed(const DensityMatrix& motional, std::array<cplx, 2> spin);

}  // namespace cisim
