#include "cisim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace cisim {

// ------------------------------------------------------------ propagators

StateVec krylov_expm_action(const SparseOp& h, const StateVec& v, double dt, const KrylovOptions& opts) {
    const int n = static_cast<int>(v.size());
    require(h.rows() == n, ErrorCode::DimensionMismatch, "krylov: operator and vector disagree");
    if (dt == 0.0 || v.norm() == 0.0) return v;

    const int m_max = std::min(opts.subspace, n);
    StateVec w = v;
    double done = 0.0;
    double step = dt;
    int substeps = 0;

    Eigen::MatrixXcd basis(n, m_max + 1);
    while (done < dt) {
        require(++substeps <= opts.max_substeps, ErrorCode::ConvergenceFailure, "krylov: too many substeps");
        const double beta = w.norm();
        basis.col(0) = w / beta;

        // Lanczos with full reorthogonalization.
        Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m_max);
        Eigen::VectorXd offdiag = Eigen::VectorXd::Zero(m_max);
        int m = m_max;
        bool breakdown = false;
        for (int j = 0; j < m_max; ++j) {
            StateVec u = h * basis.col(j);
            alpha[j] = basis.col(j).dot(u).real();
            for (int pass = 0; pass < 2; ++pass)
                u -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).adjoint() * u);
            offdiag[j] = u.norm();
            if (offdiag[j] <= 1e-13 * std::max(1.0, std::abs(alpha[j]))) {
                m = j + 1;
                breakdown = true;
                break;
            }
            basis.col(j + 1) = u / offdiag[j];
        }

        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
        for (int j = 0; j < m; ++j) {
            tri(j, j) = alpha[j];
            if (j + 1 < m) tri(j, j + 1) = tri(j + 1, j) = offdiag[j];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
        const Eigen::MatrixXd& q = es.eigenvectors();
        const Eigen::VectorXd& lam = es.eigenvalues();

        int halvings = 0;
        while (true) {
            const double hstep = std::min(step, dt - done);
            Eigen::VectorXcd y(m);
            const Eigen::VectorXcd phase =
                (lam.cast<cplx>() * cplx(0.0, -hstep)).array().exp().matrix().cwiseProduct(q.row(0).transpose().cast<cplx>());
            y = q.cast<cplx>() * phase;
            const double err = breakdown ? 0.0 : beta * offdiag[m - 1] * std::abs(y[m - 1]);
            if (err <= opts.tolerance * std::max(1.0, hstep / dt)) {
                w = beta * (basis.leftCols(m) * y);
                done += hstep;
                if (halvings == 0 && hstep == step) step *= 1.5;
                break;
            }
            step = 0.5 * hstep;
            require(++halvings < 60, ErrorCode::ConvergenceFailure, "krylov: residual above tolerance");
        }
        if (dt - done <= 1e-15 * dt) break;
    }
    return w;
}

DenseOp dense_propagator(const OperatorMatrix& h, double dt) {
    const DenseOp a = cplx(0.0, -dt) * h.dense();
    return a.exp();
}

SpinBosonState exact_step(const SpinBosonState& psi, const OperatorMatrix& h, double dt, ExpBackend backend) {
    require(psi.dim() == h.dim(), ErrorCode::DimensionMismatch, "exact_step");
    if (backend == ExpBackend::automatic) backend = psi.dim() <= kDenseLimit ? ExpBackend::dense : ExpBackend::krylov;
    if (backend == ExpBackend::dense) return SpinBosonState(psi.space(), dense_propagator(h, dt) * psi.amplitudes());
    return SpinBosonState(psi.space(), krylov_expm_action(h.sparse(), psi.amplitudes(), dt));
}

// ------------------------------------------------------------- evolution

namespace {

StateVec propagate(const OperatorMatrix& h, const StateVec& v, double dt, const EvolutionOptions& opts) {
    ExpBackend b = opts.backend;
    if (b == ExpBackend::automatic) b = v.size() <= kDenseLimit ? ExpBackend::dense : ExpBackend::krylov;
    if (b == ExpBackend::dense) return dense_propagator(h, dt) * v;
    return krylov_expm_action(h.sparse(), v, dt, opts.krylov);
}

// exp(-i D dt) for a diagonal operator.
void apply_diagonal_phase(const Eigen::VectorXd& diag, double dt, StateVec& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] *= std::polar(1.0, -diag[i] * dt);
}

Eigen::VectorXd diagonal_of(const OperatorMatrix& d) {
    const DenseOp dense = d.dense();
    return dense.diagonal().real();
}

class Recorder {
public:
    Recorder(const ModeSpace& space, const EvolutionOptions& opts, int total_steps)
        : j_(conserved_j(space)), opts_(opts) {
        stride_ = std::max(1, total_steps / std::max(1, opts.samples));
    }

    void guard(const StateVec& v, const ModeSpace& space, double t) {
        const SpinBosonState s(space, v);
        const double edge = s.edge_population(2);
        max_edge_ = std::max(max_edge_, edge);
        if (opts_.guard_leakage && edge >= opts_.leak_threshold)
            fail(ErrorCode::TruncationLeak, "top-two Fock population " + std::to_string(edge) + " at t = " +
                                                std::to_string(t) + "; increase the truncation");
    }

    void maybe_record(int step, double t, std::array<double, 2> scales, const StateVec& v, const ModeSpace& space,
                      EvolutionResult& out) {
        if (opts_.samples <= 0 || step % stride_ != 0) return;
        SpinBosonState s(space, v);
        out.diagnostics.norm_drift.push_back(std::abs(s.norm() - 1.0));
        out.diagnostics.j_series.push_back(expectation(s, j_).real());
        out.trajectory.push_back({t, scales, std::move(s)});
    }

    double max_edge() const { return max_edge_; }

private:
    OperatorMatrix j_;
    EvolutionOptions opts_;
    int stride_ = 1;
    double max_edge_ = 0.0;
};

}  // namespace

EvolutionResult evolve_piecewise(const SpinBosonState& initial, double total_time, int steps,
                                 const std::function<OperatorMatrix(double)>& hamiltonian,
                                 const std::function<std::array<double, 2>(double)>& scales,
                                 const EvolutionOptions& opts) {
    require(steps >= 1 && total_time > 0.0, ErrorCode::InvalidArgument, "evolve_piecewise: bad time grid");
    const ModeSpace& space = initial.space();
    const double dt = total_time / steps;
    EvolutionResult out{initial, {}, {}};
    Recorder rec(space, opts, steps);
    StateVec v = initial.amplitudes();
    rec.guard(v, space, 0.0);
    rec.maybe_record(0, 0.0, scales(0.0), v, space, out);
    for (int j = 0; j < steps; ++j) {
        const double tm = (j + 0.5) * dt;
        v = propagate(hamiltonian(tm), v, dt, opts);
        const double t = (j + 1) * dt;
        rec.guard(v, space, t);
        rec.maybe_record(j + 1, t, scales(t), v, space, out);
    }
    out.final_state = SpinBosonState(space, std::move(v));
    out.diagnostics.max_edge_population = rec.max_edge();
    return out;
}

EvolutionResult trotter_evolve(const SpinBosonState& initial, const ModelParams& p, const RampSchedule& schedule,
                               const EvolutionOptions& opts) {
    p.validate();
    schedule.validate();
    const ModeSpace& space = initial.space();
    const JahnTellerParts parts = jahn_teller_parts(space, p);
    const auto scales = [&](double t) { return schedule.scales_at(t); };

    if (schedule.scheme == TrotterScheme::exact_simultaneous) {
        const auto ham = [&](double t) {
            const auto s = schedule.scales_at(t);
            return parts.at(s[0], s[1]);
        };
        return evolve_piecewise(initial, schedule.total_time, schedule.substeps, ham, scales, opts);
    }

    const int rounds = schedule.rounds;
    const double round_time = schedule.total_time / rounds;
    const double half = 0.5 * round_time;
    const Eigen::VectorXd diag = diagonal_of(parts.diagonal);
    const OperatorMatrix ny = p.nu * number(space, Mode::y);

    EvolutionResult out{initial, {}, {}};
    Recorder rec(space, opts, rounds);
    StateVec v = initial.amplitudes();
    rec.guard(v, space, 0.0);
    rec.maybe_record(0, 0.0, scales(0.0), v, space, out);

    for (int k = 0; k < rounds; ++k) {
        const auto s = schedule.scales_at(schedule.round_sample_time(k));
        switch (schedule.scheme) {
            case TrotterScheme::first_order_split:
                apply_diagonal_phase(diag, half, v);
                v = propagate(s[0] * parts.push_x, v, round_time, opts);
                apply_diagonal_phase(diag, half, v);
                v = propagate(s[1] * parts.push_y, v, round_time, opts);
                break;
            case TrotterScheme::strang:
                apply_diagonal_phase(diag, half, v);
                v = propagate(s[0] * parts.push_x, v, half, opts);
                v = propagate(s[1] * parts.push_y, v, round_time, opts);
                v = propagate(s[0] * parts.push_x, v, half, opts);
                apply_diagonal_phase(diag, half, v);
                break;
            case TrotterScheme::mode_split:
                v = propagate(parts.diagonal - ny + s[0] * parts.push_x, v, round_time, opts);
                v = propagate(ny + s[1] * parts.push_y, v, round_time, opts);
                break;
            case TrotterScheme::exact_simultaneous: break;
        }
        const double t = (k + 1) * round_time;
        rec.guard(v, space, t);
        rec.maybe_record(k + 1, t, scales(t), v, space, out);
    }
    out.final_state = SpinBosonState(space, std::move(v));
    out.diagnostics.max_edge_population = rec.max_edge();
    return out;
}

// -------------------------------------------------------------- Lindblad

void LindbladSpec::validate() const {
    for (const auto& c : channels)
        require(std::isfinite(c.rate) && c.rate >= 0.0, ErrorCode::InvalidArgument, "collapse rates must be >= 0");
    require(steps >= 1 && positivity_stride >= 1, ErrorCode::InvalidArgument, "lindblad step counts");
}

OperatorMatrix collapse_operator(const ModeSpace& space, Collapse op) {
    switch (op) {
        case Collapse::lower_x: return ladder(space, Mode::x, Ladder::lower);
        case Collapse::raise_x: return ladder(space, Mode::x, Ladder::raise);
        case Collapse::number_x: return number(space, Mode::x);
        case Collapse::lower_y: return ladder(space, Mode::y, Ladder::lower);
        case Collapse::raise_y: return ladder(space, Mode::y, Ladder::raise);
        case Collapse::number_y: return number(space, Mode::y);
    }
    return OperatorMatrix::zero(space.dim());
}

OpenEvolutionResult lindblad_evolve(const DensityMatrix& initial, const ModelParams& p, const RampSchedule& schedule,
                                    const LindbladSpec& noise, const EvolutionOptions& opts) {
    p.validate();
    schedule.validate();
    noise.validate();
    require(initial.factor() == Factor::full, ErrorCode::InvalidArgument, "lindblad_evolve needs a full density matrix");
    const ModeSpace& space = initial.space();
    const NoisyParts parts = noisy_parts(space, p, noise.cross_coupling);

    struct Jump {
        SparseOp op;
        SparseOp op_adj;
        double rate;
    };
    std::vector<Jump> jumps;
    OperatorMatrix decay = OperatorMatrix::zero(space.dim());
    for (const auto& c : noise.channels) {
        if (c.rate == 0.0) continue;
        const OperatorMatrix l = collapse_operator(space, c.op);
        decay += c.rate * (l.adjoint() * l);
        jumps.push_back({l.sparse(), SparseOp(l.sparse().adjoint()), c.rate});
    }
    const OperatorMatrix half_decay = cplx(0.0, -0.5) * decay;

    // rho stays Hermitian, so every product is taken as dense * sparse, which is the
    // faster layout for Eigen: (H rho)^dag = rho H^dag and L rho L^dag = (rho L^dag)^dag L^dag.
    const SparseOp decay_adj = SparseOp(half_decay.sparse().adjoint());
    const auto rhs = [&](const DenseOp& rho, double t) {
        const auto s = schedule.scales_at(t);
        const SparseOp heff_adj = parts.at(s[0], s[1], t).sparse() + decay_adj;
        DenseOp y_adj(rho.rows(), rho.cols());
        y_adj.noalias() = rho * heff_adj;
        DenseOp out = cplx(0.0, 1.0) * y_adj;
        out -= cplx(0.0, 1.0) * y_adj.adjoint();
        DenseOp b(rho.rows(), rho.cols());
        for (const auto& j : jumps) {
            b.noalias() = rho * j.op_adj;
            const DenseOp b_adj = b.adjoint();
            out.noalias() += j.rate * (b_adj * j.op_adj);
        }
        return out;
    };

    const int steps = noise.steps;
    const double dt = schedule.total_time / steps;
    const int stride = std::max(1, steps / std::max(1, opts.samples));
    const cplx trace0 = initial.trace();

    OpenEvolutionResult out{initial, {}, 0.0, initial.min_eigenvalue(), 0.0};
    DenseOp rho = initial.matrix();
    const auto check_edge = [&](const DenseOp& m, double t) {
        const double edge = DensityMatrix(space, Factor::full, m).edge_population(2);
        out.max_edge_population = std::max(out.max_edge_population, edge);
        if (opts.guard_leakage && edge >= opts.leak_threshold)
            fail(ErrorCode::TruncationLeak, "top-two Fock population " + std::to_string(edge) + " at t = " +
                                                std::to_string(t));
    };
    check_edge(rho, 0.0);
    if (opts.samples > 0) out.trajectory.push_back({0.0, initial});

    for (int k = 0; k < steps; ++k) {
        const double t = k * dt;
        const DenseOp k1 = rhs(rho, t);
        const DenseOp k2 = rhs(rho + (0.5 * dt) * k1, t + 0.5 * dt);
        const DenseOp k3 = rhs(rho + (0.5 * dt) * k2, t + 0.5 * dt);
        const DenseOp k4 = rhs(rho + dt * k3, t + dt);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rho = (0.5 * (rho + rho.adjoint())).eval();

        const double t1 = (k + 1) * dt;
        const double drift = std::abs(rho.trace() - trace0);
        out.max_trace_drift = std::max(out.max_trace_drift, drift);
        if (drift > noise.trace_tolerance)
            fail(ErrorCode::TraceDrift, "trace drift " + std::to_string(drift) + " at t = " + std::to_string(t1));
        check_edge(rho, t1);
        if ((k + 1) % noise.positivity_stride == 0 || k + 1 == steps) {
            const double lmin = DensityMatrix(space, Factor::full, rho).min_eigenvalue();
            out.min_sampled_eigenvalue = std::min(out.min_sampled_eigenvalue, lmin);
            if (lmin < noise.positivity_floor)
                fail(ErrorCode::PositivityViolation,
                     "min eigenvalue " + std::to_string(lmin) + " at t = " + std::to_string(t1));
        }
        if (opts.samples > 0 && (k + 1) % stride == 0)
            out.trajectory.push_back({t1, DensityMatrix(space, Factor::full, rho)});
    }
    out.final_state = DensityMatrix(space, Factor::full, std::move(rho));
    return out;
}

// ------------------------------------------------------------ diagnostics

namespace {

std::array<double, 2> ramp_rates(const RampSchedule& s, double t) {
    const double r = 1.0 / s.total_time;
    switch (s.shape) {
        case RampShape::linear: return {r, r};
        case RampShape::staggered: return t < 0.5 * s.total_time ? std::array{2.0 * r, 0.0} : std::array{0.0, 2.0 * r};
        case RampShape::constant: return {0.0, 0.0};
    }
    return {r, r};
}

struct EigenGroups {
    std::vector<int> start;  // first index of each group, plus a sentinel
    std::vector<double> energy;
};

EigenGroups group_eigenvalues(const Eigen::VectorXd& lam, double tol) {
    EigenGroups g;
    for (int i = 0; i < lam.size(); ++i) {
        if (i == 0 || lam[i] - lam[i - 1] > tol) {
            g.start.push_back(i);
            g.energy.push_back(0.0);
        }
    }
    g.start.push_back(static_cast<int>(lam.size()));
    for (std::size_t k = 0; k + 1 < g.start.size(); ++k) {
        const int a = g.start[k];
        const int n = g.start[k + 1] - a;
        g.energy[k] = lam.segment(a, n).mean();
    }
    return g;
}

}  // namespace

double adiabaticity_metric(const ModeSpace& space, const ModelParams& p, const RampSchedule& schedule, double t,
                           int n_excited) {
    schedule.validate();
    require(t >= 0.0 && t <= schedule.total_time, ErrorCode::InvalidArgument, "t outside the ramp");
    require(n_excited >= 0, ErrorCode::InvalidArgument, "n_excited must be non-negative");
    const JahnTellerParts parts = jahn_teller_parts(space, p);
    const auto rate = ramp_rates(schedule, t);
    const OperatorMatrix dh = rate[0] * parts.push_x + rate[1] * parts.push_y;
    if (dh.max_abs() == 0.0) return 0.0;

    const auto s = schedule.scales_at(t);
    const DenseOp h = parts.at(s[0], s[1]).dense();
    Eigen::SelfAdjointEigenSolver<DenseOp> es(h);
    require(es.info() == Eigen::Success, ErrorCode::ConvergenceFailure, "adiabaticity: eigensolver failed");
    // Levels from different J sectors cross exactly and the eigensolver mixes them arbitrarily.
    // Inside every cluster of near-coincident levels, rotate to J eigenvectors so that
    // symmetry-forbidden couplings come out as zero; energies are read back from H.
    DenseOp q = es.eigenvectors();
    const Eigen::VectorXd& lam = es.eigenvalues();
    const DenseOp jd = conserved_j(space).dense();
    for (Eigen::Index a = 0; a < lam.size();) {
        Eigen::Index b = a + 1;
        while (b < lam.size() && lam[b] - lam[b - 1] < 1e-6) ++b;
        if (b - a > 1) {
            const DenseOp block = q.middleCols(a, b - a);
            Eigen::SelfAdjointEigenSolver<DenseOp> js(block.adjoint() * jd * block);
            q.middleCols(a, b - a) = block * js.eigenvectors();
        }
        a = b;
    }
    Eigen::VectorXd energy(q.cols());
    for (Eigen::Index k = 0; k < q.cols(); ++k) energy[k] = (q.col(k).adjoint() * h * q.col(k)).value().real();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(q.cols()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return energy[x] < energy[y]; });
    const DenseOp unsorted = q;
    Eigen::VectorXd sorted(q.cols());
    for (std::size_t k = 0; k < order.size(); ++k) {
        q.col(static_cast<Eigen::Index>(k)) = unsorted.col(order[k]);
        sorted[static_cast<Eigen::Index>(k)] = energy[order[k]];
    }
    const EigenGroups g = group_eigenvalues(sorted, 1e-9);
    Eigen::VectorXd jval(q.cols());
    for (Eigen::Index k = 0; k < q.cols(); ++k) jval[k] = (q.col(k).adjoint() * jd * q.col(k)).value().real();
    // dH conserves J, so eigenspaces without a common J value are not coupled. Truncation
    // leaves a residue of order 1e-6 relative between them, which must not be divided by a tiny gap.
    const auto share_j = [&](int a, int b) {
        for (int i = g.start[a]; i < g.start[a + 1]; ++i)
            for (int k = g.start[b]; k < g.start[b + 1]; ++k)
                if (std::abs(jval[i] - jval[k]) < 0.25) return true;
        return false;
    };
    const DenseOp dq = dh.sparse() * q;

    const int n_groups = static_cast<int>(g.energy.size());
    const int lowest = std::min(n_groups, n_excited + 1);
    double worst = 0.0;
    for (int a = 0; a < lowest; ++a) {
        const int a0 = g.start[a];
        const int na = g.start[a + 1] - a0;
        // rows <n| dH |all>
        const DenseOp rows = q.middleCols(a0, na).adjoint() * dq;
        for (int b = 0; b < n_groups; ++b) {
            if (b == a || !share_j(a, b)) continue;
            const int b0 = g.start[b];
            const int nb = g.start[b + 1] - b0;
            const DenseOp block = rows.middleCols(b0, nb);
            Eigen::JacobiSVD<DenseOp> svd(block);
            const double element = svd.singularValues()(0);
            if (element < 1e-12) continue;
            const double gap = std::abs(g.energy[a] - g.energy[b]);
            require(gap >= 1e-9, ErrorCode::DegenerateGap, "coupled eigenspaces closer than 1e-9");
            worst = std::max(worst, element / (gap * gap));
        }
    }
    return worst;
}

std::vector<double> conserved_j_series(const EvolutionResult& result) {
    if (result.trajectory.empty()) return {};
    const OperatorMatrix j = conserved_j(result.trajectory.front().state.space());
    std::vector<double> out;
    out.reserve(result.trajectory.size());
    for (const auto& s : result.trajectory) out.push_back(expectation(s.state, j).real());
    return out;
}

double j_sector_leakage(const SpinBosonState& initial, const SpinBosonState& final_state) {
    require(initial.space() == final_state.space(), ErrorCode::DimensionMismatch, "j_sector_leakage");
    const DenseOp j = conserved_j(initial.space()).dense();
    Eigen::SelfAdjointEigenSolver<DenseOp> es(0.5 * (j + j.adjoint()));
    const EigenGroups g = group_eigenvalues(es.eigenvalues(), 1e-6);
    const StateVec ci = es.eigenvectors().adjoint() * initial.amplitudes();
    const StateVec cf = es.eigenvectors().adjoint() * final_state.amplitudes();
    double leak = 0.0;
    for (std::size_t k = 0; k + 1 < g.start.size(); ++k) {
        const int a = g.start[k];
        const int n = g.start[k + 1] - a;
        if (ci.segment(a, n).squaredNorm() < 1e-12) leak += cf.segment(a, n).squaredNorm();
    }
    return leak;
}

EhrenfestReport ehrenfest_residual(const EvolutionResult& result, const ModelParams& p) {
    const auto& tr = result.trajectory;
    require(tr.size() >= 3, ErrorCode::InsufficientSampling, "need at least three trajectory samples");
    const double h = tr[1].time - tr[0].time;
    for (std::size_t i = 1; i < tr.size(); ++i)
        require(std::abs((tr[i].time - tr[i - 1].time) - h) <= 1e-9 * std::max(1.0, h), ErrorCode::InsufficientSampling,
                "trajectory stride must be uniform");
    const double period = 2.0 * std::numbers::pi / p.nu;
    require(period / h >= 40.0, ErrorCode::InsufficientSampling,
            "need at least 40 samples per oscillator period, have " + std::to_string(period / h));

    const ModeSpace& space = tr.front().state.space();
    const OperatorMatrix x = position(space, Mode::x);
    const OperatorMatrix y = position(space, Mode::y);
    const OperatorMatrix sx = pauli(space, Pauli::x);
    const OperatorMatrix sy = pauli(space, Pauli::y);

    std::vector<double> ex, ey, esx, esy;
    for (const auto& s : tr) {
        ex.push_back(expectation(s.state, x).real());
        ey.push_back(expectation(s.state, y).real());
        esx.push_back(expectation(s.state, sx).real());
        esy.push_back(expectation(s.state, sy).real());
    }
    double scale = 0.0;
    for (std::size_t i = 0; i < ex.size(); ++i) scale = std::max({scale, std::abs(ex[i]), std::abs(ey[i])});
    scale *= p.nu * p.nu;

    EhrenfestReport rep;
    const double c = p.nu * p.omega / std::sqrt(2.0);
    for (std::size_t i = 1; i + 1 < tr.size(); ++i) {
        const double ddx = (ex[i + 1] - 2.0 * ex[i] + ex[i - 1]) / (h * h);
        const double ddy = (ey[i + 1] - 2.0 * ey[i] + ey[i - 1]) / (h * h);
        const double rx = ddx + p.nu * p.nu * ex[i] + c * tr[i].scales[0] * esx[i];
        const double ry = ddy + p.nu * p.nu * ey[i] + c * tr[i].scales[1] * esy[i];
        rep.times.push_back(tr[i].time);
        rep.residual_x.push_back(rx);
        rep.residual_y.push_back(ry);
        if (scale > 0.0) rep.max_normalized = std::max({rep.max_normalized, std::abs(rx) / scale, std::abs(ry) / scale});
    }
    return rep;
}

}  // namespace cisim
