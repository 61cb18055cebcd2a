#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "cisim/fock.hpp"

using namespace cisim;
using Catch::Matchers::WithinAbs;

namespace {

SpinBosonState random_state(const ModeSpace& space, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    StateVec v(space.dim());
    for (auto& c : v) c = cplx(g(rng), g(rng));
    return SpinBosonState(space, v / v.norm());
}

}  // namespace

TEST_CASE("basis index round-trips through labels") {
    const ModeSpace space(5, 3);
    REQUIRE(space.dim() == 2 * 5 * 3);
    for (int i = 0; i < space.dim(); ++i) {
        const auto l = space.label(i);
        CHECK(space.index(l.spin, l.nx, l.ny) == i);
    }
    CHECK(space.index(1, 0, 0) == 15);
}

TEST_CASE("ladder operators act on Fock states") {
    const ModeSpace space(8, 8);
    const OperatorMatrix a = ladder(space, Mode::x, Ladder::lower);
    const OperatorMatrix ad = ladder(space, Mode::x, Ladder::raise);
    const auto vac = SpinBosonState::product(space, {1.0, 0.0});
    CHECK(a.apply(vac.amplitudes()).norm() == 0.0);

    const auto three = SpinBosonState::product(space, {1.0, 0.0}, 3, 0);
    const StateVec up = ad.apply(three.amplitudes());
    CHECK_THAT(up[space.index(0, 4, 0)].real(), WithinAbs(2.0, 1e-14));

    // [a, a^dag] from an explicit product of the two matrices.
    const DenseOp comm = a.dense() * ad.dense() - ad.dense() * a.dense();
    for (int n = 0; n <= 6; ++n)
        for (int m = 0; m < 8; ++m) {
            const int i = space.index(0, n, m);
            CHECK_THAT(comm(i, i).real(), WithinAbs(1.0, 1e-12));
        }
}

TEST_CASE("Pauli operators follow the declared convention") {
    const ModeSpace space(3, 3);
    const auto up = SpinBosonState::product(space, {1.0, 0.0});
    const StateVec z = pauli(space, Pauli::z).apply(up.amplitudes());
    CHECK((z - up.amplitudes()).norm() < 1e-15);

    const DenseOp id = DenseOp::Identity(space.dim(), space.dim());
    const DenseOp sx = pauli(space, Pauli::x).dense();
    const DenseOp sy = pauli(space, Pauli::y).dense();
    const DenseOp sp = pauli(space, Pauli::plus).dense();
    const DenseOp sm = pauli(space, Pauli::minus).dense();
    CHECK((sx * sx - id).norm() < 1e-14);
    CHECK((sp * sm + sm * sp - id).norm() < 1e-14);
    CHECK((sp - 0.5 * (sx - cplx(0, 1) * sy)).norm() < 1e-14);
}

TEST_CASE("operator_sqrt re-squares to its input") {
    const ModeSpace space(10, 2);
    const OperatorMatrix one = identity(space);
    CHECK(operator_sqrt(one).dense().isApprox(one.dense(), 1e-12));

    DenseOp d = DenseOp::Zero(2, 2);
    d(0, 0) = 4.0;
    d(1, 1) = 9.0;
    const DenseOp r = operator_sqrt(OperatorMatrix::from_dense(d)).dense();
    CHECK_THAT(r(0, 0).real(), WithinAbs(2.0, 1e-12));
    CHECK_THAT(r(1, 1).real(), WithinAbs(3.0, 1e-12));

    const OperatorMatrix q = quadrature(space, Mode::x);
    const OperatorMatrix q2 = q * q;
    const OperatorMatrix root = operator_sqrt(q2);
    CHECK((root * root - q2).max_abs() <= 1e-8);
    CHECK(root.hermiticity_error() <= 1e-12);

    DenseOp bad = DenseOp::Zero(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(operator_sqrt(OperatorMatrix::from_dense(bad)), SimError);
    DenseOp neg = DenseOp::Zero(2, 2);
    neg(0, 0) = -1.0;
    try {
        operator_sqrt(OperatorMatrix::from_dense(neg));
        FAIL("expected NegativeSpectrum");
    } catch (const SimError& e) {
        CHECK(e.code() == ErrorCode::NegativeSpectrum);
    }
}

TEST_CASE("expectation values of simple states") {
    const ModeSpace space(14, 14);
    const auto vac = SpinBosonState::plus_vacuum(space);
    CHECK(std::abs(expectation(vac, number(space, Mode::x))) == 0.0);
    const OperatorMatrix x = position(space, Mode::x);
    CHECK_THAT(expectation(vac, x * x).real(), WithinAbs(0.5, 1e-14));

    const auto coh = SpinBosonState::coherent(space, {1.0, 0.0}, 0.7, 0.0);
    CHECK_THAT(expectation(coh, number(space, Mode::x)).real(), WithinAbs(0.49, 1e-10));

    const OperatorMatrix h = number(space, Mode::y) + pauli(space, Pauli::x);
    const auto psi = random_state(space, 3);
    CHECK(std::abs(expectation(psi, h).imag()) < 1e-12);
    const ModeSpace other(3, 3);
    CHECK_THROWS_AS(expectation(psi, number(other, Mode::x)), SimError);
}

TEST_CASE("fidelity of pure and mixed states") {
    const ModeSpace space(14, 4);
    const auto psi = random_state(space, 7);
    CHECK_THAT(fidelity(psi, psi), WithinAbs(1.0, 1e-12));
    const auto a = SpinBosonState::product(space, {1.0, 0.0}, 1, 0);
    const auto b = SpinBosonState::product(space, {1.0, 0.0}, 2, 0);
    CHECK(fidelity(a, b) == 0.0);

    const auto vac = SpinBosonState::product(space, {1.0, 0.0});
    const auto coh = SpinBosonState::coherent(space, {1.0, 0.0}, 0.5, 0.0);
    // |<0|alpha>|^2 = exp(-|alpha|^2).
    CHECK_THAT(fidelity(vac, coh), WithinAbs(std::exp(-0.25), 1e-10));

    const auto rho_a = DensityMatrix::from_pure(vac);
    const auto rho_b = DensityMatrix::from_pure(coh);
    CHECK_THAT(fidelity(rho_a, rho_b), WithinAbs(std::exp(-0.25), 1e-8));
    CHECK_THAT(fidelity(vac, rho_b), WithinAbs(std::exp(-0.25), 1e-10));
}

TEST_CASE("partial trace over the spin") {
    const ModeSpace space(4, 4);
    const auto prod = SpinBosonState::product(space, {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)});
    const DensityMatrix r1 = partial_trace_spin(prod);
    CHECK(r1.factor() == Factor::motional);
    CHECK_THAT(r1.purity(), WithinAbs(1.0, 1e-12));

    StateVec v = StateVec::Zero(space.dim());
    v[space.index(0, 0, 0)] = 1.0 / std::sqrt(2.0);
    v[space.index(1, 1, 0)] = 1.0 / std::sqrt(2.0);
    CHECK_THAT(partial_trace_spin(SpinBosonState(space, v)).purity(), WithinAbs(0.5, 1e-12));

    for (std::uint64_t seed = 1; seed <= 5; ++seed)
        CHECK_THAT(partial_trace_spin(random_state(space, seed)).trace().real(), WithinAbs(1.0, 1e-10));

    StateVec m = StateVec::Zero(space.motional_dim());
    m[space.motional_index(1, 2)] = cplx(0.6, 0.0);
    m[space.motional_index(0, 3)] = cplx(0.0, 0.8);
    const DensityMatrix motional = DensityMatrix::motional_from_pure(space, m);
    const DensityMatrix back = partial_trace_spin(embed(motional, {0.6, cplx(0, 0.8)}));
    CHECK((back.matrix() - motional.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("truncated canonical commutator") {
    const ModeSpace space(8, 6);
    const OperatorMatrix x = position(space, Mode::x);
    const OperatorMatrix p = momentum(space, Mode::x);
    const DenseOp c = commutator(x, p).dense();
    for (int i = 0; i < space.dim(); ++i)
        for (int j = 0; j < space.dim(); ++j) {
            if (space.label(i).nx >= 7 || space.label(j).nx >= 7) continue;
            const cplx want = i == j ? cplx(0.0, 1.0) : cplx(0.0, 0.0);
            CHECK(std::abs(c(i, j) - want) <= 1e-10);
        }
    CHECK(x.hermiticity_error() <= 1e-12);
    CHECK(p.hermiticity_error() <= 1e-12);
    CHECK(angular_momentum_z(space).hermiticity_error() <= 1e-12);
}
