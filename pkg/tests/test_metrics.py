import numpy as np
import pytest

from tomobench.linalg import NotPositiveSemidefinite
from tomobench.metrics import (
    aggregate,
    fidelity_pure,
    fidelity_uhlmann,
    histogram,
    purity,
    trace_distance,
)
from tomobench.states import StateSpec, ghz_ket, haar_random_ket, make_state


def random_density(dim, seed):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


class TestFidelityPure:
    def test_self_fidelity(self):
        psi = ghz_ket(4)
        assert fidelity_pure(psi, np.outer(psi, psi.conj())) == pytest.approx(1.0)

    def test_maximally_mixed(self):
        assert fidelity_pure(ghz_ket(4), np.eye(16) / 16) == pytest.approx(1 / 16)

    def test_linear_in_second_argument(self):
        psi = haar_random_ket(16, 50)
        r1, r2 = random_density(16, 51), random_density(16, 52)
        for a in (0.0, 0.3, 0.7, 1.0):
            lhs = fidelity_pure(psi, a * r1 + (1 - a) * r2)
            rhs = a * fidelity_pure(psi, r1) + (1 - a) * fidelity_pure(psi, r2)
            assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_defined_outside_unit_interval(self):
        psi = np.array([1.0, 0.0], dtype=complex)
        assert fidelity_pure(psi, np.diag([1.2, -0.2])) == pytest.approx(1.2)


class TestFidelityUhlmann:
    def test_self_fidelity(self):
        for seed in range(3):
            rho = random_density(8, 60 + seed)
            assert fidelity_uhlmann(rho, rho) == pytest.approx(1.0, abs=1e-9)

    def test_pure_vs_mixed(self):
        zero = np.zeros(16, dtype=complex)
        zero[0] = 1.0
        proj = np.outer(zero, zero.conj())
        assert fidelity_uhlmann(proj, np.eye(16) / 16) == pytest.approx(1 / 16, abs=1e-9)

    def test_agrees_with_pure_formula(self):
        for seed in range(100):
            psi = haar_random_ket(8, 200 + seed)
            rho = random_density(8, 300 + seed)
            proj = np.outer(psi, psi.conj())
            assert fidelity_uhlmann(proj, rho) == pytest.approx(
                fidelity_pure(psi, rho), abs=1e-9
            )

    def test_symmetry(self):
        for seed in range(20):
            r1, r2 = random_density(8, 400 + seed), random_density(8, 500 + seed)
            assert fidelity_uhlmann(r1, r2) == pytest.approx(
                fidelity_uhlmann(r2, r1), abs=1e-9
            )

    def test_rejects_nonphysical(self):
        rho = make_state(StateSpec(kind="ghz4"))
        bad = np.diag([1.1, -0.1] + [0.0] * 14).astype(complex)
        with pytest.raises(NotPositiveSemidefinite):
            fidelity_uhlmann(rho, bad)

    def test_range(self):
        for seed in range(10):
            f = fidelity_uhlmann(random_density(8, 600 + seed), random_density(8, 700 + seed))
            assert -1e-9 <= f <= 1.0 + 1e-9


class TestPurity:
    def test_maximally_mixed(self):
        value, flagged = purity(np.eye(16) / 16)
        assert value == pytest.approx(1 / 16)
        assert not flagged

    def test_pure_projector(self):
        psi = haar_random_ket(16, 70)
        value, flagged = purity(np.outer(psi, psi.conj()))
        assert value == pytest.approx(1.0)
        assert not flagged

    def test_nonphysical_flagged(self):
        value, flagged = purity(np.diag([1.2, -0.2]))
        assert value == pytest.approx(1.48)
        assert flagged


class TestAggregate:
    def test_constant_samples(self):
        st = aggregate([0.8, 0.8, 0.8], 0.8)
        assert st.mse == 0.0
        assert st.bias_sq == pytest.approx(0.0, abs=1e-30)
        assert abs(st.variance) <= 1e-30

    def test_hand_case(self):
        st = aggregate([1.0, 0.6], 0.8)
        assert st.bias_sq == pytest.approx(0.0, abs=1e-15)
        assert st.variance == pytest.approx(0.04)
        assert st.mse == pytest.approx(0.04)

    def test_fractions(self):
        st = aggregate([1.2, 0.5, -0.1, 0.9], 0.8)
        assert st.frac_above_one == 0.25
        assert st.frac_below_zero == 0.25

    def test_decomposition_identity(self):
        rng = np.random.default_rng(71)
        for _ in range(1000):
            samples = rng.standard_normal(rng.integers(2, 40))
            f0 = rng.standard_normal()
            st = aggregate(samples, f0)
            assert abs(st.mse - st.bias_sq - st.variance) <= 1e-12

    def test_requires_two_samples(self):
        with pytest.raises(ValueError):
            aggregate([0.5], 0.5)


class TestHistogram:
    def test_two_adjacent_bins(self):
        bins = histogram([0.0005, 0.0015], 0.001)
        assert bins == [(0.0, 1), (0.001, 1)]

    def test_single_bin(self):
        bins = histogram([0.5, 0.5, 0.5], 0.002)
        assert len(bins) == 1
        assert bins[0][1] == 3

    def test_counts_sum(self):
        rng = np.random.default_rng(72)
        samples = rng.uniform(-0.2, 1.3, size=500)
        bins = histogram(samples, 0.002)
        assert sum(c for _, c in bins) == 500

    def test_covers_unphysical_range(self):
        bins = histogram([-0.05, 1.05], 0.01)
        lefts = [left for left, _ in bins]
        assert min(lefts) <= -0.05
        assert max(lefts) >= 1.04

    def test_rejects_bad_width(self):
        with pytest.raises(ValueError):
            histogram([0.1], 0.0)


class TestTraceDistance:
    def test_identical(self):
        rho = random_density(8, 80)
        assert trace_distance(rho, rho) == pytest.approx(0.0, abs=1e-14)

    def test_orthogonal_pure_states(self):
        a = np.diag([1.0, 0.0]).astype(complex)
        b = np.diag([0.0, 1.0]).astype(complex)
        assert trace_distance(a, b) == pytest.approx(1.0)
