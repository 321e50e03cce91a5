import numpy as np
import pytest

from tomobench.simulate import (
    RunSeed,
    dump_counts_csv,
    pseudo_counts,
    relative_frequencies,
    simulate_counts,
)
from tomobench.states import StateSpec, build_product_pauli_pom, make_state


@pytest.fixture(scope="module")
def pom4():
    return build_product_pauli_pom(4)


@pytest.fixture(scope="module")
def noisy_ghz():
    return make_state(StateSpec(kind="ghz4", noise_fidelity=0.8))


class TestSimulateCounts:
    def test_per_setting_sums(self, pom4, noisy_ghz):
        data = simulate_counts(noisy_ghz, pom4, 100, RunSeed(5, 0))
        assert data.counts.shape == (81, 16)
        assert np.all(data.counts.sum(axis=1) == 100)
        assert np.all(data.counts >= 0)

    def test_zero_probability_outcomes_never_hit(self, pom4):
        rho = make_state(StateSpec(kind="ghz4"))
        zzzz = pom4.setting_index["ZZZZ"]
        for run in range(50):
            data = simulate_counts(rho, pom4, 100, RunSeed(6, run))
            row = data.counts[zzzz]
            assert row[1:15].sum() == 0
            assert row[0] + row[15] == 100

    def test_deterministic(self, pom4, noisy_ghz):
        a = simulate_counts(noisy_ghz, pom4, 100, RunSeed(7, 3))
        b = simulate_counts(noisy_ghz, pom4, 100, RunSeed(7, 3))
        c = simulate_counts(noisy_ghz, pom4, 100, RunSeed(7, 4))
        assert np.array_equal(a.counts, b.counts)
        assert not np.array_equal(a.counts, c.counts)

    def test_substream_is_pure_function(self):
        assert RunSeed(1, 2).substream() == RunSeed(1, 2).substream()
        assert RunSeed(1, 2).substream() != RunSeed(1, 3).substream()
        assert RunSeed(2, 2).substream() != RunSeed(1, 2).substream()

    def test_rejects_unphysical_state(self, pom4):
        bad = np.diag([1.1, -0.1] + [0.0] * 14).astype(complex)
        with pytest.raises(ValueError):
            simulate_counts(bad, pom4, 100, RunSeed(0, 0))

    def test_rejects_zero_copies(self, pom4, noisy_ghz):
        with pytest.raises(ValueError):
            simulate_counts(noisy_ghz, pom4, 0, RunSeed(0, 0))

    def test_empirical_frequency_converges(self, pom4):
        # outcome 0000 of ZZZZ has probability 1/2 for the GHZ state; over
        # 10^4 runs of 100 copies the empirical mean is binomial with
        # standard error sqrt(0.25 / 10^6)
        rho = make_state(StateSpec(kind="ghz4"))
        zzzz = pom4.setting_index["ZZZZ"]
        probs = pom4.all_born_probabilities(rho)
        probs = np.clip(probs, 0.0, None)
        probs /= probs.sum(axis=1, keepdims=True)
        total = 0
        runs = 10_000
        for run in range(runs):
            rng = np.random.Generator(np.random.PCG64(RunSeed(8, run).substream()))
            total += rng.multinomial(100, probs[zzzz])[0]
        freq = total / (100 * runs)
        assert abs(freq - 0.5) <= 3 * np.sqrt(0.25 / (100 * runs))


class TestRelativeFrequencies:
    def test_concentrated(self, pom4):
        counts = np.zeros((81, 16), dtype=np.int64)
        counts[:, 0] = 100
        from tomobench.simulate import CountDataset

        data = CountDataset(pom=pom4, copies_per_setting=100, counts=counts)
        f = relative_frequencies(data)
        assert f[0, 0] == 1.0
        assert f[:, 1:].sum() == 0.0

    def test_rows_sum_to_one(self, pom4, noisy_ghz):
        data = simulate_counts(noisy_ghz, pom4, 100, RunSeed(9, 0))
        f = relative_frequencies(data)
        assert np.allclose(f.sum(axis=1), 1.0, atol=1e-12)

    def test_pseudo_counts_match_born(self, pom4, noisy_ghz):
        data = pseudo_counts(noisy_ghz, pom4, 100)
        f = relative_frequencies(data)
        assert np.allclose(f, pom4.all_born_probabilities(noisy_ghz), atol=1e-12)


class TestDumpCsv:
    def test_row_count_and_format(self, pom4, noisy_ghz, tmp_path):
        data = simulate_counts(noisy_ghz, pom4, 100, RunSeed(10, 0))
        path = tmp_path / "counts.csv"
        dump_counts_csv(data, path)
        lines = path.read_text().strip().split("\n")
        assert lines[0] == "setting,outcome,count"
        assert len(lines) == 1 + 81 * 16
        setting, outcome, count = lines[1].split(",")
        assert setting == "XXXX"
        assert outcome == "0000"
        assert count == str(data.counts[0, 0])
