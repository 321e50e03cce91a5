"""Simulated tomography data: seeded multinomial counts per measurement setting."""

import csv
from dataclasses import dataclass, field

import numpy as np

from .linalg import is_physical

_MASK64 = (1 << 64) - 1


def _splitmix64(x):
    """One round of the splitmix64 mixer."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


@dataclass(frozen=True)
class RunSeed:
    """Master seed plus run index; the substream seed is a pure function of both."""

    master_seed: int
    run_index: int

    def substream(self):
        return _splitmix64(_splitmix64(self.master_seed & _MASK64) ^ self.run_index)


@dataclass
class CountDataset:
    """Per-setting click counts for one simulated experiment.

    counts has shape (n_settings, n_outcomes); each row of a simulated dataset
    sums to copies_per_setting.  Rows may hold non-integer values only for
    exact-probability pseudo-data built by pseudo_counts().
    """

    pom: object
    copies_per_setting: float
    counts: np.ndarray = field(repr=False)

    def total_counts(self):
        return float(self.counts.sum())


def simulate_counts(rho, pom, copies_per_setting, seed):
    """Draw multinomial counts from the Born distribution of every setting.

    Deterministic given the seed (a RunSeed or plain integer), independent of
    execution order across runs.
    """
    if copies_per_setting < 1:
        raise ValueError("copies_per_setting must be >= 1")
    if not is_physical(rho):
        raise ValueError("true state must be a physical density matrix")
    probs = pom.all_born_probabilities(rho)
    probs = np.clip(probs, 0.0, None)
    probs /= probs.sum(axis=1, keepdims=True)
    stream = seed.substream() if isinstance(seed, RunSeed) else int(seed)
    rng = np.random.Generator(np.random.PCG64(stream))
    counts = np.empty_like(probs, dtype=np.int64)
    for t in range(probs.shape[0]):
        counts[t] = rng.multinomial(copies_per_setting, probs[t])
    return CountDataset(pom=pom, copies_per_setting=copies_per_setting, counts=counts)


def pseudo_counts(rho, pom, copies_per_setting=100):
    """Noise-free dataset whose relative frequencies equal the exact Born
    probabilities; used by oracle tests and consistency checks."""
    probs = np.clip(pom.all_born_probabilities(rho), 0.0, None)
    probs /= probs.sum(axis=1, keepdims=True)
    return CountDataset(
        pom=pom,
        copies_per_setting=copies_per_setting,
        counts=probs * copies_per_setting,
    )


def relative_frequencies(data):
    """f[t, k] = n[t, k] / copies_per_setting."""
    return data.counts / data.copies_per_setting


def dump_counts_csv(data, path):
    """Write counts as CSV rows setting,outcome,count (XZZY-style setting,
    4-bit outcome string)."""
    n = data.pom.n
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["setting", "outcome", "count"])
        for t, setting in enumerate(data.pom.settings):
            for k in range(data.pom.n_outcomes):
                writer.writerow([setting, format(k, f"0{n}b"), int(data.counts[t, k])])
