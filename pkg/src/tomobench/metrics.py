"""Fidelity and purity metrics, and aggregation of per-run fidelities into the
squared-bias + variance decomposition of the mean squared error."""

from dataclasses import dataclass

import numpy as np

from .linalg import eig_hermitian, min_eigenvalue, sqrt_psd

PURITY_FLAG_TOL = 1e-10


@dataclass
class ScenarioStats:
    """Aggregated fidelity statistics for one estimator in one scenario.

    mse = bias_sq + variance holds exactly (population-variance convention).
    """

    runs: int
    mean: float
    bias_sq: float
    variance: float
    mse: float
    frac_above_one: float
    frac_below_zero: float
    frac_nonphysical_estimates: float


def fidelity_pure(psi, rho_hat):
    """<psi|rho_hat|psi>; defined for any Hermitian unit-trace rho_hat, and may
    fall outside [0, 1] when rho_hat is not PSD."""
    psi = np.asarray(psi, dtype=complex)
    val = psi.conj() @ rho_hat @ psi
    return float(val.real)


def fidelity_uhlmann(rho1, rho2):
    """F = (tr |sqrt(rho1) sqrt(rho2)|)^2, the squared-trace-norm convention.

    Both arguments must be physical (PSD up to the clipping window);
    NotPositiveSemidefinite propagates otherwise.
    """
    a = sqrt_psd(rho1)
    b = sqrt_psd(rho2)
    singulars = np.linalg.svd(a @ b, compute_uv=False)
    return float(singulars.sum() ** 2)


def trace_distance(rho1, rho2):
    """(1/2) tr |rho1 - rho2| for Hermitian arguments."""
    vals, _ = eig_hermitian(np.asarray(rho1) - np.asarray(rho2))
    return 0.5 * float(np.abs(vals).sum())


def purity(rho_hat):
    """tr(rho_hat^2) plus an 'uninterpretable' flag.

    The number is computable for any Hermitian matrix, but it only means
    purity for PSD input; the flag is set when min eigenvalue < -1e-10.
    """
    value = float(np.trace(rho_hat @ rho_hat).real)
    uninterpretable = min_eigenvalue(rho_hat) < -PURITY_FLAG_TOL
    return value, uninterpretable


def aggregate(samples, f0, nonphysical_count=0):
    """Mean, squared bias, variance, and MSE of fidelity samples against the
    true value f0; the decomposition mse = bias_sq + variance is exact by the
    population-variance convention."""
    samples = np.asarray(samples, dtype=float)
    r = len(samples)
    if r < 2:
        raise ValueError("need at least 2 samples to aggregate")
    mean = float(samples.mean())
    mse = float(np.mean((samples - f0) ** 2))
    bias_sq = (mean - f0) ** 2
    return ScenarioStats(
        runs=r,
        mean=mean,
        bias_sq=bias_sq,
        variance=mse - bias_sq,
        mse=mse,
        frac_above_one=float(np.mean(samples > 1.0)),
        frac_below_zero=float(np.mean(samples < 0.0)),
        frac_nonphysical_estimates=nonphysical_count / r,
    )


def histogram(samples, bin_width):
    """Counts in bins aligned to multiples of bin_width, covering min..max.

    Returns a list of (bin_left, count) over the contiguous bin range,
    including empty interior bins; values outside [0, 1] land in real bins.
    """
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    samples = np.asarray(samples, dtype=float)
    idx = np.floor(samples / bin_width).astype(np.int64)
    lo, hi = int(idx.min()), int(idx.max())
    counts = np.bincount(idx - lo, minlength=hi - lo + 1)
    return [(i * bin_width, int(c)) for i, c in zip(range(lo, hi + 1), counts)]
