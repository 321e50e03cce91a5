"""State reconstruction from count data: linear inversion of the Born rule and
iterative maximum-likelihood over physical states."""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import hermitize, min_eigenvalue
from .simulate import relative_frequencies
from .states import compatible_settings, pauli_word_list, pauli_word_stack, word_mask

PROB_FLOOR = 1e-14
OPTIMALITY_GAP_TOL = 1e-6


@dataclass
class LinEstimate:
    """Linear-inversion reconstruction: Hermitian, unit trace, not necessarily PSD."""

    matrix: np.ndarray
    min_eig: float
    pauli_expectations: np.ndarray  # one entry per word of pauli_word_list(n)


@dataclass
class MleEstimate:
    """Maximum-likelihood reconstruction with convergence diagnostics."""

    matrix: np.ndarray
    iterations: int
    log_likelihood: float
    converged: bool
    optimality_gap: float
    boundary_warning: bool = False


@lru_cache(maxsize=8)
def _word_table(n):
    """Per word: outcome-sign mask and array of compatible setting indices."""
    from .states import build_product_pauli_pom

    pom = build_product_pauli_pom(n)
    words = pauli_word_list(n)
    masks = np.array([word_mask(w) for w in words])
    compat = [np.array(compatible_settings(pom, w)) for w in words]
    return words, masks, compat


def pauli_expectation_estimates(data):
    """Estimate <sigma_s> for every Pauli word from the relative frequencies.

    A word is estimable from every setting whose letters match it at the
    non-identity positions; conflicting values from the 3^(#I) compatible
    settings are resolved by uniform averaging.
    """
    pom = data.pom
    freqs = relative_frequencies(data)
    # signed[t, m] = sum_k (-1)^popcount(m & k) f[t, k]
    signed = freqs @ pom.sign_matrix.T
    words, masks, compat = _word_table(pom.n)
    ehat = np.empty(len(words))
    for i in range(len(words)):
        ehat[i] = signed[compat[i], masks[i]].mean()
    return ehat


def lin_estimate(data):
    """Reconstruct rho by equating frequencies to probabilities and inverting
    the Born rule; the result has unit trace but may have negative eigenvalues."""
    pom = data.pom
    ehat = pauli_expectation_estimates(data)
    stack = pauli_word_stack(pom.n)
    matrix = hermitize(np.tensordot(ehat, stack, axes=1) / pom.dim)
    return LinEstimate(
        matrix=matrix,
        min_eig=min_eigenvalue(matrix),
        pauli_expectations=ehat,
    )


def _nonzero_data(data):
    """Flattened outcome kets and counts restricted to observed outcomes."""
    pom = data.pom
    counts = np.asarray(data.counts, dtype=float)
    nz = counts.ravel() > 0
    return pom.kets_flat[nz], counts.ravel()[nz]


def _probabilities(kets, rho):
    b = kets @ rho.T
    return np.einsum("mi,mi->m", kets.conj(), b).real


def log_likelihood(rho, data):
    """Multinomial log-likelihood sum n log p over observed outcomes.

    Probabilities are floored at PROB_FLOOR; returns (value, floored) where
    floored flags any observed outcome whose probability sat below the floor.
    """
    kets, counts = _nonzero_data(data)
    p = _probabilities(kets, rho)
    floored = bool(np.any(p < PROB_FLOOR))
    return float(counts @ np.log(np.clip(p, PROB_FLOOR, None))), floored


def r_operator(rho, data):
    """R = (1/N) sum n |v><v| / p over observed outcomes; tr(R rho) = 1 and
    R rho = rho at the likelihood maximizer."""
    kets, counts = _nonzero_data(data)
    p = np.clip(_probabilities(kets, rho), PROB_FLOOR, None)
    w = counts / p / counts.sum()
    return hermitize((kets.T * w) @ kets.conj())


def mle_estimate(data, tol=1e-10, max_iter=20000, epsilon=0.5, gap_tol=OPTIMALITY_GAP_TOL):
    """Maximize the likelihood over physical states by the R-rho-R fixed-point
    iteration with a diluted fallback step.

    Starts from the maximally mixed state.  A step that would decrease the
    likelihood is retried with the diluted map M = (1-eps) 1 + eps R, halving
    eps until the likelihood increases.  Stops when the likelihood gain drops
    below `tol` or after `max_iter` iterations; convergence is certified by
    the optimality gap lambda_max(R) - 1 <= gap_tol.
    """
    pom = data.pom
    d = pom.dim
    kets, counts = _nonzero_data(data)
    kets_c = kets.conj()
    n_total = counts.sum()
    eye = np.eye(d, dtype=complex)

    def probs(r):
        return np.einsum("mi,mi->m", kets_c, kets @ r.T).real

    def build_r(p_cur):
        r = kets.T @ (kets_c * (counts / np.maximum(p_cur, PROB_FLOOR) / n_total)[:, None])
        return 0.5 * (r + r.conj().T)

    rho = eye / d
    p = probs(rho)
    boundary = bool(p.min() < PROB_FLOOR)
    ll = float(counts @ np.log(np.maximum(p, PROB_FLOOR)))

    iterations = 0
    stopped = False
    for it in range(1, max_iter + 1):
        r_mat = build_r(p)

        cand = r_mat @ rho @ r_mat
        cand = 0.5 * (cand + cand.conj().T)
        cand /= np.trace(cand).real
        p_new = probs(cand)
        if p_new.min() < PROB_FLOOR:
            boundary = True
        ll_new = float(counts @ np.log(np.maximum(p_new, PROB_FLOOR)))

        if ll_new < ll:
            # diluted step: shrink toward the identity direction until monotone
            eps = epsilon
            accepted = False
            while eps > 1e-12:
                m = (1.0 - eps) * eye + eps * r_mat
                cand = m @ rho @ m.conj().T
                cand = 0.5 * (cand + cand.conj().T)
                cand /= np.trace(cand).real
                p_new = probs(cand)
                ll_new = float(counts @ np.log(np.maximum(p_new, PROB_FLOOR)))
                if ll_new >= ll:
                    accepted = True
                    break
                eps *= 0.5
            if not accepted:
                # numerically at a fixed point; no monotone step exists
                stopped = True
                iterations = it
                break

        gain = ll_new - ll
        rho, p, ll = cand, p_new, ll_new
        iterations = it
        if gain < tol:
            stopped = True
            break

    # certificate at the final iterate
    gap = float(np.linalg.eigvalsh(build_r(p))[-1] - 1.0)

    return MleEstimate(
        matrix=rho,
        iterations=iterations,
        log_likelihood=ll,
        converged=stopped and gap <= gap_tol,
        optimality_gap=gap,
        boundary_warning=boundary,
    )
