"""Single-qubit physicality constraints: tetrahedron SIC POM and BB84-like X/Z
measurement, including the discard-data count fix."""

from dataclasses import dataclass

import numpy as np

from .linalg import hermitize

CONSTRAINT_TOL = 1e-12

# Regular tetrahedron Bloch vectors, a_j . a_k = -1/3 for j != k.
TETRA_VECTORS = np.array(
    [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float
) / np.sqrt(3.0)

_SIGMA = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


class NegativePseudoCount(ValueError):
    """The BB84 discard fix produced a negative replacement count."""


@dataclass(frozen=True)
class Bb84Counts:
    """Detector counts for the four outcomes of the X/Z beam-splitter set-up."""

    n0: int
    n1: int
    n_plus: int
    n_minus: int

    def __post_init__(self):
        for c in (self.n0, self.n1, self.n_plus, self.n_minus):
            if c < 0:
                raise ValueError("counts must be nonnegative")


def tetrahedron_pom():
    """The four SIC outcomes M_k = (1/4)(1 + a_k . sigma)."""
    outcomes = []
    for a in TETRA_VECTORS:
        m = 0.25 * (np.eye(2, dtype=complex) + np.tensordot(a, _SIGMA, axes=1))
        outcomes.append(hermitize(m))
    return outcomes


def tetrahedron_probabilities(rho):
    """Born probabilities of the tetrahedron POM for a qubit state."""
    return np.array([np.trace(rho @ m).real for m in tetrahedron_pom()])


def tetrahedron_physical(p, tol=CONSTRAINT_TOL):
    """True iff the four probabilities can come from a physical qubit state.

    Requires unit sum and sum of squares <= 1/3.
    """
    p = np.asarray(p, dtype=float)
    return abs(p.sum() - 1.0) <= tol and float(p @ p) <= 1.0 / 3.0 + tol


def tetrahedron_lin_bloch(f):
    """Bloch vector of the linear-inversion qubit state for tetrahedron
    frequencies; the state is physical iff |r| <= 1."""
    f = np.asarray(f, dtype=float)
    return 3.0 * f @ TETRA_VECTORS


def bb84_pom():
    """Four outcomes of the 50-50 split X/Z measurement, each carrying the
    beam-splitter factor 1/2 so they sum to identity."""
    zero = np.array([1, 0], dtype=complex)
    one = np.array([0, 1], dtype=complex)
    plus = (zero + one) / np.sqrt(2)
    minus = (zero - one) / np.sqrt(2)
    return [0.5 * np.outer(v, v.conj()) for v in (zero, one, plus, minus)]


def bb84_probabilities(rho):
    """(p0, p1, p+, p-) for a qubit state under the split X/Z measurement."""
    return np.array([np.trace(rho @ m).real for m in bb84_pom()])


def bb84_constraints(p, tol=CONSTRAINT_TOL):
    """True iff (p0, p1, p+, p-) satisfy the measurement's structural and
    positivity constraints: p0+p1 = p+ + p- = 1/2 and
    (p0-p1)^2 + (p+-p-)^2 <= 1/4."""
    p0, p1, pp, pm = (float(x) for x in p)
    if abs(p0 + p1 - 0.5) > tol or abs(pp + pm - 0.5) > tol:
        return False
    return (p0 - p1) ** 2 + (pp - pm) ** 2 <= 0.25 + tol


def bb84_discard_fix(counts):
    """Restore the two linear constraints by discarding the n+ count.

    Replaces n+ by n0 + n1 - n- and the total by 2(n0 + n1); the returned
    frequencies satisfy f0 + f1 = f+ + f- = 1/2 exactly.  The quadratic
    positivity constraint is NOT guaranteed.  Raises NegativePseudoCount when
    n0 + n1 < n-.
    """
    pseudo_plus = counts.n0 + counts.n1 - counts.n_minus
    if pseudo_plus < 0:
        raise NegativePseudoCount(
            f"replacement count n+ = {pseudo_plus} is negative "
            f"(n0+n1 = {counts.n0 + counts.n1}, n- = {counts.n_minus})"
        )
    n_eff = 2 * (counts.n0 + counts.n1)
    if n_eff == 0:
        raise NegativePseudoCount("no counts in the Z arm; effective total is zero")
    freqs = np.array(
        [counts.n0, counts.n1, pseudo_plus, counts.n_minus], dtype=float
    ) / n_eff
    return freqs, n_eff


def random_qubit_state(rng):
    """Uniform-in-the-ball random mixed qubit state (random Bloch vector)."""
    r = rng.standard_normal(3)
    r *= rng.uniform() ** (1.0 / 3.0) / np.linalg.norm(r)
    return 0.5 * (np.eye(2, dtype=complex) + np.tensordot(r, _SIGMA, axes=1))
