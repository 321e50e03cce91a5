"""Pauli operator basis, the product-Pauli POM, and target/true state construction."""

import itertools
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Optional

import numpy as np

from .linalg import eig_hermitian, hermitize, is_physical, min_eigenvalue

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

AXES = "XYZ"
SQ2 = 1.0 / np.sqrt(2.0)

# Eigenkets per measurement axis; outcome bit 0 maps to eigenvalue +1.
EIGENKETS_1Q = {
    "X": np.array([[SQ2, SQ2], [SQ2, -SQ2]], dtype=complex),
    "Y": np.array([[SQ2, 1j * SQ2], [SQ2, -1j * SQ2]], dtype=complex),
    "Z": np.array([[1, 0], [0, 1]], dtype=complex),
}


def pauli_word_matrix(word):
    """Dense matrix of a tensor product of single-qubit Paulis, e.g. 'XZZY'."""
    try:
        factors = [PAULI_1Q[c] for c in word]
    except KeyError as exc:
        raise ValueError(f"invalid Pauli letter in {word!r}") from exc
    return reduce(np.kron, factors)


@lru_cache(maxsize=8)
def pauli_word_list(n):
    """All 4^n Pauli words over IXYZ, itertools.product order."""
    return tuple("".join(w) for w in itertools.product("IXYZ", repeat=n))


@lru_cache(maxsize=8)
def pauli_word_stack(n):
    """Stacked dense matrices of all 4^n words, shape (4^n, 2^n, 2^n)."""
    return np.stack([pauli_word_matrix(w) for w in pauli_word_list(n)])


def _sign_matrix(n_outcomes):
    """S[m, k] = (-1)^popcount(m & k); the +-1 outcome-sign transform."""
    s = np.empty((n_outcomes, n_outcomes), dtype=float)
    for m in range(n_outcomes):
        for k in range(n_outcomes):
            s[m, k] = -1.0 if bin(m & k).count("1") % 2 else 1.0
    return s


class PauliPom:
    """The 3^n-setting product-Pauli measurement.

    Each setting is a word over XYZ; its 2^n outcomes are rank-one projectors
    onto product eigenkets, indexed by the outcome bitstring (qubit 0 is the
    most significant bit; bit 0 means eigenvalue +1).
    """

    def __init__(self, n):
        if not 1 <= n <= 5:
            raise ValueError(f"qubit count {n} outside supported range 1..5")
        self.n = n
        self.dim = 2**n
        self.n_outcomes = 2**n
        self.settings = tuple("".join(s) for s in itertools.product(AXES, repeat=n))
        self.setting_index = {s: i for i, s in enumerate(self.settings)}
        kets = np.empty((len(self.settings), self.n_outcomes, self.dim), dtype=complex)
        for t, setting in enumerate(self.settings):
            for k in range(self.n_outcomes):
                ket = np.ones(1, dtype=complex)
                for alpha, letter in enumerate(setting):
                    bit = (k >> (n - 1 - alpha)) & 1
                    ket = np.kron(ket, EIGENKETS_1Q[letter][bit])
                kets[t, k] = ket
        self.kets = kets
        self.kets_flat = kets.reshape(-1, self.dim)
        self.sign_matrix = _sign_matrix(self.n_outcomes)

    @property
    def n_settings(self):
        return len(self.settings)

    def outcome_sign(self, word, k):
        """Sign of outcome k for a word compatible with the setting."""
        mask = word_mask(word)
        return 1.0 if bin(mask & k).count("1") % 2 == 0 else -1.0

    def born_probabilities(self, rho, setting):
        """Conditional outcome distribution of one setting, p_k = <v_k|rho|v_k>.

        `setting` may be an index or the 'XZZY'-style word.  The joint
        probability over settings is p_k / 3^n (settings are equiprobable).
        """
        if isinstance(setting, str):
            setting = self.setting_index[setting]
        v = self.kets[setting]
        p = np.einsum("ki,ij,kj->k", v.conj(), rho, v).real
        # rounding-level negatives are clipped; genuine negatives pass through
        return np.where((p < 0.0) & (p >= -1e-12), 0.0, p)

    def all_born_probabilities(self, rho):
        """Conditional outcome distributions of every setting, shape (3^n, 2^n)."""
        rho = np.asarray(rho, dtype=complex)
        b = self.kets_flat @ rho.T
        p = np.einsum("mi,mi->m", self.kets_flat.conj(), b).real
        return p.reshape(self.n_settings, self.n_outcomes)


def word_mask(word):
    """Bitmask of a word's non-identity positions (qubit 0 = MSB)."""
    n = len(word)
    mask = 0
    for alpha, letter in enumerate(word):
        if letter != "I":
            mask |= 1 << (n - 1 - alpha)
    return mask


def compatible_settings(pom, word):
    """Indices of settings whose letters match the word at non-I positions."""
    choices = [AXES if c == "I" else c for c in word]
    return [pom.setting_index["".join(s)] for s in itertools.product(*choices)]


@lru_cache(maxsize=8)
def build_product_pauli_pom(n):
    return PauliPom(n)


# ---------------------------------------------------------------------------
# States


@dataclass(frozen=True)
class StateSpec:
    """Recipe for a benchmark state.

    kind: one of 'ghz4', 'w4', 'haar-random-pure', 'file'.
    noise_fidelity: if set, mix the pure state with white noise so that the
        fidelity with the original pure state equals this value.
    seed: sampling seed for 'haar-random-pure'.
    path: density-matrix file for kind 'file'.
    """

    kind: str
    noise_fidelity: Optional[float] = None
    seed: int = 0
    path: Optional[str] = None


def ghz_ket(n=4):
    """(|0...0> + |1...1>)/sqrt(2)."""
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = SQ2
    psi[-1] = SQ2
    return psi


def w_ket(n=4):
    """Equal superposition of the weight-one computational basis kets."""
    psi = np.zeros(2**n, dtype=complex)
    for alpha in range(n):
        psi[1 << alpha] = 1.0
    return psi / np.sqrt(n)


def haar_random_ket(dim, seed):
    """Haar-random pure state: normalized vector of i.i.d. complex Gaussians."""
    rng = np.random.Generator(np.random.PCG64(seed))
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def depolarize(psi, noise_fidelity):
    """Mix |psi><psi| with white noise to reach the requested fidelity.

    Solves F0 = lam + (1 - lam)/d for the mixing weight lam of
    rho = lam |psi><psi| + (1 - lam) I/d.
    """
    d = len(psi)
    if noise_fidelity < 1.0 / d:
        raise ValueError(
            f"target fidelity {noise_fidelity} below the white-noise floor 1/{d}"
        )
    lam = (noise_fidelity - 1.0 / d) / (1.0 - 1.0 / d)
    proj = np.outer(psi, psi.conj())
    return lam * proj + (1.0 - lam) * np.eye(d) / d


_PURE_KETS = {"ghz4": lambda spec: ghz_ket(4), "w4": lambda spec: w_ket(4),
              "haar-random-pure": lambda spec: haar_random_ket(16, spec.seed)}


def target_ket(spec):
    """The pure ket of a spec; file states must be pure projectors."""
    if spec.kind in _PURE_KETS:
        return _PURE_KETS[spec.kind](spec)
    if spec.kind == "file":
        rho = load_state_file(spec.path)
        vals, vecs = eig_hermitian(rho)
        if vals[-1] < 1.0 - 1e-8:
            raise ValueError(
                f"target state in {spec.path} is not pure (top eigenvalue {vals[-1]:.6f})"
            )
        return vecs[:, -1]
    raise ValueError(f"unknown state kind {spec.kind!r}")


def make_state(spec):
    """Density matrix of a StateSpec; always physical on return."""
    if spec.kind == "file":
        rho = load_state_file(spec.path)
    else:
        psi = target_ket(spec)
        if spec.noise_fidelity is not None:
            rho = depolarize(psi, spec.noise_fidelity)
        else:
            rho = np.outer(psi, psi.conj())
    rho = hermitize(rho)
    if not is_physical(rho, tol=1e-10) and min_eigenvalue(rho) < -1e-12:
        raise ValueError(f"state spec {spec} yields an unphysical matrix")
    return rho


def load_state_file(path):
    """Read a density matrix: first line dim, then dim^2 lines 'row col real imag'."""
    with open(path) as fh:
        tokens = fh.read().split("\n")
    lines = [ln for ln in tokens if ln.strip() and not ln.lstrip().startswith("#")]
    dim = int(lines[0])
    rho = np.zeros((dim, dim), dtype=complex)
    if len(lines) - 1 != dim * dim:
        raise ValueError(
            f"state file {path}: expected {dim * dim} entry lines, got {len(lines) - 1}"
        )
    for ln in lines[1:]:
        r, c, re, im = ln.split()
        rho[int(r), int(c)] = float(re) + 1j * float(im)
    if not is_physical(rho, tol=1e-8):
        raise ValueError(f"state file {path} does not contain a physical density matrix")
    return rho


def save_state_file(path, rho):
    dim = rho.shape[0]
    with open(path, "w") as fh:
        fh.write(f"{dim}\n")
        for r in range(dim):
            for c in range(dim):
                fh.write(f"{r} {c} {rho[r, c].real:.17g} {rho[r, c].imag:.17g}\n")
