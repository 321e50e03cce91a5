"""Dense complex linear algebra for small Hermitian matrices (dim <= 32)."""

import numpy as np

HERMITICITY_TOL = 1e-10
PSD_CLIP = 1e-9
PHYSICALITY_TOL = 1e-10


class NotHermitianError(ValueError):
    """Input matrix deviates from Hermiticity beyond tolerance."""

    def __init__(self, asymmetry):
        self.asymmetry = asymmetry
        super().__init__(f"matrix is not Hermitian: max |H - H^dag| = {asymmetry:.3e}")


class NotPositiveSemidefinite(ValueError):
    """Matrix has an eigenvalue below the PSD clipping window."""

    def __init__(self, min_eig):
        self.min_eig = min_eig
        super().__init__(f"matrix is not PSD: min eigenvalue = {min_eig:.3e}")


def hermitize(h):
    """Return (H + H^dag)/2, removing accumulated rounding asymmetry."""
    h = np.asarray(h, dtype=complex)
    return 0.5 * (h + h.conj().T)


def max_asymmetry(h):
    h = np.asarray(h, dtype=complex)
    return float(np.max(np.abs(h - h.conj().T)))


def eig_hermitian(h, tol=HERMITICITY_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues, eigenvectors) with real eigenvalues in ascending
    order and orthonormal eigenvectors as columns.  The input is
    re-symmetrized before the decomposition.  Raises NotHermitianError if
    the asymmetry exceeds `tol`.
    """
    asym = max_asymmetry(h)
    if asym > tol:
        raise NotHermitianError(asym)
    vals, vecs = np.linalg.eigh(hermitize(h))
    return vals, vecs


def min_eigenvalue(h):
    """Smallest eigenvalue of a Hermitian matrix."""
    vals, _ = eig_hermitian(h)
    return float(vals[0])


def is_physical(h, tol=PHYSICALITY_TOL):
    """True iff h is a valid density matrix up to tolerance.

    Requires min eigenvalue >= -tol and |trace - 1| <= tol.
    """
    if max_asymmetry(h) > HERMITICITY_TOL:
        return False
    if abs(np.trace(h).real - 1.0) > tol or abs(np.trace(h).imag) > tol:
        return False
    return min_eigenvalue(h) >= -tol


def sqrt_psd(a, clip=PSD_CLIP):
    """Principal square root of a Hermitian PSD matrix.

    Eigenvalues in [-clip, 0) are clipped to 0; anything below -clip raises
    NotPositiveSemidefinite (the matrix is genuinely unphysical).
    """
    vals, vecs = eig_hermitian(a)
    if vals[0] < -clip:
        raise NotPositiveSemidefinite(float(vals[0]))
    vals = np.clip(vals, 0.0, None)
    # rounding-level positives would blow up to sqrt(eps); treat them as zero
    vals[vals < 1e-14] = 0.0
    root = (vecs * np.sqrt(vals)) @ vecs.conj().T
    return hermitize(root)


def kron(a, b):
    """Kronecker product; (i,j),(k,l) entry is A[i,k] * B[j,l]."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def trace_product(a, b):
    """tr(A B) without forming the product matrix."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return complex(np.sum(a * b.T))
