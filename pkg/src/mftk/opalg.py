"""Dense complex operator algebra: tensor products, partial traces,
Hermitian eigensystems, PSD square roots, and orthonormal Hermitian bases.

All functions are pure and operate on (or return) read-only complex
``numpy`` arrays; dimensions here are small (a few dozen at most), so
everything is dense and direct.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, NonHermitianError, NotPositiveSemidefiniteError

HERMITIAN_ATOL = 1e-10
PSD_EIGENVALUE_FLOOR = -1e-8
PSD_CLAMP = -1e-10


def freeze(m: np.ndarray) -> np.ndarray:
    """Return a read-only complex copy of ``m``."""
    out = np.array(m, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


def as_matrix(m) -> np.ndarray:
    """Coerce to a finite 2-D complex array."""
    out = np.asarray(m, dtype=complex)
    if out.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={out.ndim}")
    if not np.all(np.isfinite(out.view(float))):
        raise ValueError("matrix has non-finite entries")
    return out


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(m)).T


def is_hermitian(m: np.ndarray, atol: float = HERMITIAN_ATOL) -> bool:
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and np.max(np.abs(m - dagger(m))) <= atol


def hermitize(m: np.ndarray) -> np.ndarray:
    """Symmetrize away round-off: (m + m†)/2."""
    m = np.asarray(m, dtype=complex)
    return (m + dagger(m)) / 2


def tensor(a, b) -> np.ndarray:
    """Kronecker product with the row-major index convention
    (i_a, i_b) -> i_a * rows_b + i_b."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(m, dim_first: int, dim_second: int, keep: str = "first") -> np.ndarray:
    """Trace out one factor of an operator on a bipartite space.

    ``m`` must be square of size dim_first * dim_second; ``keep`` selects
    which factor the reduced operator lives on.
    """
    m = as_matrix(m)
    n = dim_first * dim_second
    if m.shape != (n, n):
        raise DimensionMismatchError(
            f"matrix is {m.shape}, expected {(n, n)} for dims ({dim_first}, {dim_second})"
        )
    blocks = m.reshape(dim_first, dim_second, dim_first, dim_second)
    if keep == "first":
        return np.einsum("ijkj->ik", blocks)
    if keep == "second":
        return np.einsum("ijil->jl", blocks)
    raise ValueError(f"keep must be 'first' or 'second', got {keep!r}")


def hermitian_eigensystem(h, atol: float = HERMITIAN_ATOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending, real) and eigenvector columns of a Hermitian matrix."""
    h = as_matrix(h)
    if not is_hermitian(h, atol):
        raise NonHermitianError(
            f"matrix deviates from Hermiticity by {np.max(np.abs(h - dagger(h))):.3e}"
        )
    eigenvalues, eigenvectors = np.linalg.eigh(h)
    return eigenvalues, eigenvectors


def min_eigenvalue(h) -> float:
    return float(hermitian_eigensystem(h)[0][0])


def psd_sqrt(h) -> np.ndarray:
    """Positive-semidefinite square root.

    Eigenvalues in [-1e-8, 0) are clamped to zero; anything lower raises.
    """
    eigenvalues, v = hermitian_eigensystem(h)
    if eigenvalues[0] < PSD_EIGENVALUE_FLOOR:
        raise NotPositiveSemidefiniteError(
            f"minimum eigenvalue {eigenvalues[0]:.3e} below {PSD_EIGENVALUE_FLOOR:.0e}"
        )
    root = np.sqrt(np.clip(eigenvalues, 0.0, None))
    return hermitize((v * root) @ dagger(v))


def psd_clip(h) -> np.ndarray:
    """Project a Hermitian matrix onto the PSD cone (clip negative eigenvalues)."""
    eigenvalues, v = hermitian_eigensystem(hermitize(h), atol=np.inf)
    clipped = np.clip(eigenvalues, 0.0, None)
    return hermitize((v * clipped) @ dagger(v))


@dataclass(frozen=True)
class HermitianBasis:
    """Orthonormal basis of the real vector space of d x d Hermitian matrices.

    Orthonormality is with respect to the trace inner product
    Tr(A B), so any Hermitian h satisfies h = sum_k Tr(B_k h) B_k with
    real coefficients.
    """

    dim: int
    elements: tuple[np.ndarray, ...]

    def coords(self, h) -> np.ndarray:
        """Real coefficient vector of a Hermitian matrix in this basis."""
        h = as_matrix(h)
        return np.array([np.trace(b @ h).real for b in self.elements])

    def matrix(self, coords) -> np.ndarray:
        """Reassemble a Hermitian matrix from real coefficients."""
        coords = np.asarray(coords, dtype=float)
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for c, b in zip(coords, self.elements):
            out += c * b
        return out


def hermitian_basis(dim: int) -> HermitianBasis:
    """Identity/sqrt(d) plus trace-normalized generalized Gell-Mann matrices."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    elements = [np.eye(dim, dtype=complex) / np.sqrt(dim)]
    for k in range(1, dim):
        d = np.zeros((dim, dim), dtype=complex)
        for j in range(k):
            d[j, j] = 1.0
        d[k, k] = -k
        elements.append(d / np.sqrt(k * (k + 1)))
    for j in range(dim):
        for k in range(j + 1, dim):
            sym = np.zeros((dim, dim), dtype=complex)
            sym[j, k] = sym[k, j] = 1.0
            elements.append(sym / np.sqrt(2))
            asym = np.zeros((dim, dim), dtype=complex)
            asym[j, k] = -1j
            asym[k, j] = 1j
            elements.append(asym / np.sqrt(2))
    return HermitianBasis(dim=dim, elements=tuple(freeze(b) for b in elements))
