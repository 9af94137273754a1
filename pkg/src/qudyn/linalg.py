"""Dense complex linear algebra for small matrices (d <= 64).

Vectorization is column-stacking, so that ``vec(A @ rho @ B) == kron(B.T, A) @ vec(rho)``.
Everything here is a pure function of its inputs; arrays are never mutated.
"""

from __future__ import annotations

import math

import numpy as np

HERMITIAN_TOL = 1e-10
_CLAMP = 1e-12

# Taylor order for expm after scaling to norm <= 1/2; 1/2**18/18! is far below eps.
_TAYLOR_ORDER = 18
_MAX_SQUARINGS = 1000


class LinalgError(ValueError):
    """Raised for malformed or numerically unusable matrix input."""


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.size == 0:
        raise LinalgError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    return a


def _square(m) -> np.ndarray:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise LinalgError(f"expected a square matrix, got shape {a.shape}")
    return a


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def dagger(m) -> np.ndarray:
    return as_matrix(m).conj().T


def vectorize(rho) -> np.ndarray:
    """Column-stack a square matrix into a d**2 vector."""
    return _square(rho).reshape(-1, order="F").copy()


def devectorize(v, d: int | None = None) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if d is None:
        d = math.isqrt(v.size)
    if d * d != v.size:
        raise LinalgError(f"vector of length {v.size} is not a vectorized {d}x{d} matrix")
    return v.reshape((d, d), order="F").copy()


def expm(m) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a truncated Taylor series.

    Raises :class:`OverflowError` instead of returning non-finite entries.
    """
    a = _square(m)
    if not np.all(np.isfinite(a)):
        raise LinalgError("expm input has non-finite entries")
    norm = np.linalg.norm(a, 1)
    s = 0
    if norm > 0.5:
        s = int(math.ceil(math.log2(norm / 0.5)))
        if s > _MAX_SQUARINGS:
            raise OverflowError(f"expm: norm {norm:.3g} out of range")
    x = a / 2.0**s
    n = a.shape[0]
    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, _TAYLOR_ORDER + 1):
        term = term @ x / k
        result = result + term
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(s):
            result = result @ result
    if not np.all(np.isfinite(result)):
        raise OverflowError("expm: result overflowed the floating range")
    return result


def hermitian_eigenvalues(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix.

    The input is symmetrized before solving; deviations from Hermiticity
    larger than ``tol`` are rejected.
    """
    a = _square(m)
    dev = np.max(np.abs(a - a.conj().T))
    if dev > tol * max(1.0, np.max(np.abs(a))):
        raise LinalgError(f"matrix is not Hermitian (max deviation {dev:.3g})")
    return np.linalg.eigvalsh(0.5 * (a + a.conj().T))


def trace_norm(m) -> float:
    """Sum of singular values.

    Hermitian input uses ``sum(|eig(M)|)``, which keeps small singular values
    accurate; anything else goes through the eigenvalues of ``M^dagger M``.
    """
    a = _square(m)
    if np.max(np.abs(a - a.conj().T)) <= 1e-14 * max(1.0, np.max(np.abs(a))):
        return float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (a + a.conj().T)))))
    ev = hermitian_eigenvalues(a.conj().T @ a)
    scale = max(1.0, float(ev[-1])) if ev.size else 1.0
    ev = np.where((ev < 0) & (ev >= -_CLAMP * scale), 0.0, ev)
    if np.any(ev < 0):
        raise LinalgError("M^dagger M has a significantly negative eigenvalue")
    return float(np.sum(np.sqrt(ev)))


def partial_transpose_system(rho_sa, d_s: int, d_a: int) -> np.ndarray:
    """Transpose the first (system) tensor factor of a ``d_s * d_a`` operator."""
    a = _square(rho_sa)
    if d_s < 1 or d_a < 1 or a.shape[0] != d_s * d_a:
        raise LinalgError(f"dimension {a.shape[0]} does not factor as {d_s} x {d_a}")
    t = a.reshape(d_s, d_a, d_s, d_a)
    return t.transpose(2, 1, 0, 3).reshape(d_s * d_a, d_s * d_a).copy()


def matrix_power_basis(m, count: int) -> list[np.ndarray]:
    """Return ``[I, M, M**2, ..., M**(count-1)]``."""
    a = _square(m)
    out = [np.eye(a.shape[0], dtype=complex)]
    for _ in range(1, count):
        out.append(out[-1] @ a)
    return out


def max_abs(m) -> float:
    return float(np.max(np.abs(np.asarray(m))))
