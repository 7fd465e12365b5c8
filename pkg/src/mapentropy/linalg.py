"""Dense complex linear algebra and the vec calculus.

Convention: ``vec`` stacks rows, so ``vec(|m><mu|) = |m> (x) |mu>`` and the
entry ``X[m, mu]`` lands at index ``m * cols + mu``. With this choice

* ``<X, Y> = <vec X, vec Y>``
* ``(A (x) B) vec(X) = vec(A X B^T)``
* tracing out the second factor of ``vec(A) vec(B)^dag`` gives ``A B^dag``
* tracing out the first factor gives ``(B^dag A)^T``

Matrices are plain ``numpy`` arrays of dtype ``complex128``.
"""
from __future__ import annotations

from typing import Sequence, Tuple

import numpy as np

from .exceptions import DimensionError, NotHermitianError, NotPositiveError

HERMITIAN_TOL = 1e-9
CLIP_TOL = 1e-10


def as_matrix(x, name: str = "matrix") -> np.ndarray:
    """Return ``x`` as a finite 2-d complex array."""
    arr = np.asarray(x, dtype=complex)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def dagger(x: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(x, -1, -2))


def vec(x: np.ndarray) -> np.ndarray:
    """Row-stacking vectorization of a matrix."""
    return np.asarray(x, dtype=complex).reshape(-1)


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Inverse of :func:`vec` for a ``rows x cols`` matrix."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.size != rows * cols:
        raise DimensionError(f"vector of length {v.size} cannot be unvec'd to {rows}x{cols}")
    return v.reshape(rows, cols)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def hs_inner(x: np.ndarray, y: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product ``tr(X^dag Y)``."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise DimensionError(f"shape mismatch {x.shape} vs {y.shape}")
    return complex(np.vdot(x, y))


def _check_bipartite(m: np.ndarray, da: int, db: int) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    n = da * db
    if m.shape != (n, n):
        raise DimensionError(f"expected a {n}x{n} matrix for dims ({da}, {db}), got {m.shape}")
    return m


def ptrace_second(m: np.ndarray, da: int, db: int) -> np.ndarray:
    """Trace out the second tensor factor of an operator on ``C^da (x) C^db``."""
    m = _check_bipartite(m, da, db)
    return np.einsum("ajbj->ab", m.reshape(da, db, da, db))


def ptrace_first(m: np.ndarray, da: int, db: int) -> np.ndarray:
    """Trace out the first tensor factor of an operator on ``C^da (x) C^db``."""
    m = _check_bipartite(m, da, db)
    return np.einsum("iaib->ab", m.reshape(da, db, da, db))


def permute_factors(v: np.ndarray, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder the tensor factors of a vector on ``C^dims[0] (x) C^dims[1] (x) ...``.

    Factor ``order[i]`` of the input becomes factor ``i`` of the output.
    """
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.size != int(np.prod(dims)):
        raise DimensionError(f"vector of length {v.size} does not match dims {tuple(dims)}")
    return v.reshape(tuple(dims)).transpose(tuple(order)).reshape(-1)


def permute_operator_factors(m: np.ndarray, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Apply the factor permutation of :func:`permute_factors` by conjugation, ``P M P^dag``."""
    m = np.asarray(m, dtype=complex)
    n = int(np.prod(dims))
    if m.shape != (n, n):
        raise DimensionError(f"expected a {n}x{n} matrix for dims {tuple(dims)}, got {m.shape}")
    k = len(dims)
    axes = tuple(order) + tuple(k + o for o in order)
    return m.reshape(tuple(dims) * 2).transpose(axes).reshape(n, n)


def bipartite_vec(y: np.ndarray, da: int, db: int) -> np.ndarray:
    """Vectorize an operator on ``H_A (x) H_B`` into ``H_A (x) H_A (x) H_B (x) H_B``.

    Maps ``|m><n| (x) |mu><nu|`` to ``|m n> (x) |mu nu>``, so that
    ``bipartite_vec(X (x) Z) = vec(X) (x) vec(Z)``.
    """
    y = _check_bipartite(y, da, db)
    # vec(Y) carries factors (m, mu, n, nu); bring them to (m, n, mu, nu)
    return permute_factors(vec(y), (da, db, da, db), (0, 2, 1, 3))


def is_hermitian(h: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        return False
    scale = max(1.0, float(np.linalg.norm(h)))
    return float(np.linalg.norm(h - dagger(h))) <= tol * scale


def hermitian_eig(h: np.ndarray, tol: float = HERMITIAN_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues in descending
    order and the matching orthonormal eigenvectors as the columns of the
    second array.

    :raises NotHermitianError: if ``||H - H^dag||`` exceeds ``tol`` relative to ``||H||``.
    """
    h = as_matrix(h, "hermitian_eig input")
    if h.shape[0] != h.shape[1]:
        raise DimensionError(f"matrix must be square, got {h.shape}")
    if not is_hermitian(h, tol):
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(0.5 * (h + dagger(h)))
    return w[::-1], v[:, ::-1]


def clip_eigenvalues(w: np.ndarray, tol: float = CLIP_TOL) -> np.ndarray:
    """Zero out eigenvalues in ``[-tol, 0)``; anything more negative is an error."""
    w = np.asarray(w, dtype=float)
    if w.size and w.min() < -tol:
        raise NotPositiveError(f"eigenvalue {w.min():.3e} below -{tol:g}")
    return np.where(w < 0, 0.0, w)


def trace_norm(x: np.ndarray) -> float:
    """Sum of singular values."""
    x = as_matrix(x)
    if x.shape[0] != x.shape[1]:
        raise DimensionError(f"matrix must be square, got {x.shape}")
    return float(np.linalg.svd(x, compute_uv=False).sum())


def op_distance(x: np.ndarray, y: np.ndarray) -> float:
    """Operator (spectral) norm of ``x - y``."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise DimensionError(f"shape mismatch {x.shape} vs {y.shape}")
    return float(np.linalg.norm(x - y, ord=2))
