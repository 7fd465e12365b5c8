"""Shannon, von Neumann and map entropies, and exchange-entropy states.

All entropies are in bits. ``0 log 0`` is taken as 0 and eigenvalues in
``[-1e-9, 0)`` are treated as round-off and clipped to zero.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .channel import KrausChannel, compose, jamiolkowski_state, require_trace_preserving
from .exceptions import DimensionError
from .linalg import clip_eigenvalues, hermitian_eig, is_hermitian

ENTROPY_CLIP_TOL = 1e-9
STATE_TOL = 1e-9
TRACE_TOL = 1e-8


def _xlog2x(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p)
    nz = p > 0
    out[nz] = p[nz] * np.log2(p[nz])
    return out


def shannon_entropy(p: Sequence[float]) -> float:
    """``-sum p log2 p`` of a probability vector."""
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.size == 0:
        raise ValueError("empty distribution")
    if p.min() < -1e-12:
        raise ValueError(f"negative weight {p.min():.3e}")
    if abs(p.sum() - 1.0) > 1e-9:
        raise ValueError(f"weights sum to {p.sum():.12g}, not 1")
    p = np.clip(p, 0.0, None)
    return float(-_xlog2x(p).sum())


def is_state(rho: np.ndarray, tol: float = STATE_TOL) -> bool:
    """Hermitian, positive semi-definite and unit trace, all within ``tol``."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or not np.all(np.isfinite(rho)):
        return False
    if not is_hermitian(rho, tol):
        return False
    if abs(np.trace(rho) - 1.0) > tol:
        return False
    w, _ = hermitian_eig(rho)
    return bool(w[-1] >= -tol)


def state_spectrum(rho: np.ndarray, clip_tol: float = ENTROPY_CLIP_TOL) -> np.ndarray:
    """Eigenvalues of a state, descending, with round-off negatives clipped."""
    w, _ = hermitian_eig(rho)
    return clip_eigenvalues(w, clip_tol)


def von_neumann_entropy(rho: np.ndarray) -> float:
    """``-tr(rho log2 rho)``.

    :raises NotPositiveError: if an eigenvalue lies below ``-1e-9``.
    :raises ValueError: if the trace is not 1.
    """
    rho = np.asarray(rho, dtype=complex)
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValueError(f"state has trace {tr.real:.12g}")
    w = state_spectrum(rho)
    return max(0.0, float(-_xlog2x(w).sum()))


def map_entropy(phi: KrausChannel) -> float:
    """Entropy of the Jamiolkowski state ``J(phi)/N``."""
    return von_neumann_entropy(jamiolkowski_state(phi))


def gamma_state(lam: KrausChannel, rho: np.ndarray) -> np.ndarray:
    """The ``d x d`` matrix ``[tr(S_m rho S_n^dag)]`` over the Kraus family of ``lam``."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (lam.dim, lam.dim):
        raise DimensionError(f"state of shape {rho.shape} for a channel on dim {lam.dim}")
    require_trace_preserving(lam)
    k = lam.stacked
    return np.einsum("mij,jk,nik->mn", k, rho, k.conj())


def exchange_entropy(lam: KrausChannel, rho: np.ndarray) -> float:
    """Entropy of :func:`gamma_state`; independent of the Kraus representation."""
    return von_neumann_entropy(gamma_state(lam, rho))


def gamma_composite(phi: KrausChannel, psi: KrausChannel, rho: np.ndarray) -> np.ndarray:
    """``sum tr(S_m T_mu rho (S_n T_nu)^dag) |m mu><n nu|`` on ``C^d1 (x) C^d2``.

    ``d1 = len(phi)`` and ``d2 = len(psi)``. Tracing out the first factor
    gives ``gamma_state(psi, rho)``; tracing out the second gives
    ``gamma_state(phi, psi(rho))``.
    """
    if phi.dim != psi.dim:
        raise DimensionError(f"cannot compose dims {phi.dim} and {psi.dim}")
    require_trace_preserving(phi, name="phi")
    require_trace_preserving(psi, name="psi")
    return gamma_state(compose(phi, psi), rho)


def entropy_preserving_extension(rho: np.ndarray) -> np.ndarray:
    """Embed ``rho`` on ``C^N`` as ``sum rho_ij |ii><jj|`` on ``C^N (x) C^N``."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"state must be square, got {rho.shape}")
    n = rho.shape[0]
    diag = np.arange(n) * (n + 1)
    out = np.zeros((n * n, n * n), dtype=complex)
    out[np.ix_(diag, diag)] = rho
    return out

