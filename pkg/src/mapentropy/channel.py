"""Quantum operations in Kraus and Choi form.

A :class:`KrausChannel` is any finite list of square Kraus operators, hence
completely positive by construction. Trace preservation and unitality are
exposed as predicates rather than enforced, since a quantum operation in
general only needs to be trace non-increasing.

The Choi matrix is ``J(Phi) = (Phi (x) id)(vec(I) vec(I)^dag)
= sum_j vec(M_j) vec(M_j)^dag`` in the row-stacking convention of
:mod:`mapentropy.linalg`.
"""
from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .exceptions import DimensionError, NotPositiveError, PredicateError
from .linalg import CLIP_TOL, as_matrix, dagger, hermitian_eig, unvec

PREDICATE_TOL = 1e-8


class KrausChannel:
    """A CP map ``X -> sum_j M_j X M_j^dag`` on ``N x N`` matrices.

    Kraus operators are stored as read-only arrays; derived quantities (Choi
    matrix, predicate residuals) are computed once and cached.
    """

    def __init__(self, kraus: Iterable[np.ndarray]):
        ops = [np.array(as_matrix(k, "Kraus operator")) for k in kraus]
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        n = ops[0].shape[0]
        for k in ops:
            if k.shape != (n, n):
                raise DimensionError(f"Kraus operators must all be {n}x{n}, got {k.shape}")
        for k in ops:
            k.setflags(write=False)
        self.kraus = tuple(ops)

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    def __len__(self) -> int:
        return len(self.kraus)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return apply(self, x)

    @cached_property
    def stacked(self) -> np.ndarray:
        """Kraus operators as one ``(d, N, N)`` array."""
        out = np.stack(self.kraus)
        out.setflags(write=False)
        return out

    @cached_property
    def choi(self) -> np.ndarray:
        vecs = self.stacked.reshape(len(self), -1)
        out = vecs.T @ vecs.conj()
        out.setflags(write=False)
        return out

    @cached_property
    def trace_residual(self) -> float:
        """``||sum M^dag M - I||`` in operator norm."""
        k = self.stacked
        s = np.einsum("kji,kjl->il", k.conj(), k)
        return float(np.linalg.norm(s - np.eye(self.dim), ord=2))

    @cached_property
    def unital_residual(self) -> float:
        """``||sum M M^dag - I||`` in operator norm."""
        k = self.stacked
        s = np.einsum("kij,klj->il", k, k.conj())
        return float(np.linalg.norm(s - np.eye(self.dim), ord=2))

    def __repr__(self) -> str:
        return f"KrausChannel(dim={self.dim}, n_kraus={len(self)})"


def unitary_channel(u: np.ndarray) -> KrausChannel:
    """``Ad_U : X -> U X U^dag``."""
    return KrausChannel([u])


def choi_of(phi: KrausChannel) -> np.ndarray:
    """Choi (Jamiolkowski) matrix ``sum_j vec(M_j) vec(M_j)^dag``."""
    return np.array(phi.choi)


def choi_dim(j: np.ndarray) -> int:
    j = np.asarray(j)
    n = int(round(np.sqrt(j.shape[0])))
    if j.ndim != 2 or j.shape[0] != j.shape[1] or n * n != j.shape[0]:
        raise DimensionError(f"Choi matrix must be N^2 x N^2, got {j.shape}")
    return n


def kraus_of(j: np.ndarray, tol: float = CLIP_TOL) -> KrausChannel:
    """Canonical Kraus operators from a Choi matrix.

    Diagonalizes ``J = sum_k lam_k v_k v_k^dag`` and returns
    ``M_k = sqrt(lam_k) unvec(v_k)`` for every ``lam_k > tol``. The result is
    pairwise Hilbert-Schmidt orthogonal. Degenerate eigenvalues make the
    choice of basis arbitrary.

    :raises NotPositiveError: if an eigenvalue falls below ``-tol``.
    """
    n = choi_dim(j)
    w, v = hermitian_eig(j)
    if w[-1] < -tol:
        raise NotPositiveError(f"Choi matrix has eigenvalue {w[-1]:.3e}; map is not CP")
    keep = w > tol
    if not keep.any():
        return KrausChannel([np.zeros((n, n), dtype=complex)])
    return KrausChannel([np.sqrt(lam) * unvec(v[:, k], n, n) for k, lam in enumerate(w) if keep[k]])


def is_canonical(phi: KrausChannel, tol: float = PREDICATE_TOL) -> bool:
    """True if the Kraus operators are nonzero and pairwise HS-orthogonal."""
    vecs = phi.stacked.reshape(len(phi), -1)
    gram = vecs.conj() @ vecs.T
    diag = np.real(np.diag(gram))
    if np.any(diag <= tol):
        return False
    off = gram - np.diag(np.diag(gram))
    return bool(np.abs(off).max(initial=0.0) < tol)


def canonicalize(phi: KrausChannel, tol: float = CLIP_TOL) -> KrausChannel:
    """Canonical representation via ``kraus_of(choi_of(phi))``."""
    return kraus_of(phi.choi, tol)


def canonical_form(phi: KrausChannel, tol: float = PREDICATE_TOL) -> KrausChannel:
    """``phi`` itself when already canonical, otherwise :func:`canonicalize`."""
    if is_canonical(phi, tol):
        return phi
    return canonicalize(phi)


def compose(phi: KrausChannel, psi: KrausChannel) -> KrausChannel:
    """``phi o psi`` as the product family ``{S_m T_mu}``, kept verbatim."""
    if phi.dim != psi.dim:
        raise DimensionError(f"cannot compose dims {phi.dim} and {psi.dim}")
    prods = np.einsum("mij,njk->mnik", phi.stacked, psi.stacked)
    return KrausChannel(prods.reshape(-1, phi.dim, phi.dim))


def compose_all(*channels: KrausChannel) -> KrausChannel:
    """Left-to-right composition: ``compose_all(a, b, c) == a o b o c``."""
    out = channels[0]
    for ch in channels[1:]:
        out = compose(out, ch)
    return out


def dual(phi: KrausChannel) -> KrausChannel:
    """Dual super-operator with Kraus operators ``{M_j^dag}``."""
    return KrausChannel(dagger(phi.stacked))


def apply(phi: KrausChannel, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.shape != (phi.dim, phi.dim):
        raise DimensionError(f"operator of shape {x.shape} for a channel on dim {phi.dim}")
    k = phi.stacked
    return np.einsum("kij,jl,kml->im", k, x, k.conj())


def superoperator_choi(fn, dim: int) -> np.ndarray:
    """Choi matrix ``sum_ij fn(E_ij) (x) E_ij`` of an arbitrary linear map."""
    out = np.zeros((dim * dim, dim * dim), dtype=complex)
    for i in range(dim):
        for j in range(dim):
            e = np.zeros((dim, dim), dtype=complex)
            e[i, j] = 1.0
            out += np.kron(fn(e), e)
    return out


def add_channels(channels: Sequence[KrausChannel]) -> KrausChannel:
    """Sum of CP maps, realized by concatenating Kraus families."""
    return KrausChannel([k for ch in channels for k in ch.kraus])


def is_trace_preserving(phi: KrausChannel, tol: float = PREDICATE_TOL) -> bool:
    return phi.trace_residual < tol


def is_unital(phi: KrausChannel, tol: float = PREDICATE_TOL) -> bool:
    return phi.unital_residual < tol


def is_bistochastic(phi: KrausChannel, tol: float = PREDICATE_TOL) -> bool:
    return is_trace_preserving(phi, tol) and is_unital(phi, tol)


def require_trace_preserving(phi: KrausChannel, tol: float = PREDICATE_TOL, name: str = "channel") -> None:
    if not is_trace_preserving(phi, tol):
        raise PredicateError(f"{name} is not trace-preserving (residual {phi.trace_residual:.3e})")


def require_bistochastic(phi: KrausChannel, tol: float = PREDICATE_TOL, name: str = "channel") -> None:
    require_trace_preserving(phi, tol, name)
    if not is_unital(phi, tol):
        raise PredicateError(f"{name} is not unital (residual {phi.unital_residual:.3e})")


def jamiolkowski_state(phi: KrausChannel, tol: float = PREDICATE_TOL) -> np.ndarray:
    """``rho(Phi) = J(Phi) / N``, a state on ``C^N (x) C^N``."""
    require_trace_preserving(phi, tol)
    return phi.choi / phi.dim
