"""Certifiers for (strong) dynamical additivity of map entropy.

* :func:`certify_dynamical_additivity` checks the canonical-Kraus product
  condition ``<S_m T_mu, S_n T_nu> = (1/N) <S_m, S_n> <T_mu, T_nu>`` that is
  equivalent to ``S(Phi o Psi) = S(Phi) + S(Psi)`` for bi-stochastic maps.
* :func:`is_biorthogonal` and :func:`biorthogonal_decomposition` handle
  bi-orthogonality of CP maps.
* :func:`verify_block_saturation` checks that a block-structured triple
  saturates strong dynamical subadditivity and that its Jamiolkowski state
  splits as ``sum_k lambda_k rho^L_k (x) rho^R_k``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Tuple

import networkx as nx
import numpy as np

from .channel import (
    KrausChannel,
    canonical_form,
    compose,
    compose_all,
    dual,
    jamiolkowski_state,
    require_bistochastic,
    require_trace_preserving,
    superoperator_choi,
)
from .entropy import map_entropy, von_neumann_entropy
from .exceptions import BiorthogonalityMismatch, DimensionError
from .generators import BlockSpec
from .linalg import permute_operator_factors, ptrace_first, ptrace_second, trace_norm

CERTIFY_TOL = 1e-8
BIORTH_TOL = 1e-8
PINSKER_CONST = 1 / (2 * np.log(2))


@dataclass(frozen=True)
class AdditivityReport:
    certified: bool
    max_violation: float
    entropy_gap: float
    tol: float = CERTIFY_TOL


@dataclass(frozen=True)
class BiorthDecomposition:
    components: Tuple[KrausChannel, ...]
    index_partition: Tuple[Tuple[int, ...], ...]
    canonical: KrausChannel

    def __len__(self) -> int:
        return len(self.components)


class SaturationReport(NamedTuple):
    gap: float
    choi_residual: float


def subadditivity_gap(phi: KrausChannel, psi: KrausChannel) -> float:
    """``S(phi) + S(psi) - S(phi o psi)``; non-negative when ``phi`` is bi-stochastic."""
    require_bistochastic(phi, name="phi")
    require_trace_preserving(psi, name="psi")
    return map_entropy(phi) + map_entropy(psi) - map_entropy(compose(phi, psi))


def additivity_violation(phi: KrausChannel, psi: KrausChannel) -> np.ndarray:
    """Matrix ``<S_m T_mu, S_n T_nu> - (1/N) <S_m, S_n> <T_mu, T_nu>``.

    Rows and columns are indexed by ``(m, mu)`` with ``m`` the slow index.
    The Kraus families are used as given.
    """
    n = phi.dim
    s = phi.stacked.reshape(len(phi), -1)
    t = psi.stacked.reshape(len(psi), -1)
    prods = compose(phi, psi).stacked.reshape(len(phi) * len(psi), -1)
    lhs = prods.conj() @ prods.T
    rhs = np.kron(s.conj() @ s.T, t.conj() @ t.T) / n
    return lhs - rhs


def certify_dynamical_additivity(
    phi: KrausChannel, psi: KrausChannel, tol: float = CERTIFY_TOL
) -> AdditivityReport:
    """Decide ``S(phi o psi) == S(phi) + S(psi)`` through the Kraus product condition.

    Both channels are brought to a canonical representation first; a family
    that is already pairwise orthogonal is kept as given.
    """
    require_bistochastic(phi, name="phi")
    require_bistochastic(psi, name="psi")
    s = canonical_form(phi)
    t = canonical_form(psi)
    viol = float(np.abs(additivity_violation(s, t)).max())
    gap = map_entropy(phi) + map_entropy(psi) - map_entropy(compose(phi, psi))
    return AdditivityReport(viol < tol, viol, gap, tol)


def biorthogonality_norms(phi: KrausChannel, psi: KrausChannel) -> dict:
    """Residuals of the three equivalent bi-orthogonality tests.

    ``kraus``
        max over pairs of ``||M^dag N||`` and ``||M N^dag||``
    ``choi``
        ``||tr_2 J(phi) tr_2 J(psi)||`` and ``||tr_1 J(phi) tr_1 J(psi)||``
    ``composition``
        ``phi o psi^dag`` and ``phi^dag o psi`` evaluated on all matrix units
    """
    if phi.dim != psi.dim:
        raise DimensionError(f"dims {phi.dim} and {psi.dim} differ")
    n = phi.dim
    m = phi.stacked
    k = psi.stacked
    md = np.conj(np.swapaxes(m, -1, -2))
    kd = np.conj(np.swapaxes(k, -1, -2))
    kraus = max(
        float(np.linalg.norm(np.einsum("aij,bjk->abik", md, k), axis=(-2, -1)).max()),
        float(np.linalg.norm(np.einsum("aij,bjk->abik", m, kd), axis=(-2, -1)).max()),
    )

    jp, jq = phi.choi, psi.choi
    choi = max(
        float(np.linalg.norm(ptrace_second(jp, n, n) @ ptrace_second(jq, n, n), ord=2)),
        float(np.linalg.norm(ptrace_first(jp, n, n) @ ptrace_first(jq, n, n), ord=2)),
    )

    def on_units(first: KrausChannel, second: KrausChannel) -> float:
        out = superoperator_choi(lambda e: first(second(e)), n)
        return float(np.abs(out).max())

    composition = max(on_units(phi, dual(psi)), on_units(dual(phi), psi))
    return {"kraus": kraus, "choi": choi, "composition": composition}


def biorthogonality_tests(phi: KrausChannel, psi: KrausChannel, tol: float = BIORTH_TOL) -> dict:
    return {name: value < tol for name, value in biorthogonality_norms(phi, psi).items()}


def is_biorthogonal(phi: KrausChannel, psi: KrausChannel, tol: float = BIORTH_TOL) -> bool:
    """True iff ``M^dag N = 0`` and ``M N^dag = 0`` for all Kraus pairs.

    The Choi-reduction and super-operator tests are evaluated too.

    :raises BiorthogonalityMismatch: if the three tests disagree.
    """
    tests = biorthogonality_tests(phi, psi, tol)
    if len(set(tests.values())) != 1:
        raise BiorthogonalityMismatch(f"bi-orthogonality tests disagree: {tests}")
    return tests["kraus"]


def biorthogonal_decomposition(phi: KrausChannel, tol: float = BIORTH_TOL) -> BiorthDecomposition:
    """Finest splitting of ``phi`` into pairwise bi-orthogonal CP summands.

    Canonical Kraus operators ``M_i, M_j`` are linked when ``M_i^dag M_j`` or
    ``M_i M_j^dag`` is nonzero; each connected component is one summand.
    Components are ordered by their smallest canonical index.
    """
    canon = canonical_form(phi)
    ops = canon.stacked
    d = len(canon)
    g = nx.Graph()
    g.add_nodes_from(range(d))
    for i in range(d):
        for j in range(i + 1, d):
            a = np.linalg.norm(ops[i].conj().T @ ops[j])
            b = np.linalg.norm(ops[i] @ ops[j].conj().T)
            if a >= tol or b >= tol:
                g.add_edge(i, j)
    parts = sorted((tuple(sorted(c)) for c in nx.connected_components(g)), key=lambda c: c[0])
    comps = tuple(KrausChannel([canon.kraus[i] for i in part]) for part in parts)
    return BiorthDecomposition(comps, tuple(parts), canon)


def conditional_mutual_information(phi: KrausChannel, lam: KrausChannel, psi: KrausChannel) -> float:
    """``S(phi o lam) + S(lam o psi) - S(phi o lam o psi) - S(lam)``.

    Not symmetric under swapping ``phi`` and ``psi``.
    """
    require_bistochastic(phi, name="phi")
    require_bistochastic(lam, name="lambda")
    require_bistochastic(psi, name="psi")
    return (
        map_entropy(compose(phi, lam))
        + map_entropy(compose(lam, psi))
        - map_entropy(compose_all(phi, lam, psi))
        - map_entropy(lam)
    )


def _block_marginals(rho: np.ndarray, spec: BlockSpec, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """Left and right Jamiolkowski marginals of block ``k`` of ``rho``."""
    dl, dr = spec.blocks[k]
    w = spec.embedding(k)
    ww = np.kron(w, w)
    block = ww.conj().T @ rho @ ww
    tr = np.trace(block).real
    if tr <= 0:
        return np.zeros((dl * dl, dl * dl)), np.zeros((dr * dr, dr * dr))
    # factor order of the block vec index is (L, R, L', R'); regroup to (L, L', R, R')
    block = permute_operator_factors(block / tr, (dl, dr, dl, dr), (0, 2, 1, 3))
    return ptrace_second(block, dl * dl, dr * dr), ptrace_first(block, dl * dl, dr * dr)


def block_product_state(rho: np.ndarray, spec: BlockSpec) -> np.ndarray:
    """``sum_k lambda_k (W_k (x) W_k) P (rho^L_k (x) rho^R_k) P^dag (W_k (x) W_k)^dag``.

    ``rho^L_k`` and ``rho^R_k`` are the marginals of the block-``k``
    restriction of ``rho``.
    """
    n = spec.dim
    out = np.zeros((n * n, n * n), dtype=complex)
    for k, ((dl, dr), lam) in enumerate(zip(spec.blocks, spec.weights)):
        left, right = _block_marginals(rho, spec, k)
        prod = permute_operator_factors(np.kron(left, right), (dl, dl, dr, dr), (0, 2, 1, 3))
        ww = np.kron(spec.embedding(k), spec.embedding(k))
        out += lam * (ww @ prod @ ww.conj().T)
    return out


def verify_block_saturation(
    phi: KrausChannel, lam: KrausChannel, psi: KrausChannel, spec: BlockSpec
) -> SaturationReport:
    """Strong-additivity gap and block-product residual of ``phi o lam o psi``.

    ``gap`` is :func:`conditional_mutual_information`; ``choi_residual`` is
    the trace-norm distance between ``rho(phi o lam o psi)`` and
    :func:`block_product_state` with weights ``dL_k dR_k / N``.
    """
    for name, ch in (("phi", phi), ("lambda", lam), ("psi", psi)):
        if ch.dim != spec.dim:
            raise DimensionError(f"{name} acts on dim {ch.dim} but blocks {spec} give N={spec.dim}")
    gap = conditional_mutual_information(phi, lam, psi)
    rho = jamiolkowski_state(compose_all(phi, lam, psi))
    residual = trace_norm(rho - block_product_state(rho, spec))
    return SaturationReport(gap, residual)


def pinsker_gap(rho_ab: np.ndarray, da: int, db: int) -> float:
    """Mutual information minus ``||rho_AB - rho_A (x) rho_B||_1^2 / (2 ln 2)``."""
    rho_ab = np.asarray(rho_ab, dtype=complex)
    if rho_ab.shape != (da * db, da * db):
        raise DimensionError(f"state of shape {rho_ab.shape} for dims ({da}, {db})")
    rho_a = ptrace_second(rho_ab, da, db)
    rho_b = ptrace_first(rho_ab, da, db)
    mutual = von_neumann_entropy(rho_a) + von_neumann_entropy(rho_b) - von_neumann_entropy(rho_ab)
    dist = trace_norm(rho_ab - np.kron(rho_a, rho_b))
    return mutual - PINSKER_CONST * dist**2

