"""Random and structured channel factories.

Randomness comes from ``numpy.random.default_rng`` (PCG64). Every factory
accepts ``seed`` as an integer, an existing ``numpy.random.Generator`` or
``None``; integer seeds give bit-identical output across runs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .channel import KrausChannel, PREDICATE_TOL, is_bistochastic
from .exceptions import DimensionError, PredicateError

PAULIS = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_unitary(n: int, seed=None) -> np.ndarray:
    """Haar-random ``n x n`` unitary: QR of a Ginibre matrix with the phases of
    ``diag(R)`` moved into ``Q``."""
    if n < 1:
        raise ValueError("n must be positive")
    q, r = np.linalg.qr(_ginibre(_rng(seed), n, n))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_isometry(rows: int, cols: int, seed=None) -> np.ndarray:
    """``rows x cols`` matrix with orthonormal columns (``rows >= cols``)."""
    if rows < cols:
        raise ValueError("an isometry needs rows >= cols")
    q, r = np.linalg.qr(_ginibre(_rng(seed), rows, cols))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_state(n: int, seed=None) -> np.ndarray:
    """Density matrix ``G G^dag / tr(G G^dag)`` with ``G`` complex Gaussian."""
    g = _ginibre(_rng(seed), n, n)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_psd(n: int, seed=None) -> np.ndarray:
    g = _ginibre(_rng(seed), n, n)
    return g @ g.conj().T


def random_bistochastic(n: int, terms: int, seed=None) -> KrausChannel:
    """Mixture of ``terms`` Haar unitaries with Dirichlet(1, ..., 1) weights."""
    if terms < 1:
        raise ValueError("terms must be at least 1")
    rng = _rng(seed)
    p = rng.dirichlet(np.ones(terms)) if terms > 1 else np.ones(1)
    return KrausChannel([np.sqrt(pi) * random_unitary(n, rng) for pi in p])


def random_stochastic(n: int, kraus_count: int, seed=None) -> KrausChannel:
    """Trace-preserving channel whose stacked Kraus operators form a random isometry."""
    if kraus_count < 1:
        raise ValueError("kraus_count must be at least 1")
    v = random_isometry(n * kraus_count, n, seed)
    return KrausChannel(v.reshape(kraus_count, n, n))


def random_cp(n: int, kraus_count: int, seed=None) -> KrausChannel:
    """Unnormalized CP map with Gaussian Kraus operators."""
    rng = _rng(seed)
    return KrausChannel([_ginibre(rng, n, n) for _ in range(kraus_count)])


def random_biorthogonal_pair(n: int, split: int, kraus_counts=(2, 2), seed=None):
    """Two CP maps with ``M^dag N = 0`` and ``M N^dag = 0`` for all Kraus pairs.

    Input and output spaces are each cut by a Haar-random basis into a
    ``split``-dimensional part used by the first map and the complement used
    by the second.
    """
    if not 0 < split < n:
        raise ValueError("split must lie strictly between 0 and n")
    rng = _rng(seed)
    q = random_unitary(n, rng)
    p = random_unitary(n, rng)
    parts = ((q[:, :split], p[:, :split]), (q[:, split:], p[:, split:]))
    out = []
    for (qo, pi), count in zip(parts, kraus_counts):
        d = qo.shape[1]
        out.append(KrausChannel([qo @ _ginibre(rng, d, d) @ pi.conj().T for _ in range(count)]))
    return tuple(out)


def pauli_channel(p: Sequence[float]) -> KrausChannel:
    """Qubit channel with Kraus operators ``sqrt(p_i) sigma_i``; zero weights are dropped."""
    p = np.asarray(p, dtype=float)
    if p.shape != (4,):
        raise ValueError("a Pauli channel needs exactly 4 weights")
    if p.min() < 0 or abs(p.sum() - 1.0) > 1e-9:
        raise ValueError("Pauli weights must form a probability distribution")
    return KrausChannel([np.sqrt(w) * s for w, s in zip(p, PAULIS) if w > 0])


def bit_flip(p: float) -> KrausChannel:
    return pauli_channel([1 - p, p, 0, 0])


def phase_flip(p: float) -> KrausChannel:
    return pauli_channel([1 - p, 0, 0, p])


def completely_depolarizing(n: int) -> KrausChannel:
    """``X -> tr(X) I/n`` with Kraus operators ``|i><j| / sqrt(n)``."""
    ops = []
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = 1 / np.sqrt(n)
            ops.append(e)
    return KrausChannel(ops)


def amplitude_damping(gamma: float) -> KrausChannel:
    k0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex)
    k1 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
    return KrausChannel([k0, k1])


@dataclass(frozen=True)
class BlockSpec:
    """Shape of a decomposition ``H = (+)_k H^L_k (x) H^R_k``.

    Block ``k`` occupies the consecutive coordinates
    ``[offset_k, offset_k + dL_k * dR_k)`` of ``C^N``, with the left factor
    as the slow index.
    """

    blocks: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        blocks = tuple((int(a), int(b)) for a, b in self.blocks)
        if not blocks:
            raise ValueError("a block spec needs at least one block")
        if any(a < 1 or b < 1 for a, b in blocks):
            raise ValueError("block dimensions must be positive")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def parse(cls, text: str) -> "BlockSpec":
        """Parse ``"dL:dR,dL:dR,..."``."""
        blocks = []
        for part in text.split(","):
            left, sep, right = part.strip().partition(":")
            if not sep:
                raise ValueError(f"block {part!r} is not of the form dL:dR")
            blocks.append((int(left), int(right)))
        return cls(tuple(blocks))

    def __str__(self) -> str:
        return ",".join(f"{a}:{b}" for a, b in self.blocks)

    @property
    def dim(self) -> int:
        return sum(a * b for a, b in self.blocks)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(a * b for a, b in self.blocks)

    @property
    def offsets(self) -> Tuple[int, ...]:
        return tuple(int(x) for x in np.cumsum((0,) + self.sizes[:-1]))

    @property
    def weights(self) -> np.ndarray:
        """``lambda_k = dL_k dR_k / N``."""
        return np.array(self.sizes, dtype=float) / self.dim

    def embedding(self, k: int) -> np.ndarray:
        """Isometry ``W_k`` from block ``k`` into ``C^N``."""
        w = np.zeros((self.dim, self.sizes[k]), dtype=complex)
        off = self.offsets[k]
        w[off:off + self.sizes[k], :] = np.eye(self.sizes[k])
        return w


ROLES = ("phi", "lambda", "psi")


def _as_kraus_list(x, dim: int, name: str, unitary: bool) -> list:
    if isinstance(x, KrausChannel) and unitary:
        if len(x) != 1:
            raise PredicateError(f"{name} must be a unitary, got a {len(x)}-term channel")
        x = x.kraus[0]
    if isinstance(x, KrausChannel):
        ops = list(x.kraus)
        if x.dim != dim:
            raise DimensionError(f"{name} acts on dim {x.dim}, block needs {dim}")
        if not is_bistochastic(x, PREDICATE_TOL):
            raise PredicateError(f"{name} is not bi-stochastic")
        return ops
    u = np.asarray(x, dtype=complex)
    if u.shape != (dim, dim):
        raise DimensionError(f"{name} has shape {u.shape}, block needs {dim}x{dim}")
    if not unitary:
        raise PredicateError(f"{name} must be a KrausChannel")
    if np.linalg.norm(u.conj().T @ u - np.eye(dim), ord=2) > PREDICATE_TOL:
        raise PredicateError(f"{name} is not unitary")
    return [u]


def build_block_channel(spec: BlockSpec, role: str, factors: Sequence[tuple]) -> KrausChannel:
    """Channel ``(+)_k A_k (x) B_k`` acting blockwise on ``C^N``.

    ``factors[k]`` is a pair for block ``k`` whose types depend on ``role``:

    ``"phi"``
        (bi-stochastic channel on ``C^dL``, unitary on ``C^dR``)
    ``"lambda"``
        (bi-stochastic channel on ``C^dL``, bi-stochastic channel on ``C^dR``)
    ``"psi"``
        (unitary on ``C^dL``, bi-stochastic channel on ``C^dR``)

    Kraus operators are ``W_k (A (x) B) W_k^dag`` over all per-block pairs.
    """
    if role not in ROLES:
        raise ValueError(f"role must be one of {ROLES}, got {role!r}")
    if len(factors) != len(spec.blocks):
        raise DimensionError(f"{len(factors)} factor pairs for {len(spec.blocks)} blocks")
    left_unitary = role == "psi"
    right_unitary = role == "phi"
    ops = []
    for k, ((dl, dr), (left, right)) in enumerate(zip(spec.blocks, factors)):
        lk = _as_kraus_list(left, dl, f"left factor of block {k}", left_unitary)
        rk = _as_kraus_list(right, dr, f"right factor of block {k}", right_unitary)
        w = spec.embedding(k)
        for a in lk:
            for b in rk:
                ops.append(w @ np.kron(a, b) @ w.conj().T)
    return KrausChannel(ops)


def random_sds_triple(spec: BlockSpec, seed=None, max_terms: int = 3):
    """Random ``(phi, lambda, psi)`` satisfying the block hypotheses for ``spec``.

    Bi-stochastic factors are unitary mixtures with 1 to ``max_terms`` terms.
    """
    rng = _rng(seed)

    def mix(d):
        return random_bistochastic(d, int(rng.integers(1, max_terms + 1)), rng)

    phi_f, lam_f, psi_f = [], [], []
    for dl, dr in spec.blocks:
        phi_f.append((mix(dl), random_unitary(dr, rng)))
        lam_f.append((mix(dl), mix(dr)))
        psi_f.append((random_unitary(dl, rng), mix(dr)))
    return (
        build_block_channel(spec, "phi", phi_f),
        build_block_channel(spec, "lambda", lam_f),
        build_block_channel(spec, "psi", psi_f),
    )
