"""Kraus channels, superoperators and random channel ensembles.

The vectorization convention is column-stacking throughout, so a map
``rho -> A rho B`` has superoperator ``B.T kron A`` and a Kraus channel
``rho -> sum_i A_i rho A_i^dag`` has superoperator ``sum_i conj(A_i) kron A_i``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, is_trace_preserving, is_unital
from .pauli import PauliString, pauli_group

#: largest system dimension for which superoperators are materialized
MAX_SUPEROP_DIM = 32


class ChannelError(ValueError):
    """Raised for malformed channels or dimension mismatches."""


@dataclass(frozen=True)
class KrausChannel:
    """A channel in operator-sum form."""

    kraus_ops: tuple[np.ndarray, ...]
    dimension: int

    @classmethod
    def from_ops(cls, ops) -> "KrausChannel":
        ops = tuple(as_matrix(A) for A in ops)
        if not ops:
            raise ChannelError("a channel needs at least one Kraus operator")
        d = ops[0].shape[0]
        for A in ops:
            if A.shape != (d, d):
                raise ChannelError("Kraus operators must share one dimension")
        return cls(kraus_ops=ops, dimension=d)

    def kraus_sum(self) -> np.ndarray:
        """``sum_i A_i^dag A_i`` (identity iff trace preserving)."""
        return sum(A.conj().T @ A for A in self.kraus_ops)

    @property
    def is_trace_preserving(self) -> bool:
        dev = self.kraus_sum() - np.eye(self.dimension)
        return np.linalg.norm(dev, "fro") <= 1e-8

    @property
    def is_unital(self) -> bool:
        dev = sum(A @ A.conj().T for A in self.kraus_ops) - np.eye(self.dimension)
        return np.linalg.norm(dev, "fro") <= 1e-8


@dataclass(frozen=True)
class Superoperator:
    """Matrix representation of a channel on vectorized density matrices."""

    matrix: np.ndarray
    system_dimension: int

    def __post_init__(self):
        d2 = self.system_dimension ** 2
        if self.matrix.shape != (d2, d2):
            raise ChannelError(
                f"superoperator order {self.matrix.shape} != ({d2}, {d2})")

    @property
    def order(self) -> int:
        return self.matrix.shape[0]

    def is_trace_preserving(self, tol: float = 1e-8) -> bool:
        return is_trace_preserving(self.matrix, self.system_dimension, tol)

    def is_unital(self, tol: float = 1e-8) -> bool:
        return is_unital(self.matrix, self.system_dimension, tol)


def superoperator(ch: KrausChannel) -> Superoperator:
    """Superoperator ``sum_i conj(A_i) kron A_i`` of a Kraus channel."""
    if ch.dimension > MAX_SUPEROP_DIM:
        raise ChannelError(
            f"dimension {ch.dimension} exceeds cap {MAX_SUPEROP_DIM}")
    S = sum(np.kron(A.conj(), A) for A in ch.kraus_ops)
    return Superoperator(matrix=S, system_dimension=ch.dimension)


def superoperator_of_operator(M, d: int | None = None) -> Superoperator:
    """Superoperator of the conjugation map ``rho -> M rho M^dag``."""
    M = as_matrix(M)
    d = M.shape[0] if d is None else d
    return Superoperator(matrix=np.kron(M.conj(), M), system_dimension=d)


def compose(S1: Superoperator, S2: Superoperator) -> Superoperator:
    """Composition with ``S2`` applied first."""
    if S1.system_dimension != S2.system_dimension:
        raise ChannelError("composed channels must share system dimension")
    return Superoperator(matrix=S1.matrix @ S2.matrix,
                         system_dimension=S1.system_dimension)


def identity_superoperator(d: int) -> Superoperator:
    return Superoperator(matrix=np.eye(d * d, dtype=complex),
                         system_dimension=d)


def vec(rho) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvec(v, d: int) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape((d, d), order="F")


# ---------------------------------------------------------------------------
# random ensembles

def ginibre(d: int, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. standard complex normal entries (variance 1 per entry)."""
    if d < 1:
        raise ChannelError("dimension must be positive")
    return (rng.standard_normal((d, d)) +
            1j * rng.standard_normal((d, d))) / np.sqrt(2.0)


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via phase-corrected QR of a Ginibre sample."""
    G = ginibre(d, rng)
    Q, R = np.linalg.qr(G)
    diag = np.diagonal(R)
    return Q * (diag / np.abs(diag))


def random_unitary_channel(d: int, kappa: int,
                           rng: np.random.Generator) -> KrausChannel:
    """Mixture of ``kappa`` Haar unitaries with equal weights 1/kappa."""
    if kappa < 1:
        raise ChannelError("kappa must be >= 1")
    ops = [haar_unitary(d, rng) / np.sqrt(kappa) for _ in range(kappa)]
    return KrausChannel.from_ops(ops)


def _inv_sqrt_psd(S: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(S)
    if np.min(vals) <= 1e-12 * np.max(vals):
        raise ChannelError("singular Kraus normalizer")
    return (vecs * (1.0 / np.sqrt(vals))) @ vecs.conj().T


def random_kraus_channel(d: int, kappa: int,
                         rng: np.random.Generator) -> KrausChannel:
    """Ginibre Kraus terms jointly renormalized to trace preservation.

    Each raw operator is right-multiplied by the inverse square root of
    ``S = sum_i G_i^dag G_i``; a (measure-zero) singular ``S`` is resampled.
    """
    if kappa < 1:
        raise ChannelError("kappa must be >= 1")
    for _ in range(8):
        raw = [ginibre(d, rng) for _ in range(kappa)]
        S = sum(G.conj().T @ G for G in raw)
        try:
            W = _inv_sqrt_psd(S)
        except ChannelError:
            continue
        return KrausChannel.from_ops([G @ W for G in raw])
    raise ChannelError("repeatedly singular Kraus normalizer")  # pragma: no cover


def random_pauli_channel(n: int, kappa: int,
                         rng: np.random.Generator) -> KrausChannel:
    """Mixture of ``kappa`` uniformly sampled n-qubit Paulis.

    Mixture weights are Dirichlet(1, ..., 1) over the sampled strings, the
    least-informative choice on the probability simplex.
    """
    if kappa < 1:
        raise ChannelError("kappa must be >= 1")
    group = pauli_group(n)
    idx = rng.integers(0, len(group), size=kappa)
    probs = rng.dirichlet(np.ones(kappa))
    ops = [np.sqrt(p) * group[i].matrix() for p, i in zip(probs, idx)]
    return KrausChannel.from_ops(ops)


# ---------------------------------------------------------------------------
# standard noise channels

_DAMP_0 = np.array([[1, 0], [0, 0]], dtype=complex)


def amplitude_damping_channel(n: int, alpha: float) -> KrausChannel:
    """n-fold tensor power of single-qubit amplitude damping of strength alpha."""
    if not 0.0 <= alpha <= 1.0:
        raise ChannelError(f"damping strength {alpha} outside [0, 1]")
    k0 = np.array([[1, 0], [0, np.sqrt(1 - alpha)]], dtype=complex)
    k1 = np.array([[0, np.sqrt(alpha)], [0, 0]], dtype=complex)
    ops = [np.array([[1]], dtype=complex)]
    for _ in range(n):
        ops = [np.kron(A, k) for A in ops for k in (k0, k1)]
    # drop exactly-zero operators produced at alpha in {0, 1}
    ops = [A for A in ops if np.any(A)]
    return KrausChannel.from_ops(ops)


def pauli_mixture_channel(strings: list[PauliString],
                          probs) -> KrausChannel:
    """Channel ``rho -> sum_j p_j P_j rho P_j`` for given Pauli strings."""
    probs = np.asarray(probs, dtype=float)
    if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-10:
        raise ChannelError("mixture weights must be a probability vector")
    ops = [np.sqrt(p) * P.matrix() for p, P in zip(probs, strings) if p > 0]
    return KrausChannel.from_ops(ops)
