"""Dense complex linear algebra primitives.

Everything downstream (channels, concentration bounds, error-correction
spectra) is built on the handful of operations here: ordered eigen- and
singular spectra, the Hermitian dilation whose eigenvalues are the signed
singular values, the positive/negative split of a Hermitian matrix, and
principal-submatrix extraction for interlacing arguments.

Matrices are plain ``numpy.ndarray`` of ``complex128``; all functions are
pure and never mutate their arguments.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: absolute tolerance for deciding a matrix is Hermitian
HERMITIAN_TOL = 1e-10
#: default tolerance used when clustering near-degenerate spectral values
CLUSTER_TOL = 1e-6


class LinalgError(ValueError):
    """Raised for shape violations or eigensolver failures."""


def as_matrix(entries) -> np.ndarray:
    """Validate and coerce input to a finite complex 2-D array."""
    M = np.asarray(entries, dtype=complex)
    if M.ndim != 2:
        raise LinalgError(f"expected a 2-D array, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise LinalgError("matrix contains NaN or Inf entries")
    return M


def _require_square(M: np.ndarray) -> np.ndarray:
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise LinalgError(f"expected a square matrix, got shape {M.shape}")
    return M


def _require_hermitian(M: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    M = _require_square(M)
    dev = np.max(np.abs(M - M.conj().T)) if M.size else 0.0
    # absolute below unit entry scale, relative above it, so inflated
    # matrices (for example sampling-overhead-scaled estimators) still pass
    scale = max(1.0, float(np.max(np.abs(M)))) if M.size else 1.0
    if dev > tol * scale:
        raise LinalgError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    # symmetrize to stabilize the eigensolver
    return 0.5 * (M + M.conj().T)


def eigen_sort_key(values: np.ndarray) -> np.ndarray:
    """Indices sorting complex values by descending modulus.

    Ties in modulus are broken by descending real part, then descending
    imaginary part, so orderings are deterministic for degenerate spectra.
    """
    return np.lexsort((-values.imag, -values.real, -np.abs(values)))


def eigenvalues(M) -> np.ndarray:
    """Eigenvalues of a square matrix, descending by modulus."""
    M = _require_square(M)
    try:
        vals = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - rare
        raise LinalgError(f"eigensolver failed to converge: {exc}") from exc
    return vals[eigen_sort_key(vals)]


def eigenvalues_hermitian(H) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, descending."""
    H = _require_hermitian(H)
    try:
        vals = np.linalg.eigvalsh(H)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise LinalgError(f"eigensolver failed to converge: {exc}") from exc
    return vals[::-1]


def singular_values(M) -> np.ndarray:
    """Singular values (nonnegative, descending); rectangular input allowed."""
    M = as_matrix(M)
    try:
        return np.linalg.svd(M, compute_uv=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise LinalgError(f"SVD failed to converge: {exc}") from exc


@dataclass(frozen=True)
class HermitianDilation:
    """Hermitian embedding ``[[0, M], [M^dag, 0]]`` of a square matrix.

    The eigenvalues of ``matrix`` are the singular values of the source
    together with their negatives.
    """

    matrix: np.ndarray
    source_order: int


def dilate(M) -> HermitianDilation:
    """Hermitian dilation of a square complex matrix."""
    M = _require_square(M)
    d = M.shape[0]
    chi = np.zeros((2 * d, 2 * d), dtype=complex)
    chi[:d, d:] = M
    chi[d:, :d] = M.conj().T
    return HermitianDilation(matrix=chi, source_order=d)


def split_psd(H) -> tuple[np.ndarray, np.ndarray]:
    """Split a Hermitian matrix into ``H = H_plus - H_minus``.

    Both parts are positive semidefinite and mutually orthogonal; they are
    the restrictions of ``H`` to its nonnegative and negative eigenspaces,
    computed from a full Hermitian eigendecomposition.
    """
    H = _require_hermitian(H)
    vals, vecs = np.linalg.eigh(H)
    pos = np.clip(vals, 0.0, None)
    neg = np.clip(-vals, 0.0, None)
    H_plus = (vecs * pos) @ vecs.conj().T
    H_minus = (vecs * neg) @ vecs.conj().T
    # rounding in the reconstruction can leave a tiny skew-Hermitian residue
    H_plus = 0.5 * (H_plus + H_plus.conj().T)
    H_minus = 0.5 * (H_minus + H_minus.conj().T)
    return H_plus, H_minus


def principal_submatrix(H, delete_count: int, strategy: str = "deterministic",
                        rng: np.random.Generator | None = None) -> np.ndarray:
    """Delete ``delete_count`` matching rows and columns of a square matrix.

    ``strategy`` is ``"deterministic"`` (remove the leading indices) or
    ``"random"`` (remove indices sampled uniformly without replacement from
    ``rng``).  The random strategy consumes exactly one ``choice`` call so
    replay under a fixed seed is bit-stable.
    """
    H = _require_square(H)
    order = H.shape[0]
    if not 0 <= delete_count < order:
        raise LinalgError(
            f"delete_count {delete_count} out of range for order {order}")
    if delete_count == 0:
        return H
    if strategy == "deterministic":
        removed = np.arange(delete_count)
    elif strategy == "random":
        if rng is None:
            raise LinalgError("random strategy requires an rng")
        removed = rng.choice(order, size=delete_count, replace=False)
    else:
        raise LinalgError(f"unknown strategy {strategy!r}")
    keep = np.setdiff1d(np.arange(order), removed)
    return H[np.ix_(keep, keep)]


def is_normal(M, tol: float = 1e-10) -> bool:
    """Whether ``[M, M^dag] = 0`` relative to the squared Frobenius norm."""
    M = _require_square(M)
    comm = M @ M.conj().T - M.conj().T @ M
    scale = np.linalg.norm(M, "fro") ** 2
    if scale == 0.0:
        return True
    return np.linalg.norm(comm, "fro") <= tol * scale


def _vec_identity(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex).reshape(-1, order="F")


def is_unital(S, d: int, tol: float = 1e-8) -> bool:
    """Whether the superoperator maps the identity to itself."""
    S = _require_square(S)
    if S.shape[0] != d * d:
        raise LinalgError(f"superoperator order {S.shape[0]} != d^2 = {d * d}")
    v = _vec_identity(d)
    return np.linalg.norm(S @ v - v) <= tol * np.sqrt(d)


def is_trace_preserving(S, d: int, tol: float = 1e-8) -> bool:
    """Whether the adjoint superoperator maps the identity to itself."""
    S = _require_square(S)
    if S.shape[0] != d * d:
        raise LinalgError(f"superoperator order {S.shape[0]} != d^2 = {d * d}")
    v = _vec_identity(d)
    return np.linalg.norm(S.conj().T @ v - v) <= tol * np.sqrt(d)


def cluster_values(values, tol: float = CLUSTER_TOL) -> list[tuple[float, int]]:
    """Greedy tolerance clustering of real spectral values.

    Values are sorted descending and swept once; a new cluster opens whenever
    a value falls more than ``tol`` below the running cluster mean.  Returns
    ``(representative, count)`` pairs in descending order of representative.
    """
    vals = np.sort(np.asarray(values, dtype=float))[::-1]
    clusters: list[tuple[float, int]] = []
    if vals.size == 0:
        return clusters
    start = 0
    for i in range(1, vals.size + 1):
        if i == vals.size or abs(vals[i] - np.mean(vals[start:i])) > tol:
            members = vals[start:i]
            clusters.append((float(np.mean(members)), int(members.size)))
            start = i
    return clusters


@dataclass(frozen=True)
class SpectralReport:
    """Ordered eigen and singular spectra of one operator, with clustering."""

    eigenvalues: np.ndarray
    singular_values: np.ndarray
    clusters: list[tuple[float, int]] = field(default_factory=list)
    cluster_tolerance: float = CLUSTER_TOL

    @property
    def eigen_moduli(self) -> np.ndarray:
        return np.abs(self.eigenvalues)

    def eigen_modulus_clusters(self) -> list[tuple[float, int]]:
        return cluster_values(self.eigen_moduli, self.cluster_tolerance)


def spectral_report(M, cluster_tol: float = CLUSTER_TOL) -> SpectralReport:
    """Full spectral characterization of a square matrix."""
    M = _require_square(M)
    return SpectralReport(
        eigenvalues=eigenvalues(M),
        singular_values=singular_values(M),
        clusters=cluster_values(singular_values(M), cluster_tol),
        cluster_tolerance=cluster_tol,
    )
