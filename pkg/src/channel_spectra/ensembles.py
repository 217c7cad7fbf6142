"""Random-channel spectral studies: peripheral projection and gaps.

The peripheral projector isolates channel eigenvalues on (or numerically at)
the unit circle via biorthogonal left/right eigenvectors; the remainder is
the decaying part whose spectral radius governs how fast initial information
is forgotten.  Gap experiments sweep Kraus counts for the unitary, Ginibre
and Pauli families and sandwich the second singular value between the
Chernoff upper bound and the one-deletion interlaced lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import (random_kraus_channel, random_pauli_channel,
                       random_unitary_channel, superoperator)
from .chernoff import ChernoffInputs, singular_bound_pipeline
from .linalg import LinalgError, cluster_values, spectral_report, SpectralReport


class DegenerateSpectrumError(ValueError):
    """Raised when a spectral gap is requested for a fully degenerate spectrum."""


@dataclass(frozen=True)
class PeripheralProjection:
    """Spectral projector onto the peripheral eigenspace and the remainder."""

    projector: np.ndarray
    nilpotent_part: np.ndarray
    peripheral_rank: int
    peripheral_tolerance: float


def peripheral_projector(S, tol: float = 1e-6,
                         defect_tol: float = 1e-7) -> PeripheralProjection:
    """Split a superoperator into peripheral and decaying parts.

    Eigenvalues with ``|lambda| >= 1 - tol`` define the peripheral block.
    The projector is assembled from matched right and left eigenvectors with
    biorthogonal normalization; a defective peripheral block (projector far
    from idempotent) is reported as an error rather than silently patched.
    """
    S = np.asarray(S, dtype=complex)
    vals, right = np.linalg.eig(S)
    try:
        left = np.linalg.inv(right)
    except np.linalg.LinAlgError as exc:
        raise LinalgError(f"defective superoperator: {exc}") from exc
    idx = np.abs(vals) >= 1.0 - tol
    T_p = right[:, idx] @ left[idx, :]
    if np.linalg.norm(T_p @ T_p - T_p, "fro") > defect_tol * max(1.0, np.linalg.norm(T_p, "fro")):
        raise LinalgError("peripheral block appears defective "
                          "(projector is not idempotent)")
    remainder = S @ (np.eye(S.shape[0]) - T_p)
    return PeripheralProjection(projector=T_p, nilpotent_part=remainder,
                                peripheral_rank=int(np.sum(idx)),
                                peripheral_tolerance=tol)


@dataclass(frozen=True)
class GapReport:
    """Spectral gaps and sigma_2 sandwich statistics for one grid point."""

    family: str
    kappa: int
    trials: int
    gamma_lambda_mean: float
    gamma_lambda_std: float
    gamma_sigma_mean: float
    gamma_sigma_std: float
    sigma2_mean: float
    lambda2_mean: float
    nilpotent_radius_mean: float
    mu_upper: float
    mu_lower: float
    bound_upper: float
    bound_lower: float


def spectral_gap(report: SpectralReport, tol: float = 1e-6) -> tuple[float, float]:
    """Eigen and singular spectral gaps (radius minus next-largest modulus)."""
    gaps = []
    for values in (report.eigen_moduli, report.singular_values):
        clusters = cluster_values(values, tol)
        if len(clusters) < 2:
            raise DegenerateSpectrumError(
                "spectral gap undefined for a fully degenerate spectrum")
        gaps.append(clusters[0][0] - clusters[1][0])
    return float(gaps[0]), float(gaps[1])


_FAMILIES = ("unitary", "kraus", "pauli")


def sample_channel(family: str, d: int, kappa: int,
                   rng: np.random.Generator):
    """One random channel of the named family at system dimension d."""
    if family == "unitary":
        return random_unitary_channel(d, kappa, rng)
    if family == "kraus":
        return random_kraus_channel(d, kappa, rng)
    if family == "pauli":
        n = int(np.log2(d))
        if 2 ** n != d:
            raise ValueError("Pauli family needs a power-of-two dimension")
        return random_pauli_channel(n, kappa, rng)
    raise ValueError(f"unknown family {family!r}; expected one of {_FAMILIES}")


def gap_experiment(family: str, kappa_grid, d: int, trials: int,
                   seed: int, theta: float = 1.0,
                   tol: float = 1e-6) -> list[GapReport]:
    """Gap statistics and the sigma_2 bound sandwich across a kappa grid."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    root = np.random.default_rng(seed)
    reports = []
    for kappa in kappa_grid:
        rng = np.random.default_rng(root.integers(0, 2 ** 63))
        mats = [superoperator(sample_channel(family, d, kappa, rng)).matrix
                for _ in range(trials)]
        g_lam, g_sig, s2, l2, nrad = [], [], [], [], []
        for M in mats:
            rep = spectral_report(M, cluster_tol=tol)
            lam_gap, sig_gap = spectral_gap(rep, tol)
            g_lam.append(lam_gap)
            g_sig.append(sig_gap)
            s2.append(rep.singular_values[1])
            l2.append(rep.eigen_moduli[1])
            proj = peripheral_projector(M, tol=tol)
            nrad.append(np.max(np.abs(np.linalg.eigvals(proj.nilpotent_part))))
        inputs = ChernoffInputs(theta=theta, submatrix_strategy="random")
        upper = singular_bound_pipeline(mats, i=2, inputs=inputs,
                                        peripheral_projection=True,
                                        rng=rng, cluster_tol=tol)
        lower = singular_bound_pipeline(mats, i=2, inputs=inputs,
                                        peripheral_projection=True,
                                        rng=rng, lower_bound_mode=True,
                                        cluster_tol=tol)
        reports.append(GapReport(
            family=family,
            kappa=int(kappa),
            trials=trials,
            gamma_lambda_mean=float(np.mean(g_lam)),
            gamma_lambda_std=float(np.std(g_lam)),
            gamma_sigma_mean=float(np.mean(g_sig)),
            gamma_sigma_std=float(np.std(g_sig)),
            sigma2_mean=float(np.mean(s2)),
            lambda2_mean=float(np.mean(l2)),
            nilpotent_radius_mean=float(np.mean(nrad)),
            mu_upper=upper.mu,
            mu_lower=lower.mu,
            bound_upper=upper.expectation_bound,
            bound_lower=lower.mu,
        ))
    return reports
