"""Matrix-Chernoff concentration machinery for singular values.

The route from a random complex matrix to a concentration statement is:
dilate to a Hermitian matrix whose spectrum is the signed singular values,
optionally truncate a principal submatrix so interlacing isolates the target
ordered singular value, split into positive/negative semidefinite parts, and
average those parts over the ensemble.  The fluctuation term is

    mu = lambda_max(E[chi_S^+]) + lambda_max(E[chi_S^-])

and the expectation bound is ``mu (e^theta - 1)/theta + 2 L/theta log(D)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (LinalgError, dilate, eigenvalues_hermitian,
                     principal_submatrix, singular_values, split_psd)


@dataclass(frozen=True)
class ChernoffInputs:
    """Free parameters of the concentration bound."""

    theta: float = 1.0
    L: float = 0.0
    effective_dimension: int = 1
    target_index: int = 1
    submatrix_strategy: str | None = None

    def __post_init__(self):
        if self.theta <= 0:
            raise ValueError("theta must be positive")
        if self.L < 0:
            raise ValueError("L must be nonnegative")
        if self.effective_dimension < 1:
            raise ValueError("effective dimension must be >= 1")


@dataclass(frozen=True)
class ChernoffReport:
    """Evaluated bound for one ensemble alongside the empirical truth."""

    mu: float
    expectation_bound: float
    fluctuation_term: float
    log_term: float
    tail_bound_at_epsilon: float | None
    theta: float
    L: float
    effective_dimension: int
    target_index: int
    sample_mean_sigma_i: float
    sample_std_sigma_i: float
    ensemble_size: int
    deletions: int = 0
    lower_bound_mode: bool = False


def multiplicity_offset(spectrum, i: int, tol: float = 1e-6) -> int:
    """Number of spectrum entries strictly greater than the i-th (1-based).

    ``spectrum`` must be sorted descending; entries within ``tol`` of the
    i-th value do not count, so every index tied with the top value maps
    to offset 0.
    """
    s = np.asarray(spectrum, dtype=float)
    if np.any(np.diff(s) > 1e-12):
        raise ValueError("spectrum must be sorted descending")
    if not 1 <= i <= s.size:
        raise ValueError(f"index {i} out of range for spectrum of {s.size}")
    return int(np.sum(s > s[i - 1] + tol))


def chernoff_mu(ensemble) -> float:
    """Fluctuation term of an ensemble of Hermitian matrices.

    Splits each member into PSD parts, averages the parts separately and
    returns the sum of the two top eigenvalues of the averages.
    """
    mats = [np.asarray(H) for H in ensemble]
    if not mats:
        raise ValueError("ensemble is empty")
    order = mats[0].shape
    avg_plus = np.zeros(order, dtype=complex)
    avg_minus = np.zeros(order, dtype=complex)
    for H in mats:
        if H.shape != order:
            raise ValueError("ensemble members must share one order")
        plus, minus = split_psd(H)
        avg_plus += plus
        avg_minus += minus
    avg_plus /= len(mats)
    avg_minus /= len(mats)
    return float(eigenvalues_hermitian(avg_plus)[0] +
                 eigenvalues_hermitian(avg_minus)[0])


def expectation_bound(mu: float, inputs: ChernoffInputs) -> float:
    """``mu (e^theta - 1)/theta + 2 L/theta log(D_i)``."""
    theta = inputs.theta
    fluct = mu * (np.exp(theta) - 1.0) / theta
    log_term = 2.0 * inputs.L / theta * np.log(inputs.effective_dimension)
    return float(fluct + log_term)


def tail_bound(mu_max: float, L: float, d_prime: int, epsilon: float) -> float:
    """Tail probability bound, capped at 1; decreasing in epsilon."""
    if L <= 0:
        raise ValueError("tail bound undefined for L <= 0")
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    ratio = mu_max / L
    log_base = epsilon - (1.0 + epsilon) * np.log1p(epsilon)
    value = d_prime * np.exp(ratio * log_base)
    return float(min(value, 1.0))


def _split_tops(H: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    plus, minus = split_psd(H)
    top = max(eigenvalues_hermitian(plus)[0], eigenvalues_hermitian(minus)[0])
    return plus, minus, float(top)


def singular_bound_pipeline(superoperator_ensemble, i: int,
                            inputs: ChernoffInputs,
                            peripheral_projection: bool = False,
                            rng: np.random.Generator | None = None,
                            lower_bound_mode: bool = False,
                            per_sample_offset: bool = False,
                            tail_epsilon: float | None = None,
                            cluster_tol: float = 1e-6) -> ChernoffReport:
    """Evaluate the concentration bound on sigma_i over a channel ensemble.

    Per sample: optionally project out the peripheral spectrum, dilate,
    truncate the multiplicity offset worth of rows/columns (plus one extra
    in ``lower_bound_mode``, which empirically interlaces to a lower bound),
    and split into PSD parts.  The parts are ensemble-averaged and combined
    with the empirical mean and standard deviation of the true sigma_i.

    The offset is taken from the ensemble-mean singular spectrum by default;
    ``per_sample_offset`` switches to per-sample offsets.  When projecting,
    the target index is measured on the original channel and shifted down by
    each sample's peripheral rank before the offset lookup.
    """
    mats = [np.asarray(S) for S in superoperator_ensemble]
    if not mats:
        raise ValueError("ensemble is empty")
    order = mats[0].shape[0]
    if any(M.shape != (order, order) for M in mats):
        raise ValueError("superoperators must share one order")
    if not 1 <= i <= order:
        raise ValueError(f"target index {i} out of range for order {order}")

    true_sigma_i = np.array([singular_values(M)[i - 1] for M in mats])

    if peripheral_projection:
        from .ensembles import peripheral_projector
        projected = []
        ranks = []
        for M in mats:
            proj = peripheral_projector(M, tol=cluster_tol)
            projected.append(proj.nilpotent_part)
            ranks.append(proj.peripheral_rank)
        work = projected
    else:
        ranks = [0] * len(mats)
        work = mats

    spectra = [singular_values(M) for M in work]
    mean_spectrum = np.mean(spectra, axis=0)

    strategy = inputs.submatrix_strategy or "deterministic"
    plus_parts = []
    minus_parts = []
    tops = []
    deletions_used = 0
    for M, spec, rank in zip(work, spectra, ranks):
        # a degenerate peripheral block can swallow the target index; fall
        # back to bounding the top of the projected remainder
        eff = max(1, i - rank)
        lookup = spec if per_sample_offset else mean_spectrum
        l_i = multiplicity_offset(lookup, eff, tol=cluster_tol)
        deletions = l_i + (1 if lower_bound_mode else 0)
        if deletions >= 2 * order:
            raise LinalgError("nothing left to bound after truncation")
        chi = dilate(M).matrix
        chi_S = principal_submatrix(chi, deletions, strategy=strategy, rng=rng)
        plus, minus, top = _split_tops(chi_S)
        plus_parts.append(plus)
        minus_parts.append(minus)
        tops.append(top)
        deletions_used = max(deletions_used, deletions)

    # submatrix orders can differ across samples under per-sample offsets;
    # averaging requires a common order
    orders = {P.shape[0] for P in plus_parts}
    if len(orders) != 1:
        raise LinalgError(
            "samples disagree on truncation order; use the mean-spectrum "
            "offset mode")

    avg_plus = np.mean(plus_parts, axis=0)
    avg_minus = np.mean(minus_parts, axis=0)
    mu = float(eigenvalues_hermitian(avg_plus)[0] +
               eigenvalues_hermitian(avg_minus)[0])

    L = inputs.L if inputs.L > 0 else float(max(tops))
    D_i = 2 * order - deletions_used
    eval_inputs = ChernoffInputs(theta=inputs.theta, L=L,
                                 effective_dimension=D_i, target_index=i,
                                 submatrix_strategy=strategy)
    bound = expectation_bound(mu, eval_inputs)
    fluct = mu * (np.exp(inputs.theta) - 1.0) / inputs.theta
    tail = (tail_bound(mu, L, D_i, tail_epsilon)
            if tail_epsilon is not None and L > 0 else None)
    return ChernoffReport(
        mu=mu,
        expectation_bound=bound,
        fluctuation_term=float(fluct),
        log_term=float(bound - fluct),
        tail_bound_at_epsilon=tail,
        theta=inputs.theta,
        L=L,
        effective_dimension=D_i,
        target_index=i,
        sample_mean_sigma_i=float(np.mean(true_sigma_i)),
        sample_std_sigma_i=float(np.std(true_sigma_i)),
        ensemble_size=len(mats),
        deletions=deletions_used,
        lower_bound_mode=lower_bound_mode,
    )
