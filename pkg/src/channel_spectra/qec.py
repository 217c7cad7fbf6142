"""Stabilizer-code recovery channels and their spectra under noise.

A code is held as commuting Pauli generators plus a syndrome-to-recovery
table derived at build time from anticommutation patterns.  The recovery
channel is the syndrome-projected sum of conjugations; composed with noise
channels it reproduces the closed-form eigen spectrum {1, 0} and the
multiplicity structure of the singular spectrum, and degrades under three
failure modes (extra correctable noise, full-Pauli errors, amplitude
damping) injected per measurement round with probability epsilon'.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import (KrausChannel, Superoperator,
                       amplitude_damping_channel, pauli_mixture_channel,
                       superoperator)
from .chernoff import chernoff_mu
from .linalg import cluster_values, dilate, singular_values
from .pauli import PauliString, pauli_group
from .results import ExperimentResult


class CodeError(ValueError):
    """Raised for inconsistent stabilizer-code specifications."""


@dataclass(frozen=True)
class StabilizerCode:
    """An [n, k] code: generators plus syndrome -> recovery lookup."""

    n: int
    k: int
    generators: tuple[PauliString, ...]
    recovery_table: dict[tuple[int, ...], PauliString]

    @property
    def num_generators(self) -> int:
        return len(self.generators)

    @property
    def correctable(self) -> tuple[PauliString, ...]:
        return tuple(self.recovery_table.values())


def syndrome_of(P: PauliString, generators) -> tuple[int, ...]:
    """Anticommutation pattern of an error against the generators."""
    return tuple(0 if P.commutes(S) else 1 for S in generators)


def _build(generators: list[PauliString],
           correctable: list[PauliString]) -> StabilizerCode:
    n = generators[0].n
    for a in generators:
        for b in generators:
            if not a.commutes(b):
                raise CodeError(
                    f"generators {a.label} and {b.label} do not commute")
    k = n - len(generators)
    table: dict[tuple[int, ...], PauliString] = {}
    for P in correctable:
        syn = syndrome_of(P, generators)
        if syn in table:
            raise CodeError(
                f"syndrome collision: {P.label} and {table[syn].label}")
        table[syn] = P
    if len(table) != 2 ** (n - k):
        raise CodeError(f"recovery table has {len(table)} entries, "
                        f"expected {2 ** (n - k)}")
    identity_syn = (0,) * (n - k)
    if table[identity_syn].weight != 0:
        raise CodeError("the trivial syndrome must map to the identity")
    return StabilizerCode(n=n, k=k, generators=tuple(generators),
                          recovery_table=table)


def build_code(name_or_spec) -> StabilizerCode:
    """A built-in code by name, or a custom one from a spec dict.

    Built-ins: ``three_qubit_bitflip`` and ``five_qubit``.  A spec dict has
    ``generators`` and ``correctable`` lists of Pauli labels; the syndrome
    table is derived from anticommutation patterns.
    """
    if isinstance(name_or_spec, dict):
        gens = [PauliString.from_label(s) for s in name_or_spec["generators"]]
        corr = [PauliString.from_label(s) for s in name_or_spec["correctable"]]
        return _build(gens, corr)
    if name_or_spec == "three_qubit_bitflip":
        gens = [PauliString.from_label(s) for s in ("IZZ", "ZZI")]
        corr = [PauliString.from_label(s)
                for s in ("III", "XII", "IXI", "IIX")]
        return _build(gens, corr)
    if name_or_spec == "five_qubit":
        base = "XZZXI"
        gens = [PauliString.from_label(base[-i:] + base[:-i]) for i in range(4)]
        corr = [PauliString.from_label("IIIII")]
        for q in range(5):
            for p in "XYZ":
                label = "I" * q + p + "I" * (4 - q)
                corr.append(PauliString.from_label(label))
        return _build(gens, corr)
    raise CodeError(f"unknown code {name_or_spec!r}")


@dataclass(frozen=True)
class SyndromeProjector:
    """Projector onto one syndrome subspace."""

    matrix: np.ndarray
    syndrome: tuple[int, ...]


def syndrome_projector(code: StabilizerCode, syndrome) -> SyndromeProjector:
    """``prod_i (I + (-1)^{nu_i} S_i) / 2`` as a dense matrix."""
    syndrome = tuple(int(b) for b in syndrome)
    if len(syndrome) != code.num_generators:
        raise CodeError(f"syndrome length {len(syndrome)} != "
                        f"{code.num_generators}")
    d = 2 ** code.n
    P = np.eye(d, dtype=complex)
    for bit, S in zip(syndrome, code.generators):
        P = P @ (0.5 * (np.eye(d) + (-1) ** bit * S.matrix()))
    return SyndromeProjector(matrix=P, syndrome=syndrome)


def recovery_kraus(code: StabilizerCode) -> KrausChannel:
    """Kraus form ``{P_m Pi_m}`` of the recovery channel."""
    ops = []
    for syn, P in code.recovery_table.items():
        Pi = syndrome_projector(code, syn).matrix
        ops.append(P.matrix() @ Pi)
    return KrausChannel.from_ops(ops)


def recovery_superoperator(code: StabilizerCode) -> Superoperator:
    """Superoperator of one full round of syndrome measurement and recovery."""
    return superoperator(recovery_kraus(code))


@dataclass(frozen=True)
class SpectrumPrediction:
    """Closed-form spectra of the noise-free recovery channel."""

    eigen: dict[float, int]
    singular_theorem: dict[float, int]
    singular_table: dict[float, int]


def perfect_spectrum_prediction(code: StabilizerCode) -> SpectrumPrediction:
    """Predicted spectra in both published closed forms.

    The eigen spectrum is {1, 0} with multiplicities ``4^k`` and
    ``4^n - 4^k``.  For singular values two variants are emitted: the
    theorem's ``2^{(n-k)/2}`` and the tabulated ``2^{n-k}``; the numerics
    adjudicate between them (they agree for n - k = 0 only).
    """
    n, k = code.n, code.k
    ones = 4 ** k
    zeros = 4 ** n - 4 ** k
    return SpectrumPrediction(
        eigen={1.0: ones, 0.0: zeros},
        singular_theorem={float(2 ** ((n - k) / 2)): ones, 0.0: zeros},
        singular_table={float(2 ** (n - k)): ones, 0.0: zeros},
    )


# ---------------------------------------------------------------------------
# noise channels used by the tables and failure-mode experiments

def well_behaved_noise(code: StabilizerCode) -> KrausChannel:
    """Uniform mixture over the identity and the correctable errors.

    This is the noise model whose composition with the recovery channel
    reproduces the published multiplicity tables (a mixture of correctable
    errors only shifts the unit-cluster value away from 1).
    """
    strings = list(code.correctable)
    probs = np.full(len(strings), 1.0 / len(strings))
    return pauli_mixture_channel(strings, probs)


def full_pauli_noise(n: int) -> KrausChannel:
    """Uniform mixture over the entire n-qubit Pauli group."""
    group = pauli_group(n)
    probs = np.full(len(group), 1.0 / len(group))
    return pauli_mixture_channel(group, probs)


FAILURE_MODES = ("extra_bitflip", "full_pauli", "amplitude_damping")


def _failure_superoperator(code: StabilizerCode, failure: str,
                           damping_strength: float) -> np.ndarray:
    if failure == "extra_bitflip":
        return superoperator(well_behaved_noise(code)).matrix
    if failure == "full_pauli":
        return superoperator(full_pauli_noise(code.n)).matrix
    if failure == "amplitude_damping":
        return superoperator(
            amplitude_damping_channel(code.n, damping_strength)).matrix
    raise CodeError(f"unknown failure mode {failure!r}; "
                    f"expected one of {FAILURE_MODES}")


def noisy_round(code: StabilizerCode, failure: str, epsilon_prime: float,
                rng: np.random.Generator,
                noise: KrausChannel | None = None,
                damping_strength: float = 1.0,
                recovery: np.ndarray | None = None,
                failure_super: np.ndarray | None = None) -> Superoperator:
    """One round: well-behaved noise, maybe a failure event, then recovery."""
    if not 0.0 <= epsilon_prime <= 1.0:
        raise CodeError("epsilon_prime must lie in [0, 1]")
    N = superoperator(noise or well_behaved_noise(code)).matrix
    R = recovery if recovery is not None else recovery_superoperator(code).matrix
    S = N
    if epsilon_prime > 0 and rng.random() < epsilon_prime:
        F = (failure_super if failure_super is not None
             else _failure_superoperator(code, failure, damping_strength))
        S = F @ S
    return Superoperator(matrix=R @ S, system_dimension=2 ** code.n)


def _bin_multiplicity(values, target: float, bin_tol: float = 0.05,
                      cluster_tol: float = 1e-6) -> int:
    """Total count of clustered values whose center sits near the target."""
    return sum(count for center, count in cluster_values(values, cluster_tol)
               if abs(center - target) <= bin_tol)


QEC_COLUMNS = ["eps_prime", "sigma_radius_mean", "sigma_radius_std",
               "lambda_radius_mean", "mu", "mult_sigma_one",
               "mult_sigma_g", "mult_lambda_one"]


def qec_experiment(code: StabilizerCode, failure: str, rounds: int,
                   eps_grid, ensemble_size: int, seed: int,
                   damping_strength: float = 1.0,
                   per_trial_failure: bool = False,
                   bin_tol: float = 0.05) -> ExperimentResult:
    """Multi-round failure-mode sweep for one code.

    For each epsilon' and trial, ``rounds`` independently drawn noisy rounds
    are composed; reported are spectral radii, the Chernoff fluctuation over
    the trial dilations, and mean multiplicities of the clusters near
    ``sigma = 1``, ``sigma = 2^{(n-k)/2}`` and ``|lambda| = 1``.

    Failure events are Bernoulli-resampled per round; ``per_trial_failure``
    draws one event per trial and applies it to every round.
    """
    if rounds < 1:
        raise CodeError("rounds must be >= 1")
    R = recovery_superoperator(code).matrix
    N = superoperator(well_behaved_noise(code)).matrix
    F = _failure_superoperator(code, failure, damping_strength)
    g_value = float(2 ** ((code.n - code.k) / 2))
    d = 2 ** code.n
    root = np.random.default_rng(seed)
    result = ExperimentResult(
        kind="qec", columns=QEC_COLUMNS,
        metadata={"code": [S.label for S in code.generators],
                  "failure": failure, "rounds": rounds,
                  "ensemble_size": ensemble_size, "seed": seed,
                  "damping_strength": damping_strength})
    for eps in eps_grid:
        rng = np.random.default_rng(root.integers(0, 2 ** 63))
        radii, lam_radii, m1, mg, ml = [], [], [], [], []
        dilations = []
        for _ in range(ensemble_size):
            total = np.eye(d * d, dtype=complex)
            trial_fails = rng.random() < eps if per_trial_failure else None
            for _ in range(rounds):
                fails = (trial_fails if per_trial_failure
                         else rng.random() < eps)
                S = R @ (F @ N if fails else N)
                total = S @ total
            svals = singular_values(total)
            evals_mod = np.abs(np.linalg.eigvals(total))
            radii.append(svals[0])
            lam_radii.append(evals_mod.max())
            m1.append(_bin_multiplicity(svals, 1.0, bin_tol))
            mg.append(_bin_multiplicity(svals, g_value, bin_tol))
            ml.append(_bin_multiplicity(evals_mod, 1.0, bin_tol))
            dilations.append(dilate(total).matrix)
        result.add_row(eps_prime=float(eps),
                       sigma_radius_mean=float(np.mean(radii)),
                       sigma_radius_std=float(np.std(radii)),
                       lambda_radius_mean=float(np.mean(lam_radii)),
                       mu=chernoff_mu(dilations),
                       mult_sigma_one=float(np.mean(m1)),
                       mult_sigma_g=float(np.mean(mg)),
                       mult_lambda_one=float(np.mean(ml)))
    return result


# ---------------------------------------------------------------------------
# published-table reproduction

TABLE_NOISE_MODELS = ("none", "one_qubit_paulis", "full_pauli", "amp_damp")


def table_noise(code: StabilizerCode, noise: str,
                strength: float = 1.0) -> KrausChannel | None:
    if noise == "none":
        return None
    if noise == "one_qubit_paulis":
        return well_behaved_noise(code)
    if noise == "full_pauli":
        return full_pauli_noise(code.n)
    if noise == "amp_damp":
        return amplitude_damping_channel(code.n, strength)
    raise CodeError(f"unknown table noise {noise!r}; "
                    f"expected one of {TABLE_NOISE_MODELS}")


def singular_multiplicity_table(code: StabilizerCode, noise: str,
                                strength: float = 1.0, no_code: bool = False,
                                cluster_tol: float = 1e-3) -> list[tuple[float, int]]:
    """Clustered singular values of the noisy channel, table-style.

    The channel is recovery composed after noise; with ``no_code`` the bare
    noise channel alone is analyzed (the published tables' "No code"
    column).  Returns ``(value, count)`` ascending in value.
    """
    ch = table_noise(code, noise, strength)
    if no_code:
        if ch is None:
            raise CodeError("the code-free case needs a noise model")
        M = superoperator(ch).matrix
    else:
        R = recovery_superoperator(code).matrix
        M = R if ch is None else R @ superoperator(ch).matrix
    clusters = cluster_values(singular_values(M), cluster_tol)
    return sorted((float(v), int(c)) for v, c in clusters)
