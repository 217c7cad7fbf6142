"""Probabilistic error cancellation with imperfect learning and decay.

A twirled noisy gate is a Pauli channel composed with the ideal unitary.
Mitigation inverts the learned Pauli channel by quasi-probability sampling:
Paulis are drawn from the absolute inverse coefficients and the sign and
overall scale ``gamma`` are reattached in post-processing.  Two failure
modes are modeled: perturbing the learned coefficients before inversion
(learning error ``epsilon``) and amplitude damping inserted between
mitigated layers (strength ``alpha``).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .channels import (Superoperator, amplitude_damping_channel,
                       superoperator)
from .chernoff import ChernoffInputs, singular_bound_pipeline
from .linalg import is_normal, spectral_report
from .pauli import PauliString, pauli_group
from .results import ExperimentResult


@dataclass(frozen=True)
class PauliNoiseModel:
    """Probability distribution over the n-qubit Pauli group."""

    coefficients: dict[str, float]
    n: int

    def __post_init__(self):
        total = sum(self.coefficients.values())
        if any(c < 0 for c in self.coefficients.values()):
            raise ValueError("noise coefficients must be nonnegative")
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"noise coefficients sum to {total}, not 1")

    def dense(self, group: list[PauliString] | None = None) -> np.ndarray:
        """Coefficient vector over the full lexicographic Pauli group."""
        group = group if group is not None else pauli_group(self.n)
        return np.array([self.coefficients.get(P.label, 0.0) for P in group])


@dataclass(frozen=True)
class MitigationDistribution:
    """Signed quasi-probability inverse of a Pauli noise model."""

    inverse_coefficients: dict[str, float]
    gamma: float
    n: int


def _fidelities(c: np.ndarray, signs: np.ndarray) -> np.ndarray:
    # f_b = sum_j c_j (-1)^{<b, j>} over the symplectic pairing
    return signs @ c


def _sign_matrix(group: list[PauliString]) -> np.ndarray:
    labels = np.array([[1.0 if a.commutes(b) else -1.0 for b in group]
                       for a in group])
    return labels


def invert_pauli_noise(model: PauliNoiseModel) -> MitigationDistribution:
    """Exact quasi-probability inverse via the Pauli transfer spectrum.

    The Pauli channel is diagonal over the Pauli basis with fidelities
    ``f_b = sum_j c_j (-1)^{<b,j>}``; inverting the fidelities and
    transforming back yields the signed coefficients, and ``gamma`` is their
    absolute sum.
    """
    group = pauli_group(model.n)
    c = model.dense(group)
    signs = _sign_matrix(group)
    f = _fidelities(c, signs)
    if np.any(np.abs(f) <= 1e-12):
        raise ValueError("noise channel is not invertible "
                         "(vanishing Pauli fidelity)")
    c_inv = signs.T @ (1.0 / f) / (4 ** model.n)
    gamma = float(np.sum(np.abs(c_inv)))
    coeffs = {P.label: float(v) for P, v in zip(group, c_inv)}
    return MitigationDistribution(inverse_coefficients=coeffs, gamma=gamma,
                                  n=model.n)


def perturb_noise(model: PauliNoiseModel, epsilon: float,
                  rng: np.random.Generator) -> PauliNoiseModel:
    """Clamp-and-renormalize perturbation by uniform variates of strength epsilon.

    Only the coefficients present in the model (the support the learning
    experiment reports) are perturbed; injecting noise across the whole
    Pauli group collapses the transfer fidelities and makes the sampling
    overhead blow up combinatorially, which swamps the trends the failure
    mode is meant to expose.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    if epsilon == 0:
        return model
    labels = sorted(model.coefficients)
    c = np.array([model.coefficients[lab] for lab in labels])
    u = rng.uniform(-1.0, 1.0, size=c.size)
    perturbed = np.clip(c + epsilon * u, 0.0, None)
    total = perturbed.sum()
    if total <= 0:
        raise ValueError("perturbation clamped the model to zero")
    perturbed /= total
    coeffs = {lab: float(v) for lab, v in zip(labels, perturbed) if v > 0}
    return PauliNoiseModel(coefficients=coeffs, n=model.n)


# ---------------------------------------------------------------------------
# circuits

def _cx(control: int, target: int, n: int) -> np.ndarray:
    d = 2 ** n
    U = np.zeros((d, d), dtype=complex)
    for basis in range(d):
        bits = [(basis >> (n - 1 - q)) & 1 for q in range(n)]
        if bits[control]:
            bits[target] ^= 1
        out = sum(b << (n - 1 - q) for q, b in enumerate(bits))
        U[out, basis] = 1.0
    return U


def circuit_unitary(name: str, n: int) -> np.ndarray:
    """Ideal per-layer gate: 'identity' or a 'cx_ladder' down the register."""
    if name == "identity":
        return np.eye(2 ** n, dtype=complex)
    if name == "cx_ladder":
        U = np.eye(2 ** n, dtype=complex)
        for q in range(n - 1):
            U = _cx(q, q + 1, n) @ U
        return U
    raise ValueError(f"unknown circuit {name!r}")


DEFAULT_NOISE = {"III": 0.9, "XII": 0.05, "ZII": 0.05}


@dataclass(frozen=True)
class PECConfig:
    """Parameters of one mitigation run."""

    circuit: str = "identity"
    n: int = 3
    layers: int = 3
    kappa: int = 320
    epsilon: float = 0.0
    alpha: float = 0.0
    ensemble_size: int = 100
    seed: int = 0
    noise: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_NOISE))
    bernoulli_damping: bool = False

    def __post_init__(self):
        if self.kappa < 1:
            raise ValueError("kappa must be >= 1")
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")

    def noise_model(self) -> PauliNoiseModel:
        return PauliNoiseModel(coefficients=dict(self.noise), n=self.n)


class _Sampler:
    """Precomputed matrices and cumulative tables for fast instance draws."""

    def __init__(self, config: PECConfig, true_noise: PauliNoiseModel,
                 learned: MitigationDistribution):
        self.config = config
        self.group = pauli_group(config.n)
        self.pmats = [P.matrix() for P in self.group]
        self.U = circuit_unitary(config.circuit, config.n)
        self.true_probs = true_noise.dense(self.group)
        inv = np.array([learned.inverse_coefficients.get(P.label, 0.0)
                        for P in self.group])
        self.gamma = learned.gamma
        self.mitigation_probs = np.abs(inv) / self.gamma
        self.signs = np.sign(inv)
        self.damping = (superoperator(
            amplitude_damping_channel(config.n, config.alpha)).matrix
            if config.alpha > 0 else None)

    def layer(self, rng: np.random.Generator) -> np.ndarray:
        j = rng.choice(len(self.group), p=self.true_probs)
        i = rng.choice(len(self.group), p=self.mitigation_probs)
        M = self.pmats[j] @ self.U @ self.pmats[i]
        sign = self.signs[i] if self.signs[i] != 0 else 1.0
        return self.gamma * sign * np.kron(M.conj(), M)


def sample_mitigated_instance(config: PECConfig, true_noise: PauliNoiseModel,
                              learned: MitigationDistribution,
                              rng: np.random.Generator,
                              sampler: _Sampler | None = None) -> Superoperator:
    """One random mitigated-circuit superoperator (all layers composed)."""
    s = sampler or _Sampler(config, true_noise, learned)
    total = None
    for layer_index in range(config.layers):
        S = s.layer(rng)
        if total is None:
            total = S
        else:
            if s.damping is not None:
                apply_damping = (rng.random() < config.alpha
                                 if config.bernoulli_damping else True)
                if apply_damping:
                    total = s.damping @ total
            total = S @ total
    return Superoperator(matrix=total, system_dimension=2 ** config.n)


def mitigated_estimator(config: PECConfig,
                        rng: np.random.Generator) -> Superoperator:
    """Empirical mean of kappa independent mitigated instances.

    The learned model is the true model perturbed with strength epsilon once
    per estimator, mirroring a single imperfect learning experiment reused
    across that estimator's samples.
    """
    true_noise = config.noise_model()
    learned_model = perturb_noise(true_noise, config.epsilon, rng)
    learned = invert_pauli_noise(learned_model)
    sampler = _Sampler(config, true_noise, learned)
    acc = np.zeros((4 ** config.n, 4 ** config.n), dtype=complex)
    for _ in range(config.kappa):
        acc += sample_mitigated_instance(config, true_noise, learned, rng,
                                         sampler=sampler).matrix
    return Superoperator(matrix=acc / config.kappa,
                         system_dimension=2 ** config.n)


def exact_mitigated_expectation(config: PECConfig) -> np.ndarray:
    """Full enumeration of E[instance] for one layer (no sampling).

    Sums over all (j, i) pairs with weights ``c_j * c_inv_i``; equals the
    ideal gate superoperator exactly when the inverse is exact.
    """
    true_noise = config.noise_model()
    learned = invert_pauli_noise(true_noise)
    group = pauli_group(config.n)
    U = circuit_unitary(config.circuit, config.n)
    c = true_noise.dense(group)
    inv = np.array([learned.inverse_coefficients[P.label] for P in group])
    d2 = 4 ** config.n
    acc = np.zeros((d2, d2), dtype=complex)
    for j, Pj in enumerate(group):
        if c[j] == 0:
            continue
        for i, Pi in enumerate(group):
            if inv[i] == 0:
                continue
            M = Pj.matrix() @ U @ Pi.matrix()
            acc += c[j] * inv[i] * np.kron(M.conj(), M)
    return acc


MITIGATION_COLUMNS = ["sweep", "value", "sigma1_mean", "sigma1_std",
                      "lambda1_mean", "lambda1_std", "mu", "bound",
                      "normal_fraction"]


def mitigation_experiment(config: PECConfig, sweep: str,
                          values) -> ExperimentResult:
    """Ensemble statistics of the mitigated estimator across a sweep.

    ``sweep`` is one of ``kappa``, ``epsilon``, ``alpha``; for each value an
    ensemble of estimators is generated, spectral radii are averaged and the
    Chernoff fluctuation and bound are evaluated over the dilations.
    """
    if sweep not in ("kappa", "epsilon", "alpha"):
        raise ValueError(f"unknown sweep parameter {sweep!r}")
    result = ExperimentResult(kind="mitigation", columns=MITIGATION_COLUMNS,
                              metadata={"config": config.__dict__,
                                        "sweep": sweep})
    root = np.random.default_rng(config.seed)
    for value in values:
        cfg = replace(config, **{sweep: type(getattr(config, sweep))(value)})
        rng = np.random.default_rng(root.integers(0, 2 ** 63))
        mats = [mitigated_estimator(cfg, rng).matrix
                for _ in range(cfg.ensemble_size)]
        sigma1 = [spectral_report(M).singular_values[0] for M in mats]
        lambda1 = [np.abs(spectral_report(M).eigenvalues[0]) for M in mats]
        normal = np.mean([is_normal(M, tol=1e-6) for M in mats])
        report = singular_bound_pipeline(mats, i=1, inputs=ChernoffInputs(),
                                         rng=rng)
        result.add_row(sweep=sweep, value=value,
                       sigma1_mean=float(np.mean(sigma1)),
                       sigma1_std=float(np.std(sigma1)),
                       lambda1_mean=float(np.mean(lambda1)),
                       lambda1_std=float(np.std(lambda1)),
                       mu=report.mu, bound=report.expectation_bound,
                       normal_fraction=float(normal))
    return result
