import numpy as np
import pytest

from channel_spectra.channels import pauli_mixture_channel, superoperator
from channel_spectra.ensembles import (
    DegenerateSpectrumError, gap_experiment, peripheral_projector,
    sample_channel, spectral_gap)
from channel_spectra.linalg import SpectralReport, spectral_report
from channel_spectra.pauli import PauliString


def pauli_channel_superop(labels, probs):
    strings = [PauliString.from_label(s) for s in labels]
    return superoperator(pauli_mixture_channel(strings, probs)).matrix


def test_identity_channel_projects_to_everything():
    S = np.eye(16, dtype=complex)
    proj = peripheral_projector(S)
    assert proj.peripheral_rank == 16
    assert np.allclose(proj.projector, np.eye(16))
    assert np.linalg.norm(proj.nilpotent_part) <= 1e-10


def test_diagonal_pauli_channel_rank_and_radius():
    # one fidelity pinned at 1 (identity direction), the rest inside (0, 1)
    S = pauli_channel_superop(["I", "X", "Z"], [0.6, 0.25, 0.15])
    # transfer fidelities f_b = sum_j c_j (-1)^{<b,j>}: {1, 0.7, 0.5, 0.2}
    proj = peripheral_projector(S)
    assert proj.peripheral_rank == 1
    radius = np.max(np.abs(np.linalg.eigvals(proj.nilpotent_part)))
    assert np.isclose(radius, 0.7, atol=1e-10)


def test_projector_idempotent_and_commutes():
    rng = np.random.default_rng(0)
    for family in ("unitary", "kraus", "pauli"):
        S = superoperator(sample_channel(family, 8, 40, rng)).matrix
        proj = peripheral_projector(S)
        T = proj.projector
        assert np.linalg.norm(T @ T - T, "fro") <= 1e-6
        assert np.linalg.norm(S @ T - T @ S, "fro") <= 1e-6


def test_single_peripheral_value_at_large_kappa():
    rng = np.random.default_rng(1)
    for family in ("unitary", "kraus", "pauli"):
        for _ in range(5):
            S = superoperator(sample_channel(family, 8, 80, rng)).matrix
            proj = peripheral_projector(S, tol=1e-6)
            assert proj.peripheral_rank == 1


def test_spectral_gap_examples():
    rep = SpectralReport(
        eigenvalues=np.array([1.0, 0.7, 0.7j, 0.1]),
        singular_values=np.array([1.0, 1.0, 0.4, 0.1]))
    g_lam, g_sig = spectral_gap(rep)
    assert np.isclose(g_lam, 0.3)
    assert np.isclose(g_sig, 0.6)


def test_spectral_gap_degenerate_signalled():
    rep = SpectralReport(eigenvalues=np.ones(4),
                         singular_values=np.ones(4))
    with pytest.raises(DegenerateSpectrumError):
        spectral_gap(rep)


def test_unknown_family():
    with pytest.raises(ValueError):
        sample_channel("cats", 4, 3, np.random.default_rng(0))


def test_pauli_family_requires_power_of_two():
    with pytest.raises(ValueError):
        sample_channel("pauli", 6, 3, np.random.default_rng(0))


class TestGapExperiment:

    def test_deterministic_under_seed(self):
        a = gap_experiment("kraus", [10, 40], d=4, trials=5, seed=21)
        b = gap_experiment("kraus", [10, 40], d=4, trials=5, seed=21)
        assert a == b

    def test_report_fields_coherent(self):
        reports = gap_experiment("pauli", [20], d=4, trials=10, seed=22)
        r = reports[0]
        assert r.family == "pauli" and r.kappa == 20 and r.trials == 10
        assert 0 <= r.gamma_lambda_mean <= 1 + 1e-8
        assert r.sigma2_mean >= r.lambda2_mean - 1e-8
        assert r.bound_upper >= r.bound_lower

    def test_pauli_gaps_coincide(self):
        reports = gap_experiment("pauli", [20, 80], d=8, trials=10, seed=23)
        for r in reports:
            assert abs(r.gamma_lambda_mean - r.gamma_sigma_mean) <= 1e-8

    def test_sandwich_small_grid(self):
        for family in ("unitary", "kraus"):
            for r in gap_experiment(family, [20, 80], d=8, trials=15, seed=24):
                assert r.bound_upper >= r.sigma2_mean >= r.bound_lower

    def test_trials_validation(self):
        with pytest.raises(ValueError):
            gap_experiment("kraus", [10], d=4, trials=0, seed=0)


def test_spectral_report_clusters_feed_gap():
    rng = np.random.default_rng(2)
    S = superoperator(sample_channel("unitary", 4, 30, rng)).matrix
    rep = spectral_report(S)
    g_lam, g_sig = spectral_gap(rep)
    assert 0 < g_lam <= 1 + 1e-8
    assert 0 < g_sig <= 1 + 1e-8
