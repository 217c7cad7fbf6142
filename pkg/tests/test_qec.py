import numpy as np
import pytest

from channel_spectra.channels import superoperator, unvec, vec
from channel_spectra.linalg import eigenvalues, is_unital, singular_values
from channel_spectra.pauli import PauliString
from channel_spectra.qec import (
    CodeError, build_code, full_pauli_noise, noisy_round,
    perfect_spectrum_prediction, qec_experiment, recovery_superoperator,
    singular_multiplicity_table, syndrome_of, syndrome_projector,
    well_behaved_noise)


@pytest.fixture(scope="module")
def bitflip():
    return build_code("three_qubit_bitflip")


@pytest.fixture(scope="module")
def five(request):
    return build_code("five_qubit")


def test_bitflip_structure(bitflip):
    assert (bitflip.n, bitflip.k) == (3, 1)
    assert len(bitflip.recovery_table) == 4
    labels = {P.label for P in bitflip.correctable}
    assert labels == {"III", "XII", "IXI", "IIX"}


def test_five_qubit_structure(five):
    assert (five.n, five.k) == (5, 1)
    assert len(five.recovery_table) == 16
    weights = sorted(P.weight for P in five.correctable)
    assert weights == [0] + [1] * 15


def test_custom_code_spec():
    code = build_code({"generators": ["ZZ"], "correctable": ["II", "XI"]})
    assert (code.n, code.k) == (2, 1)


def test_bad_codes_rejected():
    with pytest.raises(CodeError):
        build_code("steane")
    with pytest.raises(CodeError):
        # anticommuting generators
        build_code({"generators": ["XX", "ZI"], "correctable": ["II", "ZI"]})
    with pytest.raises(CodeError):
        # syndrome collision: XII and IXX share (1, 1) for these generators
        build_code({"generators": ["ZZI", "IZZ"],
                    "correctable": ["III", "XII", "XXX", "IIX"]})


def test_syndromes(bitflip):
    gens = bitflip.generators
    assert syndrome_of(PauliString.from_label("III"), gens) == (0, 0)
    assert syndrome_of(PauliString.from_label("XII"), gens) == (0, 1)
    assert syndrome_of(PauliString.from_label("IIX"), gens) == (1, 0)
    assert syndrome_of(PauliString.from_label("IXI"), gens) == (1, 1)


def test_syndrome_projectors_resolve_identity(bitflip):
    total = np.zeros((8, 8), dtype=complex)
    for syn in bitflip.recovery_table:
        P = syndrome_projector(bitflip, syn).matrix
        assert np.allclose(P @ P, P, atol=1e-12)
        total += P
    assert np.allclose(total, np.eye(8))


def test_syndrome_length_guard(bitflip):
    with pytest.raises(CodeError):
        syndrome_projector(bitflip, (0,))


class TestPerfectRecovery:

    def test_eigen_spectrum_closed_form(self, bitflip):
        S = recovery_superoperator(bitflip).matrix
        vals = eigenvalues(S)
        pred = perfect_spectrum_prediction(bitflip).eigen
        ones = np.sum(np.abs(vals - 1.0) < 1e-8)
        zeros = np.sum(np.abs(vals) < 1e-8)
        assert ones == pred[1.0] == 4
        assert zeros == pred[0.0] == 60

    def test_idempotence(self, bitflip, five):
        for code in (bitflip, five):
            S = recovery_superoperator(code).matrix
            assert np.linalg.norm(S @ S - S, "fro") <= 1e-8

    def test_rescaled_frame_channel_unital_idempotent(self, bitflip, five):
        for code in (bitflip, five):
            S = recovery_superoperator(code).matrix
            delta = S.conj().T @ S / 2 ** (code.n - code.k)
            d = 2 ** code.n
            assert is_unital(delta, d, tol=1e-8)
            assert np.linalg.norm(delta @ delta - delta, "fro") <= 1e-8

    def test_basis_orthogonality(self, bitflip):
        # <1,i'| P_m' P_m |1,i> = delta_mm' delta_ii' over correctable pairs
        Pi0 = syndrome_projector(bitflip, (0, 0) ).matrix
        basis = [col for col in np.linalg.svd(Pi0)[0].T[:2]]
        corr = bitflip.correctable
        for m, Pm in enumerate(corr):
            for mp, Pmp in enumerate(corr):
                for i, vi in enumerate(basis):
                    for ip, vip in enumerate(basis):
                        val = np.vdot(Pmp.matrix() @ vip, Pm.matrix() @ vi)
                        expect = 1.0 if (m == mp and i == ip) else 0.0
                        assert np.isclose(val, expect, atol=1e-10)

    def test_single_error_correction(self, bitflip, five):
        rng = np.random.default_rng(0)
        for code in (bitflip, five):
            d = 2 ** code.n
            S = recovery_superoperator(code).matrix
            Pi0 = syndrome_projector(code,
                                     (0,) * code.num_generators).matrix
            A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            rho = A @ A.conj().T
            rho /= np.trace(rho)
            rho_code = Pi0 @ rho @ Pi0
            for P in code.correctable:
                M = P.matrix()
                out = unvec(S @ vec(M @ rho_code @ M.conj().T), d)
                assert np.allclose(out, rho_code, atol=1e-10)

    def test_nonzero_singular_count_under_correctable_noise(self, bitflip):
        S = recovery_superoperator(bitflip).matrix
        N = superoperator(well_behaved_noise(bitflip)).matrix
        s = singular_values(S @ N)
        assert np.sum(s > 1e-6) == 4 ** bitflip.k


TABLE_I = {
    "none": [(0.0, 60), (2.0, 4)],
    "one_qubit_paulis": [(0.0, 60), (1.0, 2), (2.0, 2)],
    "full_pauli": [(0.0, 63), (2.0, 1)],
    "amp_damp": [(0.0, 63), (2.83, 1)],
}


@pytest.mark.parametrize("noise,expect", sorted(TABLE_I.items()))
def test_bitflip_multiplicity_table(bitflip, noise, expect):
    got = singular_multiplicity_table(bitflip, noise)
    assert len(got) == len(expect)
    for (gv, gc), (ev, ec) in zip(got, expect):
        assert gc == ec
        assert abs(gv - ev) < 5e-3


def test_no_code_column_needs_noise(bitflip):
    with pytest.raises(CodeError):
        singular_multiplicity_table(bitflip, "none", no_code=True)


def test_no_code_full_pauli_is_depolarizing(bitflip):
    got = singular_multiplicity_table(bitflip, "full_pauli", no_code=True)
    assert got == [(pytest.approx(0.0, abs=1e-9), 63),
                   (pytest.approx(1.0), 1)]


class TestNoisyRound:

    def test_eps_zero_is_noise_then_recovery(self, bitflip):
        rng = np.random.default_rng(1)
        S = noisy_round(bitflip, "full_pauli", 0.0, rng).matrix
        R = recovery_superoperator(bitflip).matrix
        N = superoperator(well_behaved_noise(bitflip)).matrix
        assert np.allclose(S, R @ N)

    def test_eps_one_always_fails(self, bitflip):
        rng = np.random.default_rng(2)
        S = noisy_round(bitflip, "full_pauli", 1.0, rng).matrix
        R = recovery_superoperator(bitflip).matrix
        N = superoperator(well_behaved_noise(bitflip)).matrix
        F = superoperator(full_pauli_noise(3)).matrix
        assert np.allclose(S, R @ F @ N)

    def test_eps_range(self, bitflip):
        with pytest.raises(CodeError):
            noisy_round(bitflip, "full_pauli", 1.5, np.random.default_rng(3))

    def test_unknown_failure_mode(self, bitflip):
        with pytest.raises(CodeError):
            noisy_round(bitflip, "cosmic_rays", 1.0, np.random.default_rng(4))


class TestExperiment:

    def test_deterministic(self, bitflip):
        a = qec_experiment(bitflip, "full_pauli", rounds=3,
                           eps_grid=[0.0, 0.5], ensemble_size=5, seed=5)
        b = qec_experiment(bitflip, "full_pauli", rounds=3,
                           eps_grid=[0.0, 0.5], ensemble_size=5, seed=5)
        assert a.rows == b.rows

    def test_perfect_limit_multiplicities(self, bitflip):
        res = qec_experiment(bitflip, "full_pauli", rounds=5,
                             eps_grid=[0.0], ensemble_size=3, seed=6)
        row = res.rows[0]
        assert row["mult_lambda_one"] == 4.0
        assert row["mult_sigma_one"] == 2.0
        assert row["mult_sigma_g"] == 2.0

    def test_mu_dominates_singular_radius(self, bitflip):
        res = qec_experiment(bitflip, "amplitude_damping", rounds=5,
                             eps_grid=[0.0, 1.0], ensemble_size=5, seed=7)
        for row in res.rows:
            assert row["mu"] >= row["sigma_radius_mean"]

    def test_rounds_validation(self, bitflip):
        with pytest.raises(CodeError):
            qec_experiment(bitflip, "full_pauli", rounds=0, eps_grid=[0.0],
                           ensemble_size=1, seed=0)
