import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from channel_spectra.linalg import (
    LinalgError, cluster_values, dilate, eigenvalues, eigenvalues_hermitian,
    is_normal, is_trace_preserving, is_unital, principal_submatrix,
    singular_values, spectral_report, split_psd)


def random_complex(rng, d):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def random_hermitian(rng, d):
    M = random_complex(rng, d)
    return 0.5 * (M + M.conj().T)


class TestOrdering:

    def test_eigenvalues_descending_modulus(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            vals = eigenvalues(random_complex(rng, 12))
            mods = np.abs(vals)
            assert np.all(np.diff(mods) <= 1e-12)

    def test_tie_break_is_deterministic(self):
        # two eigenvalues of equal modulus: +1 and -1
        M = np.diag([1.0, -1.0, 0.5])
        vals = eigenvalues(M)
        assert vals[0].real > vals[1].real

    def test_hermitian_values_real_descending(self):
        rng = np.random.default_rng(1)
        H = random_hermitian(rng, 16)
        vals = eigenvalues_hermitian(H)
        assert vals.dtype == float
        assert np.all(np.diff(vals) <= 0)
        ref = np.sort(np.linalg.eigvalsh(H))[::-1]
        assert np.allclose(vals, ref)

    def test_singular_values_nonnegative(self):
        rng = np.random.default_rng(2)
        s = singular_values(random_complex(rng, 9))
        assert np.all(s >= 0)
        assert np.all(np.diff(s) <= 0)

    def test_rejects_non_square_eigen(self):
        with pytest.raises(LinalgError):
            eigenvalues(np.zeros((2, 3)))

    def test_rejects_nan(self):
        with pytest.raises(LinalgError):
            singular_values(np.array([[np.nan, 0], [0, 1]]))

    def test_rejects_non_hermitian(self):
        M = np.array([[0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(LinalgError):
            eigenvalues_hermitian(M)


class TestDilation:

    @pytest.mark.parametrize("d", [2, 5, 16, 64])
    def test_spectrum_is_signed_singular_values(self, d):
        rng = np.random.default_rng(d)
        M = random_complex(rng, d)
        chi = dilate(M)
        assert chi.source_order == d
        lam = np.sort(eigenvalues_hermitian(chi.matrix))
        s = singular_values(M)
        expect = np.sort(np.concatenate([s, -s]))
        assert np.allclose(lam, expect, atol=1e-8)

    def test_dilation_is_hermitian(self):
        rng = np.random.default_rng(7)
        chi = dilate(random_complex(rng, 6)).matrix
        assert np.allclose(chi, chi.conj().T)
        # diagonal blocks stay zero
        assert np.allclose(chi[:6, :6], 0)
        assert np.allclose(chi[6:, 6:], 0)


class TestSplitPSD:

    @pytest.mark.parametrize("d", [4, 16, 64])
    def test_reconstruction_and_orthogonality(self, d):
        rng = np.random.default_rng(d + 100)
        for _ in range(10):
            H = random_hermitian(rng, d)
            plus, minus = split_psd(H)
            assert np.allclose(plus - minus, H, atol=1e-10)
            assert np.min(np.linalg.eigvalsh(plus)) >= -1e-10
            assert np.min(np.linalg.eigvalsh(minus)) >= -1e-10
            assert np.linalg.norm(plus @ minus, "fro") <= 1e-8

    def test_psd_input_has_zero_negative_part(self):
        rng = np.random.default_rng(3)
        A = random_complex(rng, 5)
        P = A @ A.conj().T
        _, minus = split_psd(P)
        assert np.linalg.norm(minus, "fro") <= 1e-8


class TestSubmatrix:

    def test_deterministic_removes_leading(self):
        H = np.arange(16, dtype=float).reshape(4, 4)
        S = principal_submatrix(H, 2)
        assert np.array_equal(S, H[2:, 2:])

    def test_random_strategy_replay_stable(self):
        rng = np.random.default_rng(5)
        H = np.arange(64, dtype=float).reshape(8, 8)
        a = principal_submatrix(H, 3, strategy="random",
                                rng=np.random.default_rng(9))
        b = principal_submatrix(H, 3, strategy="random",
                                rng=np.random.default_rng(9))
        assert np.array_equal(a, b)
        assert rng is not None

    def test_random_requires_rng(self):
        with pytest.raises(LinalgError):
            principal_submatrix(np.eye(4), 1, strategy="random")

    def test_delete_count_bounds(self):
        with pytest.raises(LinalgError):
            principal_submatrix(np.eye(3), 3)

    @pytest.mark.parametrize("l", [1, 2, 3])
    def test_interlacing(self, l):
        # deleting l rows/columns shifts ordered eigenvalues by at most l
        rng = np.random.default_rng(40 + l)
        for _ in range(25):
            H = random_hermitian(rng, 10)
            lam = eigenvalues_hermitian(H)
            sub = principal_submatrix(H, l, strategy="random", rng=rng)
            lam_s = eigenvalues_hermitian(sub)
            for k in range(lam_s.size):
                assert lam_s[k] <= lam[k] + 1e-9
                assert lam_s[k] >= lam[k + l] - 1e-9


class TestPredicates:

    def test_normal_detects_hermitian_and_unitary(self):
        rng = np.random.default_rng(11)
        H = random_hermitian(rng, 8)
        assert is_normal(H)
        Q, _ = np.linalg.qr(random_complex(rng, 8))
        assert is_normal(Q)

    def test_normal_rejects_jordan_block(self):
        J = np.array([[0.0, 1.0], [0.0, 0.0]])
        assert not is_normal(J)

    def test_normal_case_moduli_match_singular_values(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            H = random_hermitian(rng, 8)
            if not is_normal(H):
                continue
            mods = np.sort(np.abs(eigenvalues(H)))
            assert np.allclose(mods, np.sort(singular_values(H)), atol=1e-8)

    def test_unital_and_trace_preserving_on_identity_superop(self):
        S = np.eye(16, dtype=complex)
        assert is_unital(S, 4)
        assert is_trace_preserving(S, 4)

    def test_trace_preserving_flags_scaled_map(self):
        S = 0.5 * np.eye(16, dtype=complex)
        assert not is_trace_preserving(S, 4)

    def test_dimension_mismatch(self):
        with pytest.raises(LinalgError):
            is_unital(np.eye(9), 2)


class TestClustering:

    def test_exact_multiplicities(self):
        vals = [1.0, 1.0, 0.7, 0.7, 0.7, 0.1]
        clusters = cluster_values(vals, 1e-6)
        assert [c for _, c in clusters] == [2, 3, 1]
        assert np.allclose([v for v, _ in clusters], [1.0, 0.7, 0.1])

    def test_tolerance_merges(self):
        vals = [1.0, 1.0 + 1e-8, 0.5]
        clusters = cluster_values(vals, 1e-6)
        assert [c for _, c in clusters] == [2, 1]

    def test_empty(self):
        assert cluster_values([]) == []

    @given(st.lists(st.floats(min_value=0, max_value=10,
                              allow_nan=False), max_size=40))
    @settings(max_examples=60, deadline=None)
    def test_counts_partition_input(self, vals):
        clusters = cluster_values(vals, 1e-3)
        assert sum(c for _, c in clusters) == len(vals)
        centers = [v for v, _ in clusters]
        assert centers == sorted(centers, reverse=True)


def test_spectral_report_consistency():
    rng = np.random.default_rng(21)
    M = random_complex(rng, 6)
    rep = spectral_report(M)
    assert rep.eigenvalues.size == 6
    assert np.allclose(rep.singular_values, singular_values(M))
    assert sum(c for _, c in rep.clusters) == 6
    assert np.allclose(rep.eigen_moduli, np.abs(rep.eigenvalues))
