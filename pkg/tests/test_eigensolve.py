import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cwlab.eigensolve import (
    Spectrum,
    cluster_slices,
    eig_full,
    eig_lowest,
    splitting,
    sturm_count,
)
from cwlab.errors import ParameterError, SolverError
from cwlab.params import ModelParams
from cwlab.tridiag import TridiagonalMatrix, build_tridiag_cw, scale


def constant_tridiag(n: int, a: float, b: float) -> TridiagonalMatrix:
    return TridiagonalMatrix(diag=np.full(n, b), off=np.full(n - 1, a))


def random_tridiag(rng: np.random.Generator, n: int) -> TridiagonalMatrix:
    return TridiagonalMatrix(diag=rng.normal(size=n), off=rng.normal(size=n - 1))


class TestEigFull:
    @given(st.integers(2, 40), st.floats(-2, 2), st.floats(0.1, 2))
    @settings(max_examples=40)
    def test_constant_tridiag_closed_form(self, n, b, a):
        # eigenvalues of the constant tridiagonal are b + 2a cos(j pi/(n+1))
        sp = eig_full(constant_tridiag(n, a, b), want_vectors=False)
        j = np.arange(1, n + 1)
        exact = np.sort(b + 2 * a * np.cos(j * np.pi / (n + 1)))
        assert np.max(np.abs(sp.eigenvalues - exact)) < 1e-12 * max(1.0, abs(b) + 2 * a)

    @given(st.integers(2, 60), st.integers(0, 2**31 - 1))
    @settings(max_examples=40)
    def test_matches_dense_eigvalsh(self, n, seed):
        m = random_tridiag(np.random.default_rng(seed), n)
        sp = eig_full(m, want_vectors=False)
        ref = np.linalg.eigvalsh(m.to_dense())
        scale_ = max(1.0, np.max(np.abs(ref)))
        assert np.max(np.abs(sp.eigenvalues - ref)) < 1e-10 * scale_

    def test_vectors_orthonormal_with_small_residuals(self):
        m = build_tridiag_cw(ModelParams(N=80, B=0.5))
        sp = eig_full(m)
        v = sp.eigenvectors
        assert np.max(np.abs(v.T @ v - np.eye(len(sp)))) < 1e-10
        assert sp.residuals.max() < 1e-10 * max(1.0, np.abs(sp.eigenvalues).max())

    def test_no_vectors_requested(self):
        sp = eig_full(constant_tridiag(5, 1.0, 0.0), want_vectors=False)
        assert sp.eigenvectors is None and sp.residuals is None

    def test_size_one(self):
        sp = eig_full(TridiagonalMatrix(diag=np.array([3.0]), off=np.zeros(0)))
        assert sp.eigenvalues[0] == 3.0
        assert sp.eigenvectors.shape == (1, 1)


class TestEigLowest:
    @given(st.integers(2, 40), st.integers(0, 2**31 - 1))
    @settings(max_examples=30)
    def test_prefix_of_full_spectrum(self, n, seed):
        m = random_tridiag(np.random.default_rng(seed), n)
        k = min(4, n)
        low = eig_lowest(m, k, want_vectors=False)
        full = eig_full(m, want_vectors=False)
        assert np.allclose(low.eigenvalues, full.eigenvalues[:k], atol=1e-11)

    def test_k_validation(self):
        m = constant_tridiag(4, 1.0, 0.0)
        with pytest.raises(ParameterError):
            eig_lowest(m, 0)
        with pytest.raises(ParameterError):
            eig_lowest(m, 5)

    def test_policy_validation(self):
        m = constant_tridiag(4, 1.0, 0.0)
        with pytest.raises(ParameterError):
            eig_lowest(m, 2, policy="averaged")
        with pytest.raises(ParameterError):
            eig_full(m, policy="")


class TestSymmetrizedPolicy:
    def test_degenerate_pair_gets_definite_parity(self):
        # at N=120, B=1/2 the lowest pair is degenerate to machine precision;
        # raw LAPACK vectors can be arbitrary rotations inside the cluster,
        # the symmetrized policy must return even/odd combinations
        m = scale(build_tridiag_cw(ModelParams(N=120, B=0.5)), 1 / 120)
        sp = eig_lowest(m, 2, policy="symmetrized")
        v0, v1 = sp.eigenvectors[:, 0], sp.eigenvectors[:, 1]
        assert np.linalg.norm(v0 - v0[::-1]) < 1e-8
        assert np.linalg.norm(v1 + v1[::-1]) < 1e-8
        gram = sp.eigenvectors.T @ sp.eigenvectors
        assert np.max(np.abs(gram - np.eye(2))) < 1e-10

    def test_nondegenerate_levels_unchanged(self):
        m = build_tridiag_cw(ModelParams(N=20, B=2.0))
        raw = eig_lowest(m, 3, policy="raw")
        sym = eig_lowest(m, 3, policy="symmetrized")
        for j in range(3):
            overlap = abs(float(raw.eigenvectors[:, j] @ sym.eigenvectors[:, j]))
            assert overlap == pytest.approx(1.0, abs=1e-10)

    def test_residuals_still_certified(self):
        m = scale(build_tridiag_cw(ModelParams(N=250, B=0.5)), 1 / 250)
        sp = eig_lowest(m, 4, policy="symmetrized")
        assert sp.residuals.max() < 1e-10


class TestSturmCount:
    @given(st.integers(2, 30), st.integers(0, 2**31 - 1))
    @settings(max_examples=40)
    def test_counts_below_midpoints(self, n, seed):
        m = random_tridiag(np.random.default_rng(seed), n)
        lam = eig_full(m, want_vectors=False).eigenvalues
        # probe strictly between consecutive distinct eigenvalues
        for j in range(n - 1):
            if lam[j + 1] - lam[j] > 1e-8:
                mu = 0.5 * (lam[j] + lam[j + 1])
                assert sturm_count(m, mu) == j + 1
        assert sturm_count(m, lam[0] - 1.0) == 0
        assert sturm_count(m, lam[-1] + 1.0) == n


class TestSplitting:
    def test_matches_explicit_difference(self):
        m = build_tridiag_cw(ModelParams(N=30, B=0.5))
        lam = eig_lowest(m, 2, want_vectors=False).eigenvalues
        assert splitting(m) == pytest.approx(float(lam[1] - lam[0]), abs=1e-15)

    def test_needs_two_levels(self):
        with pytest.raises(ParameterError):
            splitting(TridiagonalMatrix(diag=np.array([1.0]), off=np.zeros(0)))


class TestSpectrumContainer:
    def test_rejects_descending(self):
        with pytest.raises(SolverError):
            Spectrum(eigenvalues=np.array([1.0, 0.0]))

    def test_len(self):
        assert len(Spectrum(eigenvalues=np.array([0.0, 1.0, 2.0]))) == 3


def test_cluster_slices_groups_near_degenerate():
    lam = np.array([0.0, 1e-14, 1.0, 1.0 + 5e-14, 2.0])
    slices = cluster_slices(lam, tol=1e-12)
    assert [(-(-s.start), s.stop) for s in slices] == [(0, 2), (2, 4), (4, 5)]
    lone = cluster_slices(np.array([math.pi]), tol=1e-12)
    assert lone == [slice(0, 1)]
