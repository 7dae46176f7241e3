import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cwlab.eigensolve import eig_full, eig_lowest
from cwlab.errors import CapacityError, DimensionError
from cwlab.params import FleaParams, ModelParams
from cwlab.spin import (
    DenseHamiltonian,
    build_dense_cw,
    build_subspace_map,
    check_irreducible,
    check_nonnegative,
    dense_eig,
    lift_matrix,
    lowest_pairs_sparse,
    perron_frobenius_verify,
    project_symmetric,
    reduction_residual,
    restrict_spectrum,
    symmetrize_lift,
    tridiag_to_orbit_order,
)
from cwlab.tridiag import apply_flea, build_tridiag_cw


class TestSubspaceMap:
    @given(st.integers(1, 12))
    def test_orbit_sizes_are_binomials(self, N):
        smap = build_subspace_map(N)
        sizes = smap.orbit_sizes()
        assert sizes.sum() == 2**N
        for k in range(N + 1):
            assert sizes[k] == math.comb(N, k)

    def test_orbit_of_index_is_popcount(self):
        smap = build_subspace_map(4)
        assert list(smap.orbit_of_index) == [bin(i).count("1") for i in range(16)]


class TestLiftProject:
    def test_spec_example_all_up(self):
        smap = build_subspace_map(2)
        v = symmetrize_lift(np.array([1.0, 0.0, 0.0]), smap)
        assert np.allclose(v, [1.0, 0.0, 0.0, 0.0])

    def test_spec_example_single_flip(self):
        smap = build_subspace_map(2)
        v = symmetrize_lift(np.array([0.0, 1.0, 0.0]), smap)
        r = 1.0 / math.sqrt(2.0)
        assert np.allclose(v, [0.0, r, r, 0.0])

    @given(st.integers(1, 12), st.integers(0, 2**31 - 1))
    def test_isometry_and_roundtrip(self, N, seed):
        rng = np.random.default_rng(seed)
        smap = build_subspace_map(N)
        c = rng.normal(size=N + 1)
        v = symmetrize_lift(c, smap)
        assert np.linalg.norm(v) == pytest.approx(np.linalg.norm(c), rel=1e-13)
        assert np.allclose(project_symmetric(v, smap), c, atol=1e-13)

    @given(st.integers(1, 10), st.integers(0, 2**31 - 1))
    def test_lift_project_is_idempotent(self, N, seed):
        rng = np.random.default_rng(seed)
        smap = build_subspace_map(N)
        v = rng.normal(size=2**N)
        p1 = symmetrize_lift(project_symmetric(v, smap), smap)
        p2 = symmetrize_lift(project_symmetric(p1, smap), smap)
        assert np.allclose(p1, p2, atol=1e-12)

    def test_lift_matrix_columns(self):
        smap = build_subspace_map(3)
        u = lift_matrix(smap)
        for k in range(4):
            e = np.zeros(4)
            e[k] = 1.0
            assert np.allclose(u[:, k], symmetrize_lift(e, smap))
        assert np.allclose(u.T @ u, np.eye(4), atol=1e-14)

    def test_dimension_errors(self):
        smap = build_subspace_map(3)
        with pytest.raises(DimensionError):
            symmetrize_lift(np.zeros(3), smap)
        with pytest.raises(DimensionError):
            project_symmetric(np.zeros(7), smap)


def test_tridiag_to_orbit_order_is_reversal():
    v = np.arange(5.0)
    w = tridiag_to_orbit_order(v)
    assert np.array_equal(w, v[::-1])
    assert np.array_equal(tridiag_to_orbit_order(w), v)


class TestDenseBuild:
    def test_diagonal_and_offdiagonal(self):
        N, B = 3, 0.7
        h = build_dense_cw(ModelParams(N=N, B=B)).entries
        for i in range(8):
            n_plus = N - bin(i).count("1")
            assert h[i, i] == pytest.approx(-((2 * n_plus - N) ** 2) / (2 * N))
            for j in range(8):
                if i != j:
                    expected = -B if bin(i ^ j).count("1") == 1 else 0.0
                    assert h[i, j] == expected

    def test_capacity_guard(self):
        with pytest.raises(CapacityError):
            build_dense_cw(ModelParams(N=15, B=0.5))

    def test_flea_enters_on_up_spin_fraction(self):
        N = 6
        f = FleaParams(b=0.5, c=0.25, d=1.0)
        h0 = build_dense_cw(ModelParams(N=N, B=0.5)).entries
        h1 = build_dense_cw(ModelParams(N=N, B=0.5, flea=f)).entries
        from cwlab.tridiag import flea_bump

        for i in range(2**N):
            n_plus = N - bin(i).count("1")
            assert h1[i, i] - h0[i, i] == pytest.approx(flea_bump(n_plus / N, f))


class TestReduction:
    @given(st.integers(1, 8), st.floats(0.0, 2.0), st.integers(0, 2**31 - 1))
    @settings(max_examples=30)
    def test_intertwines_with_lift(self, N, B, seed):
        # H (lift c) == lift (A c) with A the tridiagonal matrix carried to
        # orbit order; this is the reduction statement itself
        rng = np.random.default_rng(seed)
        params = ModelParams(N=N, B=B)
        h = build_dense_cw(params)
        tri = build_tridiag_cw(params)
        smap = build_subspace_map(N)
        c = rng.normal(size=N + 1)
        lhs = h.entries @ symmetrize_lift(c, smap)
        a = tri.to_dense()[::-1, ::-1]
        rhs = symmetrize_lift(a @ c, smap)
        assert np.allclose(lhs, rhs, atol=1e-11)

    def test_intertwines_with_flea(self):
        N = 8
        f = FleaParams(b=0.75, c=0.1, d=0.6)
        params = ModelParams(N=N, B=0.5, flea=f)
        h = build_dense_cw(params)
        tri = apply_flea(build_tridiag_cw(params), f, N)
        assert reduction_residual(h, tri) < 1e-12

    @given(st.integers(1, 9), st.sampled_from([0.3, 0.5, 0.9]))
    @settings(max_examples=20)
    def test_reduction_residual_tiny(self, N, B):
        params = ModelParams(N=N, B=B)
        h = build_dense_cw(params)
        tri = build_tridiag_cw(params)
        assert reduction_residual(h, tri) < 1e-12

    def test_restrict_spectrum_matches_tridiagonal(self):
        params = ModelParams(N=7, B=0.5)
        h = build_dense_cw(params)
        sym = restrict_spectrum(h)
        ev = eig_full(build_tridiag_cw(params), want_vectors=False).eigenvalues
        assert sym.shape == (8,)
        assert np.max(np.abs(sym - ev)) < 1e-12

    def test_restrict_spectrum_with_flea(self):
        f = FleaParams(b=56 / 65, c=1 / 45, d=0.4)
        params = ModelParams(N=8, B=0.5, flea=f)
        h = build_dense_cw(params)
        sym = restrict_spectrum(h)
        tri = apply_flea(build_tridiag_cw(params), f, 8)
        ev = eig_full(tri, want_vectors=False).eigenvalues
        assert np.max(np.abs(sym - ev)) < 1e-12


class TestPositivityChecks:
    def test_nonnegative_unperturbed(self):
        ok, where = check_nonnegative(build_dense_cw(ModelParams(N=6, B=0.5)))
        assert ok and where is None

    def test_nonnegative_violated_by_tall_flea(self):
        # a bump taller than the diagonal well depth makes -h negative on
        # the diagonal
        f = FleaParams(b=0.5, c=0.2, d=5.0)
        ok, where = check_nonnegative(build_dense_cw(ModelParams(N=8, B=0.5, flea=f)))
        assert not ok
        i, j = where
        assert i == j

    def test_irreducible_needs_field(self):
        assert check_irreducible(build_dense_cw(ModelParams(N=5, B=0.5)))
        assert not check_irreducible(build_dense_cw(ModelParams(N=5, B=0.0)))

    def test_one_by_one_is_irreducible(self):
        m = DenseHamiltonian(
            dim=1, entries=np.array([[-1.0]]), params=ModelParams(N=1, B=0.0)
        )
        assert check_irreducible(m)


class TestPerronFrobenius:
    def test_report_passes_for_positive_field(self):
        params = ModelParams(N=6, B=0.5)
        h = build_dense_cw(params)
        report = perron_frobenius_verify(h, dense_eig(h))
        assert report.nonnegative and report.irreducible
        assert report.simple and report.relative_gap > 1e-9
        assert report.strictly_positive and report.min_component > 0
        assert report.in_symmetric_subspace and report.subspace_defect < 1e-10
        assert report.passed

    def test_report_fails_at_zero_field(self):
        h = build_dense_cw(ModelParams(N=6, B=0.0))
        report = perron_frobenius_verify(h, dense_eig(h))
        assert not report.irreducible
        assert "irreducible" in report.precondition_failures
        assert not report.passed

    def test_incomplete_eigensolution_is_recorded(self):
        h = build_dense_cw(ModelParams(N=4, B=0.5))
        sp = eig_lowest(build_tridiag_cw(ModelParams(N=4, B=0.5)), 2)
        # wrong-sized vectors cannot be checked; the report says so rather
        # than raising
        report = perron_frobenius_verify(h, dense_eig(h).__class__(
            eigenvalues=sp.eigenvalues[:1], eigenvectors=None, residuals=None
        ))
        assert "eigensolution-incomplete" in report.precondition_failures
        assert not report.passed


class TestDenseEig:
    def test_residuals_certified(self):
        h = build_dense_cw(ModelParams(N=7, B=0.5))
        sp = dense_eig(h)
        assert np.all(np.diff(sp.eigenvalues) >= 0)
        assert sp.residuals is not None and sp.residuals.max() < 1e-10 * 10

    def test_sparse_agrees_with_dense(self):
        h = build_dense_cw(ModelParams(N=8, B=0.5))
        dsp = dense_eig(h)
        ssp = lowest_pairs_sparse(h, k=2)
        assert np.allclose(dsp.eigenvalues[:2], ssp.eigenvalues, atol=1e-10)
        for j in range(2):
            overlap = abs(float(dsp.eigenvectors[:, j] @ ssp.eigenvectors[:, j]))
            assert overlap == pytest.approx(1.0, abs=1e-8)
