import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cwlab.analysis import (
    PAIR_GAP_TOL,
    collapse_degenerate_pairs,
    gaussian_compare,
    harmonic_fit,
    localization_report,
    spectrum_compare,
    splitting_curve,
    width_half_height,
)
from cwlab.eigensolve import Spectrum, eig_lowest
from cwlab.errors import AmbiguityError, DimensionError, ParameterError
from cwlab.params import FleaParams, ModelParams
from cwlab.tridiag import apply_flea, build_tridiag_cw, scale


def ground_state(N: int, B: float, flea: FleaParams | None = None,
                 policy: str = "raw") -> np.ndarray:
    m = build_tridiag_cw(ModelParams(N=N, B=B))
    if flea is not None:
        m = apply_flea(m, flea, N)
    return eig_lowest(scale(m, 1.0 / N), 1, policy=policy).eigenvectors[:, 0]


class TestSplittingCurve:
    def test_decreases_then_floors(self):
        curve = splitting_curve(0.5, range(10, 80, 10))
        gaps = curve.gap
        pre = gaps[gaps > 1e-12]
        assert np.all(np.diff(pre) < 0)
        assert gaps[-1] < 1e-12

    def test_zero_field_is_exactly_degenerate(self):
        curve = splitting_curve(0.0, [6, 11])
        assert np.array_equal(curve.gap, [0.0, 0.0])

    def test_single_well_gap_scales_like_one_over_n(self):
        # above the critical field the well is single and harmonic: the gap
        # of J/N decays like 1/N, so the unscaled gap tends to a constant
        curve = splitting_curve(2.0, [40, 80, 160])
        assert np.array_equal(curve.gap, curve.gap_scaled * curve.N)
        assert np.all((curve.gap > 1.0) & (curve.gap < 8.0))
        assert abs(curve.gap[2] - curve.gap[1]) < abs(curve.gap[1] - curve.gap[0])

    def test_workers_do_not_change_values(self):
        a = splitting_curve(0.5, [10, 20, 30], workers=1)
        b = splitting_curve(0.5, [10, 20, 30], workers=3)
        assert np.array_equal(a.gap, b.gap)

    def test_validation(self):
        with pytest.raises(ParameterError):
            splitting_curve(0.5, [])
        with pytest.raises(ParameterError):
            splitting_curve(0.5, [1])


class TestWidthHalfHeight:
    def test_single_sample_peak_is_zero_width(self):
        assert width_half_height([0.0, 1.0, 0.0]) == 0.0

    def test_triangle(self):
        assert width_half_height([0.0, 1.0, 2.0, 1.0, 0.0]) == pytest.approx(2.0)

    def test_gaussian_width(self):
        k = np.arange(2001, dtype=float)
        s = 40.0
        v = np.exp(-((k - 1000.0) ** 2) / (2 * s * s))
        expected = 2.0 * s * math.sqrt(2.0 * math.log(2.0))
        assert width_half_height(v) == pytest.approx(expected, rel=1e-3)

    def test_plateau_spans_everything(self):
        assert width_half_height(np.ones(7)) == 6.0

    def test_sign_insensitive(self):
        v = np.array([0.0, -1.0, -2.0, -1.0, 0.0])
        assert width_half_height(v) == pytest.approx(2.0)

    def test_two_peaks_is_ambiguous(self):
        v = np.array([0.0, 1.0, 0.0, 0.0, 1.0, 0.0])
        with pytest.raises(AmbiguityError) as err:
            width_half_height(v)
        assert len(err.value.peaks) == 2

    def test_zero_vector_rejected(self):
        with pytest.raises(ParameterError):
            width_half_height(np.zeros(5))

    @given(st.integers(5, 60), st.integers(0, 2**31 - 1))
    @settings(max_examples=50)
    def test_width_bounded_by_support(self, n, seed):
        rng = np.random.default_rng(seed)
        v = np.zeros(n)
        center = rng.integers(1, n - 1)
        v[center] = 1.0
        v[center - 1] = rng.uniform(0.0, 0.45)
        v[center + 1] = rng.uniform(0.0, 0.45)
        w = width_half_height(v)
        assert 0.0 <= w <= 2.0


class TestLocalizationReport:
    def test_symmetric_ground_state_is_balanced(self):
        N = 60
        v = ground_state(N, 0.5, policy="symmetrized")
        rep = localization_report(v, N)
        assert rep.left_mass == pytest.approx(0.5, abs=1e-6)
        assert rep.right_mass == pytest.approx(0.5, abs=1e-6)
        assert abs(rep.magnetization) < 1e-6
        assert rep.left_mass + rep.right_mass + rep.midpoint_mass == pytest.approx(
            1.0, abs=1e-12
        )

    def test_flea_localizes_left(self):
        N = 65
        f = FleaParams(b=(N - 9) / N, c=1 / 45, d=0.4)
        rep = localization_report(ground_state(N, 0.5, flea=f), N)
        assert rep.left_mass >= 0.95
        assert rep.magnetization == pytest.approx(-math.sqrt(3) / 2, abs=0.05)
        assert 2 * rep.peak_index < N

    def test_mirrored_flea_mirrors_masses(self):
        N = 65
        f = FleaParams(b=(N - 9) / N, c=1 / 45, d=0.4)
        g = FleaParams(b=9 / N, c=1 / 45, d=0.4)
        a = localization_report(ground_state(N, 0.5, flea=f), N)
        b = localization_report(ground_state(N, 0.5, flea=g), N)
        assert b.right_mass == pytest.approx(a.left_mass, abs=1e-6)
        assert b.magnetization == pytest.approx(-a.magnetization, abs=1e-6)

    @given(st.integers(1, 40), st.integers(0, 2**31 - 1))
    @settings(max_examples=60)
    def test_masses_partition_unit_norm(self, N, seed):
        rng = np.random.default_rng(seed)
        v = rng.normal(size=N + 1)
        v /= np.linalg.norm(v)
        rep = localization_report(v, N)
        total = rep.left_mass + rep.right_mass + rep.midpoint_mass
        assert total == pytest.approx(1.0, abs=1e-12)
        assert -1.0 <= rep.magnetization <= 1.0

    def test_length_checked(self):
        with pytest.raises(DimensionError):
            localization_report(np.ones(5), 10)


class TestCollapsePairs:
    def test_averages_degenerate_pairs(self):
        lam = np.array([1.0, 1.0 + 1e-12, 2.0, 2.0 + 5e-13, 3.0])
        out = collapse_degenerate_pairs(lam)
        assert np.allclose(out, [1.0 + 5e-13, 2.0 + 2.5e-13, 3.0])

    def test_wide_gaps_pass_through(self):
        lam = np.array([0.0, 0.1, 0.2])
        assert np.array_equal(collapse_degenerate_pairs(lam), lam)

    def test_rejects_descending_and_bad_tol(self):
        with pytest.raises(ParameterError):
            collapse_degenerate_pairs([2.0, 1.0])
        with pytest.raises(ParameterError):
            collapse_degenerate_pairs([1.0, 2.0], gap_tol=0.0)

    def test_default_tolerance_separates_spin_pairs(self):
        # at N=250 the physical pairs are degenerate below the tolerance
        # while inter-pair gaps stay orders of magnitude above it
        N = 250
        lam = eig_lowest(
            scale(build_tridiag_cw(ModelParams(N=N, B=0.5)), 1 / N),
            6,
            want_vectors=False,
        ).eigenvalues
        out = collapse_degenerate_pairs(lam)
        assert len(out) == 3
        assert np.all(np.diff(out) > 100 * PAIR_GAP_TOL)


class TestHarmonicFit:
    def test_exact_ladder_recovered(self):
        N = 500
        spacing = math.sqrt(3) / N
        levels = spacing * (np.arange(5) + 0.5) + 1e-4
        fit_spacing, offset, resid = harmonic_fit(levels, N)
        assert fit_spacing == pytest.approx(spacing, rel=1e-12)
        assert offset == pytest.approx(1e-4, abs=1e-12)
        assert np.max(np.abs(resid)) < 1e-12

    def test_needs_two_levels(self):
        with pytest.raises(ParameterError):
            harmonic_fit([1.0], 100)


class TestSpectrumCompare:
    def test_arrays(self):
        diffs, worst = spectrum_compare([0.0, 1.0], [0.0, 1.5], k=2)
        assert np.array_equal(diffs, [0.0, 0.5])
        assert worst == 0.5

    def test_spectrum_objects(self):
        a = Spectrum(eigenvalues=np.array([0.0, 1.0, 2.0]))
        b = Spectrum(eigenvalues=np.array([0.0, 1.0, 2.5]))
        diffs, worst = spectrum_compare(a, b, k=2)
        assert worst == 0.0
        assert len(diffs) == 2

    def test_k_validation(self):
        with pytest.raises(ParameterError):
            spectrum_compare([0.0], [0.0], k=2)


class TestGaussianCompare:
    def test_synthetic_single_gaussian(self):
        N = 200
        k = np.arange(N + 1, dtype=float)
        v = np.exp(-((k - 60.0) ** 2) / (2 * 9.0**2))
        v /= np.linalg.norm(v)
        rep = gaussian_compare(v, N, B=2.0)
        assert rep.converged and rep.n_gaussians == 1
        assert rep.centers[0] == pytest.approx(60.0, abs=0.5)
        assert rep.widths[0] == pytest.approx(9.0, rel=0.05)
        assert rep.residual < 1e-8

    def test_synthetic_double_gaussian(self):
        N = 300
        k = np.arange(N + 1, dtype=float)
        v = np.exp(-((k - 40.0) ** 2) / 50.0) + np.exp(-((k - 260.0) ** 2) / 50.0)
        v /= np.linalg.norm(v)
        rep = gaussian_compare(v, N, B=0.5)
        assert rep.converged and rep.n_gaussians == 2
        assert rep.centers[0] == pytest.approx(40.0, abs=1.0)
        assert rep.centers[1] == pytest.approx(260.0, abs=1.0)

    def test_localized_ground_state_center_near_classical_minimum(self):
        N = 1000
        f = FleaParams(b=(N - 100) / N, c=0.02, d=0.4)
        v = ground_state(N, 0.5, flea=f)
        rep = gaussian_compare(v, N, B=0.5)
        assert rep.converged and rep.n_gaussians == 1
        x_minus = N * (1 - math.sqrt(0.75)) / 2
        assert rep.centers[0] == pytest.approx(x_minus, abs=2.0)

    def test_symmetric_ground_state_has_two_symmetric_centers(self):
        N = 60
        v = ground_state(N, 0.5, policy="symmetrized")
        rep = gaussian_compare(v, N, B=0.5)
        assert rep.converged and rep.n_gaussians == 2
        assert rep.centers[0] + rep.centers[1] == pytest.approx(N, abs=0.5)

    def test_zero_vector_rejected(self):
        with pytest.raises(ParameterError):
            gaussian_compare(np.zeros(11), 10, 0.5)
