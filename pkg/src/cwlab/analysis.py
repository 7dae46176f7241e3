"""Measurements that turn eigensolutions into the model's quantitative
claims: splitting curves, peak widths, localization masses and
magnetization, harmonic-ladder fits, spectrum-difference tables, and
Gaussian shape fits of ground states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .errors import AmbiguityError, DimensionError, ParameterError
from .eigensolve import eig_lowest
from .params import ModelParams
from .tridiag import build_tridiag_cw, scale

__all__ = [
    "SplittingCurve",
    "splitting_curve",
    "width_half_height",
    "LocalizationReport",
    "localization_report",
    "collapse_degenerate_pairs",
    "harmonic_fit",
    "spectrum_compare",
    "GaussianFitReport",
    "gaussian_compare",
]

# Pairs in the deep-tunneling regime are degenerate to well below 1e-12
# while consecutive pairs stay ~ sqrt(3)/N apart (>= 3e-4 for N <= 5000),
# so 1e-9 sits far above the numerical floor and far below the ladder step.
PAIR_GAP_TOL = 1e-9


@dataclass(frozen=True)
class SplittingCurve:
    """Gap between the two lowest levels per system size at fixed B.

    gap is the splitting of the unscaled matrix, gap_scaled of the
    1/N-scaled one (gap = N * gap_scaled); both are >= 0.
    """

    B: float
    N: np.ndarray
    gap: np.ndarray
    gap_scaled: np.ndarray

    def __post_init__(self):
        if not (len(self.N) == len(self.gap) == len(self.gap_scaled)):
            raise DimensionError("N, gap and gap_scaled must have equal length")


def splitting_curve(B: float, n_values, workers: int = 1) -> SplittingCurve:
    """Lowest-pair splitting over a sweep of system sizes.

    Sweep points are independent; workers > 1 runs them on a thread pool
    (the solver releases the interpreter lock), output order unchanged.
    """
    ns = [int(n) for n in n_values]
    if not ns:
        raise ParameterError("empty N sweep")
    if any(n < 2 for n in ns):
        raise ParameterError("splitting needs N >= 2")

    def one(n: int) -> float:
        m = scale(build_tridiag_cw(ModelParams(N=n, B=B)), 1.0 / n)
        ev = eig_lowest(m, 2, want_vectors=False).eigenvalues
        return abs(float(ev[1] - ev[0]))

    if workers > 1 and len(ns) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            gaps_scaled = list(pool.map(one, ns))
    else:
        gaps_scaled = [one(n) for n in ns]
    gs = np.array(gaps_scaled)
    narr = np.array(ns)
    return SplittingCurve(B=float(B), N=narr, gap=narr * gs, gap_scaled=gs)


def _above_half_segments(a: np.ndarray) -> list[tuple[int, int]]:
    """Maximal runs of consecutive indices with a >= max(a)/2, as (lo, hi)
    inclusive."""
    half = a.max() / 2.0
    mask = a >= half
    idx = np.nonzero(mask)[0]
    segments = []
    start = prev = idx[0]
    for i in idx[1:]:
        if i != prev + 1:
            segments.append((start, prev))
            start = i
        prev = i
    segments.append((start, prev))
    return segments


def width_half_height(vector) -> float:
    """Full width of |v| at half its maximum, in grid indices.

    The width is the distance between the first and last index at or above
    half-max, with the two boundary crossings linearly interpolated between
    samples.  A single above-half sample has width 0; several disjoint
    above-half segments mean there is no single peak to measure and raise
    an ambiguity error carrying the per-segment peak indices.
    """
    a = np.abs(np.asarray(vector, dtype=float))
    if a.ndim != 1 or len(a) < 1:
        raise DimensionError("width needs a 1-d vector")
    if not np.all(np.isfinite(a)):
        raise ParameterError("vector entries must be finite")
    if a.max() == 0.0:
        raise ParameterError("zero vector has no width")
    segments = _above_half_segments(a)
    if len(segments) > 1:
        peaks = [int(lo + np.argmax(a[lo : hi + 1])) for lo, hi in segments]
        raise AmbiguityError(
            f"{len(segments)} disjoint peaks at half height (indices {peaks}); "
            "apply a cluster policy or fit peaks separately",
            peaks=peaks,
        )
    lo, hi = segments[0]
    if lo == hi:
        return 0.0
    half = a.max() / 2.0
    xl = float(lo) if lo == 0 else (lo - 1) + (half - a[lo - 1]) / (a[lo] - a[lo - 1])
    n = len(a)
    xr = float(hi) if hi == n - 1 else hi + (a[hi] - half) / (a[hi] - a[hi + 1])
    return float(xr - xl)


@dataclass(frozen=True)
class LocalizationReport:
    """Index-bucket masses of a normalized state on k = 0..N.

    left_mass sums squared coefficients with k/N < 1/2, right_mass with
    k/N > 1/2, midpoint_mass the k = N/2 term (even N only); the three sum
    to the total mass.  magnetization is sum c_k^2 (2k - N)/N.
    """

    N: int
    left_mass: float
    right_mass: float
    midpoint_mass: float
    peak_index: int
    magnetization: float


def localization_report(vector, N: int) -> LocalizationReport:
    """Bucket masses and magnetization of a state; assumes unit norm."""
    v = np.asarray(vector, dtype=float)
    if v.ndim != 1 or len(v) != N + 1:
        raise DimensionError(f"expected length {N + 1} vector, got shape {v.shape}")
    w = v * v
    k = np.arange(N + 1)
    left = float(w[2 * k < N].sum())
    right = float(w[2 * k > N].sum())
    mid = float(w[2 * k == N].sum())
    mag = float(np.sum(w * (2.0 * k - N) / N))
    return LocalizationReport(
        N=N,
        left_mass=left,
        right_mass=right,
        midpoint_mass=mid,
        peak_index=int(np.argmax(np.abs(v))),
        magnetization=mag,
    )


def collapse_degenerate_pairs(values, gap_tol: float = PAIR_GAP_TOL) -> np.ndarray:
    """Average runs of consecutive eigenvalues closer than gap_tol.

    In the tunneling regime levels come in numerically degenerate pairs;
    averaging each run yields the single-level ladder.  Values must be
    ascending.
    """
    ev = np.asarray(values, dtype=float)
    if ev.ndim != 1 or len(ev) == 0:
        raise DimensionError("expected a non-empty 1-d array of eigenvalues")
    if np.any(np.diff(ev) < 0):
        raise ParameterError("eigenvalues must be ascending")
    if gap_tol <= 0:
        raise ParameterError("gap_tol must be positive")
    out = []
    start = 0
    for i in range(1, len(ev) + 1):
        if i == len(ev) or ev[i] - ev[i - 1] > gap_tol:
            out.append(ev[start:i].mean())
            start = i
    return np.array(out)


def harmonic_fit(shifted_levels, N: int) -> tuple[float, float, np.ndarray]:
    """Least-squares fit of collapsed shifted levels to
    offset + (n + 1/2) * spacing.

    Returns (spacing, offset, residuals); spacing * N is the quantity that
    approaches sqrt(3) for the double well at B = 1/2.  Needs at least two
    levels.
    """
    ev = np.asarray(shifted_levels, dtype=float)
    if ev.ndim != 1 or len(ev) < 2:
        raise ParameterError("harmonic fit needs at least 2 collapsed levels")
    if N < 1:
        raise ParameterError(f"N must be >= 1, got {N}")
    n = np.arange(len(ev), dtype=float)
    a = np.column_stack([np.ones_like(n), n + 0.5])
    coef, *_ = np.linalg.lstsq(a, ev, rcond=None)
    offset, spacing = float(coef[0]), float(coef[1])
    residuals = ev - (offset + (n + 0.5) * spacing)
    return spacing, offset, residuals


def spectrum_compare(a, b, k: int) -> tuple[np.ndarray, float]:
    """First k absolute differences |a_n - b_n| of two spectra, plus the
    max over them."""
    ea = np.asarray(getattr(a, "eigenvalues", a), dtype=float)
    eb = np.asarray(getattr(b, "eigenvalues", b), dtype=float)
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if len(ea) < k or len(eb) < k:
        raise ParameterError(f"both spectra need at least {k} levels")
    diffs = np.abs(ea[:k] - eb[:k])
    return diffs, float(diffs.max())


@dataclass(frozen=True)
class GaussianFitReport:
    """Fit of |v| on k = 0..N by one or two Gaussians
    w_i exp(-(k - mu_i)^2 / (2 s_i^2)).

    centers/widths are in grid-index units (divide by N for x).  residual
    is the final root-mean-square misfit relative to the peak height.
    converged False carries the solver diagnostics in message.
    """

    n_gaussians: int
    centers: np.ndarray
    widths: np.ndarray
    weights: np.ndarray
    residual: float
    converged: bool
    message: str


def gaussian_compare(vector, N: int, B: float) -> GaussianFitReport:
    """Fit a normalized state by one or two translated Gaussians.

    The number of Gaussians follows the number of disjoint half-max peaks.
    For the double well (B < 1) initial centers use the classical minima
    N*(1 -+ sqrt(1-B^2))/2 when two peaks are present.  Fit failure is
    reported, not raised.
    """
    v = np.abs(np.asarray(vector, dtype=float))
    if v.ndim != 1 or len(v) != N + 1:
        raise DimensionError(f"expected length {N + 1} vector, got shape {v.shape}")
    if v.max() == 0.0:
        raise ParameterError("zero vector cannot be fit")
    k = np.arange(N + 1, dtype=float)
    segments = _above_half_segments(v)
    two = len(segments) >= 2
    if two:
        # keep the two tallest peaks for initialization
        tops = sorted(segments, key=lambda s: -v[s[0] : s[1] + 1].max())[:2]
        tops = sorted(tops)
        centers0 = [lo + np.argmax(v[lo : hi + 1]) for lo, hi in tops]
        if 0 < B < 1:
            r = np.sqrt(1.0 - B * B)
            centers0 = [0.5 * (1.0 - r) * N, 0.5 * (1.0 + r) * N]
        widths0 = [max((hi - lo) / 2.355, 0.5) for lo, hi in tops]
        heights0 = [v[lo : hi + 1].max() for lo, hi in tops]
        p0 = np.array([heights0[0], centers0[0], widths0[0],
                       heights0[1], centers0[1], widths0[1]])
    else:
        lo, hi = segments[0]
        p0 = np.array(
            [v.max(), lo + np.argmax(v[lo : hi + 1]), max((hi - lo) / 2.355, 0.5)]
        )

    def model(p):
        out = np.zeros_like(k)
        for i in range(0, len(p), 3):
            w, mu, s = p[i], p[i + 1], p[i + 2]
            out = out + w * np.exp(-((k - mu) ** 2) / (2.0 * s * s))
        return out

    lo_b = [0.0, -0.5, 1e-3] * (2 if two else 1)
    hi_b = [np.inf, N + 0.5, float(N)] * (2 if two else 1)
    try:
        res = least_squares(lambda p: model(p) - v, p0, bounds=(lo_b, hi_b))
        ok = bool(res.success)
        p, msg = res.x, str(res.message)
    except Exception as exc:  # solver blow-up is a report, not a crash
        ok, p, msg = False, p0, f"least_squares raised: {exc}"
    rms = float(np.sqrt(np.mean((model(p) - v) ** 2)) / v.max())
    order = np.argsort(p[1::3])
    return GaussianFitReport(
        n_gaussians=2 if two else 1,
        centers=p[1::3][order].copy(),
        widths=np.abs(p[2::3][order]).copy(),
        weights=p[0::3][order].copy(),
        residual=rms,
        converged=ok,
        message=msg,
    )
