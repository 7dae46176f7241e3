"""The double-well Schrodinger side of the model.

For large N the scaled matrix J_{N+1}/N acts like a discretized Schrodinger
operator.  Its off-diagonal entries define the non-uniform grid spacing

    d(x) = 1 / (sqrt(B) ((1-x) x)^(1/4)),    x in (0, 1),

whose cumulative integral D(x) = int_0^x d(t) dt maps [0,1] onto an interval
of total length L = 2 Gamma(3/4)^2 / (sqrt(B) sqrt(pi)).  The integrand has
integrable t^(-1/4) singularities at both endpoints, removed here by the
substitution t = s^4 (mirrored near 1), after which the integrand
4 s^2 / (sqrt(B) (1 - s^4)^(1/4)) is smooth.

On the unit interval the operator becomes H = -(1/(L^2 N^2)) d^2/dy^2 + V(y)
with the double-well potential

    V_N(x) = -1/2 (2x-1)^2 - B (sqrt((1-x)(x+1/N)) + sqrt((1-x+1/N) x)),

evaluated at x = D^-1(yL).  Its uniform N-point discretization, the Agmon
metric int sqrt(V) that controls tunneling, the classifier for bump
("flea") perturbations, and the 2x2 reduction of a perturbed tunneling pair
all live here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import cumulative_simpson, quad
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import DomainError, ParameterError
from .params import FleaParams
from .tridiag import TridiagonalMatrix, flea_bump

__all__ = [
    "grid_spacing",
    "closed_form_length",
    "interval_coordinate",
    "inverse_interval_coordinate",
    "GridMap",
    "gridmap_for",
    "potential_vn",
    "limit_potential",
    "shifted_limit_potential",
    "potential_minima",
    "potential_minimum_on_grid",
    "PotentialProfile",
    "build_potential_profile",
    "build_schrodinger_tridiag",
    "recover_grid_spacing",
    "agmon_distance",
    "AgmonReport",
    "classify_flea_regime",
    "TwoLevelModel",
    "two_level",
]


def _check_field(B: float) -> None:
    if not (np.isfinite(B) and B > 0):
        raise DomainError(f"B must be positive and finite, got {B!r}")


def grid_spacing(x, B: float):
    """Non-uniform spacing d(x) = 1/(sqrt(B) ((1-x)x)^(1/4)) on (0,1).

    d is symmetric about x = 1/2 and diverges at the endpoints, which are
    rejected as a domain error.
    """
    _check_field(B)
    arr = np.asarray(x, dtype=float)
    if np.any((arr <= 0.0) | (arr >= 1.0)):
        raise DomainError("grid_spacing requires 0 < x < 1 (d diverges at the endpoints)")
    out = 1.0 / (np.sqrt(B) * ((1.0 - arr) * arr) ** 0.25)
    return float(out) if out.ndim == 0 else out


def closed_form_length(B: float) -> float:
    """L = 2 Gamma(3/4)^2 / (sqrt(B) sqrt(pi)), the exact value of D(1)."""
    _check_field(B)
    return 2.0 * math.gamma(0.75) ** 2 / (math.sqrt(B) * math.sqrt(math.pi))


def _sub_integrand(s, B: float):
    """Integrand after t = s^4: d(t) dt = 4 s^2 / (sqrt(B) (1-s^4)^(1/4)) ds."""
    return 4.0 * s**2 / (np.sqrt(B) * (1.0 - s**4) ** 0.25)


def interval_coordinate(x: float, B: float) -> float:
    """D(x) = int_0^x d(t) dt by adaptive quadrature on the substituted
    integrand; absolute error <= 1e-10."""
    _check_field(B)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"interval coordinate needs x in [0, 1], got {x}")
    half = quad(_sub_integrand, 0.0, 0.5**0.25, args=(B,), epsabs=1e-13, epsrel=1e-13)[0]
    if x <= 0.5:
        val = quad(_sub_integrand, 0.0, x**0.25, args=(B,), epsabs=1e-12, epsrel=1e-12)[0]
    else:
        tail = quad(
            _sub_integrand, 0.0, (1.0 - x) ** 0.25, args=(B,), epsabs=1e-12, epsrel=1e-12
        )[0]
        val = 2.0 * half - tail
    return float(val)


class GridMap:
    """Tabulated interval coordinate for one field value B.

    Exposes d (the spacing function), D (the coordinate), its inverse, and
    the total length L.  Construction integrates the substituted integrand
    with composite Simpson on a dense uniform s-grid and interpolates with a
    cubic spline in s, where the map is smooth; evaluation is vectorized.
    Immutable after construction.
    """

    def __init__(self, B: float, samples: int = 20001):
        _check_field(B)
        if samples < 101 or samples % 2 == 0:
            raise ParameterError("samples must be an odd integer >= 101")
        self.B = float(B)
        self._smax = 0.5**0.25
        s = np.linspace(0.0, self._smax, samples)
        g = _sub_integrand(s, B)
        G = np.concatenate([[0.0], cumulative_simpson(g, x=s)])
        self._s = s
        self._G = G
        self._spline = CubicSpline(s, G)
        self.L = float(2.0 * G[-1])

    def d(self, x):
        return grid_spacing(x, self.B)

    def D(self, x):
        """Vectorized interval coordinate D(x), x in [0, 1]."""
        arr = np.asarray(x, dtype=float)
        if np.any((arr < 0.0) | (arr > 1.0)):
            raise DomainError("D(x) needs x in [0, 1]")
        lo = arr <= 0.5
        out = np.where(
            lo,
            self._spline(np.clip(arr, 0.0, 0.5) ** 0.25),
            self.L - self._spline(np.clip(1.0 - arr, 0.0, 0.5) ** 0.25),
        )
        return float(out) if out.ndim == 0 else out

    def inverse(self, z):
        """Vectorized D^-1(z), z in [0, L], with |D(x) - z| <= 1e-10.

        Starts from inverse linear interpolation of the table and polishes
        with Newton steps using the analytic derivative; any point that has
        not met the tolerance falls back to bisection.
        """
        arr = np.atleast_1d(np.asarray(z, dtype=float))
        eps = 1e-12 * max(self.L, 1.0)
        if np.any((arr < -eps) | (arr > self.L + eps)):
            raise DomainError(f"inverse coordinate needs z in [0, {self.L:.6g}]")
        arr = np.clip(arr, 0.0, self.L)
        mirrored = arr > self.L / 2.0
        w = np.where(mirrored, self.L - arr, arr)  # solve G(s) = w on [0, smax]
        s = np.interp(w, self._G, self._s)
        for _ in range(3):
            g = _sub_integrand(s, self.B)
            step = np.where(g > 0.0, (self._spline(s) - w) / np.where(g > 0.0, g, 1.0), 0.0)
            s = np.clip(s - step, 0.0, self._smax)
        bad = np.abs(self._spline(s) - w) > 1e-10
        for i in np.nonzero(bad)[0]:
            s[i] = brentq(lambda t: self._spline(t) - w[i], 0.0, self._smax, xtol=1e-15)
        x = np.where(mirrored, 1.0 - s**4, s**4)
        return float(x[0]) if np.isscalar(z) or np.asarray(z).ndim == 0 else x


@lru_cache(maxsize=16)
def gridmap_for(B: float) -> GridMap:
    """Shared GridMap per field value; construction is the one-time cost."""
    return GridMap(B)


def inverse_interval_coordinate(z: float, B: float) -> float:
    """D^-1(z) for z in [0, L]; |D(x) - z| <= 1e-10."""
    return float(gridmap_for(B).inverse(z))


def potential_vn(x, N: int, B: float):
    """Double-well potential carried by the diagonal decomposition of
    J_{N+1}/N:

        V_N(x) = -1/2 (2x-1)^2 - B (sqrt((1-x)(x+1/N)) + sqrt((1-x+1/N) x)).

    At grid points x = n+/N this equals the diagonal of J_{N+1}/N plus the
    off-diagonal row sums that the kinetic/potential split assigns to the
    potential.  Root arguments are clamped at zero against rounding.
    """
    if N < 1:
        raise ParameterError(f"N must be >= 1, got {N}")
    arr = np.asarray(x, dtype=float)
    if np.any((arr < 0.0) | (arr > 1.0)):
        raise DomainError("potential needs x in [0, 1]")
    a = np.clip((1.0 - arr) * (arr + 1.0 / N), 0.0, None)
    b = np.clip((1.0 - arr + 1.0 / N) * arr, 0.0, None)
    out = -0.5 * (2.0 * arr - 1.0) ** 2 - B * (np.sqrt(a) + np.sqrt(b))
    return float(out) if out.ndim == 0 else out


def limit_potential(x, B: float):
    """N -> infinity form: V(x) = -1/2 (2x-1)^2 - 2B sqrt((1-x)x)."""
    arr = np.asarray(x, dtype=float)
    out = -0.5 * (2.0 * arr - 1.0) ** 2 - 2.0 * B * np.sqrt(
        np.clip((1.0 - arr) * arr, 0.0, None)
    )
    return float(out) if out.ndim == 0 else out


def potential_minima(B: float) -> tuple[tuple[float, float], ...]:
    """Minima of the limit potential: for 0 <= B < 1 two at
    x = (1 -+ sqrt(1-B^2))/2 with value -(1+B^2)/2; for B >= 1 one at 1/2."""
    if B < 0 or not np.isfinite(B):
        raise DomainError(f"B must be non-negative, got {B!r}")
    if B < 1.0:
        r = math.sqrt(1.0 - B * B)
        val = -(1.0 + B * B) / 2.0
        return ((0.5 * (1.0 - r), val), (0.5 * (1.0 + r), val))
    return ((0.5, limit_potential(0.5, B)),)


def shifted_limit_potential(B: float):
    """Limit potential shifted so its minima sit exactly at zero (0<=B<1);
    the natural weight for Agmon integrals."""
    if not 0.0 <= B < 1.0:
        raise DomainError("shifted limit potential needs 0 <= B < 1 (double well)")
    floor = -(1.0 + B * B) / 2.0

    def v(x):
        return limit_potential(x, B) - floor

    return v


def potential_minimum_on_grid(N: int, B: float) -> float:
    """min_j V_N(j/N): the shift constant that places the discrete
    potential floor at zero."""
    x = np.arange(N + 1, dtype=float) / N
    return float(np.min(potential_vn(x, N, B)))


@dataclass(frozen=True)
class PotentialProfile:
    """Min-shifted potential samples: V_N on the uniform x-grid and the
    pulled-back Vtilde_N(y) = V_N(D^-1(yL)) on the uniform y-grid."""

    N: int
    B: float
    x: np.ndarray
    v: np.ndarray        # V_N(x) - shift
    y: np.ndarray
    v_tilde: np.ndarray  # V_N(D^-1(yL)) - shift
    shift: float


def build_potential_profile(N: int, B: float, gridmap: GridMap | None = None) -> PotentialProfile:
    if N < 2:
        raise ParameterError(f"potential profile needs N >= 2, got {N}")
    gm = gridmap if gridmap is not None else gridmap_for(B)
    x = np.arange(N + 1, dtype=float) / N
    v = potential_vn(x, N, B)
    shift = float(v.min())
    y = x.copy()
    xt = gm.inverse(y * gm.L)
    vt = potential_vn(xt, N, B)
    return PotentialProfile(N=N, B=B, x=x, v=v - shift, y=y, v_tilde=vt - shift, shift=shift)


def build_schrodinger_tridiag(
    N: int,
    B: float,
    gridmap: GridMap | None = None,
    flea: FleaParams | None = None,
) -> TridiagonalMatrix:
    """Uniform discretization of -(1/(L^2 N^2)) d^2/dy^2 + Vtilde_N(y) on
    y_j = j/N, j = 0..N, with Dirichlet ends: diagonal 2/L^2 + Vtilde_N(y_j),
    off-diagonal -1/L^2.

    (The 1/N^2 of the continuum operator cancels against the 1/(1/N)^2 of
    the second difference, leaving the 1/L^2 prefactor.)

    An optional bump enters the diagonal scaled by 1/N, which matches a
    full-height bump added to the unscaled spin matrix before its own 1/N
    scaling.
    """
    if N < 2:
        raise ParameterError(f"discretization needs N >= 2, got {N}")
    gm = gridmap if gridmap is not None else gridmap_for(B)
    y = np.arange(N + 1, dtype=float) / N
    x = gm.inverse(y * gm.L)
    vt = potential_vn(x, N, B)
    if flea is not None:
        vt = vt + np.asarray(flea_bump(x, flea)) / N
    diag = 2.0 / gm.L**2 + vt
    off = np.full(N, -1.0 / gm.L**2)
    return TridiagonalMatrix(diag, off)


def recover_grid_spacing(m: TridiagonalMatrix) -> np.ndarray:
    """Read the grid spacings back out of a tridiagonal second-difference
    stencil.

    A non-uniform central difference has row j with entries
    2/(h_{j-1}(h_{j-1}+h_j)), -2/(h_{j-1} h_j), 2/(h_j(h_{j-1}+h_j)), so with
    rho_j = T_{j,j+1}/T_{j,j-1} = h_{j-1}/h_j the spacing follows from
    h_j^2 = 2/(T_{j,j+1}(1+rho_j)).  Entry magnitudes are used, making the
    formula apply to both sign conventions of the Laplacian.  Returns h_j
    for the interior rows j = 1..M-2, in the length unit in which the
    stencil has unit diffusion coefficient (for J_{N+1}/N that unit carries
    the factor N: h_j/N then matches d(j/N)/N).
    """
    if m.size < 3:
        raise ParameterError("spacing recovery needs at least 3 rows")
    off = np.abs(m.off)
    if np.any(off == 0.0):
        raise DomainError("zero off-diagonal entry: stencil has no spacing information")
    t_up = off[1:]    # |T_{j,j+1}| for j = 1..M-2
    t_dn = off[:-1]   # |T_{j,j-1}|
    rho = t_up / t_dn
    return np.sqrt(2.0 / (t_up * (1.0 + rho)))


def agmon_distance(v, x: float, y: float, tol: float = 1e-8) -> float:
    """Agmon distance d_V(x, y) = |int_x^y sqrt(V(s)) ds| for V >= 0.

    V must already be shifted so the well minima sit at zero; values below
    -1e-12 anywhere on the segment raise a domain error.
    """
    if x == y:
        return 0.0
    a, b = (x, y) if x < y else (y, x)
    probe = np.asarray(v(np.linspace(a, b, 257)), dtype=float)
    if np.any(probe < -1e-12):
        raise DomainError("potential is negative on the path; shift it so minima are zero")

    def integrand(s):
        val = v(s)
        if val < -1e-12:
            raise DomainError("potential is negative on the path; shift it so minima are zero")
        return math.sqrt(max(val, 0.0))

    out, _ = quad(integrand, a, b, epsabs=tol, limit=200)
    return abs(float(out))


@dataclass(frozen=True)
class AgmonReport:
    """Agmon distances and the predicted localization regime.

    d0: distance between the two minima; d1/d2: twice the min/max distance
    from the bump support to a minimum.  The regime follows the ordering of
    d0 against (d1, d2); localization (if any) is at the minimum farther
    from the support.
    """

    d0: float
    d1: float
    d2: float
    regime: str
    side: str | None
    distance_to_m1: float
    distance_to_m2: float


def classify_flea_regime(v, support: tuple[float, float], m1: float, m2: float,
                         tol: float = 1e-8) -> AgmonReport:
    """Classify a bump perturbation with the given support against the
    shifted potential v (minima m1 < m2 at height zero).

    Regimes: d0 <= d1 means no localization; d1 < d0 <= d2 localizes at the
    minimum farthest from the support; d1 < d2 < d0 the same, with the
    stronger separation.  A support overlapping a minimum is rejected: the
    bump must vanish near the minima for the classification to apply.
    """
    lo, hi = support
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo >= hi:
        raise ParameterError(f"support must be a finite interval, got {support!r}")
    if m1 > m2:
        m1, m2 = m2, m1
    if lo <= m1 <= hi or lo <= m2 <= hi:
        raise DomainError("flea must vanish near minima (support overlaps a minimum)")

    def dist_to(m: float) -> float:
        if m < lo:
            return agmon_distance(v, m, lo, tol)
        return agmon_distance(v, hi, m, tol)

    dm1, dm2 = dist_to(m1), dist_to(m2)
    d0 = agmon_distance(v, m1, m2, tol)
    d1, d2 = 2.0 * min(dm1, dm2), 2.0 * max(dm1, dm2)

    if d0 <= d1:
        regime, side = "no-localization", None
    else:
        regime = "localize-far-minimum" if d0 <= d2 else "localize-far-minimum-strong"
        if dm1 == dm2:
            side = None
        else:
            side = "left" if dm1 > dm2 else "right"
    return AgmonReport(d0=d0, d1=d1, d2=d2, regime=regime, side=side,
                       distance_to_m1=dm1, distance_to_m2=dm2)


@dataclass(frozen=True)
class TwoLevelModel:
    """Reduction of a perturbed tunneling pair to H = [[0, -g/2], [-g/2, b]]
    with tunneling splitting g >= 0 and bias b >= 0."""

    splitting: float
    bias: float

    def __post_init__(self):
        if not (np.isfinite(self.splitting) and self.splitting >= 0.0):
            raise ParameterError(f"splitting must be >= 0, got {self.splitting!r}")
        if not (np.isfinite(self.bias) and self.bias >= 0.0):
            raise ParameterError(f"bias must be >= 0, got {self.bias!r}")


@dataclass(frozen=True)
class TwoLevelResult:
    """Eigenpairs of the two-level model: energies ascending, vector
    columns matching; energies are (b -+ sqrt(b^2+g^2))/2."""

    model: TwoLevelModel
    energies: np.ndarray
    vectors: np.ndarray  # columns: ground, excited


def two_level(splitting: float, bias: float) -> TwoLevelResult:
    """Closed-form eigenpairs of [[0, -g/2], [-g/2, b]].

    Evaluated in the cancellation-free form t = g/(b + hypot(b, g)): the
    ground state is (1, t)/sqrt(1+t^2) with energy -g^2/(2(b+r)), the
    excited one orthogonal with energy (b+r)/2.  As g/b -> 0 the pair tends
    to the decoupled basis (1,0), (0,1) with error at most g/b; at b = 0 it
    is the symmetric/antisymmetric pair (1,+-1)/sqrt(2) with energies
    -+g/2.
    """
    model = TwoLevelModel(splitting=splitting, bias=bias)
    g, b = model.splitting, model.bias
    r = math.hypot(b, g)
    if r == 0.0:
        energies = np.zeros(2)
        vectors = np.eye(2)
        return TwoLevelResult(model=model, energies=energies, vectors=vectors)
    t = g / (b + r)
    e_minus = -(g * g) / (2.0 * (b + r))
    e_plus = (b + r) / 2.0
    nrm = math.sqrt(1.0 + t * t)
    ground = np.array([1.0, t]) / nrm
    excited = np.array([-t, 1.0]) / nrm
    for vecs in (ground, excited):
        if vecs[np.argmax(np.abs(vecs))] < 0:
            vecs *= -1.0
    return TwoLevelResult(
        model=model,
        energies=np.array([e_minus, e_plus]),
        vectors=np.column_stack([ground, excited]),
    )
