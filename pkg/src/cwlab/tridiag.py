"""Symmetric tridiagonal representation of the Curie-Weiss Hamiltonian.

Restricted to the (N+1)-dimensional permutation-symmetric subspace, the spin
Hamiltonian becomes the tridiagonal matrix J_{N+1} with

    diag[n+] = -(J/2N) (2 n+ - N)^2,           n+ = 0 .. N,
    off[n+]  = -B sqrt((N - n+)(n+ + 1)),      n+ = 0 .. N-1,

indexed by the number of up spins n+.  The upper and lower off-diagonal
formulas coincide after the index shift, so a single off array suffices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError
from .params import FleaParams, ModelParams

__all__ = [
    "TridiagonalMatrix",
    "build_tridiag_cw",
    "scale",
    "flea_bump",
    "apply_flea",
    "field_bias",
]


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Symmetric tridiagonal matrix: off[i] couples indices i and i+1."""

    diag: np.ndarray
    off: np.ndarray

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=float)
        off = np.asarray(self.off, dtype=float)
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "off", off)
        if diag.ndim != 1 or off.ndim != 1:
            raise DimensionError("diag and off must be one-dimensional arrays")
        if len(off) != max(len(diag) - 1, 0):
            raise DimensionError(
                f"off length must be len(diag)-1, got {len(off)} for diag of {len(diag)}"
            )
        if len(diag) == 0:
            raise DimensionError("matrix must have at least one row")
        if not (np.all(np.isfinite(diag)) and np.all(np.isfinite(off))):
            raise ParameterError("matrix entries must be finite")

    @property
    def size(self) -> int:
        return len(self.diag)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape != (self.size,):
            raise DimensionError(f"vector length {v.shape} does not match size {self.size}")
        out = self.diag * v
        if self.size > 1:
            out[:-1] += self.off * v[1:]
            out[1:] += self.off * v[:-1]
        return out

    def to_dense(self) -> np.ndarray:
        m = np.diag(self.diag)
        if self.size > 1:
            idx = np.arange(self.size - 1)
            m[idx, idx + 1] = self.off
            m[idx + 1, idx] = self.off
        return m

    def norm_inf(self) -> float:
        """Row-sum norm, used for residual and cluster tolerances."""
        a = np.abs(self.diag).copy()
        if self.size > 1:
            a[:-1] += np.abs(self.off)
            a[1:] += np.abs(self.off)
        return float(a.max())


def build_tridiag_cw(params: ModelParams) -> TridiagonalMatrix:
    """Build J_{N+1} for the given parameters (flea not applied here)."""
    N, B = params.N, params.B
    n = np.arange(N + 1, dtype=float)
    diag = -params.J * (2.0 * n - N) ** 2 / (2.0 * N)
    m = np.arange(N, dtype=float)
    off = -B * np.sqrt((N - m) * (m + 1.0))
    return TridiagonalMatrix(diag, off)


def scale(m: TridiagonalMatrix, factor: float) -> TridiagonalMatrix:
    """Entrywise multiplication; the spectrum scales by the same factor."""
    if not np.isfinite(factor):
        raise ParameterError(f"scale factor must be finite, got {factor!r}")
    if factor == 0.0:
        raise ParameterError("scale factor must be non-zero")
    return TridiagonalMatrix(m.diag * factor, m.off * factor)


def flea_bump(x, flea: FleaParams):
    """Evaluate d*exp(1/c^2 - 1/(c^2 - (x-b)^2)) inside |x-b| < c, else 0.

    Smooth, compactly supported, maximum d at x = b.  Near the support edge
    the exponent drops below -700 and the value flushes to zero in double
    precision; that underflow is intended (the exact value is < 1e-300).
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    u = x - flea.b
    inside = np.abs(u) < flea.c
    if np.any(inside):
        c2 = flea.c**2
        expo = 1.0 / c2 - 1.0 / (c2 - u[inside] ** 2)
        with np.errstate(under="ignore"):
            out[inside] = flea.d * np.exp(expo)
    if out.ndim == 0:
        return float(out)
    return out


def apply_flea(m: TridiagonalMatrix, flea: FleaParams, N: int) -> TridiagonalMatrix:
    """Add the flea to the diagonal: diag[k] += bump(k/N); off unchanged."""
    if m.size != N + 1:
        raise DimensionError(f"matrix size {m.size} does not match N+1 = {N + 1}")
    k = np.arange(N + 1, dtype=float)
    return TridiagonalMatrix(m.diag + flea_bump(k / N, flea), m.off.copy())


def field_bias(N: int, eps: float) -> np.ndarray:
    """Diagonal of the linear symmetry-breaking field eps*(2 n+ - N).

    Kept as a comparison term for plots only; the flea is the perturbation
    actually studied.
    """
    n = np.arange(N + 1, dtype=float)
    return eps * (2.0 * n - N)
