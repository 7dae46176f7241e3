"""Model and perturbation parameter records.

The spin Hamiltonian is h_N = -(J/2N) sum_{x,y} s3(x)s3(y) - B sum_x s1(x)
with the coupling fixed at J = 1, which makes h_N dimensionless; B is the
transverse field.  The flea is a smooth compactly supported bump
delta V_{b,c,d} of half-width c and height d centered at b.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ParameterError


@dataclass(frozen=True)
class FleaParams:
    """Bump perturbation: center b in [0,1], half-width c > 0, height d."""

    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in ("b", "c", "d"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ParameterError(f"flea parameter {name} must be finite, got {v!r}")
        if not 0.0 <= self.b <= 1.0:
            raise ParameterError(f"flea center b must lie in [0, 1], got {self.b}")
        if self.c <= 0.0:
            raise ParameterError(f"flea half-width c must be positive, got {self.c}")
        # support [b-c, b+c] must meet [0,1]; with b in [0,1] this always holds,
        # the check is kept explicit so the invariant survives future edits
        if self.b + self.c < 0.0 or self.b - self.c > 1.0:
            raise ParameterError("flea support does not intersect [0, 1]")

    @property
    def support(self) -> tuple[float, float]:
        return (self.b - self.c, self.b + self.c)


@dataclass(frozen=True)
class ModelParams:
    """Curie-Weiss parameters: N sites, transverse field B, coupling J = 1."""

    N: int
    B: float
    J: float = 1.0
    flea: FleaParams | None = field(default=None)

    def __post_init__(self):
        if not isinstance(self.N, (int,)) or isinstance(self.N, bool):
            raise ParameterError(f"N must be an integer, got {self.N!r}")
        if self.N < 1:
            raise ParameterError(f"N must be >= 1, got {self.N}")
        if not math.isfinite(self.B):
            raise ParameterError(f"B must be finite, got {self.B!r}")
        if self.J != 1.0:
            raise ParameterError(f"the coupling is fixed at J = 1, got {self.J}")
