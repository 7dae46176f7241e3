"""Exact 2^N construction of the Curie-Weiss Hamiltonian and its
permutation-symmetric subspace.

Basis states are integers in [0, 2^N); bit x encodes the spin at site x
(0 for up/e1, 1 for down/e2), so popcount(i) = n- and n+ = N - popcount(i).
The states with a common popcount k form the orbit O^k of the permutation
group, of size C(N,k); the normalized orbit sums span the (N+1)-dimensional
symmetric subspace on which the Hamiltonian reduces to the tridiagonal
matrix of :mod:`cwlab.tridiag`.

Orbit coefficient vectors here are indexed by k = popcount = n-, while the
tridiagonal matrix is indexed by n+ = N - k; :func:`tridiag_to_orbit_order`
performs the reversal when vectors cross between the two representations.

The operator -h_N is entrywise non-negative and irreducible for B > 0, so
by Perron-Frobenius its ground state is simple and strictly positive, hence
permutation symmetric; :func:`perron_frobenius_verify` checks all of this
on the computed eigendecomposition.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .eigensolve import Spectrum, cluster_slices
from .errors import CapacityError, DimensionError, SolverError
from .params import ModelParams
from .tridiag import flea_bump

__all__ = [
    "DenseHamiltonian",
    "SymmetricSubspaceMap",
    "build_dense_cw",
    "build_subspace_map",
    "symmetrize_lift",
    "project_symmetric",
    "tridiag_to_orbit_order",
    "check_nonnegative",
    "check_irreducible",
    "PerronFrobeniusReport",
    "perron_frobenius_verify",
    "dense_eig",
    "lowest_pairs_sparse",
    "lift_matrix",
    "reduction_residual",
    "restrict_spectrum",
]

DENSE_N_CAP = 14  # 2^14 square dense is the desk-scale memory guard


def _popcounts(dim: int) -> np.ndarray:
    idx = np.arange(dim, dtype=np.uint64)
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(idx).astype(np.int64)
    return np.array([int(i).bit_count() for i in range(dim)], dtype=np.int64)


@dataclass(frozen=True)
class DenseHamiltonian:
    """Dense matrix of h_N (+ flea) in the standard tensor basis."""

    dim: int
    entries: np.ndarray
    params: ModelParams


@dataclass(frozen=True)
class SymmetricSubspaceMap:
    """Orbit decomposition of the 2^N basis by popcount k = 0..N."""

    N: int
    orbit_of_index: np.ndarray = field(repr=False)  # popcount per basis index
    norms: np.ndarray = field(repr=False)           # 1/sqrt(C(N,k))

    @property
    def dim(self) -> int:
        return 1 << self.N

    def orbit(self, k: int) -> np.ndarray:
        """Basis indices in orbit O^k, ascending."""
        return np.nonzero(self.orbit_of_index == k)[0]

    def orbit_sizes(self) -> np.ndarray:
        return np.bincount(self.orbit_of_index, minlength=self.N + 1)


def build_subspace_map(N: int) -> SymmetricSubspaceMap:
    if N < 1:
        raise CapacityError(f"N must be >= 1, got {N}")
    if N > DENSE_N_CAP:
        raise CapacityError(f"N = {N} exceeds the dense cap {DENSE_N_CAP}")
    k = _popcounts(1 << N)
    sizes = np.bincount(k, minlength=N + 1).astype(float)
    return SymmetricSubspaceMap(N=N, orbit_of_index=k, norms=1.0 / np.sqrt(sizes))


def build_dense_cw(params: ModelParams) -> DenseHamiltonian:
    """Dense h_N: diagonal -(J/2N)(2n+-N)^2 (+ flea at n+/N), off-diagonal
    -B between states differing in exactly one bit."""
    N, B = params.N, params.B
    if N > DENSE_N_CAP:
        raise CapacityError(f"N = {N} exceeds the dense cap {DENSE_N_CAP}")
    dim = 1 << N
    n_plus = N - _popcounts(dim)
    diag = -params.J * (2.0 * n_plus - N) ** 2 / (2.0 * N)
    if params.flea is not None:
        diag = diag + flea_bump(n_plus / N, params.flea)
    h = np.zeros((dim, dim))
    np.fill_diagonal(h, diag)
    idx = np.arange(dim)
    for x in range(N):
        h[idx, idx ^ (1 << x)] += -B
    return DenseHamiltonian(dim=dim, entries=h, params=params)


def symmetrize_lift(coeffs: np.ndarray, smap: SymmetricSubspaceMap) -> np.ndarray:
    """Lift orbit coefficients into the full space: every member of O^k
    receives coeffs[k]/sqrt(C(N,k)).  Isometry."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (smap.N + 1,):
        raise DimensionError(f"expected length {smap.N + 1}, got {coeffs.shape}")
    k = smap.orbit_of_index
    return coeffs[k] * smap.norms[k]


def project_symmetric(v: np.ndarray, smap: SymmetricSubspaceMap) -> np.ndarray:
    """Adjoint of :func:`symmetrize_lift`; project∘lift is the identity."""
    v = np.asarray(v, dtype=float)
    if v.shape != (smap.dim,):
        raise DimensionError(f"expected length {smap.dim}, got {v.shape}")
    sums = np.bincount(smap.orbit_of_index, weights=v, minlength=smap.N + 1)
    return sums * smap.norms


def tridiag_to_orbit_order(vec: np.ndarray) -> np.ndarray:
    """Reverse a coefficient vector between the n+ ordering of the
    tridiagonal matrix and the popcount (= n-) ordering of the orbit map."""
    return np.asarray(vec)[::-1].copy()


def check_nonnegative(m: DenseHamiltonian) -> tuple[bool, tuple[int, int] | None]:
    """True iff every entry of -h is >= 0; else the first violating index."""
    neg = -m.entries
    bad = np.argwhere(neg < 0.0)
    if len(bad) == 0:
        return True, None
    i, j = bad[0]
    return False, (int(i), int(j))


def check_irreducible(m: DenseHamiltonian) -> bool:
    """Strong connectivity of the digraph on nonzero entries.

    The matrix is symmetric, so breadth-first reachability from vertex 0
    over the undirected nonzero off-diagonal pattern decides it.
    """
    a = m.entries
    n = a.shape[0]
    if n == 1:
        return True
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    frontier = [0]
    while frontier:
        nxt = []
        for i in frontier:
            row = a[i] != 0.0
            row[i] = False
            new = row & ~seen
            if new.any():
                hits = np.nonzero(new)[0]
                seen[hits] = True
                nxt.extend(hits.tolist())
        frontier = nxt
    return bool(seen.all())


@dataclass(frozen=True)
class PerronFrobeniusReport:
    """Outcome of the structural ground-state checks on a dense h_N."""

    nonnegative: bool
    irreducible: bool
    simple: bool
    relative_gap: float
    strictly_positive: bool
    min_component: float
    in_symmetric_subspace: bool
    subspace_defect: float
    precondition_failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return (
            not self.precondition_failures
            and self.simple
            and self.strictly_positive
            and self.in_symmetric_subspace
        )


def perron_frobenius_verify(
    m: DenseHamiltonian,
    eigensolution: Spectrum,
    smap: SymmetricSubspaceMap | None = None,
    gap_tol: float = 1e-9,
    subspace_tol: float = 1e-10,
) -> PerronFrobeniusReport:
    """Check the Perron-Frobenius claims on a computed eigendecomposition:
    (a) the lowest eigenvalue is simple, (b) the ground vector can be signed
    strictly positive, (c) it lies in the symmetric subspace.

    Unmet preconditions (non-negativity of -h, irreducibility) are recorded
    in the report rather than raised.
    """
    failures = []
    ok_nn, _ = check_nonnegative(m)
    if not ok_nn:
        failures.append("nonnegative")
    ok_irr = check_irreducible(m)
    if not ok_irr:
        failures.append("irreducible")
    if eigensolution.eigenvectors is None or len(eigensolution.eigenvalues) < 2:
        failures.append("eigensolution-incomplete")
        return PerronFrobeniusReport(
            nonnegative=ok_nn, irreducible=ok_irr, simple=False, relative_gap=np.nan,
            strictly_positive=False, min_component=np.nan,
            in_symmetric_subspace=False, subspace_defect=np.nan,
            precondition_failures=tuple(failures),
        )

    lam = eigensolution.eigenvalues
    gap = float(lam[1] - lam[0])
    rel_gap = gap / max(1.0, abs(float(lam[0])))
    simple = rel_gap > gap_tol

    v = eigensolution.eigenvectors[:, 0].copy()
    if v[np.argmax(np.abs(v))] < 0:
        v = -v
    min_comp = float(v.min())
    positive = min_comp > 0.0

    if smap is None:
        smap = build_subspace_map(m.params.N)
    defect = float(np.linalg.norm(v - symmetrize_lift(project_symmetric(v, smap), smap)))
    in_subspace = defect <= subspace_tol

    return PerronFrobeniusReport(
        nonnegative=ok_nn, irreducible=ok_irr, simple=simple, relative_gap=rel_gap,
        strictly_positive=positive, min_component=min_comp,
        in_symmetric_subspace=in_subspace, subspace_defect=defect,
        precondition_failures=tuple(failures),
    )


def dense_eig(m: DenseHamiltonian, residual_tol: float = 1e-10) -> Spectrum:
    """Full dense eigendecomposition with per-pair residual certification
    ||mv - lambda v|| <= residual_tol * ||m||."""
    if m.dim > (1 << DENSE_N_CAP):
        raise CapacityError(f"dimension {m.dim} exceeds 2^{DENSE_N_CAP}")
    try:
        lam, vec = np.linalg.eigh(m.entries)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise SolverError(f"dense eigensolver failed to converge: {exc}") from exc
    # sign fix: largest-magnitude component positive, for determinism
    flip = vec[np.argmax(np.abs(vec), axis=0), np.arange(vec.shape[1])] < 0
    vec[:, flip] *= -1.0
    scale = float(np.max(np.abs(lam))) if len(lam) else 0.0
    residuals = np.linalg.norm(m.entries @ vec - vec * lam, axis=0)
    bound = residual_tol * max(scale, 1e-300)
    if np.any(residuals > bound):
        worst = int(np.argmax(residuals))
        raise SolverError(
            f"dense residual {residuals[worst]:.3e} at pair {worst} exceeds {bound:.3e}"
        )
    return Spectrum(eigenvalues=lam, eigenvectors=vec, residuals=residuals)


def lowest_pairs_sparse(m: DenseHamiltonian, k: int = 2) -> Spectrum:
    """Lowest k eigenpairs via a sparse Lanczos solve.

    Plumbing for the oracle checks at N = 11..12 where a full dense solve is
    wasteful; the one-bit-flip structure makes h_N extremely sparse.
    """
    from scipy.sparse import csr_matrix
    from scipy.sparse.linalg import eigsh

    a = csr_matrix(m.entries)
    try:
        lam, vec = eigsh(a, k=k, which="SA", tol=0)
    except Exception as exc:  # pragma: no cover - ARPACK failure
        raise SolverError(f"sparse eigensolver failed: {exc}") from exc
    order = np.argsort(lam)
    lam, vec = lam[order], vec[:, order]
    flip = vec[np.argmax(np.abs(vec), axis=0), np.arange(vec.shape[1])] < 0
    vec[:, flip] *= -1.0
    residuals = np.linalg.norm(a @ vec - vec * lam, axis=0)
    return Spectrum(eigenvalues=lam, eigenvectors=vec, residuals=residuals)


def lift_matrix(smap: SymmetricSubspaceMap) -> np.ndarray:
    """The 2^N x (N+1) isometry whose columns are the lifted orbit basis
    vectors; its transpose is the projection."""
    u = np.zeros((smap.dim, smap.N + 1))
    u[np.arange(smap.dim), smap.orbit_of_index] = smap.norms[smap.orbit_of_index]
    return u


def reduction_residual(m: DenseHamiltonian, tri, smap: SymmetricSubspaceMap | None = None) -> float:
    """Certificate that tri is the restriction of the dense matrix to the
    symmetric subspace: max entry of |H U - U A|, where U is the lift
    isometry and A is tri carried to orbit (popcount) order by index
    reversal.  Zero in exact arithmetic when the reduction is correct."""
    if smap is None:
        smap = build_subspace_map(m.params.N)
    if tri.size != smap.N + 1:
        raise DimensionError(
            f"tridiagonal size {tri.size} does not match subspace dimension {smap.N + 1}"
        )
    u = lift_matrix(smap)
    diag_o, off_o = tri.diag[::-1], tri.off[::-1]
    a_small = np.diag(diag_o) + np.diag(off_o, 1) + np.diag(off_o, -1)
    return float(np.max(np.abs(m.entries @ u - u @ a_small)))


def restrict_spectrum(
    m: DenseHamiltonian,
    smap: SymmetricSubspaceMap | None = None,
    spectrum: Spectrum | None = None,
    cluster_tol: float | None = None,
) -> np.ndarray:
    """Eigenvalues of the dense matrix belonging to the symmetric subspace.

    Within a degenerate cluster the solver's eigenvectors mix sectors
    arbitrarily, so membership is decided per cluster: the number of
    symmetric-sector levels in a cluster is the rank of the projected
    block, counted by singular values (0 or 1 up to rounding, threshold
    1/2).  Passing a precomputed full dense spectrum avoids a second
    factorization.
    """
    if smap is None:
        smap = build_subspace_map(m.params.N)
    sp = spectrum if spectrum is not None else dense_eig(m)
    if sp.eigenvectors is None or sp.eigenvectors.shape != (m.dim, m.dim):
        raise DimensionError("restrict_spectrum needs a full dense eigendecomposition")
    lam = sp.eigenvalues
    if cluster_tol is None:
        scale = float(np.max(np.abs(lam))) if len(lam) else 1.0
        cluster_tol = 1e3 * np.finfo(float).eps * max(1.0, scale)
    u = lift_matrix(smap)
    picked: list[float] = []
    for sl in cluster_slices(lam, cluster_tol):
        overlaps = np.linalg.svd(u.T @ sp.eigenvectors[:, sl], compute_uv=False)
        rank = int(np.sum(overlaps > 0.5))
        picked.extend(lam[sl][:rank])
    return np.sort(np.asarray(picked))
