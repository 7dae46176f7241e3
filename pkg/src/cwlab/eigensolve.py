"""Symmetric tridiagonal eigensolver with certified residuals.

The lowest-k path uses LAPACK bisection on Sturm sequences (stebz) plus
inverse iteration with cluster reorthogonalization (stein), which is what
``scipy.linalg.eigh_tridiagonal(select='i')`` dispatches to.  On top of
that this module certifies residuals, fixes signs deterministically, and
applies a cluster policy for numerically degenerate pairs:

``raw``
    vectors exactly as inverse iteration returns them.  Inside a cluster
    degenerate to machine precision any orthonormal basis of the cluster
    span is a valid answer, so raw vectors are an arbitrary mixture, which
    is itself a phenomenon worth reproducing.
``symmetrized``
    vectors inside each cluster are rotated into the eigenbasis of the
    index-reversal operator restricted to the cluster span, giving the
    deterministic symmetric/antisymmetric representatives (meaningful for
    reversal-invariant matrices such as the unperturbed model).  When the
    matrix is exactly reversal-invariant, each vector is additionally
    snapped to its dominant parity component: isolated eigenvectors of a
    persymmetric tridiagonal are exactly even or odd, but near a machine-
    degenerate pair inverse iteration returns them polluted by an
    eps*||T||/gap admixture of the partner that the cluster tolerance
    cannot see.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import ParameterError, SolverError
from .tridiag import TridiagonalMatrix

__all__ = [
    "Spectrum",
    "eig_lowest",
    "eig_full",
    "splitting",
    "sturm_count",
    "cluster_slices",
    "CLUSTER_TOL_FACTOR",
    "RESIDUAL_TOL",
]

# eigenvalues closer than CLUSTER_TOL_FACTOR * eps * ||T|| form one cluster
CLUSTER_TOL_FACTOR = 1e3
RESIDUAL_TOL = 1e-10

_POLICIES = ("raw", "symmetrized")


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues with optional orthonormal eigenvector columns
    and per-pair residuals ||Tv - lambda v||."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None
    residuals: np.ndarray | None = None

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float)
        object.__setattr__(self, "eigenvalues", lam)
        if np.any(np.diff(lam) < 0):
            raise SolverError("eigenvalues not in ascending order")

    def __len__(self) -> int:
        return len(self.eigenvalues)


def _sign_fix(vec: np.ndarray) -> np.ndarray:
    """Scale each column so its largest-magnitude entry is positive."""
    flip = vec[np.argmax(np.abs(vec), axis=0), np.arange(vec.shape[1])] < 0
    vec[:, flip] *= -1.0
    return vec


def cluster_slices(eigenvalues: np.ndarray, tol: float) -> list[slice]:
    """Group consecutive eigenvalues with gaps <= tol into slices."""
    lam = np.asarray(eigenvalues, dtype=float)
    out, start = [], 0
    for i in range(1, len(lam)):
        if lam[i] - lam[i - 1] > tol:
            out.append(slice(start, i))
            start = i
    out.append(slice(start, len(lam)))
    return out


def _symmetrize_clusters(vec: np.ndarray, lam: np.ndarray, tol: float) -> np.ndarray:
    """Rotate each degenerate cluster into the index-reversal eigenbasis.

    Within a cluster the span is all the solver determines; the reversal
    operator R restricted to that span (the small matrix V^T R V) is
    diagonalized and the vectors rotated accordingly, ordered with the
    R-antisymmetric representative last inside the cluster.
    """
    for sl in cluster_slices(lam, tol):
        if sl.stop - sl.start < 2:
            continue
        v = vec[:, sl]
        r = v[::-1, :].T @ v  # R restricted to the cluster span
        r = 0.5 * (r + r.T)
        _, u = np.linalg.eigh(r)
        # eigh orders the R-eigenvalues ascending (-1 before +1); flip so the
        # even representative keeps the lower position, matching the exact
        # ordering of tunneling pairs (symmetric state below antisymmetric)
        vec[:, sl] = v @ u[:, ::-1]
    return vec


def _parity_project(vec: np.ndarray) -> np.ndarray:
    """Replace each column by its dominant index-reversal parity component.

    Valid only for exactly reversal-invariant matrices, whose isolated
    eigenvectors have definite parity; the minority component is solver
    noise.  Columns without a clear majority (only possible inside an
    unrotated cluster) are left alone.
    """
    even = 0.5 * (vec + vec[::-1, :])
    odd = vec - even
    ne = np.sum(even * even, axis=0)
    no = np.sum(odd * odd, axis=0)
    majority = np.maximum(ne, no) >= 0.6 * (ne + no)
    keep_even = ne >= no
    return np.where(
        majority & keep_even, even, np.where(majority & ~keep_even, odd, vec)
    )


def _finish(
    m: TridiagonalMatrix,
    lam: np.ndarray,
    vec: np.ndarray | None,
    policy: str,
) -> Spectrum:
    if vec is None:
        return Spectrum(eigenvalues=lam)
    norm = m.norm_inf()
    if policy == "symmetrized":
        vec = _symmetrize_clusters(vec, lam, CLUSTER_TOL_FACTOR * np.finfo(float).eps * norm)
        if np.array_equal(m.diag, m.diag[::-1]) and np.array_equal(m.off, m.off[::-1]):
            vec = _parity_project(vec)
    nrm = np.linalg.norm(vec, axis=0)
    vec = vec / nrm
    vec = _sign_fix(vec)
    residuals = np.array(
        [np.linalg.norm(m.matvec(vec[:, i]) - lam[i] * vec[:, i]) for i in range(len(lam))]
    )
    bound = RESIDUAL_TOL * (np.abs(lam) + norm)
    if np.any(residuals > bound):
        worst = int(np.argmax(residuals - bound))
        raise SolverError(
            f"residual {residuals[worst]:.3e} for eigenvalue {lam[worst]:.6g} "
            f"exceeds the contract {bound[worst]:.3e}"
        )
    return Spectrum(eigenvalues=lam, eigenvectors=vec, residuals=residuals)


def eig_lowest(
    m: TridiagonalMatrix,
    k: int,
    want_vectors: bool = True,
    policy: str = "raw",
) -> Spectrum:
    """Lowest k eigenpairs by bisection + inverse iteration."""
    if policy not in _POLICIES:
        raise ParameterError(f"unknown cluster policy {policy!r}; choose from {_POLICIES}")
    if not 1 <= k <= m.size:
        raise ParameterError(f"k must satisfy 1 <= k <= {m.size}, got {k}")
    if m.size == 1:
        lam = m.diag.copy()
        vec = None if not want_vectors else np.ones((1, 1))
        return _finish(m, lam, vec, policy)
    try:
        out = eigh_tridiagonal(
            m.diag, m.off,
            eigvals_only=not want_vectors,
            select="i", select_range=(0, k - 1),
        )
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"inverse iteration failed on the lowest-{k} cluster: {exc}") from exc
    if want_vectors:
        lam, vec = out
    else:
        lam, vec = out, None
    return _finish(m, lam, vec, policy)


def eig_full(
    m: TridiagonalMatrix,
    want_vectors: bool = True,
    policy: str = "raw",
) -> Spectrum:
    """Full spectrum (and optionally all eigenvectors)."""
    if policy not in _POLICIES:
        raise ParameterError(f"unknown cluster policy {policy!r}; choose from {_POLICIES}")
    if m.size == 1:
        return _finish(m, m.diag.copy(), np.ones((1, 1)) if want_vectors else None, policy)
    try:
        out = eigh_tridiagonal(m.diag, m.off, eigvals_only=not want_vectors)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"tridiagonal eigensolver failed: {exc}") from exc
    if want_vectors:
        lam, vec = out
    else:
        lam, vec = out, None
    return _finish(m, lam, vec, policy)


def splitting(m: TridiagonalMatrix) -> float:
    """Gap |lambda_1 - lambda_0| between the two lowest eigenvalues."""
    if m.size < 2:
        raise ParameterError("splitting needs a matrix of size >= 2")
    lam = eig_lowest(m, 2, want_vectors=False).eigenvalues
    return abs(float(lam[1] - lam[0]))


def sturm_count(m: TridiagonalMatrix, mu: float) -> int:
    """Number of eigenvalues strictly below mu, by the Sturm sign-change
    count of the shifted LDL^T pivots.

    Independent of LAPACK; used to cross-check the solver's eigenvalue
    counts in property tests.
    """
    d, e = m.diag, m.off
    tiny = np.finfo(float).tiny / np.finfo(float).eps
    count = 0
    q = d[0] - mu
    if q < 0:
        count += 1
    for i in range(1, len(d)):
        denom = q if q != 0.0 else -tiny
        q = (d[i] - mu) - e[i - 1] * e[i - 1] / denom
        if q < 0:
            count += 1
    return count
