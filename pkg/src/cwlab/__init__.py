"""Finite-size Curie-Weiss spin model and its double-well reduction.

The library builds the mean-field spin Hamiltonian restricted to the
permutation-symmetric subspace (a symmetric tridiagonal matrix), the
matching discretized double-well Schrodinger operator, and compactly
supported bump perturbations that break the symmetry.  Analysis helpers
measure tunneling splittings, peak widths, localization, magnetization,
and harmonic-ladder fits; a small dense oracle cross-validates the
reduction at low spin counts.
"""

from .analysis import (
    GaussianFitReport,
    LocalizationReport,
    SplittingCurve,
    collapse_degenerate_pairs,
    gaussian_compare,
    harmonic_fit,
    localization_report,
    spectrum_compare,
    splitting_curve,
    width_half_height,
)
from .eigensolve import (
    Spectrum,
    cluster_slices,
    eig_full,
    eig_lowest,
    splitting,
    sturm_count,
)
from .errors import (
    AmbiguityError,
    CapacityError,
    CwlabError,
    DimensionError,
    DomainError,
    ParameterError,
    SolverError,
)
from .params import FleaParams, ModelParams
from .schrodinger import (
    AgmonReport,
    GridMap,
    PotentialProfile,
    TwoLevelModel,
    agmon_distance,
    build_potential_profile,
    build_schrodinger_tridiag,
    classify_flea_regime,
    closed_form_length,
    grid_spacing,
    gridmap_for,
    interval_coordinate,
    inverse_interval_coordinate,
    limit_potential,
    potential_minima,
    potential_minimum_on_grid,
    potential_vn,
    recover_grid_spacing,
    shifted_limit_potential,
    two_level,
)
from .spin import (
    DenseHamiltonian,
    PerronFrobeniusReport,
    SymmetricSubspaceMap,
    build_dense_cw,
    build_subspace_map,
    check_irreducible,
    check_nonnegative,
    dense_eig,
    lift_matrix,
    lowest_pairs_sparse,
    perron_frobenius_verify,
    reduction_residual,
    restrict_spectrum,
    project_symmetric,
    symmetrize_lift,
    tridiag_to_orbit_order,
)
from .tridiag import (
    TridiagonalMatrix,
    apply_flea,
    build_tridiag_cw,
    field_bias,
    flea_bump,
    scale,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "CwlabError", "ParameterError", "DimensionError", "CapacityError",
    "DomainError", "SolverError", "AmbiguityError",
    # parameters
    "ModelParams", "FleaParams",
    # tridiagonal model
    "TridiagonalMatrix", "build_tridiag_cw", "scale", "flea_bump",
    "apply_flea", "field_bias",
    # dense spin oracle
    "DenseHamiltonian", "SymmetricSubspaceMap", "PerronFrobeniusReport",
    "build_dense_cw", "build_subspace_map", "symmetrize_lift",
    "project_symmetric", "tridiag_to_orbit_order", "check_nonnegative",
    "check_irreducible", "perron_frobenius_verify", "dense_eig",
    "lowest_pairs_sparse", "lift_matrix", "reduction_residual",
    "restrict_spectrum",
    # eigensolver
    "Spectrum", "eig_lowest", "eig_full", "splitting", "sturm_count",
    "cluster_slices",
    # double-well side
    "GridMap", "gridmap_for", "grid_spacing", "closed_form_length",
    "interval_coordinate", "inverse_interval_coordinate", "potential_vn",
    "limit_potential", "shifted_limit_potential", "potential_minima",
    "potential_minimum_on_grid", "PotentialProfile",
    "build_potential_profile", "build_schrodinger_tridiag",
    "recover_grid_spacing", "agmon_distance", "AgmonReport",
    "classify_flea_regime", "TwoLevelModel", "two_level",
    # analysis
    "SplittingCurve", "splitting_curve", "width_half_height",
    "LocalizationReport", "localization_report",
    "collapse_degenerate_pairs", "harmonic_fit", "spectrum_compare",
    "GaussianFitReport", "gaussian_compare",
]
