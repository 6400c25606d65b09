"""pathgap: spectral gaps of discrete Schrodinger operators on path graphs.

Builds tridiagonal Hamiltonians (path Laplacian plus a compactly supported
potential), computes their low-lying spectrum with a certified bisection
eigensolver, evaluates analytic two-sided eigenvalue bounds, and runs the
volume sweeps behind the n^-3 gap-scaling law.
"""
from .bounds import (
    BoundCheck,
    BoundsReport,
    SideCorrections,
    TrialState,
    build_trial_state,
    compute_side_corrections,
    cosine_pieces,
    evaluate_bounds,
    excited_energy_bounds,
    ground_energy_lower_bound,
    ground_energy_upper_bound,
    mixing_weight_product,
    side_correction_product,
    single_site_diagnostics,
)
from .eigensolver import (
    ConvergenceError,
    PositivityError,
    SpectralResult,
    dirichlet_ground_energy,
    eigenvalue,
    free_spectrum,
    ground_state,
    spectrum_low,
    sturm_count,
)
from .operators import (
    PathGraph,
    Potential,
    TridiagonalOperator,
    apply_operator,
    assemble_hamiltonian,
    build_path,
    build_potential,
    quadratic_form,
    rayleigh_quotient,
)
from .scaling import (
    GapPoint,
    GapSeries,
    ScalingFit,
    cubic_band_check,
    fit_inverse_alpha,
    fit_power_law,
    gap_series,
    geometric_grid,
    linear_grid,
    scaled_sequence,
    series_from_csv,
    series_to_csv,
)

__version__ = "0.1.0"
