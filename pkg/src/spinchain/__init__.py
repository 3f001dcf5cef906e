"""Spin chains with nearest and range-n couplings: exact energies,
volume-constrained ground states, and their continuum limits."""

from .lattice import (
    EdgeKind,
    GridSet,
    SpinConfig,
    Window,
    column_heights,
    config_to_text,
    energy_decomposition,
    energy_open,
    energy_periodic,
    from_grid,
    full_columns,
    grid_energy,
    lambda_defect,
    parse_config,
    site_count,
    to_grid,
    volume,
)
from .continuum import (
    PiecewiseConstant,
    TauParams,
    boundary_term,
    continuum_energy,
    continuum_energy_periodic,
    periodic_cell_perimeter,
    total_variation,
)
from .classify import (
    MinimizerReport,
    ProblemParams,
    classify_open,
    classify_periodic,
    periodicity_defects,
    phase_diagram,
)
from .solve import (
    ColumnProfile,
    SolveResult,
    SolverGuardError,
    block_rearrange,
    brute_force_min,
    column_dp_min,
    periodic_min,
    profile_to_config,
)
from .recover import (
    RecoveryPlan,
    convergence_evidence,
    recovery_constrained,
    recovery_unconstrained,
)

__version__ = "0.1.0"
