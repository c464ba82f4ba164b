"""hr-adaptive moving mesh solver for the 1D cubic Schrodinger equation."""

from ._core import (
    RunResult,
    Snapshot,
    SolverError,
    compare_with_reference,
    conserved_quantities,
    config_text,
    curvature_root,
    emit_results,
    equidistribute,
    eta,
    exact_soliton,
    monitor,
    presets,
    run,
    sdirk2_stability,
    smooth_monitor,
    solve_mesh_step,
    tolerance_sweep,
)

__all__ = [
    "RunResult",
    "Snapshot",
    "SolverError",
    "compare_with_reference",
    "conserved_quantities",
    "config_text",
    "curvature_root",
    "emit_results",
    "equidistribute",
    "eta",
    "exact_soliton",
    "monitor",
    "presets",
    "run",
    "sdirk2_stability",
    "smooth_monitor",
    "solve_mesh_step",
    "tolerance_sweep",
]
