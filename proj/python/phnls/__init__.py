"""NLS with partial harmonic confinement.

Thin re-export of the compiled core. Fields are complex arrays of shape
(hermite_modes, *z_points) with y slowest.
"""

from ._core import (
    B_ab,
    CollapseToZero,
    Field,
    Grid,
    J_ab,
    ModelParams,
    NonConvergence,
    ValidationError,
    classify,
    detect,
    evaluate,
    evolve,
    exponents,
    galilean_boost,
    gaussian,
    linear_decay,
    linear_evolve,
    parse_config,
    petviashvili,
    profile_B1_norm,
    random_field,
    read_field,
    run_classify,
    run_evolve,
    run_ground_state,
    run_linear_decay,
    run_sweep,
    write_field,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
