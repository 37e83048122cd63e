"""Solver for the convex precoder and zero-forcer subproblems."""

from rcrm_ia.cvxsolve.problem import (
    AffineMap,
    VariableLayout,
    NuclearLmiProblem,
    compile_affine,
    dump_problem,
)
from rcrm_ia.cvxsolve.admm import solve, project_lmi
from rcrm_ia.cvxsolve.subproblems import (
    build_precoder_problem,
    build_zeroforcer_problem,
    cellular_masks,
    solve_precoders,
    solve_precoders_cellular,
    solve_zeroforcers,
)
from rcrm_ia.cvxsolve.oracle import grid_oracle_precoders, grid_oracle_zeroforcers

__all__ = [
    "AffineMap",
    "VariableLayout",
    "NuclearLmiProblem",
    "compile_affine",
    "dump_problem",
    "solve",
    "project_lmi",
    "build_precoder_problem",
    "build_zeroforcer_problem",
    "cellular_masks",
    "solve_precoders",
    "solve_precoders_cellular",
    "solve_zeroforcers",
    "grid_oracle_precoders",
    "grid_oracle_zeroforcers",
]
