"""Sorting permutations by strip swaps and block moves.

Exact distance solvers, the cage/hinge reduction from block sorting to
strip-swap sorting, schedule projection, and an exhaustive experiment
harness for small instances.
"""

from stripsort.perm import (
    Permutation,
    PermutationError,
    ReversalProfile,
    Strip,
    StripDecomposition,
    identity,
    lower_bound_rev,
    lower_bound_strips,
    parse_permutation,
    rev,
    strips,
)
from stripsort.moves import (
    BlockMove,
    MoveError,
    Schedule,
    ScheduleError,
    StripSwap,
    apply_block_move,
    apply_schedule,
    apply_strip_swap,
    enumerate_block_moves,
    enumerate_strip_swaps,
)
from stripsort.solvers import (
    BudgetExhausted,
    DistanceResult,
    Verdict,
    bs_exact,
    block_bfs_oracle,
    greedy_upper_bound,
    has_exact_swap_schedule,
    has_perfect_block_schedule,
    ssd_bfs_oracle,
    ssd_exact,
)
from stripsort.reduction import (
    CompatibilityViolation,
    GadgetInstance,
    ProjectionError,
    build_dagger,
    project_schedule,
    verify_instance,
)

__version__ = "0.1.0"

__all__ = [
    "BlockMove",
    "BudgetExhausted",
    "CompatibilityViolation",
    "DistanceResult",
    "GadgetInstance",
    "MoveError",
    "Permutation",
    "PermutationError",
    "ProjectionError",
    "ReversalProfile",
    "Schedule",
    "ScheduleError",
    "Strip",
    "StripDecomposition",
    "StripSwap",
    "Verdict",
    "apply_block_move",
    "apply_schedule",
    "apply_strip_swap",
    "block_bfs_oracle",
    "bs_exact",
    "build_dagger",
    "enumerate_block_moves",
    "enumerate_strip_swaps",
    "greedy_upper_bound",
    "has_exact_swap_schedule",
    "has_perfect_block_schedule",
    "identity",
    "lower_bound_rev",
    "lower_bound_strips",
    "parse_permutation",
    "project_schedule",
    "rev",
    "ssd_bfs_oracle",
    "ssd_exact",
    "strips",
    "verify_instance",
]
