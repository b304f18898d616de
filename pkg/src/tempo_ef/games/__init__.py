"""Ehrenfeucht-Fraisse games for MTL and TPTL."""

from .core import GameError, MissingBranch, Move, Player, StrategyNode, StrategyTree
from .mtl import (
    IdentityStrategy,
    MtlGameConfig,
    MtlGamePosition,
    SolvedStrategy,
    extract_formula,
    refute_duplicator_strategy,
    solve_mg,
    verify_duplicator_strategy,
)
from .tptl import (
    TptlGameConfig,
    TptlGamePosition,
    atomic_agree,
    extract_formula_tptl,
    solve_tg,
)
