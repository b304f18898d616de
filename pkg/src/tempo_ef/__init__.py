"""MTL and TPTL over non-monotonic data words, with quantitative EF games."""

from .corpus import FAMILIES, Family, FamilyParams, family, run_claim
from .enumerate import EnumBudget, enumerate_formulas, find_distinguisher
from .evaluate import eval_mtl, eval_tptl, satisfies
from .formulas import FragmentSpec, mtl_to_tptl1, size, until_rank
from .games import (
    MtlGameConfig,
    MtlGamePosition,
    Player,
    StrategyTree,
    TptlGameConfig,
    TptlGamePosition,
    extract_formula,
    extract_formula_tptl,
    solve_mg,
    solve_tg,
    verify_duplicator_strategy,
)
from .parser import ParseError, parse_formula, parse_mtl, parse_tptl, to_text
from .words import (
    ArithLassoWord,
    ConstantSet,
    DataPoint,
    FiniteDataWord,
    Interval,
    load_word,
    same_region,
    save_word,
)

__version__ = "0.1.0"
