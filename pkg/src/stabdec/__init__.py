"""Decide stability of relations definable in (Q,<) and (Q,+,<)."""
from .formula import (
    DLO, DOAG, Partition, Problem, evaluate, eval_quantified_oracle, parse, parse_formula,
)
from .qe import eliminate_quantifiers
from .polyhedra import Cell, SemilinearSet, dimension, equivalent
from .equational import equational_closure, split_modulo
from .stability import (
    LadderWitness, SpecialStablePiece, StabilityVerdict, analyze, analyze_set,
    essential_boundary, grid_decompose, make_ladder,
)
from .oracle import ResourceLimit, ladder_exists, verify_decomposition, verify_ladder

__all__ = [
    "DLO", "DOAG", "Partition", "Problem", "evaluate", "eval_quantified_oracle", "parse",
    "parse_formula", "eliminate_quantifiers", "Cell", "SemilinearSet", "dimension",
    "equivalent", "equational_closure", "split_modulo", "LadderWitness",
    "SpecialStablePiece", "StabilityVerdict", "analyze", "analyze_set",
    "essential_boundary", "grid_decompose", "make_ladder", "ResourceLimit",
    "ladder_exists", "verify_decomposition", "verify_ladder",
]
