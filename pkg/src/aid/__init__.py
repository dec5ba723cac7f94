"""Quantity- and ratio-approximate inclusion dependencies over finite teams."""

from .model import QuantityAtom, RatioAtom, Team, project, validate_atom, varseq
from .semantics import (
    deficiency,
    minimal_quantity,
    minimal_ratio,
    satisfies,
    satisfies_quantity,
    satisfies_ratio,
)
from .io import parse_atom, read_team, write_team
from .implication import Implied, NotImplied, Unknown, decide, decide_quantity, decide_ratio

__version__ = "0.1.0"

__all__ = [
    "Implied",
    "NotImplied",
    "QuantityAtom",
    "RatioAtom",
    "Team",
    "Unknown",
    "decide",
    "decide_quantity",
    "decide_ratio",
    "deficiency",
    "minimal_quantity",
    "minimal_ratio",
    "parse_atom",
    "project",
    "read_team",
    "satisfies",
    "satisfies_quantity",
    "satisfies_ratio",
    "validate_atom",
    "varseq",
    "write_team",
]
