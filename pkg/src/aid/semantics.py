"""Model checking of approximate inclusion atoms on a team."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import ArityMismatch
from .model import Atom, QuantityAtom, RatioAtom, Team, Variable, project


def deficiency(team: Team, lhs: Sequence[Variable], rhs: Sequence[Variable]) -> int:
    """Number of value tuples of ``lhs`` that never occur as a value tuple of ``rhs``."""
    if len(lhs) != len(rhs):
        raise ArityMismatch(f"arity mismatch: {len(lhs)} vs {len(rhs)}")
    return len(project(team, lhs) - project(team, rhs))


def satisfies_quantity(team: Team, atom: QuantityAtom) -> bool:
    return deficiency(team, atom.lhs, atom.rhs) <= atom.bound


def satisfies_ratio(team: Team, atom: RatioAtom) -> bool:
    # cross-multiplied: missing <= p * |T|
    missing = deficiency(team, atom.lhs, atom.rhs)
    return missing * atom.bound.denominator <= atom.bound.numerator * len(team)


def satisfies(team: Team, atom: Atom) -> bool:
    if atom.kind == "q":
        return satisfies_quantity(team, atom)
    return satisfies_ratio(team, atom)


def minimal_quantity(team: Team, lhs, rhs) -> int:
    """Smallest ``n`` with ``team ⊨ lhs ⊆_n rhs``."""
    return deficiency(team, lhs, rhs)


def minimal_ratio(team: Team, lhs, rhs) -> Fraction:
    """Smallest ``p`` with ``team ⊨ lhs ⊆_p rhs``; 0 for the empty team."""
    missing = deficiency(team, lhs, rhs)
    if not team.rows:
        return Fraction(0)
    return Fraction(missing, len(team))


def violated(team: Team, atoms: Sequence[Atom]) -> list[Atom]:
    return [a for a in atoms if not satisfies(team, a)]


def is_counterexample(team: Team, sigma: Sequence[Atom], goal: Atom) -> bool:
    """True when ``team`` satisfies every atom of ``sigma`` and falsifies ``goal``."""
    return not violated(team, sigma) and not satisfies(team, goal)
