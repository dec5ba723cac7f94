"""Teams, variable sequences, bounds and atoms.

A team is a finite *set* of assignments over a fixed set of variables.  Values
are opaque strings compared by exact equality.  Approximation bounds are plain
``int`` for quantity atoms and :class:`fractions.Fraction` for ratio atoms, so
all arithmetic stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    ArityMismatch,
    BoundOutOfRange,
    DuplicateVariableInSequence,
    EmptySequence,
    InvalidVariableName,
    MixedAssumptionKinds,
    UnknownVariable,
)

RESERVED_CHARS = frozenset("();,/")

Variable = str
VarSeq = tuple  # tuple[Variable, ...], duplicate free
Value = str
Row = tuple  # tuple[Value, ...], aligned with Team.variables


def check_variable(name: str) -> str:
    if not isinstance(name, str) or not name:
        raise InvalidVariableName(f"variable names must be non-empty strings, got {name!r}")
    if any(ch.isspace() or ch in RESERVED_CHARS for ch in name):
        raise InvalidVariableName(f"variable name {name!r} contains whitespace or one of ( ) ; , /")
    return name


def varseq(names: Union[str, Iterable[str]]) -> VarSeq:
    """Build a validated variable sequence.

    A string is split on commas, so ``varseq("x1,x2")`` and
    ``varseq(["x1", "x2"])`` are the same sequence.
    """
    if isinstance(names, str):
        names = [part.strip() for part in names.split(",")] if names.strip() else []
    seq = tuple(check_variable(n) for n in names)
    if len(set(seq)) != len(seq):
        raise DuplicateVariableInSequence(f"variable repeated in sequence {seq}")
    return seq


def as_fraction(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError("ratio bounds must be exact; pass a Fraction, int or 'a/b' string")
    return Fraction(value)


def _check_sides(lhs, rhs):
    for side in (lhs, rhs):
        if len(side) == 0:
            raise EmptySequence("atoms need non-empty variable sequences")
        if len(set(side)) != len(side):
            raise DuplicateVariableInSequence(f"variable repeated in sequence {tuple(side)}")
        for name in side:
            check_variable(name)
    if len(lhs) != len(rhs):
        raise ArityMismatch(f"arity mismatch: {len(lhs)} vs {len(rhs)}")


@dataclass(frozen=True)
class QuantityAtom:
    """``lhs ⊆_bound rhs``: at most ``bound`` value tuples of lhs are missing from rhs."""

    lhs: VarSeq
    rhs: VarSeq
    bound: int

    kind = "q"

    def __post_init__(self):
        object.__setattr__(self, "lhs", tuple(self.lhs))
        object.__setattr__(self, "rhs", tuple(self.rhs))
        validate_atom(self)

    @property
    def arity(self) -> int:
        return len(self.lhs)

    def with_sides(self, lhs, rhs, bound=None) -> "QuantityAtom":
        return QuantityAtom(lhs, rhs, self.bound if bound is None else bound)

    def __str__(self):
        return f"qinc({','.join(self.lhs)}; {','.join(self.rhs)}; {self.bound})"


@dataclass(frozen=True)
class RatioAtom:
    """``lhs ⊆_bound rhs`` where at most ``bound * |T|`` tuples may be missing."""

    lhs: VarSeq
    rhs: VarSeq
    bound: Fraction

    kind = "r"

    def __post_init__(self):
        object.__setattr__(self, "lhs", tuple(self.lhs))
        object.__setattr__(self, "rhs", tuple(self.rhs))
        object.__setattr__(self, "bound", as_fraction(self.bound))
        validate_atom(self)

    @property
    def arity(self) -> int:
        return len(self.lhs)

    def with_sides(self, lhs, rhs, bound=None) -> "RatioAtom":
        return RatioAtom(lhs, rhs, self.bound if bound is None else bound)

    def __str__(self):
        return f"rinc({','.join(self.lhs)}; {','.join(self.rhs)}; {format_ratio(self.bound)})"


Atom = Union[QuantityAtom, RatioAtom]


def format_ratio(p: Fraction) -> str:
    return str(p.numerator) if p.denominator == 1 else f"{p.numerator}/{p.denominator}"


def validate_atom(atom) -> None:
    """Raise if ``atom`` breaks the side conditions; return ``None`` otherwise.

    Checks non-empty duplicate-free sides of equal length, a natural bound for
    quantity atoms and a bound in [0, 1] for ratio atoms.
    """
    _check_sides(atom.lhs, atom.rhs)
    bound = atom.bound
    if getattr(atom, "kind", None) == "q":
        if isinstance(bound, bool) or not isinstance(bound, int) or bound < 0:
            raise BoundOutOfRange(f"quantity bound must be a natural number, got {bound!r}")
    else:
        if not isinstance(bound, Fraction) or not (0 <= bound <= 1):
            raise BoundOutOfRange(f"ratio bound must lie in [0, 1], got {bound}")


def assumption_kind(atoms: Sequence[Atom], goal: Atom | None = None) -> str | None:
    """Return ``"q"`` or ``"r"`` for a homogeneous atom collection (``None`` if empty)."""
    kinds = {a.kind for a in atoms}
    if goal is not None:
        kinds.add(goal.kind)
    if len(kinds) > 1:
        raise MixedAssumptionKinds("quantity and ratio atoms cannot be mixed")
    return kinds.pop() if kinds else None


def variables_of(atoms: Iterable[Atom]) -> list[Variable]:
    """Variables mentioned by ``atoms`` in first-occurrence order."""
    seen = {}
    for atom in atoms:
        for v in atom.lhs + atom.rhs:
            seen.setdefault(v, None)
    return list(seen)


class Team:
    """An immutable finite set of assignments over ``variables``.

    Rows are stored as value tuples aligned with ``variables``.  Duplicate rows
    collapse on construction; ``duplicates_dropped`` records how many did.
    """

    __slots__ = ("variables", "rows", "duplicates_dropped", "_index")

    def __init__(self, variables: Iterable[Variable], rows: Iterable[Sequence[Value]] = ()):
        variables = tuple(variables)
        for v in variables:
            check_variable(v)
        if len(set(variables)) != len(variables):
            raise DuplicateVariableInSequence(f"team variables repeat: {variables}")
        rows = [tuple(str(value) for value in row) for row in rows]
        for row in rows:
            if len(row) != len(variables):
                raise ArityMismatch(f"row {row} does not match variables {variables}")
        unique = frozenset(rows)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "rows", unique)
        object.__setattr__(self, "duplicates_dropped", len(rows) - len(unique))
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(variables)})

    def __setattr__(self, name, value):
        raise AttributeError("Team is immutable")

    @classmethod
    def from_assignments(cls, assignments: Iterable[Mapping[Variable, Value]], variables=None) -> "Team":
        assignments = list(assignments)
        if variables is None:
            variables = sorted({v for s in assignments for v in s})
        variables = tuple(variables)
        rows = []
        for s in assignments:
            if set(s) != set(variables):
                raise ArityMismatch(f"assignment domain {sorted(s)} differs from {sorted(variables)}")
            rows.append(tuple(s[v] for v in variables))
        return cls(variables, rows)

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def positions(self, seq: Sequence[Variable]) -> tuple[int, ...]:
        try:
            return tuple(self._index[v] for v in seq)
        except KeyError as exc:
            raise UnknownVariable(f"variable {exc.args[0]!r} is not in the team") from None

    def assignments(self) -> list[dict]:
        return [dict(zip(self.variables, row)) for row in self.sorted_rows()]

    def sorted_rows(self) -> list[Row]:
        return sorted(self.rows)

    def restrict(self, variables: Sequence[Variable]) -> "Team":
        idx = self.positions(variables)
        return Team(variables, (tuple(row[i] for i in idx) for row in self.rows))

    def union(self, other: "Team") -> "Team":
        if set(self.variables) != set(other.variables):
            raise ArityMismatch("union needs teams over the same variables")
        idx = other.positions(self.variables)
        return Team(self.variables, list(self.rows) + [tuple(r[i] for i in idx) for r in other.rows])

    def _canonical(self):
        order = sorted(range(len(self.variables)), key=self.variables.__getitem__)
        return (
            tuple(self.variables[i] for i in order),
            frozenset(tuple(row[i] for i in order) for row in self.rows),
        )

    def __eq__(self, other):
        if not isinstance(other, Team):
            return NotImplemented
        return self._canonical() == other._canonical()

    def __hash__(self):
        return hash(self._canonical())

    def __repr__(self):
        return f"Team(variables={self.variables!r}, rows={len(self.rows)})"


def project(team: Team, seq: Sequence[Variable]) -> set[tuple]:
    """The value set ``T[seq] = {s(seq) | s in T}``."""
    idx = team.positions(seq)
    return {tuple(row[i] for i in idx) for row in team.rows}
