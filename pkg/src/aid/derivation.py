"""Derivations in the quantity (Q1-Q5) and ratio (R1-R6) rule systems.

A derivation is a flat list of steps.  Each step names a rule, the indices of
earlier steps it uses as premises, and the atom it concludes.  Assumptions
enter through ``HYP`` steps that point at an index of the assumption list.

Rule shapes (``Q`` and ``R`` variants are identical except for the bound type):

    Q1/R1   x ⊆_0 x
    Q2/R2   x ⊆_n z, z ⊆_m y  /  x ⊆_{n+m} y
    Q3/R3   xyz ⊆_n uvw  /  xzy ⊆_n uwv        (|x| = |u|, |y| = |v|)
    Q4/R4   xy ⊆_n uv  /  x ⊆_n u
    Q5/R5   x ⊆_n y  /  x ⊆_m y                 (m >= n)
    R6      x ⊆_1 y
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import AidError, InvalidRuleInstance
from .model import Atom, QuantityAtom, RatioAtom, format_ratio

HYP = "HYP"
QUANTITY_RULES = ("Q1", "Q2", "Q3", "Q4", "Q5")
RATIO_RULES = ("R1", "R2", "R3", "R4", "R5", "R6")


@dataclass(frozen=True)
class Step:
    rule: str
    conclusion: Atom
    premises: tuple = ()
    source: Optional[int] = None  # assumption index, HYP steps only

    def __str__(self):
        if self.rule == HYP:
            why = f"assumption #{self.source}"
        elif self.premises:
            why = f"{self.rule} from " + ", ".join(f"({p})" for p in self.premises)
        else:
            why = self.rule
        return f"{self.conclusion}    [{why}]"


@dataclass(frozen=True)
class Derivation:
    steps: tuple = field(default_factory=tuple)

    @property
    def conclusion(self) -> Optional[Atom]:
        return self.steps[-1].conclusion if self.steps else None

    def rules_used(self) -> set[str]:
        return {s.rule for s in self.steps if s.rule != HYP}

    def __len__(self):
        return len(self.steps)

    def render(self) -> str:
        return "\n".join(f"({i}) {step}" for i, step in enumerate(self.steps))

    def to_dict(self) -> dict:
        return {
            "steps": [
                {
                    "rule": s.rule,
                    "premises": list(s.premises),
                    "source": s.source,
                    "conclusion": str(s.conclusion),
                }
                for s in self.steps
            ]
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "Derivation":
        from .io import parse_atom

        steps = []
        for raw in data["steps"]:
            steps.append(
                Step(
                    rule=raw["rule"],
                    conclusion=parse_atom(raw["conclusion"]),
                    premises=tuple(raw.get("premises", ())),
                    source=raw.get("source"),
                )
            )
        return cls(tuple(steps))


def block_swap(seq: tuple, start: int, stop: int) -> tuple:
    """``x y z -> x z y`` where ``y = seq[start:stop]``."""
    return seq[:start] + seq[stop:] + seq[start:stop]


def _is_block_swap(before: Atom, after: Atom) -> bool:
    n = before.arity
    if after.arity != n:
        return False
    for start in range(n + 1):
        for stop in range(start, n + 1):
            if (
                block_swap(before.lhs, start, stop) == after.lhs
                and block_swap(before.rhs, start, stop) == after.rhs
            ):
                return True
    return False


def _check_step(i: int, step: Step, sigma: Sequence[Atom], steps: Sequence[Step], kind: str):
    def fail(reason):
        raise InvalidRuleInstance(i, reason)

    c = step.conclusion
    if c.kind != kind:
        fail(f"conclusion {c} is not a {'quantity' if kind == 'q' else 'ratio'} atom")
    for p in step.premises:
        if not isinstance(p, int) or not 0 <= p < i:
            fail(f"premise {p!r} does not refer to an earlier step")
    prem = [steps[p].conclusion for p in step.premises]

    def arity_of_premises(count):
        if len(prem) != count:
            fail(f"{step.rule} takes {count} premise(s), got {len(prem)}")

    rule = step.rule
    if rule == HYP:
        arity_of_premises(0)
        if step.source is None or not 0 <= step.source < len(sigma):
            fail(f"assumption index {step.source!r} out of range")
        if sigma[step.source] != c:
            fail(f"assumption #{step.source} is {sigma[step.source]}, not {c}")
        return
    allowed = QUANTITY_RULES if kind == "q" else RATIO_RULES
    if rule not in allowed:
        fail(f"unknown rule {rule!r} for this atom kind")
    number = rule[1]
    if number == "1":
        arity_of_premises(0)
        if c.lhs != c.rhs:
            fail(f"{rule} needs identical sides")
        if c.bound != 0:
            fail(f"{rule} requires bound 0")
    elif number == "2":
        arity_of_premises(2)
        a, b = prem
        if a.rhs != b.lhs:
            fail(f"middle sequences differ: {a.rhs} vs {b.lhs}")
        if c.lhs != a.lhs or c.rhs != b.rhs:
            fail("conclusion sides must be the outer sides of the premises")
        if c.bound != a.bound + b.bound:
            fail(f"bound must be {a.bound + b.bound}, got {c.bound}")
    elif number == "3":
        arity_of_premises(1)
        if not _is_block_swap(prem[0], c):
            fail(f"{c} is not a block swap of {prem[0]}")
        if c.bound != prem[0].bound:
            fail(f"{rule} keeps the bound")
    elif number == "4":
        arity_of_premises(1)
        a = prem[0]
        k = c.arity
        if k > a.arity or a.lhs[:k] != c.lhs or a.rhs[:k] != c.rhs:
            fail(f"{c} is not a prefix projection of {a}")
        if c.bound != a.bound:
            fail(f"{rule} keeps the bound")
    elif number == "5":
        arity_of_premises(1)
        a = prem[0]
        if a.lhs != c.lhs or a.rhs != c.rhs:
            fail(f"{rule} keeps both sides")
        if c.bound < a.bound:
            fail(f"{rule} requires the new bound {c.bound} >= {a.bound}")
    elif number == "6":
        arity_of_premises(0)
        if c.bound != 1:
            fail("R6 concludes bound 1 only")


def replay_derivation(sigma: Sequence[Atom], derivation: Derivation, goal: Atom | None = None) -> None:
    """Check every step mechanically; raise :class:`InvalidRuleInstance` on the first bad one."""
    steps = derivation.steps
    if not steps:
        raise InvalidRuleInstance(0, "empty derivation")
    kind = steps[-1].conclusion.kind
    for i, step in enumerate(steps):
        _check_step(i, step, sigma, steps, kind)
    if goal is not None and steps[-1].conclusion != goal:
        raise InvalidRuleInstance(len(steps) - 1, f"derivation ends in {steps[-1].conclusion}, not {goal}")


def replays(sigma, derivation, goal=None) -> bool:
    try:
        replay_derivation(sigma, derivation, goal)
    except AidError:
        return False
    return True


class DerivationBuilder:
    """Append-only step list that reuses identical steps."""

    def __init__(self, kind: str):
        self.kind = kind
        self.steps: list[Step] = []
        self._seen: dict = {}

    def rule(self, number: int) -> str:
        return f"{'Q' if self.kind == 'q' else 'R'}{number}"

    def add(self, rule: str, conclusion: Atom, premises=(), source=None) -> int:
        key = (rule, conclusion, tuple(premises), source)
        if key in self._seen:
            return self._seen[key]
        self.steps.append(Step(rule, conclusion, tuple(premises), source))
        self._seen[key] = len(self.steps) - 1
        return self._seen[key]

    def hyp(self, sigma, index: int) -> int:
        return self.add(HYP, sigma[index], source=index)

    def reorder(self, idx: int, order: Sequence[int]) -> int:
        """Rearrange positions of step ``idx`` so position j holds old position order[j].

        Uses one block-swap step per misplaced position.
        """
        atom = self.steps[idx].conclusion
        current = list(range(atom.arity))
        lhs, rhs = atom.lhs, atom.rhs
        for j, want in enumerate(order):
            k = current.index(want)
            if k == j:
                continue
            current = list(block_swap(tuple(current), j, k))
            lhs, rhs = block_swap(lhs, j, k), block_swap(rhs, j, k)
            idx = self.add(self.rule(3), atom.with_sides(lhs, rhs), (idx,))
        return idx

    def project_prefix(self, idx: int, length: int) -> int:
        atom = self.steps[idx].conclusion
        if length == atom.arity:
            return idx
        return self.add(self.rule(4), atom.with_sides(atom.lhs[:length], atom.rhs[:length]), (idx,))

    def chain(self, first: int, second: int) -> int:
        a = self.steps[first].conclusion
        b = self.steps[second].conclusion
        return self.add(self.rule(2), a.with_sides(a.lhs, b.rhs, a.bound + b.bound), (first, second))

    def weaken(self, idx: int, bound) -> int:
        atom = self.steps[idx].conclusion
        if atom.bound == bound:
            return idx
        return self.add(self.rule(5), atom.with_sides(atom.lhs, atom.rhs, bound), (idx,))

    def build(self, upto: int | None = None) -> Derivation:
        """Freeze the steps needed for step ``upto`` (default: last), renumbered."""
        if not self.steps:
            return Derivation(())
        target = len(self.steps) - 1 if upto is None else upto
        needed = set()
        stack = [target]
        while stack:
            i = stack.pop()
            if i in needed:
                continue
            needed.add(i)
            stack.extend(self.steps[i].premises)
        order = sorted(needed)
        renumber = {old: new for new, old in enumerate(order)}
        out = []
        for old in order:
            s = self.steps[old]
            out.append(Step(s.rule, s.conclusion, tuple(renumber[p] for p in s.premises), s.source))
        return Derivation(tuple(out))


def axiom_reflexive(kind: str, seq) -> Atom:
    if kind == "q":
        return QuantityAtom(seq, seq, 0)
    return RatioAtom(seq, seq, Fraction(0))


def bound_text(bound) -> str:
    return format_ratio(bound) if isinstance(bound, Fraction) else str(bound)
