"""Brute-force instruments used to cross-check the decision procedures.

Neither function shares code with :mod:`aid.implication`: falsification
searches teams directly through the satisfaction relation, and derivation
enumeration saturates the rule systems by plain forward chaining.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from .derivation import Derivation, DerivationBuilder, block_swap
from .model import Atom, Team, assumption_kind, variables_of
from .semantics import is_counterexample

MAX_ROWS = 6
MAX_VALUES = 6


def _canonical_teams(nvars: int, max_rows: int, max_values: int):
    """Row lists in strictly increasing order whose flattened values form a
    restricted-growth string.

    Every team is equal up to renaming of values to at least one of these
    (its lexicographically least renaming has this form).
    """
    all_rows = list(itertools.product(range(max_values), repeat=nvars))

    def extend(team, start, top):
        yield team
        if len(team) == max_rows:
            return
        for r in range(start, len(all_rows)):
            row = all_rows[r]
            t = top
            ok = True
            for value in row:
                if value > t + 1:
                    ok = False
                    break
                t = max(t, value)
            if ok:
                yield from extend(team + [row], r + 1, t)

    yield from extend([], 0, -1)


def falsify_by_enumeration(
    sigma: Sequence[Atom],
    goal: Atom,
    max_rows: int = 4,
    max_values: int = 3,
) -> Optional[Team]:
    """Search small teams for one satisfying ``sigma`` but not ``goal``.

    Exhaustive up to value renaming over teams of at most ``max_rows`` rows
    with values drawn from ``max_values`` symbols.  Returns ``None`` when the
    bounded space contains no counterexample.
    """
    if not 0 <= max_rows <= MAX_ROWS or not 1 <= max_values <= MAX_VALUES:
        raise ValueError(f"bounds limited to max_rows <= {MAX_ROWS}, max_values <= {MAX_VALUES}")
    sigma = list(sigma)
    assumption_kind(sigma, goal)
    variables = variables_of([goal, *sigma])
    names = "abcdefghijklmnopqrstuvwxyz"
    for rows in _canonical_teams(len(variables), max_rows, max_values):
        if not rows:
            continue
        team = Team(variables, [tuple(names[v] for v in row) for row in rows])
        if is_counterexample(team, sigma, goal):
            return team
    return None


# -- derivation enumeration ---------------------------------------------------


def enumerate_derivations(
    sigma: Sequence[Atom],
    goal: Atom,
    max_steps: int = 8,
) -> Optional[Derivation]:
    """Forward-chain the rules for ``max_steps`` rounds looking for ``goal``.

    Each round applies permutation (block swap), prefix projection and
    transitivity to everything known so far; reflexivity, the constant-1
    axiom and weakening are applied to the goal directly.  Only the least
    bound seen for each pair of sequences is kept and bounds above the goal's
    are discarded, since no rule ever lowers a bound.
    """
    sigma = list(sigma)
    kind = assumption_kind(sigma, goal) or goal.kind
    b = DerivationBuilder(kind)
    target = goal.bound

    def finish(idx):
        return b.build(b.weaken(idx, target))

    if kind == "r" and target == 1:
        return b.build(b.add("R6", goal))
    if goal.lhs == goal.rhs:
        reflex = goal.with_sides(goal.lhs, goal.lhs, 0 if kind == "q" else Fraction(0))
        return finish(b.add(b.rule(1), reflex))

    width = goal.arity
    known: Dict[Tuple[tuple, tuple], int] = {}  # (lhs, rhs) -> step index

    def offer(idx):
        atom = b.steps[idx].conclusion
        if atom.bound > target or atom.arity < width:
            return False
        key = (atom.lhs, atom.rhs)
        old = known.get(key)
        if old is None or atom.bound < b.steps[old].conclusion.bound:
            known[key] = idx
            return True
        return False

    for i, atom in enumerate(sigma):
        if atom.bound <= target and atom.arity >= width:
            offer(b.hyp(sigma, i))

    goal_key = (goal.lhs, goal.rhs)
    for _ in range(max_steps):
        if goal_key in known:
            return finish(known[goal_key])
        changed = False
        current = list(known.values())
        for idx in current:
            atom = b.steps[idx].conclusion
            n = atom.arity
            for start in range(n):
                for stop in range(start + 1, n):
                    lhs = block_swap(atom.lhs, start, stop)
                    rhs = block_swap(atom.rhs, start, stop)
                    new = b.add(b.rule(3), atom.with_sides(lhs, rhs), (idx,))
                    changed |= offer(new)
            if n > width:
                new = b.add(b.rule(4), atom.with_sides(atom.lhs[:n - 1], atom.rhs[:n - 1]), (idx,))
                changed |= offer(new)
        by_lhs: Dict[tuple, list] = {}
        for idx in known.values():
            by_lhs.setdefault(b.steps[idx].conclusion.lhs, []).append(idx)
        for first in list(known.values()):
            a = b.steps[first].conclusion
            for second in by_lhs.get(a.rhs, ()):
                c = b.steps[second].conclusion
                if a.bound + c.bound <= target and a.lhs != c.rhs:
                    changed |= offer(b.chain(first, second))
        if not changed:
            break
    if goal_key in known:
        return finish(known[goal_key])
    return None
