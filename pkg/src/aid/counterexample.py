"""Counterexample teams certifying non-implication.

Quantity goals ``x ⊆_n y`` (assumption arity at most ``l = |x|``) get a union
of ``n + 1`` subteams ``T_1 ... T_{n+1}``.  Subteam ``i`` takes every
assignment into ``{"i", "i.5"}`` except those putting the constant tuple
``i^l`` on an ``l``-set of variables whose *threshold* is at least ``i``.  The
threshold of a variable set is its distance from ``x`` in the assumption graph
(capped at ``n + 1``); sets that ``x`` cannot reach get the smallest value
compatible with the assumptions, so ``y`` always ends up with ``n + 1``.  Each
subteam then loses ``i^l`` from ``y`` but not from ``x`` and every assumption
loses at most its bound in total.

Constant tuples cannot tell ``y1y2`` from ``y2y1``.  When a reordering of ``y``
is close to ``x`` the same scheme is run over ordered tuples with a distinct
marker value per position (``"i:1"``, ``"i:2"``, ...) and ``"i.5"`` as filler.

Unary ratio goals ``x ⊆_p y`` get the single team ``s_1 ... s_N`` where
``N - 1`` is the least common multiple of all denominators and column ``w``
reads ``1`` in the first ``q'(w) + 1`` rows and the row number afterwards,
``q'(w) / (N - 1)`` being the (capped) distance from ``x`` to ``w``.

Every team is checked against the assumptions and the goal before it is
returned; a failed check raises :class:`~aid.errors.CertificateError`.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    ArityRestrictionViolated,
    CertificateError,
    CertificateTooLarge,
    DerivableGoal,
    GoalBoundIsOne,
    NonUnaryAtoms,
    VariableCapExceeded,
)
from .implication import (
    DependencyGraph,
    ShortestPaths,
    normalize_assumptions,
    shortest_paths,
)
from .model import Atom, Team, assumption_kind, validate_atom, variables_of
from .semantics import deficiency, satisfies, violated

DEFAULT_VAR_CAP = 16
DEFAULT_CELL_CAP = 5_000_000


@dataclass(frozen=True)
class QuantityWitnessSpec:
    """Thresholds describing the quantity counterexample.

    Subteam ``i`` (1 <= i <= ``subteam_count``) drops the constant tuple
    ``i^l`` from every ``l``-set with ``set_thresholds >= i`` and, in the
    ordered scheme, the marker tuple ``(i:1, ..., i:l)`` from every ``l``-tuple
    with ``tuple_thresholds >= i``.
    """

    subteam_count: int
    variables: Tuple[str, ...]
    arity: int
    set_thresholds: Dict[frozenset, int]
    tuple_thresholds: Dict[tuple, int] = field(default_factory=dict)
    scheme: str = "two-value"  # or "ordered"

    @property
    def oriented(self) -> bool:
        return self.scheme == "ordered"


def _potential(edges: Iterable[Tuple[Hashable, Hashable, int]], source, target, horizon: int):
    """Thresholds ``t`` with ``t(source) = 0``, ``t(target) = horizon`` and
    ``t(v) <= t(u) + k`` on every edge ``u -k-> v``.

    Nodes reachable within ``horizon`` keep their distance from ``source``;
    the rest get the least value the edge constraints force on them.
    """
    adj: Dict[Hashable, List[Tuple[Hashable, int]]] = {}
    radj: Dict[Hashable, List[Tuple[Hashable, int]]] = {}
    for u, v, k in edges:
        adj.setdefault(u, []).append((v, k))
        radj.setdefault(v, []).append((u, k))

    fixed: Dict[Hashable, int] = {source: 0}
    heap = [(0, 0, source)]
    tick = itertools.count(1)
    done = set()
    while heap:
        d, _, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, k in adj.get(u, ()):
            nd = d + k
            if nd <= horizon and nd < fixed.get(v, horizon + 1):
                fixed[v] = nd
                heapq.heappush(heap, (nd, next(tick), v))

    t = dict(fixed)
    t.setdefault(target, horizon)
    heap = [(-val, next(tick), node) for node, val in t.items() if val > 0]
    heapq.heapify(heap)
    while heap:
        neg, _, v = heapq.heappop(heap)
        val = -neg
        if t.get(v, 0) != val:
            continue
        for u, k in radj.get(v, ()):
            if u in fixed:
                continue
            cand = val - k
            if cand > t.get(u, 0):
                t[u] = cand
                heapq.heappush(heap, (-cand, next(tick), u))
    return {node: val for node, val in t.items() if val > 0}, fixed


def _solve_ordered_thresholds(graph: DependencyGraph, goal: Atom):
    """Integer thresholds for the ordered scheme, or ``None`` if none exist.

    Unknowns are a threshold per tuple and per set (0..n+1).  Every
    assumption ``u ⊆_k v`` may lose at most ``k`` tuples summed over its
    reorderings plus its constant-tuple losses; the goal must lose ``n + 1``.
    """
    from scipy.optimize import Bounds, LinearConstraint, milp
    from scipy.sparse import lil_matrix

    l, n = goal.arity, goal.bound
    horizon = n + 1
    x, y = tuple(goal.lhs), tuple(goal.rhs)
    orders = list(itertools.permutations(range(l)))

    tuples: Dict[tuple, int] = {}
    sets: Dict[frozenset, int] = {}

    def tvar(w):
        return tuples.setdefault(w, len(tuples))

    def svar(s):
        return sets.setdefault(s, len(sets))

    rows = []  # (coefficients over (kind, key) -> float, lower, upper)
    for p in graph.atoms:
        u, v, k = p.atom.lhs, p.atom.rhs, p.atom.bound
        slacks = []
        for order in orders:
            su = tuple(u[j] for j in order)
            sv = tuple(v[j] for j in order)
            e = ("e", len(rows))
            rows.append(({e: 1.0, ("t", tvar(sv)): -1.0, ("t", tvar(su)): 1.0}, 0.0, np.inf))
            slacks.append(e)
        if frozenset(u) != frozenset(v):
            e = ("e", len(rows))
            rows.append(
                ({e: 1.0, ("s", svar(frozenset(v))): -1.0, ("s", svar(frozenset(u))): 1.0}, 0.0, np.inf)
            )
            slacks.append(e)
        rows.append(({e: 1.0 for e in slacks}, -np.inf, float(k)))
    goal_row = {("t", tvar(y)): 1.0, ("t", tvar(x)): -1.0}
    if frozenset(x) != frozenset(y):
        goal_row[("s", svar(frozenset(y)))] = 1.0
        goal_row[("s", svar(frozenset(x)))] = -1.0
    rows.append((goal_row, float(horizon), np.inf))

    slack_ids = sorted({key[1] for coeffs, _, _ in rows for key in coeffs if key[0] == "e"})
    column = {("t", i): i for i in range(len(tuples))}
    column.update({("s", i): len(tuples) + i for i in range(len(sets))})
    base = len(tuples) + len(sets)
    column.update({("e", r): base + k for k, r in enumerate(slack_ids)})
    nvars = base + len(slack_ids)

    matrix = lil_matrix((len(rows), nvars))
    lower, upper = [], []
    for r, (coeffs, lo, hi) in enumerate(rows):
        for key, c in coeffs.items():
            matrix[r, column[key]] += c
        lower.append(lo)
        upper.append(hi)
    integrality = np.zeros(nvars)
    integrality[:base] = 1
    ub = np.full(nvars, np.inf)
    ub[:base] = horizon
    cost = np.zeros(nvars)
    cost[:base] = 1.0  # smallest intervention
    res = milp(
        cost,
        constraints=LinearConstraint(matrix.tocsr(), lower, upper),
        integrality=integrality,
        bounds=Bounds(np.zeros(nvars), ub),
    )
    if res.status != 0 or res.x is None:
        return None
    values = np.rint(res.x).astype(int)
    tuple_t = {w: int(values[i]) for w, i in tuples.items() if values[i] > 0}
    set_t = {s: int(values[len(tuples) + i]) for s, i in sets.items() if values[len(tuples) + i] > 0}
    return set_t, tuple_t


def _check_quantity_inputs(sigma, goal, allow_over_arity):
    validate_atom(goal)
    if goal.kind != "q":
        raise TypeError("goal must be a quantity atom")
    assumption_kind(sigma, goal)
    if not allow_over_arity and any(a.arity > goal.arity for a in sigma):
        raise ArityRestrictionViolated(
            f"assumptions of arity above {goal.arity} are outside the construction's guarantee"
        )


def quantity_witness(
    sigma: Sequence[Atom],
    goal: Atom,
    *,
    node_budget: int | None = None,
    allow_over_arity: bool = False,
    scheme: Optional[str] = None,
) -> QuantityWitnessSpec:
    """Thresholds for the quantity counterexample.

    By default the two-value scheme is used whenever constant tuples can
    separate ``x`` from ``y``, i.e. no reordering of ``y`` lies within
    distance ``n`` of ``x``; otherwise the ordered scheme is solved for.
    """
    sigma = list(sigma)
    _check_quantity_inputs(sigma, goal, allow_over_arity)
    l, n = goal.arity, goal.bound
    horizon = n + 1
    normalized = normalize_assumptions(sigma, l)
    variables = tuple(variables_of([goal, *sigma]))
    graph = DependencyGraph(normalized, variables)

    sp = shortest_paths(graph, goal.lhs, limit=n, target=goal.rhs, node_budget=node_budget)
    if goal.rhs in sp.dist:
        raise DerivableGoal(f"{goal} is derivable (path weight {sp.dist[goal.rhs]})")

    if scheme != "ordered":
        set_edges: Dict[tuple, int] = {}
        for p in normalized.atoms:
            key = (frozenset(p.atom.lhs), frozenset(p.atom.rhs))
            set_edges[key] = min(set_edges.get(key, p.atom.bound), p.atom.bound)
        src, dst = frozenset(goal.lhs), frozenset(goal.rhs)
        thresholds, fixed = _potential(
            ((u, v, k) for (u, v), k in set_edges.items()), src, dst, horizon
        )
        if fixed.get(dst, horizon) >= horizon:
            return QuantityWitnessSpec(horizon, variables, l, thresholds)
        if scheme == "two-value":
            raise CertificateError(
                f"a reordering of {goal.rhs} lies within {fixed[dst]} of {goal.lhs}; "
                "constant tuples cannot separate them"
            )

    solved = _solve_ordered_thresholds(graph, goal)
    if solved is None:
        raise CertificateError("no threshold assignment separates the goal within the assumption bounds")
    set_t, tuple_t = solved
    return QuantityWitnessSpec(horizon, variables, l, set_t, tuple_t, "ordered")


def _two_value_rows(spec: QuantityWitnessSpec) -> List[tuple]:
    nv = len(spec.variables)
    pos = {v: k for k, v in enumerate(spec.variables)}
    masks = np.arange(1 << nv, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(nv, dtype=np.int64)) & 1
    rows = []
    for i in range(1, spec.subteam_count + 1):
        keep = np.ones(masks.shape, dtype=bool)
        for vset, t in spec.set_thresholds.items():
            if t >= i:
                m = sum(1 << pos[v] for v in vset)
                keep &= (masks & m) != m
        tokens = np.array([f"{i}.5", f"{i}"], dtype=object)
        rows.extend(map(tuple, tokens[bits[keep]]))
    return rows


def _ordered_rows(spec: QuantityWitnessSpec) -> List[tuple]:
    # Rows with at most l non-filler cells realise every projection already.
    l = spec.arity
    variables = spec.variables
    rows = []
    for i in range(1, spec.subteam_count + 1):
        filler, diag = f"{i}.5", f"{i}"
        markers = [f"{i}:{j}" for j in range(1, l + 1)]
        marker_pos = {m: j for j, m in enumerate(markers)}
        cut = {w for w, t in spec.tuple_thresholds.items() if t >= i}
        set_cut = {s for s, t in spec.set_thresholds.items() if t >= i}
        alphabet = [filler, diag, *markers]
        for chosen in itertools.combinations(range(len(variables)), l):
            names = [variables[k] for k in chosen]
            for values in itertools.product(alphabet, repeat=l):
                if all(v == diag for v in values) and frozenset(names) in set_cut:
                    continue
                if sorted(values) == sorted(markers):
                    w = [None] * l
                    for name, value in zip(names, values):
                        w[marker_pos[value]] = name
                    if tuple(w) in cut:
                        continue
                row = [filler] * len(variables)
                for k, value in zip(chosen, values):
                    row[k] = value
                rows.append(tuple(row))
    return rows


def realize_quantity(spec: QuantityWitnessSpec) -> Team:
    rows = _ordered_rows(spec) if spec.oriented else _two_value_rows(spec)
    return Team(spec.variables, rows)


def verify_certificate(team: Team, sigma: Sequence[Atom], goal: Atom) -> None:
    bad = violated(team, sigma)
    if bad:
        raise CertificateError(f"team violates assumption {bad[0]}")
    if satisfies(team, goal):
        raise CertificateError(f"team satisfies the goal {goal}")


def quantity_counterexample(
    sigma: Sequence[Atom],
    goal: Atom,
    *,
    var_cap: int | None = None,
    node_budget: int | None = None,
    allow_over_arity: bool = False,
    scheme: Optional[str] = None,
) -> Team:
    """A team satisfying every assumption and falsifying ``goal``.

    Raises :class:`DerivableGoal` if the goal has a derivation,
    :class:`VariableCapExceeded` if the two-value team would need more than
    ``2 ** var_cap`` assignments per subteam and :class:`CertificateError`
    if no candidate passes the final check.
    """
    sigma = list(sigma)
    cap = DEFAULT_VAR_CAP if var_cap is None else var_cap
    variables = variables_of([goal, *sigma])
    spec = quantity_witness(
        sigma, goal, node_budget=node_budget, allow_over_arity=allow_over_arity, scheme=scheme
    )
    if not spec.oriented and len(variables) > cap:
        raise VariableCapExceeded(f"{len(variables)} variables exceed the cap of {cap}")
    team = realize_quantity(spec)
    verify_certificate(team, sigma, goal)
    return team


# -- ratio --------------------------------------------------------------------


@dataclass(frozen=True)
class RatioWitnessSpec:
    """``team_size`` rows; column ``w`` is ``"1"`` in the first
    ``column_map[w] + 1`` rows and the row number afterwards."""

    base: int
    team_size: int
    column_map: Dict[str, int]


def ratio_witness(
    sigma: Sequence[Atom],
    goal: Atom,
    *,
    node_budget: int | None = None,
    _paths: ShortestPaths | None = None,
) -> RatioWitnessSpec:
    sigma = list(sigma)
    validate_atom(goal)
    if goal.kind != "r":
        raise TypeError("goal must be a ratio atom")
    assumption_kind(sigma, goal)
    if goal.arity != 1 or any(a.arity != 1 for a in sigma):
        raise NonUnaryAtoms("the ratio construction covers unary atoms only")
    if goal.bound == 1:
        raise GoalBoundIsOne(f"{goal} holds in every team")
    one = Fraction(1)
    if _paths is None:
        graph = DependencyGraph(normalize_assumptions(sigma, 1), variables_of([goal, *sigma]))
        _paths = shortest_paths(graph, goal.lhs, limit=one, node_budget=node_budget)
    dist = _paths.dist
    if dist.get(goal.rhs, one) <= goal.bound:
        raise DerivableGoal(f"{goal} is derivable")
    base = math.lcm(*(a.bound.denominator for a in [goal, *sigma]))
    columns = {}
    for v in variables_of([goal, *sigma]):
        q = min(dist.get((v,), one), one)
        columns[v] = int(q * base)
    return RatioWitnessSpec(base, base + 1, columns)


def realize_ratio(spec: RatioWitnessSpec) -> Team:
    variables = tuple(spec.column_map)
    rows = []
    for i in range(1, spec.team_size + 1):
        rows.append(tuple("1" if i <= spec.column_map[v] + 1 else str(i) for v in variables))
    return Team(variables, rows)


def ratio_counterexample(
    sigma: Sequence[Atom],
    goal: Atom,
    *,
    node_budget: int | None = None,
    cell_cap: int = DEFAULT_CELL_CAP,
    _paths: ShortestPaths | None = None,
) -> Team:
    """The ``lcm + 1``-row team refuting a non-derivable unary ratio goal.

    Raises :class:`CertificateTooLarge` when rows times columns exceeds ``cell_cap``.
    """
    sigma = list(sigma)
    spec = ratio_witness(sigma, goal, node_budget=node_budget, _paths=_paths)
    cells = spec.team_size * len(spec.column_map)
    if cells > cell_cap:
        raise CertificateTooLarge(
            f"the counterexample needs {spec.team_size} rows x {len(spec.column_map)} columns (cap {cell_cap} cells)"
        )
    team = realize_ratio(spec)
    verify_certificate(team, sigma, goal)
    return team


def counterexample(sigma, goal, **kwargs) -> Team:
    if goal.kind == "q":
        return quantity_counterexample(sigma, goal, **kwargs)
    kwargs.pop("var_cap", None)
    kwargs.pop("allow_over_arity", None)
    return ratio_counterexample(sigma, goal, **kwargs)


def goal_deficiency(team: Team, goal: Atom) -> int:
    return deficiency(team, goal.lhs, goal.rhs)
