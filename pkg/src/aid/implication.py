"""Deciding implication between approximate inclusion atoms.

The search space is a weighted directed graph whose nodes are duplicate-free
variable tuples of the goal's arity.  Every assumption ``u ⊆_k v`` (after
projecting it down to the goal arity) contributes the edges ``σu -> σv`` of
weight ``k`` for every simultaneous permutation ``σ`` of its positions.
Chaining edges is transitivity, so the goal ``x ⊆_b y`` is derivable iff the
lightest path from ``x`` to ``y`` weighs at most ``b`` (for ratio atoms the
weight is additionally capped at 1, which is always derivable).
"""

from __future__ import annotations

import heapq
import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .derivation import Derivation, DerivationBuilder
from .errors import (
    CertificateError,
    CertificateTooLarge,
    DerivableGoal,
    ResourceBudgetExceeded,
    VariableCapExceeded,
)
from .model import Atom, Team, assumption_kind, validate_atom, variables_of

DEFAULT_NODE_BUDGET = 10**6
Node = Tuple[str, ...]
Weight = Union[int, Fraction]


def node_budget_from_env(default: int = DEFAULT_NODE_BUDGET) -> int:
    raw = os.environ.get("AID_NODE_BUDGET")
    if not raw:
        return default
    value = int(raw)
    if value <= 0:
        raise ValueError("AID_NODE_BUDGET must be positive")
    return value


@dataclass(frozen=True)
class ProjectedAtom:
    """An assumption cut down to ``len(positions)`` of its positions (order kept)."""

    atom: Atom
    source: int
    positions: Tuple[int, ...]


@dataclass(frozen=True)
class NormalizedAssumptions:
    arity: int
    atoms: Tuple[ProjectedAtom, ...]
    unused: Tuple[int, ...] = ()  # assumptions below the arity; never on a path

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self):
        return len(self.atoms)


def normalize_assumptions(sigma: Sequence[Atom], l: int) -> NormalizedAssumptions:
    """Project every assumption of arity >= ``l`` onto each ``l``-subset of positions.

    Identical projections are kept once, preferring the smallest bound.
    """
    best: Dict[Tuple[Node, Node], ProjectedAtom] = {}
    unused = []
    for index, atom in enumerate(sigma):
        if atom.arity < l:
            unused.append(index)
            continue
        for positions in itertools.combinations(range(atom.arity), l):
            lhs = tuple(atom.lhs[p] for p in positions)
            rhs = tuple(atom.rhs[p] for p in positions)
            key = (lhs, rhs)
            if key in best and best[key].atom.bound <= atom.bound:
                continue
            best[key] = ProjectedAtom(atom.with_sides(lhs, rhs), index, positions)
    return NormalizedAssumptions(l, tuple(best.values()), tuple(unused))


@dataclass(frozen=True)
class Edge:
    target: Node
    weight: Weight
    via: int  # index into DependencyGraph.atoms
    order: Tuple[int, ...]  # node[j] == atom.lhs[order[j]]


class DependencyGraph:
    """Permutation-closed graph over ``arity``-tuples, expanded lazily."""

    def __init__(self, normalized: NormalizedAssumptions, variables: Sequence[str] = ()):
        self.arity = normalized.arity
        self.normalized = normalized
        self.atoms = normalized.atoms
        vars_seen = dict.fromkeys(variables)
        for p in self.atoms:
            vars_seen.update(dict.fromkeys(p.atom.lhs + p.atom.rhs))
        self.variables = tuple(vars_seen)
        self._by_lhs_set: Dict[frozenset, List[int]] = {}
        for i, p in enumerate(self.atoms):
            self._by_lhs_set.setdefault(frozenset(p.atom.lhs), []).append(i)

    def successors(self, node: Node) -> Iterator[Edge]:
        for i in self._by_lhs_set.get(frozenset(node), ()):
            atom = self.atoms[i].atom
            where = {v: k for k, v in enumerate(atom.lhs)}
            order = tuple(where[v] for v in node)
            target = tuple(atom.rhs[k] for k in order)
            yield Edge(target, atom.bound, i, order)

    def nodes(self) -> Iterator[Node]:
        return itertools.permutations(self.variables, self.arity)

    def edges(self) -> Iterator[Tuple[Node, Edge]]:
        """All edges; only sensible for small graphs."""
        for i, p in enumerate(self.atoms):
            atom = p.atom
            for order in itertools.permutations(range(self.arity)):
                source = tuple(atom.lhs[k] for k in order)
                yield source, Edge(tuple(atom.rhs[k] for k in order), atom.bound, i, order)

    def reversed_adjacency(self) -> Dict[Node, List[Tuple[Node, Weight]]]:
        radj: Dict[Node, List[Tuple[Node, Weight]]] = {}
        for source, edge in self.edges():
            radj.setdefault(edge.target, []).append((source, edge.weight))
        return radj


def build_graph(sigma_prime: NormalizedAssumptions, l: int | None = None, variables=()) -> DependencyGraph:
    if l is not None and l != sigma_prime.arity:
        raise ValueError(f"assumptions were normalized to arity {sigma_prime.arity}, not {l}")
    return DependencyGraph(sigma_prime, variables)


@dataclass
class ShortestPaths:
    source: Node
    dist: Dict[Node, Weight]
    parent: Dict[Node, Tuple[Node, Edge]]
    expanded: int
    limit: Optional[Weight] = None

    def path(self, target: Node) -> List[Tuple[Node, Edge]]:
        steps = []
        node = target
        while node != self.source:
            prev, edge = self.parent[node]
            steps.append((prev, edge))
            node = prev
        steps.reverse()
        return steps


def shortest_paths(
    graph: DependencyGraph,
    source: Node,
    *,
    limit: Optional[Weight] = None,
    target: Optional[Node] = None,
    node_budget: int | None = None,
) -> ShortestPaths:
    """Dijkstra from ``source``.

    Nodes farther than ``limit`` are left out.  Equal-distance ties are broken
    by the lexicographic order of node tuples.  Raises
    :class:`ResourceBudgetExceeded` after ``node_budget`` expansions.
    """
    budget = node_budget_from_env() if node_budget is None else node_budget
    source = tuple(source)
    dist: Dict[Node, Weight] = {source: 0}
    parent: Dict[Node, Tuple[Node, Edge]] = {}
    done = set()
    heap = [(0, source)]
    expanded = 0
    while heap:
        d, node = heapq.heappop(heap)
        if node in done:
            continue
        done.add(node)
        expanded += 1
        if expanded > budget:
            raise ResourceBudgetExceeded(f"shortest-path search expanded more than {budget} nodes")
        if node == target:
            break
        for edge in graph.successors(node):
            nd = d + edge.weight
            if limit is not None and nd > limit:
                continue
            old = dist.get(edge.target)
            if old is None or nd < old:
                dist[edge.target] = nd
                parent[edge.target] = (node, edge)
                heapq.heappush(heap, (nd, edge.target))
    return ShortestPaths(source, dist, parent, expanded, limit)


def shortest_weight(graph: DependencyGraph, source: Node, target: Node, **kwargs) -> Optional[Weight]:
    """Lightest path weight from ``source`` to ``target``, or ``None`` if unreachable."""
    source, target = tuple(source), tuple(target)
    if source == target:
        return 0
    sp = shortest_paths(graph, source, target=target, **kwargs)
    return sp.dist.get(target)


# -- verdicts -----------------------------------------------------------------


@dataclass(frozen=True)
class Implied:
    derivation: Derivation
    weight: Optional[Weight] = None
    status = "IMPLIED"
    exit_code = 0


@dataclass(frozen=True)
class NotImplied:
    certificate: Optional[Team]  # None only when the team is too large to build
    weight: Optional[Weight] = None
    status = "NOT_IMPLIED"
    exit_code = 1


@dataclass(frozen=True)
class Unknown:
    reason: str
    weight: Optional[Weight] = None
    status = "UNKNOWN"
    exit_code = 2


Verdict = Union[Implied, NotImplied, Unknown]


# -- derivation extraction ----------------------------------------------------


def _edge_step(b: DerivationBuilder, sigma, graph: DependencyGraph, edge: Edge) -> int:
    """Steps deriving the atom behind ``edge``: assumption, projection, permutation."""
    projected = graph.atoms[edge.via]
    original = sigma[projected.source]
    idx = b.hyp(sigma, projected.source)
    if projected.positions != tuple(range(original.arity)):
        rest = [k for k in range(original.arity) if k not in projected.positions]
        idx = b.reorder(idx, list(projected.positions) + rest)
        idx = b.project_prefix(idx, len(projected.positions))
    return b.reorder(idx, edge.order)


def extract_derivation(sigma, graph: DependencyGraph, sp: ShortestPaths, goal: Atom) -> Derivation:
    """Turn the shortest path to ``goal.rhs`` into a derivation of ``goal``."""
    b = DerivationBuilder(goal.kind)
    path = sp.path(goal.rhs)
    if not path:
        from .derivation import axiom_reflexive

        idx = b.add(b.rule(1), axiom_reflexive(goal.kind, goal.lhs))
    else:
        idx = _edge_step(b, sigma, graph, path[0][1])
        for _, edge in path[1:]:
            idx = b.chain(idx, _edge_step(b, sigma, graph, edge))
    idx = b.weaken(idx, goal.bound)
    return b.build(idx)


def _r6(goal: Atom) -> Derivation:
    b = DerivationBuilder("r")
    b.add("R6", goal.with_sides(goal.lhs, goal.rhs, Fraction(1)))
    return b.build()


# -- decision procedures ------------------------------------------------------


def _prepare(sigma, goal, kind):
    validate_atom(goal)
    for atom in sigma:
        validate_atom(atom)
    if goal.kind != kind:
        raise TypeError(f"goal must be a {'quantity' if kind == 'q' else 'ratio'} atom")
    assumption_kind(sigma, goal)
    normalized = normalize_assumptions(sigma, goal.arity)
    graph = DependencyGraph(normalized, variables_of([goal, *sigma]))
    return normalized, graph


def decide_quantity(
    sigma: Sequence[Atom],
    goal: Atom,
    *,
    var_cap: int | None = None,
    node_budget: int | None = None,
) -> Verdict:
    """Decide whether ``sigma`` implies the quantity atom ``goal``.

    Returns :class:`Implied` with a replayable derivation when the lightest
    path fits the bound.  Otherwise, when no assumption has a larger arity than
    the goal, returns :class:`NotImplied` with a verified counterexample team.
    Assumptions of larger arity leave the question open unless the constructed
    team happens to satisfy them as well.
    """
    from . import counterexample

    sigma = list(sigma)
    normalized, graph = _prepare(sigma, goal, "q")
    sp = shortest_paths(graph, goal.lhs, limit=goal.bound + 1, node_budget=node_budget)
    d = sp.dist.get(goal.rhs)
    if d is not None and d <= goal.bound:
        return Implied(extract_derivation(sigma, graph, sp, goal), d)
    over_arity = any(a.arity > goal.arity for a in sigma)
    try:
        team = counterexample.quantity_counterexample(
            sigma, goal, var_cap=var_cap, node_budget=node_budget, allow_over_arity=over_arity
        )
    except CertificateError as exc:
        if over_arity:
            return Unknown(
                "no derivation found; completeness is open for assumptions of arity above "
                f"the conclusion and the candidate counterexample fails ({exc})",
                d,
            )
        return Unknown(f"no derivation found, but no counterexample could be certified ({exc})", d)
    except VariableCapExceeded as exc:
        return Unknown(f"no derivation found; counterexample construction skipped: {exc}", d)
    return NotImplied(team, d)


def decide_ratio(
    sigma: Sequence[Atom],
    goal: Atom,
    *,
    node_budget: int | None = None,
) -> Verdict:
    """Decide whether ``sigma`` implies the ratio atom ``goal``.

    Complete for unary atoms; beyond unary only derivable goals are reported
    and everything else is :class:`Unknown`.
    """
    from . import counterexample

    sigma = list(sigma)
    normalized, graph = _prepare(sigma, goal, "r")
    one = Fraction(1)
    sp = shortest_paths(graph, goal.lhs, limit=one, node_budget=node_budget)
    d = sp.dist.get(goal.rhs)
    capped = one if d is None else min(d, one)
    if capped <= goal.bound:
        if d is not None and d <= goal.bound:
            return Implied(extract_derivation(sigma, graph, sp, goal), capped)
        return Implied(_r6(goal), capped)
    unary = goal.arity == 1 and all(a.arity == 1 for a in sigma)
    if not unary:
        return Unknown("no derivation found; completeness beyond unary ratio atoms is open", capped)
    try:
        team = counterexample.ratio_counterexample(sigma, goal, node_budget=node_budget, _paths=sp)
    except CertificateTooLarge:
        # unary ratio implication is complete, so the verdict stands without the team
        return NotImplied(None, capped)
    return NotImplied(team, capped)


def decide(sigma: Sequence[Atom], goal: Atom, **kwargs) -> Verdict:
    if goal.kind == "q":
        return decide_quantity(sigma, goal, **kwargs)
    kwargs.pop("var_cap", None)
    return decide_ratio(sigma, goal, **kwargs)


__all__ = [
    "DEFAULT_NODE_BUDGET",
    "DependencyGraph",
    "DerivableGoal",
    "Edge",
    "Implied",
    "NormalizedAssumptions",
    "NotImplied",
    "ProjectedAtom",
    "ShortestPaths",
    "Unknown",
    "Verdict",
    "build_graph",
    "decide",
    "decide_quantity",
    "decide_ratio",
    "extract_derivation",
    "normalize_assumptions",
    "shortest_paths",
    "shortest_weight",
]
