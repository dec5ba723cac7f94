"""Shared fixtures data and random instance generators."""

import random
from fractions import Fraction

from aid.model import QuantityAtom, RatioAtom, Team

# filled by the acceptance suite, printed in the terminal summary
ACCEPTANCE_LINES = []

RATIO_CHAIN_ROWS = [
    ("1", "1", "1"),
    ("2", "1", "1"),
    ("3", "3", "1"),
    ("4", "4", "1"),
    ("5", "5", "5"),
]


def q(lhs, rhs, n):
    return QuantityAtom(tuple(lhs.split(",")), tuple(rhs.split(",")), n)


def r(lhs, rhs, p):
    return RatioAtom(tuple(lhs.split(",")), tuple(rhs.split(",")), Fraction(p))


def ratio_chain_sigma():
    return [r("x", "w", "1/4"), r("w", "y", "1/2")]


def pair_chain_sigma():
    return [q("x1,x2", "w1,w2", 2), q("w1,w2", "y1,y2", 1)]


def enrollment() -> Team:
    # 40 enrolled students x; the registered column y misses exactly f0..f9
    rows = []
    for i in range(40):
        y = f"f{i + 10}" if i < 30 else f"other{i}"
        rows.append((f"f{i}", y))
    return Team(("x", "y"), rows)


def random_team(rng: random.Random, variables, max_rows=6, max_values=3) -> Team:
    rows = [
        tuple(str(rng.randrange(max_values)) for _ in variables)
        for _ in range(rng.randint(0, max_rows))
    ]
    return Team(variables, rows)


def random_seq(rng, pool, k):
    return tuple(rng.sample(pool, k))


def random_quantity_instance(rng: random.Random, max_bound=3):
    pool = [f"v{i}" for i in range(rng.randint(3, 6))]
    sigma = []
    for _ in range(rng.randint(1, 6)):
        k = rng.choice([1, 2, 2, 2])
        sigma.append(QuantityAtom(random_seq(rng, pool, k), random_seq(rng, pool, k), rng.randint(0, max_bound)))
    goal = QuantityAtom(random_seq(rng, pool, 2), random_seq(rng, pool, 2), rng.randint(0, max_bound))
    return sigma, goal


def random_fraction(rng):
    d = rng.randint(1, 4)
    return Fraction(rng.randint(0, d), d)


def random_ratio_instance(rng: random.Random):
    pool = [f"v{i}" for i in range(rng.randint(2, 6))]
    sigma = []
    for _ in range(rng.randint(0, 7)):
        a, b = rng.sample(pool, 2)
        sigma.append(RatioAtom((a,), (b,), random_fraction(rng)))
    a, b = rng.sample(pool, 2)
    return sigma, RatioAtom((a,), (b,), random_fraction(rng))
