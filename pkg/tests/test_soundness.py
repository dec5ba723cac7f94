"""Each rule preserves truth in every team; checked on random small teams."""

from fractions import Fraction

from hypothesis import given, strategies as st

from aid.derivation import block_swap
from aid.model import QuantityAtom, RatioAtom, Team
from aid.semantics import deficiency, minimal_quantity, minimal_ratio, satisfies

VARS = ("a", "b", "c", "d", "e", "f")


@st.composite
def teams(draw, max_rows=8):
    rows = draw(st.lists(st.tuples(*[st.sampled_from("012")] * len(VARS)), max_size=max_rows))
    return Team(VARS, rows)


def seqs(k):
    return st.lists(st.sampled_from(VARS), min_size=k, max_size=k, unique=True).map(tuple)




class TestQuantityRules:
    @given(teams(), seqs(2))
    def test_reflexivity(self, team, x):
        assert deficiency(team, x, x) == 0

    @given(teams(), seqs(2), seqs(2), seqs(2))
    def test_transitivity(self, team, x, y, z):
        assert deficiency(team, x, z) <= deficiency(team, x, y) + deficiency(team, y, z)

    @given(teams(), seqs(3), seqs(3), st.integers(0, 2), st.integers(1, 3))
    def test_block_swap(self, team, x, y, start, stop):
        if start >= stop or stop > 3:
            return
        assert deficiency(team, block_swap(x, start, stop), block_swap(y, start, stop)) == deficiency(team, x, y)

    @given(teams(), seqs(3), seqs(3), st.integers(1, 3))
    def test_projection(self, team, x, y, k):
        assert deficiency(team, x[:k], y[:k]) <= deficiency(team, x, y)

    @given(teams(), seqs(2), seqs(2), st.integers(0, 5), st.integers(0, 5))
    def test_weakening(self, team, x, y, n, m):
        if satisfies(team, QuantityAtom(x, y, n)) and m >= n:
            assert satisfies(team, QuantityAtom(x, y, m))

    @given(teams(), teams(), seqs(2), seqs(2))
    def test_weak_union(self, t1, t2, x, y):
        n, m = minimal_quantity(t1, x, y), minimal_quantity(t2, x, y)
        assert satisfies(t1.union(t2), QuantityAtom(x, y, n + m))


class TestRatioRules:
    @given(teams(), seqs(1), seqs(1), seqs(1))
    def test_transitivity(self, team, x, y, z):
        p, q = minimal_ratio(team, x, y), minimal_ratio(team, y, z)
        if p + q <= 1:
            assert satisfies(team, RatioAtom(x, z, p + q))

    @given(teams(), seqs(3), seqs(3), st.integers(1, 3))
    def test_projection(self, team, x, y, k):
        assert minimal_ratio(team, x[:k], y[:k]) <= minimal_ratio(team, x, y)

    @given(teams(), seqs(2), seqs(2))
    def test_permutation(self, team, x, y):
        assert minimal_ratio(team, x[::-1], y[::-1]) == minimal_ratio(team, x, y)

    @given(teams(), seqs(2), seqs(2))
    def test_trivial_bound(self, team, x, y):
        assert satisfies(team, RatioAtom(x, y, Fraction(1)))

    @given(teams(), seqs(2), seqs(2), st.fractions(0, 1), st.fractions(0, 1))
    def test_weakening(self, team, x, y, p, q):
        if satisfies(team, RatioAtom(x, y, p)) and q >= p:
            assert satisfies(team, RatioAtom(x, y, q))


@given(seqs(2), seqs(2), st.integers(0, 3), st.fractions(0, 1))
def test_empty_team(x, y, n, p):
    empty = Team(VARS, [])
    assert satisfies(empty, QuantityAtom(x, y, n))
    assert satisfies(empty, RatioAtom(x, y, p))
