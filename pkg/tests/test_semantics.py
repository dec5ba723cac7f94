from fractions import Fraction

import pytest

from aid.model import Team
from aid.semantics import (
    deficiency,
    is_counterexample,
    minimal_quantity,
    minimal_ratio,
    satisfies,
    satisfies_quantity,
    satisfies_ratio,
    violated,
)
from instances import q, r, ratio_chain_sigma


class TestDeficiency:
    def test_ratio_chain_x_y(self, ratio_chain_team):
        assert deficiency(ratio_chain_team, ("x",), ("y",)) == 3

    def test_ratio_chain_x_w(self, ratio_chain_team):
        assert deficiency(ratio_chain_team, ("x",), ("w",)) == 1

    def test_same_sides(self, ratio_chain_team):
        assert deficiency(ratio_chain_team, ("x",), ("x",)) == 0


class TestEnrollment:
    def test_team_shape(self, enrollment_team):
        assert len(enrollment_team) == 40

    def test_atoms(self, enrollment_team):
        assert satisfies_quantity(enrollment_team, q("x", "y", 10))
        assert satisfies_ratio(enrollment_team, r("x", "y", "1/4"))
        assert not satisfies_quantity(enrollment_team, q("x", "y", 9))
        assert not satisfies_ratio(enrollment_team, r("x", "y", "9/40"))

    def test_minimal_values(self, enrollment_team):
        assert minimal_quantity(enrollment_team, ("x",), ("y",)) == 10
        assert minimal_ratio(enrollment_team, ("x",), ("y",)) == Fraction(1, 4)


class TestSatisfaction:
    def test_ratio_chain_goal_fails(self, ratio_chain_team):
        assert not satisfies(ratio_chain_team, q("x", "y", 2))
        assert not satisfies(ratio_chain_team, r("x", "y", "1/2"))

    def test_ratio_chain_is_counterexample(self, ratio_chain_team):
        assert is_counterexample(ratio_chain_team, ratio_chain_sigma(), r("x", "y", "1/2"))
        assert violated(ratio_chain_team, ratio_chain_sigma()) == []

    def test_ratio_one_always_holds(self, ratio_chain_team):
        assert satisfies(ratio_chain_team, r("x", "y", 1))

    @pytest.mark.parametrize("atom", [q("x", "y", 0), r("x", "y", 0), q("x,y", "y,x", 0)])
    def test_empty_team(self, empty_team, atom):
        assert satisfies(empty_team, atom)

    def test_minimal_values_ratio_chain(self, ratio_chain_team):
        assert minimal_quantity(ratio_chain_team, ("x",), ("y",)) == 3
        assert minimal_ratio(ratio_chain_team, ("x",), ("y",)) == Fraction(3, 5)
        assert minimal_quantity(ratio_chain_team, ("x",), ("x",)) == 0

    def test_minimal_ratio_empty(self, empty_team):
        assert minimal_ratio(empty_team, ("x",), ("y",)) == 0

    def test_ratio_boundary_is_exact(self):
        # 1 missing of 3 rows: 1/3 holds exactly, anything smaller fails
        team = Team(("x", "y"), [("a", "b"), ("b", "b"), ("c", "a")])
        assert deficiency(team, ("x",), ("y",)) == 1
        assert satisfies(team, r("x", "y", "1/3"))
        assert not satisfies(team, r("x", "y", "33/100"))
