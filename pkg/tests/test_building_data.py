"""
Tests for building data validation, classification and conservation.
"""

from dataclasses import replace

import pytest
from factories import Q5

from tcb_foliation.core.building_data import (
    Branch,
    BuildingData,
    FoliationClass,
    MorseTree,
    RotationDirection,
    SegmentSystem,
    TorusData,
    TransitionMatrix,
    check_conservation,
    classify_foliation,
    genus2_building_data,
    maximal_cycle_types,
    minimal_diagram_types,
    psi_profile,
    validate_building_data,
)
from tcb_foliation.errors import ConservationViolated, GenusTooSmall, InvalidCensus


def tree_only(genus, values, edges, cycle_type=None):
    """Building data carrying just a tree, enough for the census."""
    tree = MorseTree(values={k: Q5(v) for k, v in values.items()}, edges=tuple(edges))
    return BuildingData(
        genus=genus,
        tree=tree,
        segments=SegmentSystem(branches=()),
        tori=(),
        cycle_type=cycle_type,
    )


SEGMENT = ({"lo": "0", "hi": "1"}, [("lo", "hi")])
TRIPOD = (
    {"l1": "0", "l2": "1", "x": "2", "l3": "3"},
    [("l1", "x"), ("l2", "x"), ("x", "l3")],
)
H_TREE = (
    {"l1": "0", "l2": "1", "x": "2", "y": "3", "l3": "4", "l4": "5"},
    [("l1", "x"), ("l2", "x"), ("x", "y"), ("y", "l3"), ("y", "l4")],
)
STAR = (
    {"c": "2", "l1": "0", "l2": "1", "l3": "3", "l4": "4"},
    [("c", "l1"), ("c", "l2"), ("c", "l3"), ("c", "l4")],
)


class TestValidation:
    """Test the building-data invariants."""

    def test_genus_two_is_valid(self, g1, t2):
        report = validate_building_data(genus2_building_data(g1, t2))
        assert report.valid
        assert report.violations == []
        assert (report.leaves, report.inner_vertices) == (2, 0)

    def test_profile_of_genus_two(self, g1, t2):
        records = psi_profile(genus2_building_data(g1, t2))
        assert len(records) == 1
        assert records[0].branches == (0, 1)
        assert records[0].hi == g1.m

    def test_branch_past_its_edge(self, g1, t2):
        bd = genus2_building_data(g1, t2)
        bad = Branch(path=("0", "inf"), start_level=Q5("0"), end_level=Q5("2"))
        bd = replace(bd, segments=SegmentSystem(branches=(bd.segments.branches[0], bad)))
        report = validate_building_data(bd)
        assert not report.valid
        assert "branch.levels" in report.invariants()
        assert "torus.measure_match" in report.invariants()

    def test_descending_path(self, g1, t2):
        bd = genus2_building_data(g1, t2)
        bad = Branch(path=("inf", "0"), start_level=Q5("0"), end_level=g1.m)
        bd = replace(bd, segments=SegmentSystem(branches=(bad, bd.segments.branches[1])))
        assert "branch.monotone" in validate_building_data(bd).invariants()

    def test_degree_four_vertex(self):
        report = validate_building_data(tree_only(2, *STAR))
        assert "tree.trivalent" in report.invariants()
        assert "segments.count" in report.invariants()

    def test_unknown_vertex(self):
        bd = tree_only(2, {"a": "0"}, [("a", "b")])
        assert "tree.vertex" in validate_building_data(bd).invariants()

    def test_repeated_values(self):
        bd = tree_only(2, {"lo": "1", "hi": "1"}, [("lo", "hi")])
        assert "tree.distinct_values" in validate_building_data(bd).invariants()

    def test_inner_vertex_not_between(self):
        values = {"l1": "0", "l2": "1", "x": "5", "l3": "3"}
        bd = tree_only(3, values, TRIPOD[1])
        assert "tree.inner_between" in validate_building_data(bd).invariants()

    def test_torus_bound(self, g1, t2):
        bd = genus2_building_data(g1, t2)
        tori = (bd.tori[0], TorusData(Q5("1/10"), Q5("1/10"), t2.m))
        report = validate_building_data(replace(bd, tori=tori))
        assert "torus.obstacle_bound" in report.invariants()

    def test_report_serializes(self, g1, t2):
        report = validate_building_data(genus2_building_data(g1, t2))
        assert report.model_dump(mode="json")["status"] == "valid"


class TestClassification:
    """Test the saddle census."""

    def test_simple(self):
        result = classify_foliation(tree_only(2, *SEGMENT))
        assert result.foliation_class == FoliationClass.SIMPLE
        assert result.minimal
        assert result.boundary_saddles == 0

    def test_simple_in_higher_genus(self):
        result = classify_foliation(tree_only(3, *SEGMENT))
        assert result.foliation_class == FoliationClass.SIMPLE
        assert result.boundary_saddles == 2

    def test_odd_genus_maximal_rejected(self):
        with pytest.raises(InvalidCensus) as info:
            classify_foliation(tree_only(3, *TRIPOD))
        assert info.value.invariant == "census.even_genus"

    def test_rank_class(self):
        result = classify_foliation(tree_only(4, *TRIPOD))
        assert result.foliation_class == FoliationClass.RANK
        assert (result.t, result.r, result.boundary_saddles) == (3, 1, 2)

    def test_maximal_genus_four(self):
        result = classify_foliation(tree_only(4, *H_TREE, cycle_type=(2,)))
        assert result.foliation_class == FoliationClass.MAXIMAL
        assert result.cycle_type == [2]

    def test_bad_cycle_type(self):
        with pytest.raises(InvalidCensus) as info:
            classify_foliation(tree_only(4, *H_TREE, cycle_type=(3,)))
        assert info.value.invariant == "census.cycle_type"

    def test_tree_identity(self):
        with pytest.raises(InvalidCensus) as info:
            classify_foliation(tree_only(4, *STAR))
        assert info.value.invariant == "census.tree_identity"

    def test_too_many_inner_vertices(self):
        with pytest.raises(InvalidCensus):
            classify_foliation(tree_only(2, *H_TREE))

    def test_maximal_cycle_types(self):
        assert maximal_cycle_types(4) == [(2,), (1, 1)]
        assert maximal_cycle_types(6) == [(3,), (2, 1), (1, 1, 1)]
        assert maximal_cycle_types(5) == []


class TestMinimalDiagramTypes:
    @pytest.mark.parametrize(
        "g,names", [(2, ["a"]), (3, ["a", "c"]), (4, ["a", "b", "c"]), (7, ["a", "b", "c"])]
    )
    def test_names(self, g, names):
        assert [d.name for d in minimal_diagram_types(g)] == names

    def test_disjoint_segments(self):
        types = {d.name: d for d in minimal_diagram_types(5)}
        assert types["a"].disjoint_segments == 3
        assert types["b"].disjoint_segments == 1
        assert types["c"].cycles == [3]

    def test_genus_too_small(self):
        with pytest.raises(GenusTooSmall):
            minimal_diagram_types(1)


class TestConservation:
    """Test the transition identities of a maximal genus-4 foliation."""

    def free(self, flux):
        return TransitionMatrix.from_free(
            Q5("1/2"), Q5("1/3"), Q5("1/4"), Q5("1/5"), Q5(flux)
        )

    def test_clockwise(self):
        result = check_conservation(self.free("1/7"))
        assert result.flux == Q5("1/7")
        assert result.direction == RotationDirection.CLOCKWISE

    def test_symmetric_is_degenerate(self):
        result = check_conservation(self.free("0"))
        assert result.direction == RotationDirection.DEGENERATE

    def test_contrclockwise(self):
        assert check_conservation(self.free("-1/10")).direction == (
            RotationDirection.CONTRCLOCKWISE
        )

    def test_irrational_entries(self):
        tm = TransitionMatrix.from_free(
            Q5("sqrt(5)"), Q5("1"), Q5("2"), Q5("3"), Q5("-1/2+1/2*sqrt(5)")
        )
        assert check_conservation(tm).flux == Q5("-1/2+1/2*sqrt(5)")

    def test_perturbed_entry(self):
        tm = replace(self.free("1/7"), m21=Q5("1/2"))
        with pytest.raises(ConservationViolated) as info:
            check_conservation(tm)
        assert "A1 = m21 + m41" in info.value.details["failing"]

    def test_negative_entry(self):
        with pytest.raises(ConservationViolated) as info:
            check_conservation(self.free("1/2"))
        assert "m14 >= 0" in info.value.details["failing"]
