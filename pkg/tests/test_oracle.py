import pytest

from packclass.errors import TooLarge
from packclass.graph import Graph
from packclass.model import Box, Instance, validate_packing
from packclass.oracle import (
    OracleConfig,
    brute_force_opp,
    enumerate_packing_classes,
    oracle_is_comparability,
    oracle_is_interval,
)

from test_graph import complete_graph, cycle_graph, LONG_CLAW


def test_brute_force_verdicts(five_box_example):
    two = Instance(boxes=(Box("a", (2, 2)), Box("b", (2, 2))), container=(3, 3))
    assert not brute_force_opp(two).feasible
    result = brute_force_opp(five_box_example)
    assert result.feasible
    assert validate_packing(result.packing, five_box_example).valid
    assert set(result.packing.positions) == set(five_box_example.ids)


def test_brute_force_cap():
    boxes = tuple(Box(f"b{k}", (1, 1)) for k in range(6))
    inst = Instance(boxes=boxes, container=(6, 6))
    with pytest.raises(TooLarge):
        brute_force_opp(inst)
    assert brute_force_opp(inst, OracleConfig(max_boxes=6)).feasible


def test_oracle_interval_examples():
    assert not oracle_is_interval(cycle_graph(4))
    assert oracle_is_interval(complete_graph(4))
    assert not oracle_is_interval(LONG_CLAW)
    with pytest.raises(TooLarge):
        oracle_is_interval(complete_graph(8))


def test_oracle_comparability_examples():
    assert not oracle_is_comparability(cycle_graph(5))
    assert oracle_is_comparability(cycle_graph(6))  # bipartite
    assert oracle_is_comparability(
        Graph("abcd", [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
    )
    with pytest.raises(TooLarge):
        oracle_is_comparability(complete_graph(7), OracleConfig(max_orientation_edges=20))


def test_enumerate_classes_unique_stacked_class():
    inst = Instance(boxes=(Box("b1", (2, 1)), Box("b2", (2, 1))), container=(2, 2))
    enum = enumerate_packing_classes(inst)
    assert enum.total == 1
    (pc,) = enum.classes
    assert pc.edge_sets[0].edges() == [("b1", "b2")]
    assert pc.edge_sets[1].edges() == []


def test_enumerate_classes_empty_when_forced_overlap_everywhere():
    inst = Instance(boxes=(Box("b1", (2, 2)), Box("b2", (2, 2))), container=(3, 3))
    assert enumerate_packing_classes(inst).total == 0


def test_enumerate_classes_cap_keeps_exact_total(five_box_example):
    capped = enumerate_packing_classes(five_box_example, cap=2)
    assert len(capped.classes) == 2
    full = enumerate_packing_classes(five_box_example)
    assert capped.total == full.total == len(full.classes)
    assert full.total > 0


def test_enumerate_classes_size_guard():
    boxes = tuple(Box(f"b{k}", (1, 1)) for k in range(6))
    inst = Instance(boxes=boxes, container=(6, 6))
    with pytest.raises(TooLarge):
        enumerate_packing_classes(inst)


def test_theorem_equivalence_on_tiny_grid():
    # packable iff some packing class exists (full grid in acceptance)
    from packclass.sweep import exhaustive_grid

    for inst in exhaustive_grid(max_boxes=2):
        assert brute_force_opp(inst).feasible == (
            enumerate_packing_classes(inst).total > 0
        )
