import random
from fractions import Fraction
from math import lcm

import pytest

from packclass.errors import InfeasibleCrossSection
from packclass.model import Box, Instance, validate_packing
from packclass.opp import SearchLimits, heuristic_pack
from packclass.oracle import brute_force_opp
from packclass.solve import OkpSolution, ResourceLimit, SppSolution, solve_okp, solve_spp
from packclass.sweep import random_instance


def brute_okp_optimum(inst):
    best = Fraction(0)
    n = inst.n
    for mask in range(1 << n):
        ids = [inst.ids[k] for k in range(n) if mask >> k & 1]
        sub = inst.restrict(ids)
        if brute_force_opp(sub).feasible:
            best = max(best, sum((b.value for b in sub.boxes), Fraction(0)))
    return best


def brute_spp_height(boxes, cross):
    scale = lcm(*(b.size[-1].denominator for b in boxes))
    sums = {0}
    for b in boxes:
        sums |= {s + int(b.size[-1] * scale) for s in sums}
    floor = max(int(b.size[-1] * scale) for b in boxes)
    for s in sorted(x for x in sums if x >= floor):
        h = Fraction(s, scale)
        probe = Instance(boxes=boxes, container=(*cross, h))
        if brute_force_opp(probe).feasible:
            return h
    raise AssertionError("stacking everything is always feasible")


def test_okp_single_box_value():
    inst = Instance(boxes=(Box("a", (1, 1), value=7),), container=(2, 2))
    sol = solve_okp(inst)
    assert isinstance(sol, OkpSolution)
    assert sol.chosen == ("a",) and sol.total_value == 7


def test_okp_five_box_example_packs_everything(five_box_example):
    sol = solve_okp(five_box_example)
    assert isinstance(sol, OkpSolution)
    assert sol.total_value == 18  # values default to volumes: 4+5+3+4+2
    assert set(sol.chosen) == set(five_box_example.ids)
    assert validate_packing(sol.packing, five_box_example).valid


def test_okp_matches_brute_force_on_random_instances():
    rng = random.Random(51)
    for _ in range(40):
        inst = random_instance(rng)
        sol = solve_okp(inst)
        assert isinstance(sol, OkpSolution)
        assert sol.total_value == brute_okp_optimum(inst)
        packed = inst.restrict(sol.chosen)
        assert validate_packing(sol.packing, packed).valid
        assert sol.total_value == sum((b.value for b in packed.boxes), Fraction(0))


def test_okp_value_bounds(five_box_example):
    sol = solve_okp(five_box_example)
    heuristic = heuristic_pack(five_box_example)
    if heuristic is not None:
        hv = sum(
            (five_box_example.box(b).value for b in heuristic.positions), Fraction(0)
        )
        assert sol.total_value >= hv
    assert sol.total_value >= max(b.value for b in five_box_example.boxes)
    assert sol.total_value <= sum((b.value for b in five_box_example.boxes), Fraction(0))


def test_okp_records_dismissed_subsets():
    # full set too big, so at least one subset gets dismissed with a reason
    inst = Instance(
        boxes=(Box("a", (2, 2)), Box("b", (2, 2)), Box("c", (2, 2))),
        container=(3, 3),
    )
    sol = solve_okp(inst)
    assert isinstance(sol, OkpSolution)
    assert sol.total_value == 4 and len(sol.chosen) == 1
    assert sol.dismissed
    assert all(reason in ("volume-or-pair-screen", "opp-infeasible")
               for _, reason in sol.dismissed)


def test_okp_monotone_in_container():
    rng = random.Random(52)
    for _ in range(10):
        inst = random_instance(rng, container=(3, 3))
        bigger = Instance(boxes=inst.boxes, container=(5, 5))
        a = solve_okp(inst)
        b = solve_okp(bigger)
        assert b.total_value >= a.total_value


def test_okp_resource_limit():
    inst = Instance(
        boxes=tuple(Box(f"b{k}", (2, 2)) for k in range(1, 5)), container=(5, 5)
    )
    out = solve_okp(inst, SearchLimits(max_nodes=0, use_heuristic=False))
    assert isinstance(out, ResourceLimit)


def test_spp_single_box():
    sol = solve_spp([Box("a", (1, 2))], (1,))
    assert isinstance(sol, SppSolution) and sol.height == 2


def test_spp_two_boxes_must_stack():
    sol = solve_spp([Box("a", (2, 1)), Box("b", (2, 1))], (2,))
    assert sol.height == 2
    assert len(sol.packing.positions) == 2


def test_spp_five_box_example_height(five_box_example):
    boxes = list(five_box_example.boxes)
    sol = solve_spp(boxes, (5,))
    assert isinstance(sol, SppSolution)
    # area bound: ceil(18/5) = 4, and 4 is achievable
    assert sol.height >= 4
    assert sol.height == brute_spp_height(tuple(boxes), (Fraction(5),)) == 4
    solved = Instance(boxes=tuple(boxes), container=(5, sol.height))
    assert validate_packing(sol.packing, solved).valid


def test_spp_answer_is_subset_sum_and_previous_candidate_fails():
    rng = random.Random(53)
    for _ in range(25):
        inst = random_instance(rng)
        boxes = inst.boxes
        sol = solve_spp(boxes, (4,))
        assert isinstance(sol, SppSolution)
        scale = lcm(*(b.size[-1].denominator for b in boxes))
        sums = {0}
        for b in boxes:
            sums |= {s + int(b.size[-1] * scale) for s in sums}
        assert int(sol.height * scale) in sums
        assert sol.height >= max(b.size[-1] for b in boxes)
        below = sorted(
            s for s in sums if s < sol.height * scale and s >= max(
                int(b.size[-1] * scale) for b in boxes
            )
        )
        if below:
            probe = Instance(boxes=boxes, container=(Fraction(4), Fraction(below[-1], scale)))
            assert not brute_force_opp(probe).feasible


def test_spp_cross_section_guard():
    with pytest.raises(InfeasibleCrossSection):
        solve_spp([Box("a", (3, 1))], (2,))


def test_spp_empty_box_list():
    sol = solve_spp([], (4,))
    assert sol.height == 0 and sol.packing.positions == {}
