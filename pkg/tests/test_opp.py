import random
from itertools import combinations

import pytest

from packclass.errors import NoUndecided
from packclass.model import Box, Instance, validate_packing
from packclass.opp import (
    EXCLUDE,
    INCLUDE,
    Conflict,
    Consequences,
    EdgeState,
    ImmediateConflict,
    Prune,
    SearchLimits,
    branch_select,
    heuristic_pack,
    initial_state,
    propagate,
    prune_check,
    quick_infeasible,
    solve_opp,
)
from packclass.oracle import brute_force_opp
from packclass.sweep import exhaustive_grid

from certcheck import check_induced_c4, check_odd_2chordless_cycle
from packclass.graph import Graph


def unit_boxes_instance(n, W=10):
    return Instance(
        boxes=[Box(f"v{k}", (1, 1)) for k in range(1, n + 1)], container=(W, W)
    )


def test_initial_state_immediate_conflict():
    inst = Instance(boxes=(Box("a", (2, 2)), Box("b", (2, 2))), container=(3, 3))
    assert isinstance(initial_state(inst), ImmediateConflict)


def test_initial_state_completes_stackable_pair():
    inst = Instance(boxes=(Box("a", (2, 1)), Box("b", (2, 1))), container=(2, 2))
    state = initial_state(inst)
    assert isinstance(state, EdgeState)
    assert state.undecided == 0
    assert state.e_plus(0) == [("a", "b")]
    assert state.e_minus(1) == [("a", "b")]


def test_initial_state_five_box_forced_pair(five_box_example):
    state = initial_state(five_box_example)
    assert ("b1", "b2") in state.e_plus(0)
    assert ("b1", "b2") in state.e_minus(1)  # forced out by the shared-axis rule


def test_propagate_forces_c4_completion_edge():
    # three included edges form a path v2-v1-v4-v3 and both diagonals are
    # excluded; the remaining pair {v2,v3} is forced out, else the four
    # boxes would induce an unfixable chordless 4-cycle
    inst = unit_boxes_instance(4)
    state = initial_state(inst)
    decisions = [
        (0, ("v1", "v2"), INCLUDE),
        (0, ("v3", "v4"), INCLUDE),
        (0, ("v4", "v1"), INCLUDE),
        (0, ("v2", "v4"), EXCLUDE),
        (0, ("v1", "v3"), EXCLUDE),
    ]
    for decision in decisions:
        result = propagate(state, decision)
        assert isinstance(result, Consequences)
    pid = state.pair_of("v2", "v3")
    assert state.status[0][pid] == EXCLUDE
    # and re-running the final decision is a no-op
    again = propagate(state, decisions[-1])
    assert isinstance(again, Consequences) and again.applied == ()
    # trying to include the forced-out edge is a contradiction
    conflict = propagate(state, (0, ("v2", "v3"), INCLUDE))
    assert isinstance(conflict, Conflict)


def test_propagate_idempotent_on_random_states():
    rng = random.Random(31)
    for _ in range(30):
        inst = unit_boxes_instance(rng.randint(2, 5))
        state = initial_state(inst)
        pairs = [state.pair_ids(p) for p in range(state.m)]
        for _ in range(8):
            i = rng.randrange(state.d)
            pair = rng.choice(pairs)
            sign = rng.choice((INCLUDE, EXCLUDE))
            before = state.mark()
            result = propagate(state, (i, pair, sign))
            if isinstance(result, Conflict):
                state.undo_to(before)
                continue
            again = propagate(state, (i, pair, sign))
            assert isinstance(again, Consequences) and again.applied == ()
        # structural invariants: no pair both included and excluded, and no
        # pair included in every dimension
        for p in range(state.m):
            signs = [state.status[i][p] for i in range(state.d)]
            assert all(s in (-1, 0, 1) for s in signs)
            assert signs != [INCLUDE] * state.d


def _raw_state(n, W=10):
    inst = unit_boxes_instance(n, W)
    state = initial_state(inst)
    assert isinstance(state, EdgeState)
    return inst, state


def _set_raw(state, i, a, b, sign):
    assert state._set(i, state.pair_of(a, b), sign) == "applied"


def test_prune_check_c4():
    inst, state = _raw_state(4)
    for a, b in [("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v1")]:
        _set_raw(state, 0, a, b, INCLUDE)
    for a, b in [("v1", "v3"), ("v2", "v4")]:
        _set_raw(state, 0, a, b, EXCLUDE)
    prune = prune_check(state)
    assert isinstance(prune, Prune) and prune.rule == "c4"
    plus = Graph(inst.ids, state.e_plus(0))
    assert check_induced_c4(plus, prune.certificate)
    # the diagonals of the certificate are excluded, so no completion fixes it
    x, y, z, t = prune.certificate
    minus = set(map(frozenset, state.e_minus(0)))
    assert frozenset((x, z)) in minus and frozenset((y, t)) in minus


def test_prune_check_odd_cycle():
    inst, state = _raw_state(5)
    ids = [f"v{k}" for k in range(1, 6)]
    ring = [(ids[k], ids[(k + 1) % 5]) for k in range(5)]
    for a, b in ring:
        _set_raw(state, 0, a, b, EXCLUDE)
    for a, b in combinations(ids, 2):
        if (a, b) not in ring and (b, a) not in ring:
            _set_raw(state, 0, a, b, INCLUDE)
    prune = prune_check(state)
    assert isinstance(prune, Prune) and prune.rule == "odd_cycle"
    minus = Graph(inst.ids, state.e_minus(0))
    assert check_odd_2chordless_cycle(minus, prune.certificate)


def test_prune_check_infeasible_clique():
    inst = Instance(
        boxes=(Box("a", (2, 1)), Box("b", (2, 1)), Box("c", (2, 1))),
        container=(5, 5),
    )
    state = initial_state(inst)
    for x, y in combinations(("a", "b", "c"), 2):
        _set_raw(state, 0, x, y, EXCLUDE)
    prune = prune_check(state)
    assert isinstance(prune, Prune) and prune.rule == "infeasible_clique"
    (clique,) = prune.certificate
    assert set(clique) == {"a", "b", "c"}  # widths 2+2+2 > 5


def test_branch_select_single_pair_and_determinism():
    inst = unit_boxes_instance(2)
    state = initial_state(inst)
    choice = branch_select(state)
    assert choice == (0, ("v1", "v2"), INCLUDE)
    # deciding everything leaves nothing to branch on
    propagate(state, (0, ("v1", "v2"), EXCLUDE))
    propagate(state, (1, ("v1", "v2"), EXCLUDE))
    with pytest.raises(NoUndecided):
        branch_select(state)


def test_branch_select_prefers_decided_neighborhoods():
    inst = unit_boxes_instance(4)
    state = initial_state(inst)
    propagate(state, (0, ("v1", "v2"), INCLUDE))
    i, pair, sign = branch_select(state)
    assert sign == INCLUDE
    assert set(pair) & {"v1", "v2"}  # touches the decided relation
    assert branch_select(state) == (i, pair, sign)


def test_solve_five_box_example_by_search(five_box_example):
    out = solve_opp(five_box_example, SearchLimits(use_heuristic=False))
    assert out.verdict == "feasible"
    assert set(out.packing.positions) == set(five_box_example.ids)
    assert validate_packing(out.packing, five_box_example).valid
    assert out.stats.nodes > 0


def test_solve_infeasible_pair():
    inst = Instance(boxes=(Box("a", (2, 2)), Box("b", (2, 2))), container=(3, 3))
    assert solve_opp(inst).verdict == "infeasible"


def test_solver_deterministic(five_box_example):
    limits = SearchLimits(use_heuristic=False)
    a = solve_opp(five_box_example, limits)
    b = solve_opp(five_box_example, limits)
    assert a.verdict == b.verdict
    assert a.packing == b.packing
    assert a.stats.deterministic_view() == b.stats.deterministic_view()


def test_resource_limit_outcomes(five_box_example):
    out = solve_opp(five_box_example, SearchLimits(max_nodes=0, use_heuristic=False))
    assert out.verdict == "resource_limit"
    out = solve_opp(five_box_example, SearchLimits(time_limit=0.0, use_heuristic=False))
    assert out.verdict == "resource_limit"


def test_heuristic_pack_examples(five_box_example):
    single = Instance(boxes=(Box("a", (1, 1)),), container=(1, 1))
    assert heuristic_pack(single).positions["a"] == (0, 0)
    stack = Instance(boxes=(Box("a", (2, 1)), Box("b", (2, 1))), container=(2, 2))
    packed = heuristic_pack(stack)
    assert packed is not None and len(packed.positions) == 2
    example_packed = heuristic_pack(five_box_example)
    assert example_packed is not None
    assert validate_packing(example_packed, five_box_example).valid


def test_quick_infeasible_rules(five_box_example):
    too_big = Instance(boxes=(Box("a", (2, 2)), Box("b", (2, 2))), container=(3, 3))
    assert quick_infeasible(too_big, ("a", "b"))
    assert not quick_infeasible(five_box_example, five_box_example.ids)  # volume 18 <= 25
    assert not quick_infeasible(five_box_example, ("b1",))


def test_verdicts_match_brute_force_small_grid():
    # quick slice of the exhaustive agreement sweep (full grid runs in the
    # acceptance suite)
    for inst in exhaustive_grid(max_boxes=2):
        out = solve_opp(inst)
        brute = brute_force_opp(inst)
        assert (out.verdict == "feasible") == brute.feasible
        if out.verdict == "feasible":
            assert validate_packing(out.packing, inst).valid


def test_three_dimensional_verdicts_match_brute_force():
    rng = random.Random(42)
    for _ in range(40):
        n = rng.randint(1, 3)
        inst = Instance(
            boxes=[
                Box(f"b{k}", tuple(rng.randint(1, 2) for _ in range(3)))
                for k in range(n)
            ],
            container=(3, 3, 2),
        )
        out = solve_opp(inst, SearchLimits(use_heuristic=False))
        assert (out.verdict == "feasible") == brute_force_opp(inst).feasible
        if out.verdict == "feasible":
            assert validate_packing(out.packing, inst).valid


def test_one_dimensional_reduces_to_width_sum():
    fits = Instance(boxes=(Box("a", (2,)), Box("b", (3,))), container=(5,))
    assert solve_opp(fits, SearchLimits(use_heuristic=False)).verdict == "feasible"
    overflow = Instance(boxes=(Box("a", (2,)), Box("b", (3,))), container=(4,))
    assert solve_opp(overflow, SearchLimits(use_heuristic=False)).verdict == "infeasible"


def test_feasible_outcomes_always_validate():
    rng = random.Random(41)
    for _ in range(50):
        n = rng.randint(1, 4)
        inst = Instance(
            boxes=[Box(f"b{k}", (rng.randint(1, 3), rng.randint(1, 3))) for k in range(n)],
            container=(4, 4),
        )
        for limits in (SearchLimits(), SearchLimits(use_heuristic=False)):
            out = solve_opp(inst, limits)
            if out.verdict == "feasible":
                assert validate_packing(out.packing, inst).valid
