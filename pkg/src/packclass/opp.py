"""Decision engine: can this box set be packed at all?

The search builds a packing class edge by edge. Every box pair is, per
dimension, included (the projections will overlap), excluded (they will
not), or undecided; branching fixes one pair in one dimension and
propagation applies the forced consequences:

  * a pair too wide for an axis must overlap there (2-element stable sets
    must fit), applied up front;
  * a pair included in all but one dimension is excluded in the last one
    (some axis must separate every pair);
  * an undecided pair whose inclusion would complete a 4-cycle whose both
    diagonals are already excluded is itself excluded (such a cycle could
    never gain a chord, and chordless 4-cycles are not interval).

Pruning certificates are structures that no completion of the current
state can destroy: a plus 4-cycle with both diagonals minus, an odd
2-chordless cycle in the minus graph whose potential 2-chords are all
plus, an overweight clique in the minus graph, and the width bound on
fully decided vertex sets. Each is re-checkable against the state.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, product
from fractions import Fraction
from typing import Optional, Union

from .errors import NoUndecided
from .graph import CLIQUE_CAP, Graph, _odd_closed_walk, bits, greedy_weight_clique, max_weight_clique
from .model import Instance, Packing, project_to_class, validate_packing
from .packing_class import PackingClass, extract_packing, orient_class, verify_packing_class

INCLUDE = 1
EXCLUDE = -1


@dataclass
class SearchLimits:
    max_nodes: int = 10_000_000
    time_limit: Optional[float] = 60.0
    use_heuristic: bool = True
    use_quick_check: bool = True
    check_interval: int = 8  # decisions between expensive prune/accept checks


@dataclass
class SearchStats:
    nodes: int = 0
    decisions: int = 0
    propagations: int = 0
    conflicts: int = 0
    prunes: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def bump(self, rule: str) -> None:
        self.prunes[rule] = self.prunes.get(rule, 0) + 1

    def deterministic_view(self) -> tuple:
        """Everything except wall time, for determinism comparisons."""
        return (
            self.nodes,
            self.decisions,
            self.propagations,
            self.conflicts,
            tuple(sorted(self.prunes.items())),
        )


@dataclass(frozen=True)
class Conflict:
    rule: str
    dimension: int
    pair: tuple[str, str]


@dataclass(frozen=True)
class Consequences:
    applied: tuple  # (dimension, (id_a, id_b), sign) in application order


@dataclass(frozen=True)
class ImmediateConflict:
    conflict: Conflict


@dataclass(frozen=True)
class Prune:
    rule: str
    dimension: int
    certificate: tuple


@dataclass
class SearchOutcome:
    verdict: str  # "feasible" | "infeasible" | "resource_limit"
    packing: Optional[Packing]
    packing_class: Optional[PackingClass]
    stats: SearchStats


class EdgeState:
    """Included/excluded pair sets per dimension plus an undo trail.

    Status per (dimension, pair) is +1 (in E+), -1 (in E-), or 0. The
    trail records assignments in order so the search can backtrack to any
    mark. plus_adj/minus_adj mirror the status as per-vertex bitsets.
    """

    def __init__(self, inst: Instance):
        self.inst = inst
        self.n = inst.n
        self.d = inst.d
        self.pairs: list[tuple[int, int]] = list(combinations(range(self.n), 2))
        self.pair_id = {p: k for k, p in enumerate(self.pairs)}
        self.m = len(self.pairs)
        self.status = [[0] * self.m for _ in range(self.d)]
        self.plus_adj = [[0] * self.n for _ in range(self.d)]
        self.minus_adj = [[0] * self.n for _ in range(self.d)]
        self.trail: list[tuple[int, int]] = []
        self.undecided = self.d * self.m
        self.stats = SearchStats()

    # -- bookkeeping ---------------------------------------------------
    def pair_of(self, a: str, b: str) -> int:
        ia, ib = self.inst.index(a), self.inst.index(b)
        return self.pair_id[(min(ia, ib), max(ia, ib))]

    def pair_ids(self, pid: int) -> tuple[str, str]:
        a, b = self.pairs[pid]
        return (self.inst.ids[a], self.inst.ids[b])

    def e_plus(self, i: int) -> list[tuple[str, str]]:
        return [self.pair_ids(p) for p in range(self.m) if self.status[i][p] == INCLUDE]

    def e_minus(self, i: int) -> list[tuple[str, str]]:
        return [self.pair_ids(p) for p in range(self.m) if self.status[i][p] == EXCLUDE]

    def undecided_pairs(self) -> list[tuple[int, tuple[str, str]]]:
        return [
            (i, self.pair_ids(p))
            for i in range(self.d)
            for p in range(self.m)
            if self.status[i][p] == 0
        ]

    def mark(self) -> int:
        return len(self.trail)

    def undo_to(self, mark: int) -> None:
        while len(self.trail) > mark:
            i, pid = self.trail.pop()
            sign = self.status[i][pid]
            a, b = self.pairs[pid]
            adj = self.plus_adj[i] if sign == INCLUDE else self.minus_adj[i]
            adj[a] &= ~(1 << b)
            adj[b] &= ~(1 << a)
            self.status[i][pid] = 0
            self.undecided += 1

    def _set(self, i: int, pid: int, sign: int) -> str:
        cur = self.status[i][pid]
        if cur == sign:
            return "noop"
        if cur != 0:
            return "conflict"
        a, b = self.pairs[pid]
        if sign == EXCLUDE and (
            self.inst.int_size(a, i) + self.inst.int_size(b, i)
            > self.inst.int_container(i)
        ):
            # A pair too wide for the axis must overlap there.
            return "conflict"
        self.status[i][pid] = sign
        adj = self.plus_adj[i] if sign == INCLUDE else self.minus_adj[i]
        adj[a] |= 1 << b
        adj[b] |= 1 << a
        self.trail.append((i, pid))
        self.undecided -= 1
        return "applied"

    def plus_dim_count(self, pid: int) -> int:
        return sum(1 for i in range(self.d) if self.status[i][pid] == INCLUDE)


def _fixpoint(
    state: EdgeState, seeds: list[tuple[int, int, int]]
) -> Union[Consequences, Conflict]:
    """Apply the seed assignments and their forced consequences."""
    inst = state.inst
    queue: deque[tuple[int, int, int, str]] = deque(
        (i, pid, sign, "seed") for i, pid, sign in seeds
    )
    applied: list[tuple[int, tuple[str, str], int]] = []
    while queue:
        i, pid, sign, rule = queue.popleft()
        result = state._set(i, pid, sign)
        if result == "noop":
            continue
        if result == "conflict":
            state.stats.conflicts += 1
            return Conflict(rule=rule, dimension=i, pair=state.pair_ids(pid))
        applied.append((i, state.pair_ids(pid), sign))
        state.stats.propagations += 1
        a, b = state.pairs[pid]
        if sign == INCLUDE:
            count = state.plus_dim_count(pid)
            if count == state.d:
                state.stats.conflicts += 1
                return Conflict(rule="p3", dimension=i, pair=state.pair_ids(pid))
            if count == state.d - 1:
                for j in range(state.d):
                    if state.status[j][pid] == 0:
                        queue.append((j, pid, EXCLUDE, "p3"))
            plus = state.plus_adj[i]
            minus = state.minus_adj[i]
            for u, v in ((a, b), (b, a)):
                # new edge ends a 3-edge path x-y-u-v whose diagonals are minus
                for y in bits(plus[u] & minus[v]):
                    for x in bits(plus[y] & minus[u]):
                        queue.append(
                            (i, state.pair_id[(min(x, v), max(x, v))], EXCLUDE, "c4")
                        )
            # new edge in the middle of a path x-a-b-t with minus diagonals
            for x in bits(state.plus_adj[i][a] & state.minus_adj[i][b]):
                for t in bits(state.plus_adj[i][b] & state.minus_adj[i][a]):
                    queue.append(
                        (i, state.pair_id[(min(x, t), max(x, t))], EXCLUDE, "c4")
                    )
        else:
            plus = state.plus_adj[i]
            minus = state.minus_adj[i]
            # new minus edge as a diagonal {p,r} of a plus path p-q-r-s
            for p, r in ((a, b), (b, a)):
                for q in bits(plus[p] & plus[r]):
                    for s in bits(plus[r] & minus[q]):
                        queue.append(
                            (i, state.pair_id[(min(s, p), max(s, p))], EXCLUDE, "c4")
                        )
            # greedy overweight-clique probe around the new exclusion: any
            # clique in the minus graph is a stable set of the final graph,
            # so its width is capped by the axis
            if _greedy_minus_clique_overweight(state, i, a, b):
                state.stats.conflicts += 1
                return Conflict(rule="minus_clique", dimension=i, pair=state.pair_ids(pid))
    return Consequences(tuple(applied))


def _greedy_minus_clique_overweight(state: EdgeState, i: int, a: int, b: int) -> bool:
    inst = state.inst
    minus = state.minus_adj[i]
    total = inst.int_size(a, i) + inst.int_size(b, i)
    cap = inst.int_container(i)
    if total > cap:
        return True
    members = (1 << a) | (1 << b)
    common = minus[a] & minus[b]
    while common:
        v = max(bits(common), key=lambda u: (inst.int_size(u, i), -u))
        members |= 1 << v
        total += inst.int_size(v, i)
        if total > cap:
            return True
        common &= minus[v]
    return False


def initial_state(inst: Instance) -> Union[EdgeState, ImmediateConflict]:
    """Fresh state with all forced inclusions (pairs too wide to sit side
    by side) and the exclusions those force in turn."""
    state = EdgeState(inst)
    seeds = []
    for pid, (a, b) in enumerate(state.pairs):
        for i in range(inst.d):
            if inst.int_size(a, i) + inst.int_size(b, i) > inst.int_container(i):
                seeds.append((i, pid, INCLUDE))
    result = _fixpoint(state, seeds)
    if isinstance(result, Conflict):
        return ImmediateConflict(result)
    return state


def propagate(
    state: EdgeState, decision: tuple[int, tuple[str, str], int]
) -> Union[Consequences, Conflict]:
    """Apply one decision plus its forced consequences, to a fixed point.

    On Conflict the partial assignments stay on the trail; use
    state.mark()/state.undo_to() around the call to retract them.
    """
    i, (a, b), sign = decision
    pid = state.pair_of(a, b)
    return _fixpoint(state, [(i, pid, sign)])


def _plus_graph(state: EdgeState, i: int) -> Graph:
    return Graph(state.inst.ids, state.e_plus(i))


def _minus_graph(state: EdgeState, i: int) -> Graph:
    return Graph(state.inst.ids, state.e_minus(i))


def prune_check(state: EdgeState) -> Optional[Prune]:
    """Certificate-backed dead-end detection on the current state.

    Returns None when no rule fires. Every certificate survives every
    completion of the state, so pruning never loses solutions.
    """
    inst = state.inst
    n = state.n
    for i in range(state.d):
        plus = state.plus_adj[i]
        minus = state.minus_adj[i]
        # (1) plus 4-cycle whose both diagonals are excluded
        for x in range(n):
            for z in bits(minus[x] >> (x + 1) << (x + 1)):
                common = plus[x] & plus[z]
                for y in bits(common):
                    for t in bits(common & minus[y]):
                        if t > y:
                            ids = inst.ids
                            return Prune(
                                rule="c4",
                                dimension=i,
                                certificate=(ids[x], ids[y], ids[z], ids[t]),
                            )
        # (2) odd 2-chordless cycle in the minus graph (2-chords forced plus)
        walk = _odd_closed_walk(n, minus, plus)
        if walk is not None:
            return Prune(
                rule="odd_cycle",
                dimension=i,
                certificate=tuple(inst.ids[v] for v in walk),
            )
        # (3) overweight clique in the minus graph (a stable set of the
        # final graph, so it must fit along the axis)
        minus_graph = _minus_graph(state, i)
        weights = {b.id: inst.int_size(k, i) for k, b in enumerate(inst.boxes)}
        if n <= CLIQUE_CAP:
            weight, clique = max_weight_clique(minus_graph, weights)
        else:
            weight, clique = greedy_weight_clique(minus_graph, weights)
        if weight > inst.int_container(i):
            return Prune(rule="infeasible_clique", dimension=i, certificate=(clique,))
        # (4) width bound on the fully decided vertex set (needs the exact
        # clique number, so it is skipped beyond the exact-search cap)
        full = (1 << n) - 1
        decided = [
            v
            for v in range(n)
            if (plus[v] | minus[v]) == full & ~(1 << v)
        ]
        if 2 <= len(decided) <= CLIQUE_CAP:
            total = sum(inst.int_size(v, i) for v in decided)
            needed = -(-total // inst.int_container(i))
            if needed >= 2:
                sub_ids = [inst.ids[v] for v in decided]
                sub = Graph(
                    sub_ids,
                    [
                        (inst.ids[u], inst.ids[v])
                        for u in decided
                        for v in decided
                        if u < v and plus[u] >> v & 1
                    ],
                )
                size, clique = max_weight_clique(sub, {v: 1 for v in sub_ids})
                if size < needed:
                    return Prune(
                        rule="clique_bound",
                        dimension=i,
                        certificate=(tuple(sub_ids), needed, int(size)),
                    )
    return None


def branch_select(state: EdgeState) -> tuple[int, tuple[str, str], int]:
    """Deterministic branching choice: the undecided (dimension, pair) whose
    endpoints touch the most already-decided relations, ties broken by
    smallest dimension then lexicographic pair; inclusion is tried first."""
    if state.undecided == 0:
        raise NoUndecided("no undecided pair to branch on")
    best = None
    best_key = None
    for i in range(state.d):
        for pid in range(state.m):
            if state.status[i][pid] != 0:
                continue
            a, b = state.pairs[pid]
            score = 0
            for j in range(state.d):
                dec_a = state.plus_adj[j][a] | state.minus_adj[j][a]
                dec_b = state.plus_adj[j][b] | state.minus_adj[j][b]
                score += dec_a.bit_count() + dec_b.bit_count()
                if state.status[j][pid] != 0:
                    score -= 1  # the pair itself, counted at both endpoints
            key = (-score, i, a, b)
            if best_key is None or key < best_key:
                best_key = key
                best = (i, state.pair_ids(pid), INCLUDE)
    assert best is not None
    return best


def _try_accept(state: EdgeState) -> Optional[tuple[Packing, PackingClass]]:
    """If the included edges already form a packing class, extract a packing."""
    inst = state.inst
    edge_sets = tuple(_plus_graph(state, i) for i in range(state.d))
    report = verify_packing_class(edge_sets, inst)
    if not report.all_ok:
        return None
    pc = PackingClass(instance=inst, edge_sets=edge_sets)
    orientation = orient_class(pc)
    packing = extract_packing(orientation, inst)
    assert validate_packing(packing, inst).valid, "solver produced an invalid packing"
    return packing, pc


def _bottom_left(inst: Instance, order: list[int]) -> Optional[list[tuple[int, tuple[int, ...]]]]:
    """Place boxes in `order`, each at its first feasible corner candidate
    (candidates sorted with the highest dimension varying slowest)."""
    d = inst.d
    placed: list[tuple[int, tuple[int, ...]]] = []
    for b in order:
        cands: list[list[int]] = []
        for i in range(d):
            vals = {0}
            for c, pos in placed:
                vals.add(pos[i] + inst.int_size(c, i))
            limit = inst.int_container(i) - inst.int_size(b, i)
            cands.append(sorted(v for v in vals if v <= limit))
        spot = None
        for pos in sorted(product(*cands), key=lambda t: tuple(reversed(t))):
            ok = True
            for c, q in placed:
                if all(
                    max(pos[i], q[i])
                    < min(pos[i] + inst.int_size(b, i), q[i] + inst.int_size(c, i))
                    for i in range(d)
                ):
                    ok = False
                    break
            if ok:
                spot = pos
                break
        if spot is None:
            return None
        placed.append((b, spot))
    return placed


def heuristic_pack(inst: Instance) -> Optional[Packing]:
    """Deterministic bottom-left packing attempt over corner candidates.

    Several box orderings are tried in a fixed sequence (volume, longest
    side, per-axis size, perimeter, each descending); the first complete
    placement wins. Incomplete: may return None for feasible instances.
    """
    n, d = inst.n, inst.d
    keyed = [
        lambda b: -inst.int_volume(b),
        lambda b: -max(inst.int_size(b, i) for i in range(d)),
        *[lambda b, i=i: -inst.int_size(b, i) for i in range(d)],
        lambda b: -sum(inst.int_size(b, i) for i in range(d)),
    ]
    seen: set[tuple[int, ...]] = set()
    for key in keyed:
        order = sorted(range(n), key=lambda b: (key(b), inst.ids[b]))
        if tuple(order) in seen:
            continue
        seen.add(tuple(order))
        placed = _bottom_left(inst, order)
        if placed is not None:
            positions = {
                inst.ids[b]: tuple(Fraction(pos[i], inst.scale(i)) for i in range(d))
                for b, pos in placed
            }
            packing = Packing(positions)
            assert validate_packing(packing, inst).valid
            return packing
    return None


def quick_infeasible(inst: Instance, S) -> bool:
    """Cheap sound screen: True only when S provably cannot be packed
    (total volume exceeds the container, or some pair is too wide to sit
    side by side in every dimension)."""
    ids = list(S)
    idxs = [inst.index(b) for b in ids]
    if sum(inst.int_volume(b) for b in idxs) > inst.int_container_volume():
        return True
    for a, b in combinations(idxs, 2):
        if all(
            inst.int_size(a, i) + inst.int_size(b, i) > inst.int_container(i)
            for i in range(inst.d)
        ):
            return True
    return False


def solve_opp(inst: Instance, limits: Optional[SearchLimits] = None) -> SearchOutcome:
    """Decide packability of the full box set.

    Fast paths first: the volume/pair screen for a quick no, the
    bottom-left heuristic for a quick yes. Otherwise branch and bound over
    edge decisions; "feasible" always carries a packing that validates,
    "infeasible" is only returned once the search space is exhausted.
    """
    limits = limits or SearchLimits()
    stats = SearchStats()
    start = time.perf_counter()
    deadline = None if limits.time_limit is None else start + limits.time_limit

    def outcome(verdict: str, packing=None, pc=None) -> SearchOutcome:
        stats.wall_time = time.perf_counter() - start
        return SearchOutcome(verdict=verdict, packing=packing, packing_class=pc, stats=stats)

    if limits.use_quick_check and quick_infeasible(inst, inst.ids):
        stats.bump("quick_infeasible")
        return outcome("infeasible")
    if limits.use_heuristic:
        packing = heuristic_pack(inst)
        if packing is not None:
            stats.bump("heuristic")
            return outcome("feasible", packing, project_to_class(packing, inst))

    init = initial_state(inst)
    if isinstance(init, ImmediateConflict):
        stats.bump("initial_conflict")
        return outcome("infeasible")
    state = init
    stats.propagations += state.stats.propagations
    stats.conflicts += state.stats.conflicts
    state.stats = stats

    accept = _try_accept(state)
    if accept is not None:
        return outcome("feasible", accept[0], accept[1])
    if prune_check(state) is not None:
        stats.bump("root_prune")
        return outcome("infeasible")

    found: list[tuple[Packing, PackingClass]] = []
    since_check = 0

    def search() -> str:  # "found" | "exhausted" | "limit"
        nonlocal since_check
        if deadline is not None and time.perf_counter() > deadline:
            return "limit"
        if stats.nodes >= limits.max_nodes:
            return "limit"
        if since_check >= limits.check_interval:
            since_check = 0
            pr = prune_check(state)
            if pr is not None:
                stats.bump(pr.rule)
                return "exhausted"
            accept = _try_accept(state)
            if accept is not None:
                found.append(accept)
                return "found"
        if state.undecided == 0:
            # At a fully decided state the prune rules are a complete class
            # test and far cheaper than building the verification artifacts.
            pr = prune_check(state)
            if pr is not None:
                stats.bump(f"leaf_{pr.rule}")
                return "exhausted"
            accept = _try_accept(state)
            if accept is not None:
                found.append(accept)
                return "found"
            stats.bump("leaf_reject")
            return "exhausted"
        i, pair, first = branch_select(state)
        for sign in (first, -first):
            stats.nodes += 1
            stats.decisions += 1
            since_check += 1
            mark = state.mark()
            result = propagate(state, (i, pair, sign))
            if isinstance(result, Consequences):
                verdict = search()
                if verdict != "exhausted":
                    state.undo_to(mark)
                    return verdict
            state.undo_to(mark)
        return "exhausted"

    verdict = search()
    if verdict == "found":
        packing, pc = found[0]
        return outcome("feasible", packing, pc)
    if verdict == "limit":
        return outcome("resource_limit")
    return outcome("infeasible")
