"""Undirected graphs over string ids with bitset adjacency.

Vertex sets are represented as Python ints used as bitsets, indexed by the
graph's vertex order; all certificates are reported with original ids.
"""

from __future__ import annotations

import bisect
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import TooLarge, UnknownVertex

CLIQUE_CAP = 64


def bits(mask: int):
    """Yield the set bit positions of `mask` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Immutable simple graph: ordered vertices, per-vertex adjacency bitsets."""

    __slots__ = ("vertices", "_index", "adj")

    def __init__(self, vertices: Sequence[str], edges: Iterable[tuple[str, str]] = ()):
        self.vertices: tuple[str, ...] = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise UnknownVertex("duplicate vertex ids")
        self._index = {v: k for k, v in enumerate(self.vertices)}
        adj = [0] * len(self.vertices)
        for a, b in edges:
            ia, ib = self.index(a), self.index(b)
            if ia == ib:
                raise UnknownVertex(f"self-loop at {a!r}")
            adj[ia] |= 1 << ib
            adj[ib] |= 1 << ia
        self.adj: tuple[int, ...] = tuple(adj)

    # -- basic queries -------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, v: str) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {v!r}") from None

    def has_edge(self, a: str, b: str) -> bool:
        return bool(self.adj[self.index(a)] >> self.index(b) & 1)

    def edges(self) -> list[tuple[str, str]]:
        out = []
        for i in range(self.n):
            for j in bits(self.adj[i] >> (i + 1) << (i + 1)):
                out.append((self.vertices[i], self.vertices[j]))
        return out

    def edge_count(self) -> int:
        return sum(self.adj[i].bit_count() for i in range(self.n)) // 2

    def names(self, mask: int) -> tuple[str, ...]:
        return tuple(self.vertices[i] for i in bits(mask))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.vertices, self.adj))

    def __repr__(self) -> str:
        return f"Graph({list(self.vertices)!r}, {self.edges()!r})"


def complement(G: Graph) -> Graph:
    """Same vertices, edge present iff absent in the input."""
    full = (1 << G.n) - 1
    H = Graph(G.vertices)
    H.adj = tuple((full ^ G.adj[i]) & ~(1 << i) for i in range(G.n))  # type: ignore[misc]
    return H


def induced(G: Graph, S: Iterable[str]) -> Graph:
    """Induced subgraph on S, keeping the original relative vertex order."""
    keep = sorted({G.index(v) for v in S})
    names = [G.vertices[i] for i in keep]
    pos = {i: k for k, i in enumerate(keep)}
    H = Graph(names)
    adj = [0] * len(keep)
    for i in keep:
        for j in bits(G.adj[i]):
            if j in pos:
                adj[pos[i]] |= 1 << pos[j]
    H.adj = tuple(adj)  # type: ignore[misc]
    return H


def find_induced_c4(
    G: Graph, touching: Optional[tuple[str, str]] = None
) -> Optional[tuple[str, str, str, str]]:
    """Find four vertices inducing a chordless 4-cycle, in cycle order.

    With `touching` given, only 4-cycles through that edge are considered
    (the incremental form used after adding a single edge).
    """
    adj = G.adj
    if touching is not None:
        x, y = G.index(touching[0]), G.index(touching[1])
        if not adj[x] >> y & 1:
            return None
        # cycle x-y-c-d with non-edges {x,c}, {y,d}
        for c in bits(adj[y] & ~adj[x] & ~(1 << x)):
            for d in bits(adj[x] & adj[c] & ~adj[y] & ~(1 << y)):
                return (G.vertices[x], G.vertices[y], G.vertices[c], G.vertices[d])
        return None
    for a in range(G.n):
        non_nbrs = ~adj[a] & ~(1 << a) & ((1 << G.n) - 1)
        for c in bits(non_nbrs):
            if c <= a:
                continue
            common = adj[a] & adj[c]
            for b in bits(common):
                rest = common & ~adj[b] & ~(1 << b)
                for d in bits(rest):
                    if d > b:
                        return (
                            G.vertices[a],
                            G.vertices[b],
                            G.vertices[c],
                            G.vertices[d],
                        )
    return None


def _odd_closed_walk(
    n: int, walk_adj: Sequence[int], safe_pair_adj: Sequence[int]
) -> Optional[tuple[int, ...]]:
    """Find an odd closed walk v_0..v_{k-1} (k odd) over `walk_adj` edges
    such that every cyclically-consecutive-but-one pair (v_j, v_{j+2}) is
    either the same vertex (a backtrack) or lies in `safe_pair_adj`.

    States are directed arcs (u, v); a step (u,v)->(v,w) is legal iff
    {v,w} is a walk edge and (w == u or safe(u, w)). Works per strongly
    connected component: an odd closed walk exists iff some SCC is not
    2-colorable by path parity.
    """
    states: list[tuple[int, int]] = []
    state_id: dict[tuple[int, int], int] = {}
    for u in range(n):
        for v in bits(walk_adj[u]):
            state_id[(u, v)] = len(states)
            states.append((u, v))
    if not states:
        return None

    def successors(s: int):
        u, v = states[s]
        allowed = walk_adj[v] & (safe_pair_adj[u] | (1 << u))
        for w in bits(allowed):
            yield state_id[(v, w)]

    # Tarjan SCC, iterative.
    index_of = [-1] * len(states)
    low = [0] * len(states)
    comp = [-1] * len(states)
    on_stack = [False] * len(states)
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(len(states)):
        if index_of[root] != -1:
            continue
        work = [(root, iter(successors(root)))]
        index_of[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            s, it = work[-1]
            advanced = False
            for t in it:
                if index_of[t] == -1:
                    index_of[t] = low[t] = counter
                    counter += 1
                    stack.append(t)
                    on_stack[t] = True
                    work.append((t, iter(successors(t))))
                    advanced = True
                    break
                if on_stack[t]:
                    low[s] = min(low[s], index_of[t])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[s])
            if low[s] == index_of[s]:
                while True:
                    t = stack.pop()
                    on_stack[t] = False
                    comp[t] = ncomp
                    if t == s:
                        break
                ncomp += 1

    # Parity BFS inside each SCC; a state reachable at both parities from
    # the SCC root certifies an odd closed walk through the root.
    seen_comp = [False] * ncomp
    for root in range(len(states)):
        c = comp[root]
        if seen_comp[c]:
            continue
        seen_comp[c] = True
        parent: dict[tuple[int, int], tuple[int, int] | None] = {(root, 0): None}
        frontier = [(root, 0)]
        conflict: Optional[int] = None
        while frontier and conflict is None:
            nxt = []
            for s, par in frontier:
                for t in successors(s):
                    if comp[t] != c:
                        continue
                    key = (t, par ^ 1)
                    if key not in parent:
                        parent[key] = (s, par)
                        nxt.append(key)
                        if (t, par) in parent:
                            conflict = t
                            break
                if conflict is not None:
                    break
            frontier = nxt
        if conflict is None:
            continue
        # Paths root->conflict at both parities, plus any path conflict->root.
        def unwind(key: tuple[int, int]) -> list[int]:
            seq = []
            cur: tuple[int, int] | None = key
            while cur is not None:
                seq.append(cur[0])
                cur = parent[cur]
            seq.reverse()
            return seq

        path0 = unwind((conflict, 0))
        path1 = unwind((conflict, 1))
        back_parent: dict[int, int] = {conflict: -1}
        queue = [conflict]
        while queue and root not in back_parent:
            nq = []
            for s in queue:
                for t in successors(s):
                    if comp[t] == c and t not in back_parent:
                        back_parent[t] = s
                        nq.append(t)
            queue = nq
        back = []
        cur = root
        while cur != -1:
            back.append(cur)
            cur = back_parent[cur]
        back.reverse()  # conflict .. root as a state path
        for fwd in (path0, path1):
            if (len(fwd) - 1 + len(back) - 1) % 2 == 1:
                state_path = fwd + back[1:]
                # State path s_0=root..s_L=root; appended vertices form the walk.
                verts = [states[root][1]]
                for s in state_path[1:]:
                    verts.append(states[s][1])
                # verts has length L+1 and ends back at root's head; drop the
                # final repeat to get the cyclic sequence of length L (odd).
                return tuple(verts[:-1])
    return None


def find_odd_2chordless_cycle(G: Graph) -> Optional[tuple[str, ...]]:
    """Find an odd cycle of length >= 5 without 2-chords, or None.

    Cycles here are closed walks: vertices may repeat and immediate
    backtracking is allowed (a vertex paired with itself two steps later
    counts as chordless). This is the form in which the classical
    comparability-graph characterization is exact; triangles are excluded
    by convention since every triangle edge is trivially a 2-chord.
    """
    full = (1 << G.n) - 1
    safe = tuple((full ^ G.adj[i]) & ~(1 << i) for i in range(G.n))
    walk = _odd_closed_walk(G.n, G.adj, safe)
    if walk is None:
        return None
    return tuple(G.vertices[i] for i in walk)


def find_asteroidal_triple(G: Graph) -> Optional[tuple[str, str, str]]:
    """Three vertices pairwise joined by paths avoiding the closed
    neighborhood of the third, or None."""
    n = G.n
    if n < 3:
        return None
    full = (1 << n) - 1
    # comp_label[z][v] = component of v in G - N[z], or -1 inside N[z].
    comp_label = []
    for z in range(n):
        banned = G.adj[z] | (1 << z)
        label = [-1] * n
        cur = 0
        for s in range(n):
            if label[s] != -1 or banned >> s & 1:
                continue
            frontier = 1 << s
            seen = frontier
            while frontier:
                for v in bits(frontier):
                    label[v] = cur
                frontier = 0
                for v in bits(seen):
                    frontier |= G.adj[v] & ~banned & ~seen
                seen |= frontier
            cur += 1
        comp_label.append(label)
    for x in range(n):
        for y in range(x + 1, n):
            for z in range(y + 1, n):
                if (
                    comp_label[z][x] != -1
                    and comp_label[z][x] == comp_label[z][y]
                    and comp_label[y][x] != -1
                    and comp_label[y][x] == comp_label[y][z]
                    and comp_label[x][y] != -1
                    and comp_label[x][y] == comp_label[x][z]
                ):
                    return (G.vertices[x], G.vertices[y], G.vertices[z])
    return None


def _mcs_peo(G: Graph) -> Optional[list[int]]:
    """Maximum-cardinality-search elimination order if G is chordal, else None."""
    n = G.n
    if n == 0:
        return []
    weight = [0] * n
    visited = 0
    order_rev = []  # visit order; reversed it is the elimination order
    for _ in range(n):
        best, best_w = -1, -1
        for v in range(n):
            if not visited >> v & 1 and weight[v] > best_w:
                best, best_w = v, weight[v]
        visited |= 1 << best
        order_rev.append(best)
        for u in bits(G.adj[best] & ~visited):
            weight[u] += 1
    elim = list(reversed(order_rev))
    pos = {v: k for k, v in enumerate(elim)}
    later = [0] * n
    mask_later = 0
    for v in reversed(elim):
        later[v] = G.adj[v] & mask_later
        mask_later |= 1 << v
    for v in elim:
        lv = later[v]
        if lv:
            u = min(bits(lv), key=lambda w: pos[w])
            if lv & ~(1 << u) & ~G.adj[u]:
                return None
    return elim


def _find_hole(G: Graph) -> Optional[tuple[str, ...]]:
    """Find a chordless cycle of length >= 4 (assumes one exists)."""
    n = G.n
    full = (1 << n) - 1
    for b in range(n):
        nbrs = list(bits(G.adj[b]))
        for ka, a in enumerate(nbrs):
            for c in nbrs[ka + 1 :]:
                if G.adj[a] >> c & 1:
                    continue
                allowed = (full & ~(G.adj[b] | (1 << b))) | (1 << a) | (1 << c)
                # BFS shortest a->c within allowed; shortest => chordless.
                parent = {a: -1}
                frontier = [a]
                while frontier and c not in parent:
                    nxt = []
                    for v in frontier:
                        for w in bits(G.adj[v] & allowed):
                            if w not in parent:
                                parent[w] = v
                                nxt.append(w)
                    frontier = nxt
                if c not in parent:
                    continue
                path = []
                cur = c
                while cur != -1:
                    path.append(cur)
                    cur = parent[cur]
                path.reverse()  # a .. c
                cycle = [b] + path
                return tuple(G.vertices[v] for v in cycle)
    return None


def is_triangulated(G: Graph) -> tuple[bool, Optional[tuple[str, ...]]]:
    """True iff G has no chordless cycle of length >= 4; else a witness cycle."""
    if _mcs_peo(G) is not None:
        return True, None
    hole = _find_hole(G)
    assert hole is not None, "non-chordal graph must contain a hole"
    return False, hole


def _as_weight_map(G: Graph, weight) -> list[Fraction]:
    if callable(weight):
        return [to_frac(weight(v)) for v in G.vertices]
    return [to_frac(weight[v]) for v in G.vertices]


def to_frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def max_weight_clique(
    G: Graph, weight, cap: int = CLIQUE_CAP
) -> tuple[Fraction, tuple[str, ...]]:
    """Exact maximum-weight clique by branch and bound with a greedy
    coloring bound. Raises TooLarge beyond `cap` vertices."""
    if G.n > cap:
        raise TooLarge(f"clique search capped at {cap} vertices, got {G.n}")
    w = _as_weight_map(G, weight)
    adj = G.adj
    best_w = Fraction(0)
    best_set = 0

    def color_order(P: int) -> list[tuple[int, Fraction]]:
        # Partition P into independent sets; bound at v = cumulative max
        # weight over its class and all earlier classes.
        classes: list[tuple[int, Fraction]] = []  # (mask, max weight)
        for v in bits(P):
            for k, (mask, mw) in enumerate(classes):
                if not adj[v] & mask:
                    classes[k] = (mask | (1 << v), max(mw, w[v]))
                    break
            else:
                classes.append((1 << v, w[v]))
        out: list[tuple[int, Fraction]] = []
        acc = Fraction(0)
        for mask, mw in classes:
            acc += mw
            for v in bits(mask):
                out.append((v, acc))
        return out

    def expand(P: int, cur_mask: int, cur_w: Fraction) -> None:
        nonlocal best_w, best_set
        if cur_w > best_w:
            best_w, best_set = cur_w, cur_mask
        if not P:
            return
        order = color_order(P)
        for v, bound in reversed(order):
            if cur_w + bound <= best_w:
                return
            expand(P & adj[v], cur_mask | (1 << v), cur_w + w[v])
            P &= ~(1 << v)

    expand((1 << G.n) - 1, 0, Fraction(0))
    return best_w, G.names(best_set)


def greedy_weight_clique(G: Graph, weight) -> tuple[Fraction, tuple[str, ...]]:
    """Greedy heavy-first clique. Sound under-approximation used beyond
    the exact-search cap."""
    w = _as_weight_map(G, weight)
    order = sorted(range(G.n), key=lambda v: (-w[v], v))
    mask = 0
    total = Fraction(0)
    for v in order:
        if (G.adj[v] & mask) == mask:
            mask |= 1 << v
            total += w[v]
    return total, G.names(mask)


def max_weight_stable_set_interval(G: Graph, weight) -> tuple[Fraction, tuple[str, ...]]:
    """Exact maximum-weight stable set of an interval graph, via weighted
    interval scheduling over a clique-path representation.

    Raises NotInterval when G is not an interval graph.
    """
    from . import chargraph  # deferred: chargraph depends on this module

    w = _as_weight_map(G, weight)
    intervals = chargraph.interval_model(G)  # vertex index -> (lo, hi)
    items = sorted(range(G.n), key=lambda v: (intervals[v][1], intervals[v][0], v))
    rights = [intervals[v][1] for v in items]
    k = len(items)
    best: list[Fraction] = [Fraction(0)] * (k + 1)
    take: list[bool] = [False] * (k + 1)
    prev: list[int] = [0] * (k + 1)
    for j in range(1, k + 1):
        v = items[j - 1]
        lo = intervals[v][0]
        q = bisect.bisect_left(rights, lo)  # items with right < lo
        prev[j] = q
        with_v = best[q] + w[v]
        if with_v > best[j - 1]:
            best[j], take[j] = with_v, True
        else:
            best[j], take[j] = best[j - 1], False
    chosen = []
    j = k
    while j > 0:
        if take[j]:
            chosen.append(items[j - 1])
            j = prev[j]
        else:
            j -= 1
    chosen.sort()
    return best[k], tuple(G.vertices[v] for v in chosen)
