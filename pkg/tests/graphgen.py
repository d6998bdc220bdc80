"""Isomorphism-free enumeration of all small graphs, for exhaustive
recognition-equivalence tests.

Graphs on n vertices are encoded as edge bitmasks over the C(n,2) pairs in
lexicographic order. Level n+1 is built by attaching a new vertex with
every possible neighborhood to each canonical n-vertex graph, then
deduplicating by the minimum edge mask over all vertex permutations
(vectorized with numpy: counts 1, 2, 4, 11, 34, 156, 1044 for n = 1..7).
"""

from functools import lru_cache
from itertools import combinations, permutations

import numpy as np


def pair_index(n):
    idx = {}
    for k, (i, j) in enumerate(combinations(range(n), 2)):
        idx[(i, j)] = k
        idx[(j, i)] = k
    return idx


@lru_cache(maxsize=None)
def _perm_tables(n: int) -> np.ndarray:
    """perm_tables[p][k] = edge slot that slot k maps to under permutation p."""
    idx = pair_index(n)
    m = n * (n - 1) // 2
    perms = list(permutations(range(n)))
    table = np.empty((len(perms), m), dtype=np.int64)
    for p, perm in enumerate(perms):
        for k, (i, j) in enumerate(combinations(range(n), 2)):
            table[p, idx[(perm[i], perm[j])]] = k
    return table


def _canonical(masks: np.ndarray, n: int) -> np.ndarray:
    """Canonical form (min edge mask over all permutations) per graph."""
    m = n * (n - 1) // 2
    table = _perm_tables(n)
    weights = (1 << np.arange(m, dtype=np.int64))
    out = np.empty(len(masks), dtype=np.int64)
    chunk = max(1, 2_000_000 // (table.shape[0] * m + 1))
    for start in range(0, len(masks), chunk):
        batch = masks[start : start + chunk]
        bits = ((batch[:, None] >> np.arange(m, dtype=np.int64)) & 1).astype(np.int64)
        permuted = bits[:, table]  # (batch, perms, m)
        out[start : start + chunk] = (permuted * weights).sum(axis=2).min(axis=1)
    return out


@lru_cache(maxsize=None)
def nonisomorphic_graphs(n: int) -> tuple[int, ...]:
    """Edge masks of all non-isomorphic graphs on exactly n vertices."""
    if n == 1:
        return (0,)
    prev = nonisomorphic_graphs(n - 1)
    m_prev = (n - 1) * (n - 2) // 2
    idx = pair_index(n)
    prev_pairs = list(combinations(range(n - 1), 2))
    new_vertex = n - 1
    candidates = []
    for mask in prev:
        base = 0
        for k, (i, j) in enumerate(prev_pairs):
            if mask >> k & 1:
                base |= 1 << idx[(i, j)]
        for nbrs in range(1 << (n - 1)):
            cand = base
            for v in range(n - 1):
                if nbrs >> v & 1:
                    cand |= 1 << idx[(v, new_vertex)]
            candidates.append(cand)
    canon = _canonical(np.array(candidates, dtype=np.int64), n)
    return tuple(sorted(set(int(c) for c in canon)))


def mask_to_edges(mask: int, n: int) -> list[tuple[str, str]]:
    names = [f"v{i}" for i in range(n)]
    return [
        (names[i], names[j])
        for k, (i, j) in enumerate(combinations(range(n), 2))
        if mask >> k & 1
    ]


def vertex_names(n: int) -> list[str]:
    return [f"v{i}" for i in range(n)]
