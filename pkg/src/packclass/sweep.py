"""Instance generators and solver-vs-oracle comparison sweeps.

The exhaustive grid enumerates box multisets over a small size alphabet;
the random generator drives the randomized agreement checks. Both feed
the same comparison record, which the CLI and the acceptance suite share.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations_with_replacement, product
from typing import Iterable, Optional, Sequence

from .model import Box, Instance
from .opp import SearchLimits, solve_opp
from .oracle import brute_force_opp, enumerate_packing_classes


def exhaustive_grid(
    max_boxes: int = 4,
    sizes: Sequence[int] = (1, 2, 3),
    container: Sequence[int] = (3, 3),
) -> list[Instance]:
    """Every instance (up to box reordering) with 1..max_boxes boxes whose
    per-axis sizes come from `sizes`."""
    d = len(container)
    vectors = sorted(product(sizes, repeat=d))
    instances = []
    for n in range(1, max_boxes + 1):
        for combo in combinations_with_replacement(vectors, n):
            boxes = [Box(f"b{k + 1}", vec) for k, vec in enumerate(combo)]
            instances.append(Instance(boxes=boxes, container=container))
    return instances


def random_instance(
    rng: random.Random,
    max_boxes: int = 4,
    max_size: int = 3,
    container: Sequence[int] = (4, 4),
) -> Instance:
    d = len(container)
    n = rng.randint(1, max_boxes)
    boxes = [
        Box(f"b{k + 1}", tuple(rng.randint(1, max_size) for _ in range(d)))
        for k in range(n)
    ]
    return Instance(boxes=boxes, container=container)


@dataclass
class OppComparison:
    instance: Instance
    solver_verdict: str
    oracle_feasible: bool
    class_count: int

    @property
    def agree(self) -> bool:
        solver = self.solver_verdict == "feasible"
        return solver == self.oracle_feasible == (self.class_count > 0)


def compare_opp(
    inst: Instance,
    limits: Optional[SearchLimits] = None,
    class_cap: Optional[int] = 0,
) -> OppComparison:
    """Run solver, brute force, and class enumeration on one instance."""
    outcome = solve_opp(inst, limits or SearchLimits())
    brute = brute_force_opp(inst)
    enum = enumerate_packing_classes(inst, cap=class_cap)
    return OppComparison(
        instance=inst,
        solver_verdict=outcome.verdict,
        oracle_feasible=brute.feasible,
        class_count=enum.total,
    )


def _compare_worker(inst: Instance) -> tuple[str, bool, int]:
    c = compare_opp(inst)
    return c.solver_verdict, c.oracle_feasible, c.class_count


def run_opp_sweep(
    instances: Iterable[Instance],
    limits: Optional[SearchLimits] = None,
    jobs: int = 1,
) -> list[OppComparison]:
    instances = list(instances)
    if jobs > 1:
        # Disjoint instances, one worker each; results keep input order.
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            raw = list(pool.map(_compare_worker, instances, chunksize=8))
        return [
            OppComparison(inst, verdict, feas, count)
            for inst, (verdict, feas, count) in zip(instances, raw)
        ]
    return [compare_opp(inst, limits) for inst in instances]
