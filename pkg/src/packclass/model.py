"""Boxes, instances, packings, and exact geometric validation.

All sizes and coordinates are exact rationals (`fractions.Fraction`); no
check in this module uses floating point. A box's projection onto axis i
is the half-open interval [p_i, p_i + w_i), so boxes that merely touch do
not overlap.

Internally every instance is rescaled per dimension by the least common
multiple of all denominators occurring in that dimension, so solver
arithmetic runs on plain integers. Public coordinates stay `Fraction`.

Dimension indices are 0-based throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    DimensionMismatch,
    DimensionOutOfRange,
    InvalidInstance,
    InvalidPacking,
    UnknownBox,
)

Rational = Union[Fraction, int, str]


def to_fraction(x: Rational) -> Fraction:
    """Convert int, Fraction, or a 'num/den' string to an exact Fraction.

    Floats are rejected on purpose: they would silently break the
    exactness contract of this module.
    """
    if isinstance(x, bool):
        raise InvalidInstance(f"not a rational: {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInstance(f"cannot parse rational {x!r}") from exc
    raise InvalidInstance(f"not an exact rational: {x!r} (floats are rejected)")


def _fraction_vector(xs: Sequence[Rational]) -> tuple[Fraction, ...]:
    return tuple(to_fraction(x) for x in xs)


@dataclass(frozen=True)
class Box:
    """A d-dimensional box with a fixed orientation.

    `value` is the objective weight used by the knapsack variant; it
    defaults to the box volume.
    """

    id: str
    size: tuple[Fraction, ...]
    value: Fraction = None  # type: ignore[assignment]  # filled in __post_init__

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id:
            raise InvalidInstance(f"box id must be a non-empty string, got {self.id!r}")
        object.__setattr__(self, "size", _fraction_vector(self.size))
        if not self.size:
            raise InvalidInstance(f"box {self.id!r} has an empty size vector")
        if any(s <= 0 for s in self.size):
            raise InvalidInstance(f"box {self.id!r} has a non-positive size component")
        value = self.volume if self.value is None else to_fraction(self.value)
        if value < 0:
            raise InvalidInstance(f"box {self.id!r} has negative value {value}")
        object.__setattr__(self, "value", value)

    @property
    def volume(self) -> Fraction:
        return reduce(lambda a, b: a * b, self.size, Fraction(1))


@dataclass(frozen=True)
class Instance:
    """A set of boxes plus the container they must fit into.

    Invariants enforced at construction: d >= 1, every size vector has d
    positive components, ids are unique and non-empty, and every box fits
    the container on its own (per-dimension w_i <= W_i).
    """

    boxes: tuple[Box, ...]
    container: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "boxes", tuple(self.boxes))
        object.__setattr__(self, "container", _fraction_vector(self.container))
        d = len(self.container)
        if d < 1:
            raise InvalidInstance("container must have at least one dimension")
        if any(w <= 0 for w in self.container):
            raise InvalidInstance("container dimensions must be positive")
        seen: set[str] = set()
        for box in self.boxes:
            if box.id in seen:
                raise InvalidInstance(f"duplicate box id {box.id!r}")
            seen.add(box.id)
            if len(box.size) != d:
                raise DimensionMismatch(
                    f"box {box.id!r} has {len(box.size)} size components, expected {d}"
                )
            for i, (w, cap) in enumerate(zip(box.size, self.container)):
                if w > cap:
                    raise InvalidInstance(
                        f"box {box.id!r} does not fit the container in dimension {i}"
                        f" ({w} > {cap})"
                    )
        # Per-dimension integer rescaling (lcm of all denominators).
        scales = []
        for i in range(d):
            denoms = [self.container[i].denominator]
            denoms += [b.size[i].denominator for b in self.boxes]
            scales.append(lcm(*denoms) if denoms else 1)
        object.__setattr__(self, "_scales", tuple(scales))
        object.__setattr__(
            self,
            "_int_container",
            tuple(int(self.container[i] * scales[i]) for i in range(d)),
        )
        object.__setattr__(
            self,
            "_int_sizes",
            tuple(
                tuple(int(b.size[i] * scales[i]) for i in range(d)) for b in self.boxes
            ),
        )
        object.__setattr__(self, "_index", {b.id: k for k, b in enumerate(self.boxes)})

    @property
    def d(self) -> int:
        return len(self.container)

    @property
    def n(self) -> int:
        return len(self.boxes)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(b.id for b in self.boxes)

    def index(self, box_id: str) -> int:
        try:
            return self._index[box_id]  # type: ignore[attr-defined]
        except KeyError:
            raise UnknownBox(f"unknown box id {box_id!r}") from None

    def box(self, box_id: str) -> Box:
        return self.boxes[self.index(box_id)]

    # Integer-scaled views used by the solvers; scale_i is the lcm of all
    # denominators in dimension i, so these are exact.
    def scale(self, i: int) -> int:
        return self._scales[i]  # type: ignore[attr-defined]

    def int_container(self, i: int) -> int:
        return self._int_container[i]  # type: ignore[attr-defined]

    def int_size(self, box_idx: int, i: int) -> int:
        return self._int_sizes[box_idx][i]  # type: ignore[attr-defined]

    def int_volume(self, box_idx: int) -> int:
        sizes = self._int_sizes[box_idx]  # type: ignore[attr-defined]
        return reduce(lambda a, b: a * b, sizes, 1)

    def int_container_volume(self) -> int:
        return reduce(lambda a, b: a * b, self._int_container, 1)  # type: ignore[attr-defined]

    def restrict(self, ids: Iterable[str]) -> "Instance":
        """Sub-instance with the given boxes (instance order preserved)."""
        wanted = set(ids)
        unknown = wanted - set(self.ids)
        if unknown:
            raise UnknownBox(f"unknown box ids {sorted(unknown)!r}")
        return Instance(
            boxes=tuple(b for b in self.boxes if b.id in wanted),
            container=self.container,
        )

    def check_dimension(self, i: int) -> None:
        if not 0 <= i < self.d:
            raise DimensionOutOfRange(f"dimension {i} outside 0..{self.d - 1}")


@dataclass(frozen=True)
class Packing:
    """Corner coordinates for a subset of the boxes.

    Partial packings are first-class: the knapsack solver packs subsets.
    Coordinates must be non-negative exact rationals.
    """

    positions: Mapping[str, tuple[Fraction, ...]]

    def __post_init__(self) -> None:
        normalized = {}
        for box_id, pos in self.positions.items():
            vec = _fraction_vector(pos)
            if any(c < 0 for c in vec):
                raise InvalidPacking(f"negative coordinate for box {box_id!r}")
            normalized[box_id] = vec
        object.__setattr__(self, "positions", normalized)

    @property
    def box_ids(self) -> tuple[str, ...]:
        return tuple(self.positions)

    def position(self, box_id: str) -> tuple[Fraction, ...]:
        return self.positions[box_id]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Packing):
            return NotImplemented
        return dict(self.positions) == dict(other.positions)

    def canonical(self) -> tuple[tuple[str, tuple[Fraction, ...]], ...]:
        """Sorted, hashable form used when counting distinct packings."""
        return tuple(sorted(self.positions.items()))


@dataclass(frozen=True)
class Closedness:
    """Box `box` sticks out of the container in dimension `dimension`."""

    box: str
    dimension: int


@dataclass(frozen=True)
class Overlap:
    """Boxes `box_a` and `box_b` intersect in every dimension."""

    box_a: str
    box_b: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def valid(self) -> bool:
        return not self.violations


def _positions_checked(p: Packing, inst: Instance) -> list[tuple[int, tuple[Fraction, ...]]]:
    placed = []
    for box_id, pos in p.positions.items():
        idx = inst.index(box_id)
        if len(pos) != inst.d:
            raise DimensionMismatch(
                f"position of box {box_id!r} has {len(pos)} components, expected {inst.d}"
            )
        placed.append((idx, pos))
    return placed


def validate_packing(p: Packing, inst: Instance) -> ValidationReport:
    """Check closedness and pairwise disjointness, reporting every violation.

    Closedness: p_i + w_i <= W_i in every dimension. Disjointness: for each
    pair of boxes some axis must separate their half-open projections.
    """
    placed = _positions_checked(p, inst)
    violations: list = []
    for idx, pos in placed:
        box = inst.boxes[idx]
        for i in range(inst.d):
            if pos[i] + box.size[i] > inst.container[i]:
                violations.append(Closedness(box.id, i))
    for k, (idx_a, pos_a) in enumerate(placed):
        box_a = inst.boxes[idx_a]
        for idx_b, pos_b in placed[k + 1 :]:
            box_b = inst.boxes[idx_b]
            if all(
                max(pos_a[i], pos_b[i])
                < min(pos_a[i] + box_a.size[i], pos_b[i] + box_b.size[i])
                for i in range(inst.d)
            ):
                first, second = sorted((box_a.id, box_b.id))
                violations.append(Overlap(first, second))
    return ValidationReport(tuple(violations))


def xi_feasible(S: Iterable[str], i: int, inst: Instance) -> bool:
    """True iff the boxes in S can be lined up along axis i within W_i."""
    inst.check_dimension(i)
    total = sum(inst.int_size(inst.index(b), i) for b in S)
    return total <= inst.int_container(i)


def project_to_class(p: Packing, inst: Instance):
    """Project a valid packing to its per-axis overlap graphs.

    Two boxes are adjacent in graph i iff their half-open axis-i
    projections intersect. The result always satisfies the packing-class
    conditions P1/P2/P3.
    """
    from .packing_class import PackingClass  # deferred: avoids import cycle
    from .graph import Graph

    report = validate_packing(p, inst)
    if not report.valid:
        raise InvalidPacking(f"packing is invalid: {report.violations[:3]!r}")
    ids = [b for b in inst.ids if b in p.positions]
    if len(ids) < inst.n:
        inst = inst.restrict(ids)  # partial packing: class lives on the subset
    edge_sets = []
    for i in range(inst.d):
        edges = []
        for k, a in enumerate(ids):
            pa = p.positions[a]
            wa = inst.box(a).size
            for b in ids[k + 1 :]:
                pb = p.positions[b]
                wb = inst.box(b).size
                if max(pa[i], pb[i]) < min(pa[i] + wa[i], pb[i] + wb[i]):
                    edges.append((a, b))
        edge_sets.append(Graph(ids, edges))
    return PackingClass(instance=inst, edge_sets=tuple(edge_sets))


def is_gapless(p: Packing, inst: Instance) -> bool:
    """True iff every coordinate is 0 or flush with another box's far side."""
    report = validate_packing(p, inst)
    if not report.valid:
        raise InvalidPacking(f"packing is invalid: {report.violations[:3]!r}")
    items = [(inst.index(b), pos) for b, pos in p.positions.items()]
    for i in range(inst.d):
        tops = {pos[i] + inst.boxes[idx].size[i] for idx, pos in items}
        for _, pos in items:
            if pos[i] != 0 and pos[i] not in tops:
                return False
    return True
