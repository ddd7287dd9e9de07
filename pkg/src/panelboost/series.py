"""Grids, series, families, target construction, and interval partitioning.

All types are immutable after construction and safe to share across threads;
all operations are pure functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSplit, EmptyFamily, RangeError

TARGET_ID = "__target__"
PREDICTION_ID = "__prediction__"
RESIDUAL_ID = "__residual__"
CUMULATIVE_ID = "__cumulative__"


def _readonly_values(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError("series values must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise ValueError("series values must be finite (no NaN/inf)")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling: sample k sits at start + k*step for k in [0, count)."""

    start: float
    step: float
    count: int

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError(f"grid step must be positive, got {self.step}")
        if self.count < 2:
            raise ValueError(f"grid count must be at least 2, got {self.count}")

    def times(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.count)


@dataclass(frozen=True, eq=False)
class Series:
    """One component series: a stable id plus finite real values."""

    id: str
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _readonly_values(self.values))

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.id == other.id and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.id, self.values.tobytes()))


@dataclass(frozen=True)
class Family:
    """Ordered candidate series sharing one grid.

    Member order is stable and acts as the tie-breaking order during
    selection. Ids must be pairwise distinct.
    """

    grid: TimeGrid
    members: tuple[Series, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        seen = set()
        for m in self.members:
            if m.id in seen:
                raise ValueError(f"duplicate member id {m.id!r}")
            seen.add(m.id)
            if len(m.values) != self.grid.count:
                raise ValueError(
                    f"member {m.id!r} has {len(m.values)} samples, "
                    f"grid expects {self.grid.count}"
                )

    def __len__(self) -> int:
        return len(self.members)

    def member(self, member_id: str) -> Series | None:
        for m in self.members:
            if m.id == member_id:
                return m
        return None


@dataclass(frozen=True)
class SplitSpec:
    """Contiguous train/validation/test partition, given as head fractions.

    Whatever the two fractions leave over becomes an internal test segment.
    """

    train_fraction: float
    validation_fraction: float

    def __post_init__(self):
        for name, frac in (
            ("train_fraction", self.train_fraction),
            ("validation_fraction", self.validation_fraction),
        ):
            if not 0.0 < frac < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {frac}")
        if self.train_fraction + self.validation_fraction > 1.0:
            raise ValueError("train_fraction + validation_fraction must not exceed 1")


def aggregate_target(family: Family) -> Series:
    """Pointwise sum of all members, under the reserved id "__target__"."""
    if not family.members:
        raise EmptyFamily("cannot aggregate an empty family")
    total = np.zeros(family.grid.count)
    for m in family.members:
        total = total + m.values
    return Series(TARGET_ID, total)


def split(grid: TimeGrid, spec: SplitSpec) -> tuple[range, range, range]:
    """Partition [0, count) into contiguous train, validation, test ranges.

    Train takes floor(train_fraction * count) samples from the front,
    validation the next floor(validation_fraction * count), test the rest.
    Every segment must keep at least 2 samples.
    """
    n = grid.count
    n_train = math.floor(spec.train_fraction * n)
    n_val = math.floor(spec.validation_fraction * n)
    n_test = n - n_train - n_val
    for name, length in (("train", n_train), ("validation", n_val), ("test", n_test)):
        if length < 2:
            raise DegenerateSplit(f"{name} segment has {length} samples, need at least 2")
    return (
        range(0, n_train),
        range(n_train, n_train + n_val),
        range(n_train + n_val, n),
    )


def restrict(series: Series, index_range: range) -> Series:
    """Slice a series to an index range, keeping its id."""
    _check_range(index_range, len(series.values))
    return Series(series.id, series.values[index_range.start : index_range.stop])


def restrict_family(family: Family, index_range: range) -> Family:
    """Restrict every member to an index range; the grid shifts accordingly."""
    _check_range(index_range, family.grid.count)
    grid = TimeGrid(
        start=family.grid.start + index_range.start * family.grid.step,
        step=family.grid.step,
        count=len(index_range),
    )
    return Family(grid, tuple(restrict(m, index_range) for m in family.members))


def _check_range(index_range: range, n: int) -> None:
    if index_range.step != 1:
        raise RangeError("index ranges must have step 1")
    if len(index_range) == 0:
        raise RangeError("empty index range")
    if index_range.start < 0 or index_range.stop > n:
        raise RangeError(
            f"range [{index_range.start}, {index_range.stop}) outside [0, {n})"
        )
