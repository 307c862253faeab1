"""Training and diagnostic sets for the interval problem"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from pydantic import BaseModel

from falsestructures.case1.problem import Case1Problem, IntervalUnion, f_a_many, stable_region
from falsestructures.exceptions import ParameterError
from falsestructures.nn.training import Dataset


class Lift(str, Enum):
    """Second coordinate rule of a training set"""

    ZERO = "zero"
    DELTA = "delta"


class LabeledPoint(BaseModel):
    """A sample (x1, x2) with its label"""

    x1: float
    x2: float
    label: int


@dataclass(frozen=True)
class PointSet:
    """Points (n, 2) with labels and the index of the stable interval each x1 was drawn from"""

    points: np.ndarray
    labels: np.ndarray
    interval_index: np.ndarray

    def __len__(self) -> int:
        return len(self.labels)

    def to_points(self) -> list[LabeledPoint]:
        """Materialise as LabeledPoint records"""
        return [
            LabeledPoint(x1=float(x1), x2=float(x2), label=int(label))
            for (x1, x2), label in zip(self.points, self.labels, strict=True)
        ]

    def as_dataset(self) -> Dataset:
        """Inputs and float labels for training"""
        return Dataset(inputs=self.points, labels=self.labels.astype(np.float64))


def _open_uniform(lo: float, hi: float, size: int, rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(np.nextafter(lo, hi), hi, size=size)


def _lift(p: Case1Problem, labels: np.ndarray, lift: Lift) -> np.ndarray:
    if lift == Lift.DELTA:
        return p.delta * labels
    return np.zeros(len(labels))


def interval_counts(total: int, intervals: int, rng: np.random.Generator) -> np.ndarray:
    """Split total samples over the intervals as evenly as possible, leftovers go to random intervals"""
    counts = np.full(intervals, total // intervals, dtype=np.int64)
    extra = rng.choice(intervals, size=total % intervals, replace=False)
    counts[extra] += 1
    return counts


def sample_training_set(
    p: Case1Problem,
    r: int,
    lift: Lift,
    rng: np.random.Generator,
    one_per_interval: bool | None = None,
) -> PointSet:
    """Draw T_0^r or T_delta^r with every x1 in the stable region

    Args:
        p (Case1Problem): problem
        r (int): number of samples
        lift (Lift): x2 = 0 (zero) or x2 = delta * f_a(x1) (delta)
        rng (np.random.Generator): data stream
        one_per_interval (bool | None): place exactly one sample per interval; defaults to
            r == number of intervals
    """
    region = stable_region(p)
    m = len(region)
    if r < 1:
        raise ParameterError(f"training set size must be >= 1, got {r}")
    if one_per_interval is None:
        one_per_interval = r == m
    if one_per_interval and r != m:
        raise ParameterError(f"one sample per interval needs r == {m}, got r={r}")

    counts = np.ones(m, dtype=np.int64) if one_per_interval else interval_counts(r, m, rng)
    x1 = np.concatenate(
        [_open_uniform(lo, hi, int(count), rng) for (lo, hi), count in zip(region.intervals, counts, strict=True)]
    )
    index = np.repeat(np.arange(m), counts)
    order = rng.permutation(r)
    x1, index = x1[order], index[order]
    labels = f_a_many(p, x1)
    points = np.column_stack([x1, _lift(p, labels, lift)])
    return PointSet(points=points, labels=labels, interval_index=index)


def sample_stable_region(p: Case1Problem, n: int, rng: np.random.Generator) -> np.ndarray:
    """n points uniform on S_eps x [0, 1]"""
    region = stable_region(p)
    weights = region.lengths / region.lengths.sum()
    chosen = rng.choice(len(region), size=n, p=weights)
    lo = np.array([interval[0] for interval in region.intervals])[chosen]
    hi = np.array([interval[1] for interval in region.intervals])[chosen]
    x1 = rng.uniform(np.nextafter(lo, hi), hi)
    return np.column_stack([x1, rng.uniform(0.0, 1.0, size=n)])


def sample_domain(p: Case1Problem, n: int, rng: np.random.Generator, x2_zero: bool = False) -> np.ndarray:
    """n points uniform on [b, 1] x [0, 1] (x2 forced to 0 when x2_zero)"""
    x1 = rng.uniform(p.b, 1.0, size=n)
    x2 = np.zeros(n) if x2_zero else rng.uniform(0.0, 1.0, size=n)
    return np.column_stack([x1, x2])


@dataclass(frozen=True)
class DiagnosticSets:
    """C_0 and C_delta on a uniform x1 grid, paired row by row"""

    x1: np.ndarray
    c0: np.ndarray
    cdelta: np.ndarray
    labels: np.ndarray
    in_stable: np.ndarray
    region: IntervalUnion


def diagnostic_sets(p: Case1Problem, grid_n: int) -> DiagnosticSets:
    """Discretise C_0 = {(x1, 0)} and C_delta = {(x1, delta f_a(x1))} over x1 in [b, 1]"""
    if grid_n < 2:
        raise ParameterError(f"grid_n must be >= 2, got {grid_n}")
    region = stable_region(p)
    x1 = np.linspace(p.b, 1.0, grid_n)
    labels = f_a_many(p, x1)
    c0 = np.column_stack([x1, np.zeros(grid_n)])
    cdelta = np.column_stack([x1, p.delta * labels])
    return DiagnosticSets(x1=x1, c0=c0, cdelta=cdelta, labels=labels, in_stable=region.contains(x1), region=region)
