"""Interval classification problem f_a(x) = ceil(a / x1) mod 2 on [b, 1] x [0, 1]"""

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from falsestructures.exceptions import ConstructionError, DomainError
from falsestructures.models.constants import CASE1_A, CASE1_DELTA, CASE1_EPSILON, CASE1_K


class Case1Problem(BaseModel):
    """Parameters a, K, epsilon, delta with b = a / (K + 1)"""

    model_config = ConfigDict(frozen=True)

    a: int = Field(default=CASE1_A, gt=0)
    K: int = Field(default=CASE1_K, gt=0)
    epsilon: float = Field(default=CASE1_EPSILON, gt=0)
    delta: float = Field(default=CASE1_DELTA, gt=0)

    @property
    def b(self) -> float:
        """Left end of the x1 domain"""
        return self.a / (self.K + 1)

    @property
    def epsilon_bound(self) -> float:
        """Largest admissible epsilon (exclusive): b^2 / (2 (a - b))"""
        return self.b**2 / (2.0 * (self.a - self.b))

    @property
    def interval_count(self) -> int:
        """Number of intervals of the stable region"""
        return self.K - self.a + 1

    def violations(self) -> list[tuple[str, str]]:
        """List (constraint, message) for every violated invariant"""
        found = []
        if self.a >= self.K:
            found.append(("a < K", f"a={self.a} must be smaller than K={self.K}"))
        elif self.epsilon >= self.epsilon_bound:
            found.append(
                ("ε < b²/(2(a−b))", f"epsilon={self.epsilon} must be below the bound {self.epsilon_bound:.6f}")
            )
        if not 0 < self.delta < self.epsilon:
            found.append(("0 < δ < ε", f"delta={self.delta} must lie strictly between 0 and epsilon={self.epsilon}"))
        return found

    @model_validator(mode="after")
    def _check_invariants(self) -> "Case1Problem":
        if found := self.violations():
            raise ConstructionError("; ".join(f"{constraint}: {message}" for constraint, message in found))
        return self


class IntervalUnion(BaseModel):
    """Ordered union of disjoint open intervals (lo, hi)

    ks[i] is the index k of the interval (a/(k+1) + eps, a/k - eps) it came from.
    """

    model_config = ConfigDict(frozen=True)

    intervals: tuple[tuple[float, float], ...]
    ks: tuple[int, ...] = ()

    @model_validator(mode="after")
    def _check_disjoint(self) -> "IntervalUnion":
        previous_hi = -math.inf
        for lo, hi in self.intervals:
            if not lo < hi:
                raise ConstructionError(f"empty interval ({lo}, {hi})")
            if lo < previous_hi:
                raise ConstructionError(f"interval ({lo}, {hi}) overlaps its predecessor")
            previous_hi = hi
        return self

    def __len__(self) -> int:
        return len(self.intervals)

    @property
    def lengths(self) -> np.ndarray:
        """hi - lo of every interval"""
        return np.array([hi - lo for lo, hi in self.intervals])

    def index_of(self, x: np.ndarray) -> np.ndarray:
        """Index of the interval containing each x, -1 outside"""
        x = np.asarray(x, dtype=np.float64)
        index = np.full(x.shape, -1, dtype=np.int64)
        for i, (lo, hi) in enumerate(self.intervals):
            index[(x > lo) & (x < hi)] = i
        return index

    def contains(self, x: np.ndarray) -> np.ndarray:
        """Membership mask"""
        return self.index_of(x) >= 0


def f_a_eval(p: Case1Problem, x1: float) -> int:
    """ceil(a / x1) mod 2"""
    if x1 <= 0:
        raise DomainError(f"f_a is undefined for x1={x1} <= 0")
    return math.ceil(p.a / x1) % 2


def f_a_many(p: Case1Problem, x1: np.ndarray) -> np.ndarray:
    """Vectorised f_a over an array of x1 values"""
    x1 = np.asarray(x1, dtype=np.float64)
    if (x1 <= 0).any():
        raise DomainError("f_a is undefined for x1 <= 0")
    return (np.ceil(p.a / x1).astype(np.int64) % 2).astype(np.int64)


def stable_region(p: Case1Problem) -> IntervalUnion:
    """S_eps = union over k = a..K of (a/(k+1) + eps, a/k - eps), in increasing x1 order"""
    ks = tuple(range(p.K, p.a - 1, -1))
    intervals = tuple((p.a / (k + 1) + p.epsilon, p.a / k - p.epsilon) for k in ks)
    return IntervalUnion(intervals=intervals, ks=ks)


def interval_label(k: int) -> int:
    """Value of f_a on (a/(k+1), a/k): ceil(a/x1) = k + 1 there"""
    return (k + 1) % 2


def jump_points(p: Case1Problem) -> np.ndarray:
    """Points a/k, k = a..K+1, where f_a changes value (domain ends included)"""
    return np.array([p.a / k for k in range(p.a, p.K + 2)])


def distance_to_discontinuity(p: Case1Problem, x1: np.ndarray) -> np.ndarray:
    """Distance from each x1 to the nearest jump of f_a"""
    x1 = np.asarray(x1, dtype=np.float64)
    return np.abs(x1[..., np.newaxis] - jump_points(p)).min(axis=-1)


def exact_c0_severity(p: Case1Problem) -> float:
    """Length of {x1 in [b, 1] : f_a(x1) = 1} divided by 1 - b"""
    total = sum(p.a / k - p.a / (k + 1) for k in range(p.a, p.K + 1) if interval_label(k) == 1)
    return total / (1.0 - p.b)


def false_g_eval(x2: float) -> int:
    """0 iff x2 is exactly 0"""
    return 0 if x2 == 0 else 1


def false_g_many(x2: np.ndarray) -> np.ndarray:
    """Vectorised false_g_eval"""
    return (np.asarray(x2) != 0).astype(np.int64)
