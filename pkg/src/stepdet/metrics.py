"""Comparison measures for heuristic objectives.

* RPD  - deviation from the optimum, undefined when the optimum is 0.
* RIVW - improvement over the worst compared algorithm on an instance
  (0 when every algorithm ties).  Larger is better.
* RIVH - gap of the optimum relative to the heuristic (0 when optimal).
  Smaller is better.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
from scipy import stats

from .errors import ContractViolation, DegenerateInput, DivisionUndefined


def rpd(z_alg: int, z_opt: int) -> float:
    if z_opt == 0:
        raise DivisionUndefined("RPD is undefined when the optimum is 0")
    return (z_alg - z_opt) / z_opt * 100


def rivw(z_alg: int, z_worst: int, z_best: int) -> float:
    if not z_best <= z_alg <= z_worst:
        raise ContractViolation(f"need best <= alg <= worst, got {z_best}, {z_alg}, {z_worst}")
    if z_best == z_worst:
        return 0.0
    return (z_worst - z_alg) / z_worst * 100


def rivh(z_alg: int, z_opt: int) -> float:
    if z_opt > z_alg:
        raise ContractViolation(f"optimum {z_opt} exceeds heuristic objective {z_alg}")
    if z_opt == z_alg:
        return 0.0
    return (z_alg - z_opt) / z_alg * 100


@dataclass(frozen=True)
class ComparisonRow:
    instance_id: str
    objectives: Mapping[str, int]
    z_opt: Optional[int] = None

    def __post_init__(self) -> None:
        if any(z < 0 for z in self.objectives.values()) or (self.z_opt is not None and self.z_opt < 0):
            raise ContractViolation(f"negative objective in row {self.instance_id}")


@dataclass
class AlgorithmSummary:
    algorithm: str
    mean_rivw: float
    num_best: int
    mean_rivh: Optional[float] = None
    num_opt: Optional[int] = None


@dataclass
class HeadToHead:
    challenger: str
    baseline: str
    num_better: int
    num_equal: int
    num_worse: int


@dataclass
class TallyTable:
    instances: int
    summaries: dict[str, AlgorithmSummary]
    pairwise: dict[tuple[str, str], HeadToHead] = field(default_factory=dict)
    rivw_samples: dict[str, list[float]] = field(default_factory=dict)


def instance_rivw(row: ComparisonRow, algorithms: Sequence[str]) -> dict[str, float]:
    zs = [row.objectives[a] for a in algorithms]
    best, worst = min(zs), max(zs)
    return {a: rivw(row.objectives[a], worst, best) for a in algorithms}


def head_to_head(rows: Iterable[ComparisonRow], challenger: str, baseline: str) -> HeadToHead:
    better = equal = worse = 0
    for row in rows:
        zc, zb = row.objectives[challenger], row.objectives[baseline]
        if zc < zb:
            better += 1
        elif zc == zb:
            equal += 1
        else:
            worse += 1
    return HeadToHead(challenger, baseline, better, equal, worse)


def tally(
    rows: Sequence[ComparisonRow],
    algorithms: Sequence[str],
    pairs: Iterable[tuple[str, str]] = (),
) -> TallyTable:
    """Mean RIVW and Num_best per algorithm (plus RIVH/Num_opt when optima are known).

    Ties for the best objective credit every tied algorithm.
    """
    algorithms = list(algorithms)
    samples: dict[str, list[float]] = {a: [] for a in algorithms}
    best_counts = dict.fromkeys(algorithms, 0)
    rivh_sums = dict.fromkeys(algorithms, 0.0)
    opt_counts = dict.fromkeys(algorithms, 0)
    with_opt = all(r.z_opt is not None for r in rows) and len(rows) > 0
    for row in rows:
        per = instance_rivw(row, algorithms)
        best = min(row.objectives[a] for a in algorithms)
        for a in algorithms:
            samples[a].append(per[a])
            if row.objectives[a] == best:
                best_counts[a] += 1
            if with_opt:
                rivh_sums[a] += rivh(row.objectives[a], row.z_opt)
                opt_counts[a] += row.objectives[a] == row.z_opt
    k = len(rows)
    summaries = {
        a: AlgorithmSummary(
            a,
            math.fsum(samples[a]) / k if k else 0.0,
            best_counts[a],
            rivh_sums[a] / k if with_opt else None,
            opt_counts[a] if with_opt else None,
        )
        for a in algorithms
    }
    pairwise = {(c, b): head_to_head(rows, c, b) for c, b in pairs}
    return TallyTable(k, summaries, pairwise, samples)


@dataclass(frozen=True)
class LsdInterval:
    algorithm: str
    mean: float
    half_width: float

    @property
    def lo(self) -> float:
        return self.mean - self.half_width

    @property
    def hi(self) -> float:
        return self.mean + self.half_width


def lsd_intervals(samples: Mapping[str, Sequence[float]], alpha: float = 0.05) -> list[LsdInterval]:
    """Means with Fisher LSD half-widths for a means plot.

    Uses a one-way fixed-effects ANOVA with the pooled within-group mean
    square.  The half-width is LSD/2, with LSD = t(1 - alpha/2, N - k) *
    sqrt(2 MSE / m), so two intervals overlap exactly when the pair is not
    significantly different.
    """
    names = list(samples)
    groups = [np.asarray(samples[a], dtype=float) for a in names]
    if len(groups) < 2:
        raise DegenerateInput("need at least two groups")
    m = len(groups[0])
    if m < 2 or any(len(g) != m for g in groups):
        raise DegenerateInput("groups must share a sample size of at least 2")
    pooled = np.concatenate(groups)
    if np.all(pooled == pooled[0]):
        raise DegenerateInput("all observations are identical")
    k, total = len(groups), len(pooled)
    sse = sum(float(((g - g.mean()) ** 2).sum()) for g in groups)
    mse = sse / (total - k)
    lsd = stats.t.ppf(1 - alpha / 2, total - k) * math.sqrt(2 * mse / m)
    return [LsdInterval(a, float(g.mean()), lsd / 2) for a, g in zip(names, groups)]


def lsd_significant(a: LsdInterval, b: LsdInterval) -> bool:
    return a.hi < b.lo or b.hi < a.lo
