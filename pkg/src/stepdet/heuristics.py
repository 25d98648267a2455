"""Dispatching heuristics and the pairwise-swap (PS) improvement pass.

Dynamic rules (WSPT, ATC, CA, WMDD, MSWSP) recompute every unscheduled
job's actual processing time at the current time ``t`` before picking the
next job.  EDD and WEDD are static sorts.  Ties always go to the lowest
job id.

Algorithm names are ``EDD, WSPT, WEDD, ATC, CA, WMDD, MSWSP``; appending
``_PS`` runs the swap pass on the heuristic's output.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .core import Instance, Schedule, evaluate, objective
from .errors import InvalidConfig, UnknownAlgorithm

BASE_ALGORITHMS = ("EDD", "WSPT", "WEDD", "ATC", "CA", "WMDD", "MSWSP")
PS_ALGORITHMS = tuple(f"{name}_PS" for name in BASE_ALGORITHMS)
ALL_ALGORITHMS = BASE_ALGORITHMS + PS_ALGORITHMS

SINGLE_PASS = "single-pass"
TO_FIXPOINT = "to-fixpoint"


@dataclass(frozen=True)
class HeuristicConfig:
    kappa: float = 0.5
    gamma1_range: tuple[float, float] = (0.2, 0.9)
    gamma2_range: tuple[float, float] = (0.1, 0.7)
    gamma_step: float = 0.1
    gamma3_floor: float = 0.1
    ps_mode: str = SINGLE_PASS

    def __post_init__(self) -> None:
        if not self.kappa > 0:
            raise InvalidConfig(f"kappa must be positive, got {self.kappa}")
        if self.ps_mode not in (SINGLE_PASS, TO_FIXPOINT):
            raise InvalidConfig(f"unknown ps_mode {self.ps_mode!r}")
        if self.gamma_step <= 0:
            raise InvalidConfig("gamma_step must be positive")

    def gamma_grid(self) -> list[tuple[float, float, float]]:
        """All (g1, g2, g3) triples, g1-major.

        Grid points are built on an integer lattice of ``gamma_step`` so that
        e.g. ``1 - 0.2 - 0.1`` is exactly 0.7 rather than 0.7000000000000001.
        """
        scale = round(1 / self.gamma_step)
        lo1, hi1 = (round(x * scale) for x in self.gamma1_range)
        lo2, hi2 = (round(x * scale) for x in self.gamma2_range)
        floor3 = round(self.gamma3_floor * scale)
        return [
            (k1 / scale, k2 / scale, max(scale - k1 - k2, floor3) / scale)
            for k1 in range(lo1, hi1 + 1)
            for k2 in range(lo2, hi2 + 1)
        ]


DEFAULT_CONFIG = HeuristicConfig()


def _finish(instance: Instance, sequence: Sequence[int], name: str) -> Schedule:
    return replace(evaluate(instance, [int(j) for j in sequence]), algorithm=name)


def _dynamic(instance: Instance, rule: int, kappa: float) -> list[int]:
    if instance.n == 0:
        return []
    arr = instance.arrays
    seq = _kernels.dispatch(arr["a"], arr["b"], arr["d"], arr["h"], arr["w"], rule, float(kappa))
    return [int(j) + 1 for j in seq]


def edd(instance: Instance, config: HeuristicConfig = DEFAULT_CONFIG) -> Schedule:
    seq = sorted(range(1, instance.n + 1), key=lambda j: (instance.job(j).d, j))
    return _finish(instance, seq, "EDD")


def wedd(instance: Instance, config: HeuristicConfig = DEFAULT_CONFIG) -> Schedule:
    seq = sorted(
        range(1, instance.n + 1),
        key=lambda j: (Fraction(instance.job(j).d, instance.job(j).w), j),
    )
    return _finish(instance, seq, "WEDD")


def wspt(instance: Instance, config: HeuristicConfig = DEFAULT_CONFIG) -> Schedule:
    return _finish(instance, _dynamic(instance, _kernels.WSPT, config.kappa), "WSPT")


def atc(instance: Instance, config: HeuristicConfig = DEFAULT_CONFIG) -> Schedule:
    return _finish(instance, _dynamic(instance, _kernels.ATC, config.kappa), "ATC")


def ca(instance: Instance, config: HeuristicConfig = DEFAULT_CONFIG) -> Schedule:
    return _finish(instance, _dynamic(instance, _kernels.CA, config.kappa), "CA")


def wmdd(instance: Instance, config: HeuristicConfig = DEFAULT_CONFIG) -> Schedule:
    return _finish(instance, _dynamic(instance, _kernels.WMDD, config.kappa), "WMDD")


def mdd(instance: Instance, config: HeuristicConfig = DEFAULT_CONFIG) -> Schedule:
    """Unweighted modified due date: argmin max(p_j, d_j - t)."""
    unit = Instance.from_arrays(*(instance.arrays[k] for k in "abdh"), [1] * instance.n)
    return _finish(instance, _dynamic(unit, _kernels.WMDD, config.kappa), "MDD")


def mswsp_candidates(instance: Instance, config: HeuristicConfig = DEFAULT_CONFIG) -> list[list[int]]:
    """The MSWSP sequence for every grid point, in grid order."""
    if instance.n == 0:
        return [[] for _ in config.gamma_grid()]
    arr = instance.arrays
    gammas = np.array(config.gamma_grid(), dtype=np.float64)
    rows = _kernels.mswsp_sequences(arr["a"], arr["b"], arr["d"], arr["h"], arr["w"], gammas)
    return [[int(j) + 1 for j in row] for row in rows]


def mswsp(instance: Instance, config: HeuristicConfig = DEFAULT_CONFIG) -> Schedule:
    best_seq, best_z = None, None
    for seq in mswsp_candidates(instance, config):
        z = objective(instance, seq)
        if best_z is None or z < best_z:
            best_seq, best_z = seq, z
    return _finish(instance, best_seq, "MSWSP")


HEURISTICS: dict[str, Callable[[Instance, HeuristicConfig], Schedule]] = {
    "EDD": edd,
    "WSPT": wspt,
    "WEDD": wedd,
    "ATC": atc,
    "CA": ca,
    "WMDD": wmdd,
    "MSWSP": mswsp,
}


def _swap_sweep_python(instance: Instance, seq: list[int], to_fixpoint: bool) -> tuple[list[int], int]:
    seq = list(seq)
    best = objective(instance, seq)
    evaluated = 0
    n = len(seq)
    while True:
        improved = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                evaluated += 1
                seq[i], seq[j] = seq[j], seq[i]
                z = objective(instance, seq)
                if z < best:
                    best = z
                    improved = True
                else:
                    seq[i], seq[j] = seq[j], seq[i]
        if not to_fixpoint or not improved:
            return seq, evaluated


def pairwise_swap_search(
    instance: Instance, sequence: Sequence[int], mode: str = SINGLE_PASS
) -> tuple[list[int], int]:
    """Run the swap pass; returns the final sequence and the number of swaps tried."""
    if mode not in (SINGLE_PASS, TO_FIXPOINT):
        raise InvalidConfig(f"unknown ps_mode {mode!r}")
    to_fixpoint = mode == TO_FIXPOINT
    if not instance.fits_int64:
        return _swap_sweep_python(instance, list(sequence), to_fixpoint)
    arr = instance.arrays
    seq0 = np.array([j - 1 for j in sequence], dtype=np.int64)
    seq, evaluated = _kernels.swap_sweep(
        seq0, arr["a"], arr["b"], arr["d"], arr["h"], arr["w"], to_fixpoint
    )
    return [int(j) + 1 for j in seq], int(evaluated)


def pairwise_swap(instance: Instance, schedule: Schedule, mode: str = SINGLE_PASS) -> Schedule:
    seq, _ = pairwise_swap_search(instance, schedule.sequence, mode)
    name = f"{schedule.algorithm}_PS" if schedule.algorithm else None
    return _finish(instance, seq, name)


def run_with_ps(instance: Instance, name: str, config: HeuristicConfig = DEFAULT_CONFIG) -> Schedule:
    if name not in HEURISTICS:
        raise UnknownAlgorithm(f"unknown algorithm {name!r}; expected one of {', '.join(BASE_ALGORITHMS)}")
    return pairwise_swap(instance, HEURISTICS[name](instance, config), config.ps_mode)


def run_algorithm(instance: Instance, name: str, config: HeuristicConfig = DEFAULT_CONFIG) -> Schedule:
    """Run a base heuristic or an ``ALG_PS`` composition by canonical name."""
    if name.endswith("_PS"):
        return run_with_ps(instance, name[:-3], config)
    if name not in HEURISTICS:
        raise UnknownAlgorithm(f"unknown algorithm {name!r}; expected one of {', '.join(ALL_ALGORITHMS)}")
    return HEURISTICS[name](instance, config)
