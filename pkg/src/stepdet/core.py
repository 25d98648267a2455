"""Domain types and exact schedule evaluation.

A job ``j`` has a basic processing time ``a``, a deterioration penalty ``b``,
a due date ``d``, a deteriorating date ``h`` and a weight ``w``.  A job that
starts at or before ``h`` takes ``a`` time units, otherwise ``a + b``.  The
machine never idles, so a sequence fully determines the schedule.

All times and objectives are Python ints, so evaluation is exact for any
weight magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import InvalidPermutation

__all__ = [
    "Job",
    "GenerationMeta",
    "Instance",
    "Schedule",
    "actual_processing_time",
    "evaluate",
    "objective",
]

INT64_MAX = np.iinfo(np.int64).max


def _check_int(name: str, value, minimum: int) -> None:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")


@dataclass(frozen=True)
class Job:
    id: int
    a: int
    b: int
    d: int
    h: int
    w: int

    def __post_init__(self) -> None:
        _check_int("id", self.id, 1)
        _check_int("a", self.a, 1)
        _check_int("b", self.b, 1)
        _check_int("d", self.d, 0)
        _check_int("h", self.h, 0)
        _check_int("w", self.w, 1)
        # normalise numpy scalars so JSON output and hashing stay plain
        for name in ("id", "a", "b", "d", "h", "w"):
            object.__setattr__(self, name, int(getattr(self, name)))


@dataclass(frozen=True)
class GenerationMeta:
    """How a random instance was drawn (all fields optional for loaded files)."""

    name: Optional[str] = None
    t_factor: Optional[float] = None
    r: Optional[float] = None
    h_class: Optional[str] = None
    tau: Optional[float] = None
    seed: Optional[int] = None
    cmax_prime: Optional[int] = None

    def to_dict(self) -> dict:
        keys = {"t_factor": "T", "r": "R"}
        return {keys.get(k, k): v for k, v in self.__dict__.items() if v is not None}

    @classmethod
    def from_dict(cls, data: dict) -> "GenerationMeta":
        data = dict(data)
        if "T" in data:
            data["t_factor"] = data.pop("T")
        if "R" in data:
            data["r"] = data.pop("R")
        known = {k: data[k] for k in cls.__dataclass_fields__ if k in data}
        return cls(**known)


@dataclass(frozen=True)
class Instance:
    jobs: tuple[Job, ...]
    meta: Optional[GenerationMeta] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "jobs", tuple(self.jobs))
        ids = [job.id for job in self.jobs]
        if ids != list(range(1, len(ids) + 1)):
            raise ValueError(f"job ids must be 1..n in order, got {ids}")

    @classmethod
    def from_arrays(
        cls,
        a: Iterable[int],
        b: Iterable[int],
        d: Iterable[int],
        h: Iterable[int],
        w: Iterable[int],
        meta: Optional[GenerationMeta] = None,
    ) -> "Instance":
        cols = [list(c) for c in (a, b, d, h, w)]
        if len({len(c) for c in cols}) != 1:
            raise ValueError("parameter columns differ in length")
        jobs = tuple(
            Job(k + 1, *(int(c[k]) for c in cols)) for k in range(len(cols[0]))
        )
        return cls(jobs, meta)

    @property
    def n(self) -> int:
        return len(self.jobs)

    @property
    def name(self) -> Optional[str]:
        return self.meta.name if self.meta else None

    def job(self, job_id: int) -> Job:
        return self.jobs[job_id - 1]

    @cached_property
    def arrays(self) -> dict[str, np.ndarray]:
        """Parameter columns as int64 arrays, indexed by ``job id - 1``."""
        return {
            k: np.array([getattr(j, k) for j in self.jobs], dtype=np.int64)
            for k in ("a", "b", "d", "h", "w")
        }

    @cached_property
    def makespan_bound(self) -> int:
        return sum(j.a + j.b for j in self.jobs)

    @cached_property
    def objective_bound(self) -> int:
        """Upper bound on Z for any sequence."""
        return sum(j.w for j in self.jobs) * self.makespan_bound

    @property
    def fits_int64(self) -> bool:
        return self.objective_bound < INT64_MAX // 4


@dataclass(frozen=True)
class Schedule:
    """A sequence with its derived timing.

    ``starts``, ``proc_times``, ``completions`` and ``tardiness`` are indexed
    by job (entry ``k`` belongs to job ``k + 1``), not by position.
    """

    sequence: tuple[int, ...]
    starts: tuple[int, ...]
    proc_times: tuple[int, ...]
    completions: tuple[int, ...]
    tardiness: tuple[int, ...]
    z: int
    algorithm: Optional[str] = field(default=None, compare=False)

    @property
    def makespan(self) -> int:
        return max(self.completions, default=0)

    def to_dict(self) -> dict:
        out = {"sequence": list(self.sequence), "Z": self.z}
        if self.algorithm:
            out = {"algorithm": self.algorithm, **out}
        return out


def actual_processing_time(job: Job, start: int) -> int:
    return job.a if start <= job.h else job.a + job.b


def check_permutation(instance: Instance, sequence: Sequence[int]) -> tuple[int, ...]:
    seq = tuple(int(j) for j in sequence)
    if len(seq) != instance.n or sorted(seq) != list(range(1, instance.n + 1)):
        raise InvalidPermutation(
            f"sequence {list(seq)} is not a permutation of 1..{instance.n}"
        )
    return seq


def evaluate(instance: Instance, sequence: Sequence[int]) -> Schedule:
    seq = check_permutation(instance, sequence)
    n = instance.n
    starts = [0] * n
    procs = [0] * n
    comps = [0] * n
    tards = [0] * n
    t = 0
    z = 0
    for j in seq:
        job = instance.jobs[j - 1]
        p = job.a if t <= job.h else job.a + job.b
        k = j - 1
        starts[k] = t
        procs[k] = p
        t += p
        comps[k] = t
        late = t - job.d
        if late > 0:
            tards[k] = late
            z += job.w * late
    return Schedule(seq, tuple(starts), tuple(procs), tuple(comps), tuple(tards), z)


def objective(instance: Instance, sequence: Sequence[int]) -> int:
    """Total weighted tardiness of ``sequence`` (no permutation check)."""
    jobs = instance.jobs
    t = 0
    z = 0
    for j in sequence:
        job = jobs[j - 1]
        t += job.a if t <= job.h else job.a + job.b
        if t > job.d:
            z += job.w * (t - job.d)
    return z
