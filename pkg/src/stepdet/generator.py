"""Random benchmark instances and 3-PARTITION reduction instances.

Random draws use numpy's PCG64 bit generator; ``Generator.integers`` samples
integer ranges without modulo bias (Lemire's bounded rejection method).
Columns are drawn in a fixed order (a, w, b, h, d), each as one vector of
length n.  Reproduction across implementations goes through the persisted
instance files, never through the RNG stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .core import GenerationMeta, Instance, Job, evaluate
from .errors import InvalidConfig, SpecViolation

H_CLASSES = ("H1", "H2", "H3")
FACTOR_LEVELS = (0.2, 0.4, 0.6, 0.8, 1.0)
DESIGN_SIZES = (8, 10, 15, 20, 25, 30, 40, 50, 75, 100, 250, 500, 750, 1000)
PRELIMINARY_SIZES = (20, 50, 100, 500)


@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    h_class: str = "H3"
    t_factor: float = 0.6
    r: float = 0.6
    tau: float = 0.5
    seed: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidConfig(f"n must be a positive integer, got {self.n!r}")
        if self.h_class not in H_CLASSES:
            raise InvalidConfig(f"h_class must be one of {H_CLASSES}, got {self.h_class!r}")
        if not 0 < self.t_factor <= 1:
            raise InvalidConfig(f"T must lie in (0, 1], got {self.t_factor}")
        if not 0 < self.r <= 1:
            raise InvalidConfig(f"R must lie in (0, 1], got {self.r}")
        if not self.tau > 0 or math.floor(100 * self.tau) < 1:
            raise InvalidConfig(f"tau must give a penalty range [1, floor(100 tau)] >= 1, got {self.tau}")
        if not 0 <= self.seed < 2**64:
            raise InvalidConfig("seed must be a 64-bit unsigned integer")


def ratio_order(instance: Instance) -> list[int]:
    """Job ids by a_j / b_j ascending, ties to the lowest id."""
    return sorted(range(1, instance.n + 1),
                  key=lambda j: (Fraction(instance.job(j).a, instance.job(j).b), j))


def cmax_prime(instance: Instance) -> int:
    return evaluate(instance, ratio_order(instance)).makespan


def h_interval(h_class: str, total_basic: int) -> tuple[int, int]:
    half_down, half_up = total_basic // 2, -(-total_basic // 2)
    if h_class == "H1":
        return 1, max(1, half_down)
    if h_class == "H2":
        return max(1, half_up), total_basic
    return 1, total_basic


def due_window(cmax: int, t_factor: float, r: float) -> tuple[int, int]:
    lo = max(0, math.ceil(cmax * (1 - t_factor - r / 2)))
    hi = max(lo, math.floor(cmax * (1 - t_factor + r / 2)))
    return lo, hi


def generate(config: GeneratorConfig, name: str | None = None) -> Instance:
    rng = np.random.Generator(np.random.PCG64(config.seed))
    n = config.n
    a = rng.integers(1, 100, size=n, endpoint=True)
    w = rng.integers(1, 10, size=n, endpoint=True)
    b = rng.integers(1, math.floor(100 * config.tau), size=n, endpoint=True)
    h_lo, h_hi = h_interval(config.h_class, int(a.sum()))
    h = rng.integers(h_lo, h_hi, size=n, endpoint=True)
    # due dates depend on C'max of the instance drawn so far
    partial = Instance.from_arrays(a, b, [0] * n, h, w)
    cmax = cmax_prime(partial)
    d_lo, d_hi = due_window(cmax, config.t_factor, config.r)
    d = rng.integers(d_lo, d_hi, size=n, endpoint=True)
    meta = GenerationMeta(
        name=name,
        t_factor=config.t_factor,
        r=config.r,
        h_class=config.h_class,
        tau=config.tau,
        seed=config.seed,
        cmax_prime=cmax,
    )
    return Instance.from_arrays(a, b, d, h, w, meta)


def suite_seed(master_seed: int, size: int, h_class: str, t_factor: float, r: float, replicate: int) -> int:
    """Per-instance seed derived from the master seed and the design cell."""
    key = (size, H_CLASSES.index(h_class), round(t_factor * 10), round(r * 10), replicate)
    ss = np.random.SeedSequence(master_seed, spawn_key=key)
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def suite_configs(
    sizes: Iterable[int], replicates: int = 10, master_seed: int = 0, tau: float = 0.5
) -> list[tuple[str, GeneratorConfig]]:
    out = []
    for size in sizes:
        if size not in DESIGN_SIZES:
            raise InvalidConfig(f"size {size} not in the experimental design {DESIGN_SIZES}")
        for h_class in H_CLASSES:
            for t_factor in FACTOR_LEVELS:
                for r in FACTOR_LEVELS:
                    for rep in range(replicates):
                        seed = suite_seed(master_seed, size, h_class, t_factor, r, rep)
                        name = f"n{size}_{h_class}_T{t_factor:.1f}_R{r:.1f}_r{rep:02d}"
                        out.append((name, GeneratorConfig(size, h_class, t_factor, r, tau, seed)))
    return out


def experiment_suite(
    sizes: Iterable[int], replicates: int = 10, master_seed: int = 0, tau: float = 0.5
) -> list[Instance]:
    return [generate(cfg, name) for name, cfg in suite_configs(sizes, replicates, master_seed, tau)]


@dataclass(frozen=True)
class ReductionSpec:
    """A 3-PARTITION instance: 3t integers strictly inside (b/4, b/2) summing to t*b."""

    t: int
    b: int
    a: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))

    def validate(self) -> None:
        if self.t < 1 or self.b < 1:
            raise SpecViolation("t and b must be positive")
        if self.b % 4:
            raise SpecViolation(f"b must be divisible by 4 for integer weights, got {self.b}")
        if len(self.a) != 3 * self.t:
            raise SpecViolation(f"need {3 * self.t} partition values, got {len(self.a)}")
        if sum(self.a) != self.t * self.b:
            raise SpecViolation(f"values sum to {sum(self.a)}, expected t*b = {self.t * self.b}")
        bad = [x for x in self.a if not (self.b < 4 * x and 2 * x < self.b)]
        if bad:
            raise SpecViolation(f"values {bad} are outside (b/4, b/2)")

    @property
    def enforcer_weight(self) -> int:
        return (self.b + self.b**2) * (self.t**2 - self.t)

    def deltas(self) -> list[int]:
        """Per-triple excess over b for the triples in index order."""
        return [sum(self.a[3 * i: 3 * i + 3]) - self.b for i in range(self.t)]

    def partial_deltas(self) -> list[int]:
        out, acc = [], 0
        for delta in self.deltas():
            acc += delta
            out.append(acc)
        return out


def reduction_instance(spec: ReductionSpec) -> Instance:
    spec.validate()
    t, b = spec.t, spec.b
    quarter = b // 4
    h_part = t * b + 2 * (t - 1)
    jobs = [Job(j + 1, a_j, 1, 0, h_part, a_j - quarter) for j, a_j in enumerate(spec.a)]
    for k in range(1, t):
        due = k * (b + 1)
        jobs.append(Job(3 * t + k, 1, 1, due, due - 1, spec.enforcer_weight))
    return Instance(tuple(jobs), GenerationMeta(name=f"reduction_t{t}_b{b}"))


def canonical_order(spec: ReductionSpec) -> list[int]:
    """Triples in index order with the i-th enforcer right after the i-th triple."""
    order = []
    for i in range(spec.t):
        order.extend((3 * i + 1, 3 * i + 2, 3 * i + 3))
        if i < spec.t - 1:
            order.append(3 * spec.t + i + 1)
    return order


def z_star(spec: ReductionSpec) -> int:
    spec.validate()
    t, b, a = spec.t, spec.b, spec.a
    total = Fraction(t * t - t, 8) * (b + b * b)
    for k in range(1, 3 * t + 1):
        first = 3 * math.ceil(k / 3) - 2
        total += sum(a[j - 1] for j in range(first, k + 1)) * (a[k - 1] - Fraction(b, 4))
    if total.denominator != 1:
        raise SpecViolation(f"z* = {total} is not integral")
    return int(total)


def lemma_identity(deltas: Sequence[int]) -> tuple[int, int]:
    """Both sides of sum_i i*delta_i = -sum_{i<t} Delta_i for a zero-sum vector."""
    if sum(deltas) != 0:
        raise SpecViolation("deltas must sum to zero")
    lhs = sum((i + 1) * x for i, x in enumerate(deltas))
    partial = np.cumsum(np.asarray(deltas, dtype=object))
    rhs = -sum(partial[:-1]) if len(deltas) else 0
    return lhs, int(rhs)
