"""Exact optima for small instances.

``solve_brute_force`` enumerates every permutation and serves as the oracle;
``solve_bnb`` is a depth-first branch-and-bound seeded with the best PS
heuristic.  Both return the lexicographically smallest optimal sequence.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .core import Instance, Schedule, evaluate, objective
from .errors import TooLarge
from .heuristics import BASE_ALGORITHMS, DEFAULT_CONFIG, HeuristicConfig, run_with_ps

BRUTE_FORCE_CAP = 10
BNB_CAP = 14


@dataclass(frozen=True)
class ExactResult:
    schedule: Schedule
    z_opt: int
    nodes_explored: int
    method: str

    def to_dict(self) -> dict:
        return {
            "Z*": self.z_opt,
            "sequence": list(self.schedule.sequence),
            "nodes": self.nodes_explored,
            "method": self.method,
        }


def permutation_tree_size(n: int) -> int:
    """Nodes of the full prefix tree, root excluded: sum of n!/(n-k)!."""
    return sum(math.perm(n, k) for k in range(1, n + 1))


def solve_brute_force(instance: Instance, cap: int = BRUTE_FORCE_CAP) -> ExactResult:
    if instance.n > cap:
        raise TooLarge(f"brute force limited to n <= {cap}, got n = {instance.n}")
    best_seq, best_z, count = tuple(range(1, instance.n + 1)), None, 0
    # permutations() of a sorted range is emitted in lexicographic order
    for seq in itertools.permutations(range(1, instance.n + 1)):
        count += 1
        z = objective(instance, seq)
        if best_z is None or z < best_z:
            best_seq, best_z = seq, z
    sched = evaluate(instance, best_seq)
    return ExactResult(sched, sched.z, count, "brute-force")


def solve_bnb(
    instance: Instance,
    cap: int = BNB_CAP,
    config: HeuristicConfig = DEFAULT_CONFIG,
) -> ExactResult:
    n = instance.n
    if n > cap:
        raise TooLarge(f"branch-and-bound limited to n <= {cap}, got n = {n}")
    if n == 0:
        return ExactResult(evaluate(instance, ()), 0, 0, "branch-and-bound")

    seeds = [run_with_ps(instance, name, config) for name in BASE_ALGORITHMS]
    seed = min(seeds, key=lambda s: (s.z, s.sequence))
    inc_z = seed.z
    inc_seq = list(seed.sequence)

    jobs = instance.jobs
    # identical jobs are interchangeable; the lexicographically smallest
    # optimum schedules them in increasing id order
    twin_before = [0] * (n + 1)
    seen: dict[tuple, int] = {}
    for job in jobs:
        key = (job.a, job.b, job.d, job.h, job.w)
        twin_before[job.id] = seen.get(key, 0)
        seen[key] = job.id
    prefix: list[int] = []
    used = [False] * (n + 1)
    nodes = 0

    def descend(t: int, z: int) -> None:
        nonlocal inc_z, inc_seq, nodes
        depth = len(prefix)
        if depth == n:
            if z < inc_z or prefix < inc_seq:
                inc_z, inc_seq = z, list(prefix)
            return
        for j in range(1, n + 1):
            if used[j] or (twin_before[j] and not used[twin_before[j]]):
                continue
            job = jobs[j - 1]
            c = t + (job.a if t <= job.h else job.a + job.b)
            zz = z + job.w * (c - job.d) if c > job.d else z
            # partial Z only grows, so it bounds every completion; an equal
            # bound is still worth exploring while the prefix can beat the
            # incumbent lexicographically
            if zz > inc_z:
                continue
            prefix.append(j)
            if zz == inc_z and prefix > inc_seq[: depth + 1]:
                prefix.pop()
                continue
            used[j] = True
            nodes += 1
            descend(c, zz)
            used[j] = False
            prefix.pop()

    descend(0, 0)
    sched = evaluate(instance, inc_seq)
    return ExactResult(sched, sched.z, nodes, "branch-and-bound")
