"""Big-M MILP model of the problem, written in CPLEX LP format.

The step processing time ``p_j = a_j`` if ``s_j <= h_j`` else ``a_j + b_j``
is not linear.  It is modelled with a binary ``u_j`` and ``p_j = a_j + b_j u_j``
inlined into every row, plus the forcing row ``s_j - M u_j <= h_j``, which
makes ``u_j = 1`` whenever ``s_j > h_j``.  Setting ``u_j = 1`` while
``s_j <= h_j`` is feasible but only lengthens the job, and the objective is
regular, so some optimal solution always has ``u_j = [s_j > h_j]``.

Rows, for every pair ``i < j`` and every job ``j``::

    prec_i_j:  s_i + b_i u_i - s_j + M y_i_j <= M - a_i     (i before j if y = 1)
    prec_j_i:  s_j + b_j u_j - s_i - M y_i_j <= -a_j        (j before i if y = 0)
    det_j:     s_j - M u_j <= h_j
    tard_j:    s_j + b_j u_j - T_j <= d_j - a_j

with ``M = max_j d_j + sum_j (a_j + b_j)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import Instance, Schedule


@dataclass(frozen=True)
class Row:
    name: str
    coeffs: tuple[tuple[str, int], ...]
    rhs: int

    def lhs(self, values: dict[str, int]) -> int:
        return sum(c * values[v] for v, c in self.coeffs)


@dataclass(frozen=True)
class MipModel:
    big_m: int
    objective: tuple[tuple[str, int], ...]
    rows: tuple[Row, ...]
    continuous: tuple[str, ...]
    binaries: tuple[str, ...]

    def row(self, name: str) -> Row:
        for r in self.rows:
            if r.name == name:
                return r
        raise KeyError(name)


def big_m(instance: Instance) -> int:
    return max((j.d for j in instance.jobs), default=0) + instance.makespan_bound


def build_model(instance: Instance) -> MipModel:
    m = big_m(instance)
    jobs = instance.jobs
    rows: list[Row] = []
    for i in range(len(jobs)):
        for k in range(i + 1, len(jobs)):
            ji, jk = jobs[i], jobs[k]
            y = f"y_{ji.id}_{jk.id}"
            rows.append(Row(
                f"prec_{ji.id}_{jk.id}",
                ((f"s_{ji.id}", 1), (f"u_{ji.id}", ji.b), (f"s_{jk.id}", -1), (y, m)),
                m - ji.a,
            ))
            rows.append(Row(
                f"prec_{jk.id}_{ji.id}",
                ((f"s_{jk.id}", 1), (f"u_{jk.id}", jk.b), (f"s_{ji.id}", -1), (y, -m)),
                -jk.a,
            ))
    for j in jobs:
        rows.append(Row(f"det_{j.id}", ((f"s_{j.id}", 1), (f"u_{j.id}", -m)), j.h))
    for j in jobs:
        rows.append(Row(
            f"tard_{j.id}",
            ((f"s_{j.id}", 1), (f"u_{j.id}", j.b), (f"T_{j.id}", -1)),
            j.d - j.a,
        ))
    ids = [j.id for j in jobs]
    return MipModel(
        big_m=m,
        objective=tuple((f"T_{j.id}", j.w) for j in jobs),
        rows=tuple(rows),
        continuous=tuple(f"s_{j}" for j in ids) + tuple(f"T_{j}" for j in ids),
        binaries=tuple(f"y_{i}_{k}" for x, i in enumerate(ids) for k in ids[x + 1:])
        + tuple(f"u_{j}" for j in ids),
    )


def _expr(terms) -> str:
    out = []
    for var, coef in terms:
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = var if mag == 1 else f"{mag} {var}"
        out.append(f"{sign} {body}")
    text = " ".join(out)
    return text[2:] if text.startswith("+ ") else text


def export_lp(instance: Instance) -> str:
    model = build_model(instance)
    lines = [
        f"\\ single machine total weighted tardiness, step-deteriorating jobs, n = {instance.n}",
        f"\\ big-M = {model.big_m}",
        "Minimize",
        f" obj: {_expr(model.objective) or '0'}",
        "Subject To",
    ]
    lines += [f" {r.name}: {_expr(r.coeffs)} <= {r.rhs}" for r in model.rows]
    lines.append("Bounds")
    lines += [f" {v} >= 0" for v in model.continuous]
    if model.binaries:
        lines.append("Binary")
        lines += [f" {v}" for v in model.binaries]
    lines.append("End")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    objective: int
    violated: str | None = None
    detail: str = field(default="", compare=False)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "objective": self.objective, "violated": self.violated, "detail": self.detail}


def assignment(instance: Instance, schedule: Schedule) -> dict[str, int]:
    """Variable values implied by a schedule, taken from its stored fields."""
    position = {j: k for k, j in enumerate(schedule.sequence)}
    values: dict[str, int] = {}
    for job in instance.jobs:
        k = job.id - 1
        values[f"s_{job.id}"] = schedule.starts[k]
        values[f"T_{job.id}"] = schedule.tardiness[k]
        values[f"u_{job.id}"] = int(schedule.starts[k] > job.h)
    for x, ji in enumerate(instance.jobs):
        for jk in instance.jobs[x + 1:]:
            values[f"y_{ji.id}_{jk.id}"] = int(position[ji.id] < position[jk.id])
    return values


def check_against_model(instance: Instance, schedule: Schedule) -> CheckReport:
    model = build_model(instance)
    values = assignment(instance, schedule)
    obj = sum(c * values[v] for v, c in model.objective)
    for v in model.continuous:
        if values[v] < 0:
            return CheckReport(False, obj, f"bound_{v}", f"{v} = {values[v]} < 0")
    for row in model.rows:
        lhs = row.lhs(values)
        if lhs > row.rhs:
            return CheckReport(False, obj, row.name, f"lhs {lhs} > rhs {row.rhs}")
    if obj != schedule.z:
        return CheckReport(False, obj, "obj", f"model objective {obj} != schedule Z {schedule.z}")
    return CheckReport(True, obj)
