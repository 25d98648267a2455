"""Experiment harness: run algorithms over instance suites, persist raw
objectives, and aggregate them into comparison tables.

Raw results go to ``raw.csv`` first; every table is recomputed from those
rows alone, so reports can be regenerated without re-solving.
"""

from __future__ import annotations

import csv
import glob
import io
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .core import Instance
from .errors import InvalidConfig, StepDetError
from .exact import solve_bnb
from .generator import PRELIMINARY_SIZES, experiment_suite
from .heuristics import (
    ALL_ALGORITHMS,
    BASE_ALGORITHMS,
    HeuristicConfig,
    run_algorithm,
)
from .instance_io import load_instance
from .metrics import ComparisonRow, lsd_intervals, rivh, tally

log = logging.getLogger(__name__)

RAW_FIELDS = ("instance_id", "n", "h_class", "T", "R", "algorithm", "Z", "millis", "z_opt")
DEFAULT_KAPPAS = tuple(k / 2 for k in range(1, 10))


@dataclass(frozen=True)
class SuiteSource:
    sizes: tuple[int, ...]
    replicates: int = 10
    master_seed: int = 0
    tau: float = 0.5


@dataclass
class RunPlan:
    algorithms: Sequence[str] = BASE_ALGORITHMS
    suite: Optional[SuiteSource] = None
    files: Sequence[str] = ()
    instances: Sequence[Instance] = ()
    exact: bool = False
    exact_cap: int = 10
    kappas: Sequence[float] = DEFAULT_KAPPAS
    workers: int = 1
    out_dir: Optional[str] = None
    timings: bool = True
    config: HeuristicConfig = field(default_factory=HeuristicConfig)

    def __post_init__(self) -> None:
        unknown = [a for a in self.algorithms if a not in ALL_ALGORITHMS]
        if unknown:
            raise InvalidConfig(f"unknown algorithms {unknown}")
        if self.workers < 1:
            raise InvalidConfig("workers must be >= 1")

    @classmethod
    def from_dict(cls, data: dict) -> "RunPlan":
        data = dict(data)
        if "suite" in data and data["suite"] is not None:
            s = dict(data["suite"])
            s["sizes"] = tuple(s["sizes"])
            data["suite"] = SuiteSource(**s)
        if isinstance(data.get("files"), str):
            data["files"] = [data["files"]]
        cfg = data.pop("config", None) or {}
        if "kappa" in data:
            cfg["kappa"] = data.pop("kappa")
        if "ps_mode" in data:
            cfg["ps_mode"] = data.pop("ps_mode")
        known = set(cls.__dataclass_fields__) - {"instances", "config"}
        extra = set(data) - known
        if extra:
            raise InvalidConfig(f"unknown plan keys {sorted(extra)}")
        return cls(**data, config=HeuristicConfig(**cfg))

    @classmethod
    def load(cls, path: str | Path) -> "RunPlan":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class RawRecord:
    instance_id: str
    n: int
    h_class: str
    t_factor: Optional[float]
    r: Optional[float]
    algorithm: str
    z: int
    millis: Optional[float]
    z_opt: Optional[int]


@dataclass(frozen=True)
class TableRow:
    n: int
    group: str
    algorithm: str
    instances: int
    mean_rivw: float
    num_best: int
    mean_rivh: Optional[float] = None
    num_opt: Optional[int] = None


@dataclass(frozen=True)
class PairRow:
    n: int
    challenger: str
    baseline: str
    rivw_challenger: float
    rivw_baseline: float
    num_better: int
    num_equal: int
    num_worse: int


@dataclass(frozen=True)
class CellRow:
    n: int
    algorithm: str
    t_factor: float
    r: float
    h_class: str
    instances: int
    mean_rivh: float
    num_opt: int


@dataclass(frozen=True)
class MeansRow:
    algorithm: str
    mean: float
    lo: float
    hi: float


@dataclass
class BenchReport:
    records: list[RawRecord]
    failures: list[tuple[str, str]]
    table: list[TableRow]
    pairs: list[PairRow]
    cells: list[CellRow]
    means_plot: list[MeansRow]
    raw_path: Optional[str] = None

    @property
    def empty(self) -> bool:
        return not self.records and not self.failures


def _instance_id(instance: Instance, index: int) -> str:
    return instance.name or f"instance_{index:05d}"


def _load_sources(plan: RunPlan) -> tuple[list[tuple[str, Instance]], list[tuple[str, str]]]:
    items: list[tuple[str, Instance]] = []
    failures: list[tuple[str, str]] = []
    for inst in plan.instances:
        items.append((_instance_id(inst, len(items)), inst))
    if plan.suite is not None:
        s = plan.suite
        for inst in experiment_suite(s.sizes, s.replicates, s.master_seed, s.tau):
            items.append((_instance_id(inst, len(items)), inst))
    for pattern in plan.files:
        paths = sorted(glob.glob(pattern))
        if not paths:
            failures.append((pattern, "no files match"))
        for path in paths:
            try:
                items.append((Path(path).stem, load_instance(path)))
            except (OSError, ValueError, KeyError) as exc:
                failures.append((path, f"{type(exc).__name__}: {exc}"))
    return items, failures


def _solve_one(
    instance_id: str,
    instance: Instance,
    algorithms: Sequence[str],
    config: HeuristicConfig,
    exact: bool,
    exact_cap: int,
    timings: bool,
) -> tuple[list[RawRecord], Optional[str]]:
    meta = instance.meta
    z_opt = None
    if exact:
        try:
            z_opt = solve_bnb(instance, cap=exact_cap, config=config).z_opt
        except StepDetError as exc:
            return [], f"{type(exc).__name__}: {exc}"
    out = []
    for name in algorithms:
        t0 = time.perf_counter()
        sched = run_algorithm(instance, name, config)
        millis = round((time.perf_counter() - t0) * 1000, 3) if timings else None
        out.append(RawRecord(
            instance_id,
            instance.n,
            (meta.h_class if meta else None) or "",
            meta.t_factor if meta else None,
            meta.r if meta else None,
            name,
            sched.z,
            millis,
            z_opt,
        ))
    return out, None


def _solve_star(args):
    return _solve_one(*args)


def run(plan: RunPlan) -> BenchReport:
    items, failures = _load_sources(plan)
    jobs = [
        (iid, inst, tuple(plan.algorithms), plan.config, plan.exact, plan.exact_cap, plan.timings)
        for iid, inst in items
    ]
    if plan.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=plan.workers) as pool:
            results = list(pool.map(_solve_star, jobs, chunksize=8))
    else:
        results = [_solve_star(j) for j in jobs]

    records: list[RawRecord] = []
    for (iid, _), (recs, err) in zip(items, results):
        if err is not None:
            failures.append((iid, err))
            log.warning("instance %s failed: %s", iid, err)
        records.extend(recs)

    raw_path = None
    if plan.out_dir is not None:
        out = Path(plan.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        raw_path = str(out / "raw.csv")
        Path(raw_path).write_text(raw_csv(records))
    report = aggregate(records, failures)
    report.raw_path = raw_path
    if plan.out_dir is not None:
        write_report(report, plan.out_dir)
    return report


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def raw_csv(records: Iterable[RawRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RAW_FIELDS)
    for r in records:
        writer.writerow([_fmt(v) for v in (
            r.instance_id, r.n, r.h_class, r.t_factor, r.r, r.algorithm, r.z, r.millis, r.z_opt
        )])
    return buf.getvalue()


def read_raw_csv(path: str | Path) -> list[RawRecord]:
    def opt(cast, text):
        return cast(text) if text != "" else None

    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(RAW_FIELDS) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"raw CSV lacks columns {sorted(missing)}")
        return [
            RawRecord(
                row["instance_id"], int(row["n"]), row["h_class"],
                opt(float, row["T"]), opt(float, row["R"]), row["algorithm"],
                int(row["Z"]), opt(float, row["millis"]), opt(int, row["z_opt"]),
            )
            for row in reader
        ]


def _comparison_rows(records: Sequence[RawRecord], algorithms: Sequence[str]) -> list[ComparisonRow]:
    by_instance: dict[str, dict[str, int]] = {}
    z_opt: dict[str, Optional[int]] = {}
    for r in records:
        by_instance.setdefault(r.instance_id, {})[r.algorithm] = r.z
        z_opt[r.instance_id] = r.z_opt
    return [
        ComparisonRow(iid, {a: objs[a] for a in algorithms}, z_opt[iid])
        for iid, objs in sorted(by_instance.items())
        if all(a in objs for a in algorithms)
    ]


def aggregate(records: Sequence[RawRecord], failures: Sequence[tuple[str, str]] = ()) -> BenchReport:
    table: list[TableRow] = []
    pairs: list[PairRow] = []
    cells: list[CellRow] = []
    present = {r.algorithm for r in records}
    groups = {
        "base": [a for a in BASE_ALGORITHMS if a in present],
        "ps": [a for a in ALL_ALGORITHMS if a.endswith("_PS") and a in present],
    }
    sizes = sorted({r.n for r in records})
    for n in sizes:
        at_n = [r for r in records if r.n == n]
        for group, algs in groups.items():
            if not algs:
                continue
            rows = _comparison_rows(at_n, algs)
            t = tally(rows, algs)
            for a in algs:
                s = t.summaries[a]
                table.append(TableRow(n, group, a, t.instances, s.mean_rivw, s.num_best, s.mean_rivh, s.num_opt))
        for base in groups["base"]:
            ps = f"{base}_PS"
            if ps not in present:
                continue
            rows = _comparison_rows(at_n, [ps, base])
            t = tally(rows, [ps, base], pairs=[(ps, base)])
            h2h = t.pairwise[(ps, base)]
            pairs.append(PairRow(n, ps, base, t.summaries[ps].mean_rivw, t.summaries[base].mean_rivw,
                                 h2h.num_better, h2h.num_equal, h2h.num_worse))
        if any(r.z_opt is not None for r in at_n):
            cells.extend(_optimum_cells(n, at_n))
    return BenchReport(list(records), list(failures), table, pairs, cells, _means_plot(records, groups["ps"]))


def _optimum_cells(n: int, records: Sequence[RawRecord]) -> list[CellRow]:
    out = []
    keyed: dict[tuple, list[RawRecord]] = {}
    for r in records:
        if r.z_opt is None:
            continue
        keyed.setdefault((r.algorithm, r.t_factor, r.r, r.h_class), []).append(r)
    for (alg, t_factor, rr, h), recs in sorted(keyed.items(), key=lambda kv: tuple(str(x) for x in kv[0])):
        vals = [rivh(r.z, r.z_opt) for r in recs]
        out.append(CellRow(n, alg, t_factor, rr, h, len(recs), sum(vals) / len(vals),
                           sum(r.z == r.z_opt for r in recs)))
    return out


def _means_plot(records: Sequence[RawRecord], ps_algorithms: Sequence[str]) -> list[MeansRow]:
    algs = [a for a in ps_algorithms if a != "WSPT_PS"]
    if len(algs) < 2:
        return []
    samples: dict[str, list[float]] = {a: [] for a in algs}
    for n in sorted({r.n for r in records}):
        rows = _comparison_rows([r for r in records if r.n == n], algs)
        t = tally(rows, algs)
        for a in algs:
            samples[a].extend(t.rivw_samples[a])
    try:
        intervals = lsd_intervals(samples)
    except StepDetError:
        return []
    return [MeansRow(i.algorithm, i.mean, i.lo, i.hi) for i in intervals]


def _write_csv(path: Path, rows: Sequence, fields: Sequence[str]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        d = asdict(row)
        writer.writerow([_fmt(d[f]) for f in fields])
    path.write_text(buf.getvalue())


def write_report(report: BenchReport, out_dir: str | Path) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    table_fields = ["n", "group", "algorithm", "instances", "mean_rivw", "num_best"]
    if any(r.mean_rivh is not None for r in report.table):
        table_fields += ["mean_rivh", "num_opt"]
    _write_csv(out / "table.csv", report.table, table_fields)
    _write_csv(out / "pairs.csv", report.pairs, list(PairRow.__dataclass_fields__))
    if report.cells:
        _write_csv(out / "optimum_cells.csv", report.cells, list(CellRow.__dataclass_fields__))
    if report.means_plot:
        _write_csv(out / "means_plot.csv", report.means_plot, list(MeansRow.__dataclass_fields__))
    summary = {
        "table": [asdict(r) for r in report.table],
        "pairs": [asdict(r) for r in report.pairs],
        "cells": [asdict(r) for r in report.cells],
        "means_plot": [asdict(r) for r in report.means_plot],
        "failures": [{"instance_id": i, "error": e} for i, e in report.failures],
    }
    (out / "report.json").write_text(json.dumps(summary, indent=1) + "\n")


@dataclass(frozen=True)
class KappaCell:
    algorithm: str
    kappa: float
    instances: int
    mean_z: float
    is_argmin: bool


def preliminary_plan(master_seed: int = 0, replicates: int = 5, **kw) -> RunPlan:
    return RunPlan(
        algorithms=("ATC", "CA"),
        suite=SuiteSource(PRELIMINARY_SIZES, replicates, master_seed),
        **kw,
    )


def kappa_sweep(plan: RunPlan, kappas: Optional[Sequence[float]] = None) -> list[KappaCell]:
    kappas = tuple(kappas if kappas is not None else plan.kappas)
    algs = [a for a in plan.algorithms if a in ("ATC", "CA")]
    if not algs:
        raise InvalidConfig("kappa sweep needs ATC and/or CA in the plan")
    items, _ = _load_sources(plan)
    totals = {(a, k): 0 for a in algs for k in kappas}
    for _, inst in items:
        for k in kappas:
            cfg = HeuristicConfig(**{**asdict(plan.config), "kappa": k})
            for a in algs:
                totals[(a, k)] += run_algorithm(inst, a, cfg).z
    cells = []
    count = len(items)
    for a in algs:
        means = {k: totals[(a, k)] / count if count else 0.0 for k in kappas}
        best = min(kappas, key=lambda k: (means[k], k))
        cells.extend(KappaCell(a, k, count, means[k], k == best) for k in kappas)
    return cells
