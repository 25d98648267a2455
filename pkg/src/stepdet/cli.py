"""Command-line entry point: ``stepdet {gen,solve,bench,export-lp,report}``.

Data goes to stdout (JSON or CSV), diagnostics to stderr.  Exit codes:
0 success, 1 usage error, 2 domain or data error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Sequence

from . import bench
from .errors import StepDetError
from .exact import BNB_CAP, BRUTE_FORCE_CAP, solve_bnb, solve_brute_force
from .generator import H_CLASSES, GeneratorConfig, generate, suite_configs
from .heuristics import ALL_ALGORITHMS, SINGLE_PASS, TO_FIXPOINT, HeuristicConfig, run_algorithm
from .instance_io import dumps_json, load_instance, save_instance
from .mip_export import check_against_model, export_lp

log = logging.getLogger("stepdet")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="stepdet", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random instance or a full suite")
    g.add_argument("--n", type=int)
    g.add_argument("--h-class", choices=H_CLASSES, default="H3")
    g.add_argument("--t-factor", type=float, default=0.6)
    g.add_argument("--r", type=float, default=0.6)
    g.add_argument("--tau", type=float, default=0.5)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", help="output file (.json or .csv); stdout if omitted")
    gsub = g.add_subparsers(dest="gen_command")
    gs = gsub.add_parser("suite", help="full factorial suite, one file per instance")
    gs.add_argument("--sizes", type=int, nargs="+", required=True)
    gs.add_argument("--replicates", type=int, default=10)
    gs.add_argument("--master-seed", type=int, default=0)
    gs.add_argument("--tau", type=float, default=0.5)
    gs.add_argument("--out-dir", required=True)

    s = sub.add_parser("solve", help="solve one instance file")
    s.add_argument("instance")
    how = s.add_mutually_exclusive_group()
    how.add_argument("--alg", choices=ALL_ALGORITHMS, default="CA_PS")
    how.add_argument("--exact", action="store_true")
    s.add_argument("--method", choices=("bnb", "brute-force"), default="bnb")
    s.add_argument("--cap", type=int)
    s.add_argument("--kappa", type=float, default=0.5)
    s.add_argument("--ps-mode", choices=(SINGLE_PASS, TO_FIXPOINT), default=SINGLE_PASS)
    s.add_argument("--check-model", action="store_true",
                   help="also verify the schedule against the exported MILP rows")

    b = sub.add_parser("bench", help="run a benchmark plan")
    b.add_argument("--plan", required=True)
    b.add_argument("--out-dir", help="overrides the plan's out_dir")
    b.add_argument("--workers", type=int)
    b.add_argument("--kappa-sweep", action="store_true", help="run the kappa sweep instead")

    e = sub.add_parser("export-lp", help="write the MILP model in LP format")
    e.add_argument("instance")
    e.add_argument("--out")

    r = sub.add_parser("report", help="aggregate a raw CSV into report tables")
    r.add_argument("raw")
    r.add_argument("--out-dir")
    return p


def _emit_json(data) -> None:
    sys.stdout.write(json.dumps(data) + "\n")


def _emit_rows(rows, fields: Sequence[str]) -> None:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        d = asdict(row)
        writer.writerow(["" if d[f] is None else d[f] for f in fields])


def _cmd_gen(args) -> int:
    if args.gen_command == "suite":
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        count = 0
        for name, cfg in suite_configs(args.sizes, args.replicates, args.master_seed, args.tau):
            save_instance(generate(cfg, name), out / f"{name}.json")
            count += 1
        _emit_json({"instances": count, "out_dir": str(out)})
        return 0
    if args.n is None:
        raise UsageError("gen: --n is required")
    cfg = GeneratorConfig(args.n, args.h_class, args.t_factor, args.r, args.tau, args.seed)
    name = Path(args.out).stem if args.out else None
    inst = generate(cfg, name)
    if args.out:
        save_instance(inst, args.out)
    else:
        sys.stdout.write(dumps_json(inst))
    return 0


def _cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    config = HeuristicConfig(kappa=args.kappa, ps_mode=args.ps_mode)
    if args.exact:
        if args.method == "bnb":
            res = solve_bnb(inst, cap=args.cap or BNB_CAP, config=config)
        else:
            res = solve_brute_force(inst, cap=args.cap or BRUTE_FORCE_CAP)
        out, sched = res.to_dict(), res.schedule
    else:
        sched = run_algorithm(inst, args.alg, config)
        out = sched.to_dict()
    if args.check_model:
        out["model_check"] = check_against_model(inst, sched).to_dict()
    _emit_json(out)
    return 0


def _cmd_bench(args) -> int:
    plan = bench.RunPlan.load(args.plan)
    if args.out_dir:
        plan.out_dir = args.out_dir
    if args.workers:
        plan.workers = args.workers
    if args.kappa_sweep:
        _emit_rows(bench.kappa_sweep(plan), list(bench.KappaCell.__dataclass_fields__))
        return 0
    report = bench.run(plan)
    for iid, err in report.failures:
        log.error("failed: %s: %s", iid, err)
    _emit_rows(report.table, list(bench.TableRow.__dataclass_fields__))
    return 2 if report.failures and not report.records else 0


def _cmd_export(args) -> int:
    text = export_lp(load_instance(args.instance))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_report(args) -> int:
    report = bench.aggregate(bench.read_raw_csv(args.raw))
    if args.out_dir:
        bench.write_report(report, args.out_dir)
    _emit_rows(report.table, list(bench.TableRow.__dataclass_fields__))
    return 0


COMMANDS = {
    "gen": _cmd_gen,
    "solve": _cmd_solve,
    "bench": _cmd_bench,
    "export-lp": _cmd_export,
    "report": _cmd_report,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except (StepDetError, OSError, ValueError, KeyError) as exc:
        print(f"stepdet: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
