"""Instance files: JSON (canonical) and CSV (``id,a,b,d,h,w``)."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Union

from .core import GenerationMeta, Instance, Job

PathLike = Union[str, Path]

CSV_FIELDS = ("id", "a", "b", "d", "h", "w")


def instance_to_dict(instance: Instance) -> dict:
    out = {
        "n": instance.n,
        "jobs": [{k: getattr(job, k) for k in CSV_FIELDS} for job in instance.jobs],
    }
    if instance.meta is not None:
        out["meta"] = instance.meta.to_dict()
    return out


def instance_from_dict(data: dict) -> Instance:
    jobs = [Job(**{k: int(row[k]) for k in CSV_FIELDS}) for row in data["jobs"]]
    jobs.sort(key=lambda j: j.id)
    if "n" in data and int(data["n"]) != len(jobs):
        raise ValueError(f"declared n={data['n']} but {len(jobs)} jobs listed")
    meta = GenerationMeta.from_dict(data["meta"]) if data.get("meta") else None
    return Instance(tuple(jobs), meta)


def dumps_json(instance: Instance) -> str:
    return json.dumps(instance_to_dict(instance), indent=1) + "\n"


def dumps_csv(instance: Instance) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for job in instance.jobs:
        writer.writerow([getattr(job, k) for k in CSV_FIELDS])
    return buf.getvalue()


def loads_csv(text: str, name: str | None = None) -> Instance:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_FIELDS:
        raise ValueError(f"CSV header must be {','.join(CSV_FIELDS)}")
    jobs = sorted((Job(**{k: int(row[k]) for k in CSV_FIELDS}) for row in reader),
                  key=lambda j: j.id)
    return Instance(tuple(jobs), GenerationMeta(name=name) if name else None)


def save_instance(instance: Instance, path: PathLike) -> None:
    path = Path(path)
    text = dumps_csv(instance) if path.suffix.lower() == ".csv" else dumps_json(instance)
    path.write_text(text)


def load_instance(path: PathLike) -> Instance:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".csv":
        return loads_csv(text, name=path.stem)
    instance = instance_from_dict(json.loads(text))
    if instance.name is None:
        meta = instance.meta or GenerationMeta()
        instance = Instance(instance.jobs, GenerationMeta(**{**meta.__dict__, "name": path.stem}))
    return instance
