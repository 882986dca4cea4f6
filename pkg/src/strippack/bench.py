"""Algorithm dispatch by name and the benchmark runner."""
from __future__ import annotations

import csv
import glob
import math
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .binpack import SuperHarmonicParams, harmonic_params, load_params
from .core import TOL, Instance, StripPacking, ValidationReport, load_instance, lower_bound, validate_packing
from .strip_offline import bp_pack, ffdh, nfdh
from .strip_online import GpConfig, gp_run, shelf_pack

OFFLINE = ("bp-ffd", "bp-ff", "bp-nf", "bp-harmonic:<k>", "bp-sh:<params>", "nfdh", "ffdh")
ONLINE = ("gp", "shelf-nf", "shelf-ff", "shelf-harmonic:<k>")

COLUMNS = ("instance", "algorithm", "c", "r", "eps", "k", "height", "lower_bound",
           "known_opt", "ratio", "wall_time")


class UnknownAlgorithm(ValueError):
    pass


class PackingInvalid(RuntimeError):
    def __init__(self, instance: str, algorithm: str, report: ValidationReport):
        self.report = report
        super().__init__(f"{algorithm} on {instance}: {report}")


def harmonic_for_epsilon(eps: float) -> SuperHarmonicParams:
    """Harmonic with t_i = 1/i above eps and eps as the last boundary."""
    k = max(1, math.ceil(1.0 / eps - 1e-9) - 1)
    return harmonic_params(k, epsilon=eps)


@dataclass
class Settings:
    c: float = 20.0
    r: float = 0.9
    eps: float | None = None
    params: SuperHarmonicParams | None = None

    def gp_params(self) -> SuperHarmonicParams:
        if self.params is not None:
            if self.eps is not None and abs(self.eps - self.params.epsilon) > TOL:
                raise ValueError(f"eps={self.eps} does not match the parameter set's "
                                 f"epsilon {self.params.epsilon}")
            return self.params
        return harmonic_for_epsilon(self.eps if self.eps is not None else 1.0 / 13)

    def gp_config(self) -> GpConfig:
        p = self.gp_params()
        return GpConfig(p.epsilon, self.r, self.c, p)


def pack_with(name: str, instance: Instance, settings: Settings | None = None) -> StripPacking:
    """Run the strip packing algorithm called ``name`` on ``instance``."""
    s = settings or Settings()
    if name == "nfdh":
        return nfdh(instance)
    if name == "ffdh":
        return ffdh(instance)
    if name == "gp":
        return gp_run(instance, s.gp_config())
    if name.startswith("bp-"):
        inner = name[3:]
        if inner.startswith("sh:"):
            return bp_pack(instance, s.c, load_params(inner[3:]))
        if inner in ("ffd", "ff", "nf") or inner.startswith("harmonic:"):
            return bp_pack(instance, s.c, inner)
    if name.startswith("shelf-"):
        inner = name[6:]
        if inner in ("nf", "ff") or inner.startswith("harmonic:"):
            return shelf_pack(instance, inner, s.r)
    raise UnknownAlgorithm(f"unknown algorithm {name!r}; known: {', '.join(OFFLINE + ONLINE)}")


def _params_used(name: str, s: Settings) -> dict:
    row = {"c": "", "r": "", "eps": "", "k": ""}
    if name.startswith("bp-"):
        row["c"] = s.c
        if name.startswith("bp-harmonic:"):
            row["k"] = int(name.split(":", 1)[1])
    elif name.startswith("shelf-"):
        row["r"] = s.r
        if name.startswith("shelf-harmonic:"):
            row["k"] = int(name.split(":", 1)[1])
    elif name == "gp":
        p = s.gp_params()
        row.update(c=s.c, r=s.r, eps=p.epsilon, k=p.k)
    return row


@dataclass
class BenchRecord:
    instance: str
    algorithm: str
    c: float | str
    r: float | str
    eps: float | str
    k: int | str
    height: float
    lower_bound: float
    known_opt: float | str
    ratio: float
    wall_time: float


def run_one(instance: Instance, name: str, settings: Settings | None = None) -> BenchRecord:
    s = settings or Settings()
    t0 = time.perf_counter()
    packing = pack_with(name, instance, s)
    elapsed = time.perf_counter() - t0
    report = validate_packing(instance, packing)
    if not report.ok:
        raise PackingInvalid(instance.name, name, report)
    lb = lower_bound(instance)
    ref = max(lb, instance.known_opt or 0.0)
    ratio = packing.height / ref if ref > 0 else 1.0
    return BenchRecord(instance.name, name, height=packing.height, lower_bound=lb,
                       known_opt="" if instance.known_opt is None else instance.known_opt,
                       ratio=ratio, wall_time=elapsed, **_params_used(name, s))


def bench(instances: str | Iterable[Instance], algorithms: Sequence[str],
          output: str | Path | None = None, settings: Settings | None = None) -> list[BenchRecord]:
    """Run every algorithm on every instance, validating each packing.

    ``instances`` is a glob pattern of instance files or an iterable of
    instances.  Rows are written to ``output`` as CSV when given.
    """
    if isinstance(instances, str):
        paths = sorted(glob.glob(instances))
        if not paths:
            raise FileNotFoundError(f"no instance files match {instances!r}")
        instances = [load_instance(p) for p in paths]
    for name in algorithms:  # fail fast on typos
        pack_with(name, Instance("probe", ()), settings)
    records = [run_one(inst, name, settings) for inst in instances for name in algorithms]
    if output is not None:
        write_csv(records, output)
    return records


def write_csv(records: Sequence[BenchRecord], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=COLUMNS)
        w.writeheader()
        for rec in records:
            w.writerow(_fmt(asdict(rec)))


def _fmt(row: dict) -> dict:
    return {k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()}


def ratio_ok(record: BenchRecord) -> bool:
    return record.ratio >= 1.0 - TOL
