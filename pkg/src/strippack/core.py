"""Geometric domain types, packing validation and lower bounds.

Coordinates are plain floats.  Every geometric comparison goes through the
absolute tolerance ``TOL`` because algorithms build coordinates by repeated
summation.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

TOL = 1e-9

# above this many rects the validator switches from all-pairs to a sweep
SWEEP_THRESHOLD = 5000


class InstanceError(ValueError):
    """Raised for malformed rectangles or instances."""


class StructuralError(ValueError):
    """Raised when a packing's id set does not match its instance."""

    def __init__(self, missing, duplicate, unknown):
        self.missing = sorted(missing)
        self.duplicate = sorted(duplicate)
        self.unknown = sorted(unknown)
        super().__init__(
            f"placement ids do not match instance: missing={self.missing} "
            f"duplicate={self.duplicate} unknown={self.unknown}"
        )


@dataclass(frozen=True)
class Rect:
    id: int
    w: float
    h: float

    def __post_init__(self):
        if not (0.0 < self.w <= 1.0) or not (0.0 < self.h <= 1.0):
            raise InstanceError(f"rect {self.id}: dimensions ({self.w}, {self.h}) outside (0, 1]")

    @property
    def area(self) -> float:
        return self.w * self.h


@dataclass(frozen=True)
class Instance:
    """An ordered list of rectangles; the order is the online arrival order."""

    name: str
    rects: tuple[Rect, ...]
    known_opt: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "rects", tuple(self.rects))
        ids = [r.id for r in self.rects]
        if len(set(ids)) != len(ids):
            raise InstanceError(f"instance {self.name!r}: duplicate rect ids")
        if self.known_opt is not None and self.known_opt < lower_bound(self) - TOL:
            raise InstanceError(
                f"instance {self.name!r}: known_opt {self.known_opt} below lower bound"
            )

    def __len__(self) -> int:
        return len(self.rects)

    def by_id(self) -> dict[int, Rect]:
        return {r.id: r for r in self.rects}

    @classmethod
    def from_dims(cls, dims: Iterable[tuple[float, float]], name: str = "instance",
                  known_opt: float | None = None) -> "Instance":
        """Build an instance from ``(w, h)`` pairs, numbering ids from 0."""
        return cls(name, tuple(Rect(i, float(w), float(h)) for i, (w, h) in enumerate(dims)),
                   known_opt)


@dataclass(frozen=True)
class Placement:
    rect_id: int
    x: float
    y: float


@dataclass(frozen=True)
class Region:
    """A drawn-but-empty container: a slip, band, shelf or level."""

    kind: str
    x: float
    y: float
    w: float
    h: float


@dataclass(frozen=True)
class StripPacking:
    """A committed packing.

    ``classes`` maps rect ids to a small integer used for coloring
    (narrow = 0, wide type i = i); ``regions`` are container outlines.  Both
    are decoration and do not take part in validation.
    """

    placements: tuple[Placement, ...]
    height: float
    regions: tuple[Region, ...] = ()
    classes: dict[int, int] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "placements", tuple(self.placements))
        object.__setattr__(self, "regions", tuple(self.regions))

    def by_id(self) -> dict[int, Placement]:
        return {p.rect_id: p for p in self.placements}

    def top(self, instance: Instance) -> float:
        """Highest rectangle edge, which may sit below ``height``."""
        rects = instance.by_id()
        return max((p.y + rects[p.rect_id].h for p in self.placements), default=0.0)


@dataclass(frozen=True)
class Violation:
    kind: str  # overlap | out-of-strip | above-height
    ids: tuple[int, ...]
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        lines = [f"{len(self.violations)} violation(s):"]
        lines += [f"  {v.kind} {list(v.ids)} {v.detail}".rstrip() for v in self.violations]
        return "\n".join(lines)


def _check_ids(instance: Instance, packing: StripPacking) -> None:
    want = {r.id for r in instance.rects}
    seen: set[int] = set()
    dup: set[int] = set()
    for p in packing.placements:
        if p.rect_id in seen:
            dup.add(p.rect_id)
        seen.add(p.rect_id)
    missing, unknown = want - seen, seen - want
    if missing or dup or unknown:
        raise StructuralError(missing, dup, unknown)


def _overlap_pairs_dense(x0, y0, x1, y1):
    n = len(x0)
    pairs = []
    chunk = max(1, 4_000_000 // max(n, 1))
    for lo in range(0, n, chunk):
        hi = min(n, lo + chunk)
        ox = np.minimum(x1[lo:hi, None], x1[None, :]) - np.maximum(x0[lo:hi, None], x0[None, :])
        oy = np.minimum(y1[lo:hi, None], y1[None, :]) - np.maximum(y0[lo:hi, None], y0[None, :])
        hit = (ox > TOL) & (oy > TOL)
        ii, jj = np.nonzero(hit)
        ii = ii + lo
        keep = ii < jj
        pairs.extend(zip(ii[keep].tolist(), jj[keep].tolist()))
    return pairs


def _overlap_pairs_sweep(x0, y0, x1, y1):
    order = np.argsort(x0, kind="stable")
    sx0, sx1, sy0, sy1 = x0[order], x1[order], y0[order], y1[order]
    pairs = []
    for a in range(len(order)):
        # candidates start before rect a ends, beyond the tolerance
        end = np.searchsorted(sx0, sx1[a] - TOL, side="left")
        if end <= a + 1:
            continue
        b = np.arange(a + 1, end)
        ox = np.minimum(sx1[a], sx1[b]) - np.maximum(sx0[a], sx0[b])
        oy = np.minimum(sy1[a], sy1[b]) - np.maximum(sy0[a], sy0[b])
        for j in b[(ox > TOL) & (oy > TOL)].tolist():
            i, k = int(order[a]), int(order[j])
            pairs.append((min(i, k), max(i, k)))
    return pairs


def validate_packing(instance: Instance, packing: StripPacking, *,
                     method: str = "auto") -> ValidationReport:
    """Check a packing against its instance.

    Raises ``StructuralError`` if the placement ids are not exactly the
    instance ids.  Geometric problems are collected in the returned report.
    Rectangles that only share an edge or a corner do not overlap.
    """
    _check_ids(instance, packing)
    rects = instance.by_id()
    pl = sorted(packing.placements, key=lambda p: p.rect_id)
    violations: list[Violation] = []
    if not pl:
        return ValidationReport(())

    ids = [p.rect_id for p in pl]
    x0 = np.array([p.x for p in pl])
    y0 = np.array([p.y for p in pl])
    x1 = x0 + np.array([rects[i].w for i in ids])
    y1 = y0 + np.array([rects[i].h for i in ids])

    for k in np.nonzero((x0 < -TOL) | (x1 > 1.0 + TOL) | (y0 < -TOL))[0].tolist():
        violations.append(Violation("out-of-strip", (ids[k],),
                                    f"x=[{x0[k]:.12g}, {x1[k]:.12g}] y0={y0[k]:.12g}"))
    for k in np.nonzero(y1 > packing.height + TOL)[0].tolist():
        violations.append(Violation("above-height", (ids[k],),
                                    f"top {y1[k]:.12g} > height {packing.height:.12g}"))

    if method == "auto":
        method = "sweep" if len(pl) > SWEEP_THRESHOLD else "dense"
    finder = _overlap_pairs_sweep if method == "sweep" else _overlap_pairs_dense
    for i, j in sorted(finder(x0, y0, x1, y1)):
        violations.append(Violation("overlap", (ids[i], ids[j])))
    return ValidationReport(tuple(violations))


def lower_bound(instance: Instance) -> float:
    """max(total area, stacked height of rects wider than 1/2, tallest rect)."""
    if not instance.rects:
        return 0.0
    area = sum(r.w * r.h for r in instance.rects)
    stack = sum(r.h for r in instance.rects if r.w > 0.5)
    tallest = max(r.h for r in instance.rects)
    return max(area, stack, tallest)


# -- files ------------------------------------------------------------------

def instance_to_dict(instance: Instance) -> dict:
    d = {"name": instance.name}
    if instance.known_opt is not None:
        d["known_opt"] = instance.known_opt
    d["rects"] = [{"id": r.id, "w": r.w, "h": r.h} for r in instance.rects]
    return d


def instance_from_dict(d: dict) -> Instance:
    try:
        rects = tuple(Rect(int(r["id"]), float(r["w"]), float(r["h"])) for r in d["rects"])
    except (KeyError, TypeError) as exc:
        raise InstanceError(f"malformed instance: {exc}") from exc
    opt = d.get("known_opt")
    return Instance(str(d.get("name", "instance")), rects, None if opt is None else float(opt))


def packing_to_dict(packing: StripPacking) -> dict:
    d = {
        "height": packing.height,
        "placements": [{"id": p.rect_id, "x": p.x, "y": p.y} for p in packing.placements],
    }
    if packing.regions:
        d["regions"] = [[g.kind, g.x, g.y, g.w, g.h] for g in packing.regions]
    if packing.classes:
        d["classes"] = {str(k): v for k, v in sorted(packing.classes.items())}
    return d


def packing_from_dict(d: dict) -> StripPacking:
    return StripPacking(
        tuple(Placement(int(p["id"]), float(p["x"]), float(p["y"])) for p in d["placements"]),
        float(d["height"]),
        tuple(Region(str(k), float(x), float(y), float(w), float(h))
              for k, x, y, w, h in d.get("regions", ())),
        {int(k): int(v) for k, v in d.get("classes", {}).items()},
    )


def load_instance(path: str | Path) -> Instance:
    with open(path) as fh:
        return instance_from_dict(json.load(fh))


def save_instance(instance: Instance, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(instance_to_dict(instance), fh, indent=1)


def load_packing(path: str | Path) -> StripPacking:
    with open(path) as fh:
        return packing_from_dict(json.load(fh))


def save_packing(packing: StripPacking, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(packing_to_dict(packing), fh, indent=1)


def check_sizes(sizes: Sequence[float]) -> list[float]:
    """Validate a 1-D item list; every size must lie in (0, 1]."""
    out = [float(s) for s in sizes]
    for i, s in enumerate(out):
        if not (0.0 < s <= 1.0):
            raise InstanceError(f"item {i}: size {s} outside (0, 1]")
    return out
