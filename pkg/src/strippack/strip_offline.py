"""Offline strip packing: Batch-and-Pack and the level baselines NFDH / FFDH.

Batch-and-Pack sorts rectangles by width, stacks them into slips of height
``c`` and hands the slip widths to a one-dimensional bin packing algorithm.
Each bin becomes a band of height ``c``; the last (possibly short) slip gets
a band of its own on top.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .binpack import BinAssignment, SuperHarmonicParams, run_bin_algorithm
from .core import TOL, Instance, Placement, Region, StripPacking


@dataclass
class Slip:
    """Width-``width``, height-``capacity`` container with a vertical stack."""

    width: float
    capacity: float
    contents: list[tuple[int, float]] = field(default_factory=list)
    packed_height: float = 0.0

    def fits(self, h: float) -> bool:
        return self.packed_height + h <= self.capacity + TOL

    def push(self, rect_id: int, h: float) -> float:
        """Stack a rect on top; returns its y offset inside the slip."""
        y = self.packed_height
        self.contents.append((rect_id, h))
        self.packed_height += h
        return y


def batch_into_slips(instance: Instance, c: float) -> list[Slip]:
    """Stack rects, widest first, into slips of height ``c`` by next fit.

    A slip takes the width of its first (widest) rect.  Every slip except the
    last is filled above ``c - 1``.
    """
    if c <= 1:
        raise ValueError(f"slip height c must exceed 1, got {c}")
    slips: list[Slip] = []
    for r in sorted(instance.rects, key=lambda r: (-r.w, r.id)):
        if not slips or not slips[-1].fits(r.h):
            slips.append(Slip(r.w, c))
        slips[-1].push(r.id, r.h)
    return slips


def bp_pack(instance: Instance, c: float,
            bin_alg: str | SuperHarmonicParams = "ffd") -> StripPacking:
    """Batch-and-Pack with ``bin_alg`` packing the closed slips.

    ``bin_alg`` is one of ``nf``, ``ff``, ``ffd``, ``harmonic:<k>`` or
    ``superharmonic:<params>`` (or a ``SuperHarmonicParams``).
    """
    packing, _ = bp_pack_detail(instance, c, bin_alg)
    return packing


def bp_pack_detail(instance: Instance, c: float, bin_alg="ffd"):
    """``bp_pack`` that also returns ``(slips, assignment)`` for inspection."""
    slips = batch_into_slips(instance, c)
    closed, last = slips[:-1], slips[-1:]
    assignment: BinAssignment = run_bin_algorithm(bin_alg, [s.width for s in closed])
    heights = {r.id: r.h for r in instance.rects}
    placements: list[Placement] = []
    regions: list[Region] = []

    def lay(slip: Slip, x: float, base: float):
        regions.append(Region("slip", x, base, slip.width, c))
        y = base
        for rid, _ in slip.contents:
            placements.append(Placement(rid, x, y))
            y += heights[rid]

    bands = [[closed[j] for j, _ in b] for b in assignment.bins] + [last] * bool(last)
    for n, band in enumerate(bands):
        base = n * c
        regions.append(Region("band", 0.0, base, 1.0, c))
        x = 0.0
        for slip in band:
            lay(slip, x, base)
            x += slip.width
    packing = StripPacking(tuple(placements), c * len(bands), tuple(regions),
                           _slip_classes(slips))
    return packing, (slips, assignment)


def _slip_classes(slips: list[Slip]) -> dict[int, int]:
    return {rid: n for n, s in enumerate(slips) for rid, _ in s.contents}


def _levels(instance: Instance, first_fit: bool) -> StripPacking:
    rects = sorted(instance.rects, key=lambda r: (-r.h, r.id))
    levels: list[list] = []  # [base y, height, fill]
    spots: list[tuple[int, int, float]] = []
    top = 0.0
    for r in rects:
        if first_fit:
            lv = next((n for n, L in enumerate(levels) if L[2] + r.w <= 1.0 + TOL), None)
        else:
            lv = len(levels) - 1 if levels and levels[-1][2] + r.w <= 1.0 + TOL else None
        if lv is None:
            levels.append([top, r.h, 0.0])
            top += r.h
            lv = len(levels) - 1
        spots.append((r.id, lv, levels[lv][2]))
        levels[lv][2] += r.w
    placements = tuple(Placement(rid, x, levels[lv][0]) for rid, lv, x in spots)
    regions = tuple(Region("level", 0.0, base, 1.0, h) for base, h, _ in levels)
    return StripPacking(placements, top, regions)


def nfdh(instance: Instance) -> StripPacking:
    """Next Fit Decreasing Height."""
    return _levels(instance, first_fit=False)


def ffdh(instance: Instance) -> StripPacking:
    """First Fit Decreasing Height."""
    return _levels(instance, first_fit=True)
