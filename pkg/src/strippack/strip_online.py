"""Online strip packing: Group-and-Pack and classic shelf algorithms.

Group-and-Pack splits arrivals by width.  Narrow rects (width at most
epsilon) go to next-fit shelves whose heights are powers of ``r``.  Wide
rects of type i are stacked into slips of width ``t_i`` and height ``c``;
each new slip is handed to Super Harmonic as a 1-D item, and every bin that
Super Harmonic opens becomes a band of height ``c`` at the top of the strip.
Bands and shelves are stacked in the order they are created.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .binpack import SuperHarmonic, SuperHarmonicParams, harmonic_params, make_online_packer
from .core import TOL, Instance, Placement, Rect, Region, StripPacking


def height_class(h: float, r: float) -> int:
    """The s >= 0 with r**(s+1) < h <= r**s."""
    s = max(0, int(math.floor(math.log(h) / math.log(r))))
    while s > 0 and h > r ** s:
        s -= 1
    while h <= r ** (s + 1):
        s += 1
    return s


@dataclass(frozen=True)
class GpConfig:
    epsilon: float
    r: float
    c: float
    params: SuperHarmonicParams

    def __post_init__(self):
        if not 0.0 < self.epsilon < 0.5:
            raise ValueError(f"epsilon must lie in (0, 1/2), got {self.epsilon}")
        if not 0.0 < self.r < 1.0:
            raise ValueError(f"r must lie in (0, 1), got {self.r}")
        if self.c <= 1.0:
            raise ValueError(f"c must exceed 1, got {self.c}")
        if abs(self.params.epsilon - self.epsilon) > TOL:
            raise ValueError(
                f"epsilon {self.epsilon} differs from the last class boundary {self.params.epsilon}")

    @classmethod
    def harmonic(cls, k: int, r: float = 0.9, c: float = 20.0,
                 epsilon: float | None = None) -> "GpConfig":
        p = harmonic_params(k, epsilon)
        return cls(p.epsilon, r, c, p)


@dataclass
class Shelf:
    s: int
    base: float
    height: float
    fill: float = 0.0
    closed: bool = False


@dataclass
class OnlineSlip:
    type: int
    width: float
    x: float
    base: float
    bin: int
    color: str
    packed_height: float = 0.0
    rect_ids: list[int] = field(default_factory=list)


class GpState:
    """Mutable Group-and-Pack state; feed rects with ``insert``."""

    def __init__(self, config: GpConfig):
        self.config = config
        self.strip_top = 0.0
        self.sh = SuperHarmonic(config.params)
        self.open_shelves: dict[int, Shelf] = {}
        self.shelves: list[Shelf] = []
        self.open_slips: dict[int, OnlineSlip] = {}
        self.slips: list[OnlineSlip] = []
        self.band_base: dict[int, float] = {}
        self.placements: list[Placement] = []
        self.regions: list[Region] = []
        self.classes: dict[int, int] = {}

    def insert(self, rect: Rect) -> Placement:
        i = self.config.params.type_of(rect.w)
        if i == self.config.params.k + 1:
            pl = self._narrow(rect)
            self.classes[rect.id] = 0
        else:
            pl = self._wide(rect, i)
            self.classes[rect.id] = i
        self.placements.append(pl)
        return pl

    def _narrow(self, rect: Rect) -> Placement:
        r = self.config.r
        s = height_class(rect.h, r)
        shelf = self.open_shelves.get(s)
        if shelf is None or shelf.fill + rect.w > 1.0 + TOL:
            if shelf is not None:
                shelf.closed = True
            shelf = Shelf(s, self.strip_top, r ** s)
            self.strip_top += shelf.height
            self.open_shelves[s] = shelf
            self.shelves.append(shelf)
            self.regions.append(Region("shelf", 0.0, shelf.base, 1.0, shelf.height))
        pl = Placement(rect.id, shelf.fill, shelf.base)
        shelf.fill += rect.w
        return pl

    def _wide(self, rect: Rect, i: int) -> Placement:
        c = self.config.c
        slip = self.open_slips.get(i)
        if slip is None or slip.packed_height >= c - 1:
            slip = self._new_slip(i)
        pl = Placement(rect.id, slip.x, slip.base + slip.packed_height)
        slip.packed_height += rect.h
        slip.rect_ids.append(rect.id)
        return pl

    def _new_slip(self, i: int) -> OnlineSlip:
        p, c = self.config.params, self.config.c
        width = p.t[i - 1]
        b, color = self.sh.place(width)
        if b.index not in self.band_base:
            self.band_base[b.index] = self.strip_top
            self.regions.append(Region("band", 0.0, self.strip_top, 1.0, c))
            self.strip_top += c
        # blue slips fill from the left, red ones from the right edge inwards
        if color == "red":
            x = 1.0 - len(b.red) * width
        else:
            x = (len(b.blue) - 1) * width
        slip = OnlineSlip(i, width, x, self.band_base[b.index], b.index, color)
        self.open_slips[i] = slip
        self.slips.append(slip)
        self.regions.append(Region("slip", x, slip.base, width, c))
        return slip

    def packing(self) -> StripPacking:
        return StripPacking(tuple(self.placements), self.strip_top, tuple(self.regions),
                            dict(self.classes))


def gp_insert(state: GpState, rect: Rect) -> Placement:
    return state.insert(rect)


def gp_run(instance: Instance, config: GpConfig) -> StripPacking:
    return gp_state(instance, config).packing()


def gp_state(instance: Instance, config: GpConfig) -> GpState:
    """Run Group-and-Pack and return the final state (for inspection)."""
    state = GpState(config)
    for rect in instance.rects:
        state.insert(rect)
    return state


def shelf_pack(instance: Instance, inner_alg: str = "nf", r: float = 0.5) -> StripPacking:
    """Baker-Schwarz shelf packing with heights rounded to powers of ``r``.

    Each height class runs its own copy of ``inner_alg`` (``nf``, ``ff`` or
    ``harmonic:<k>``) on the widths; every bin it opens is a new shelf at the
    top of the strip.
    """
    if not 0.0 < r < 1.0:
        raise ValueError(f"r must lie in (0, 1), got {r}")
    packers: dict[int, object] = {}
    shelves: dict[tuple[int, int], list[float]] = {}  # (s, bin) -> [base, fill]
    placements: list[Placement] = []
    regions: list[Region] = []
    classes: dict[int, int] = {}
    top = 0.0
    for rect in instance.rects:
        s = height_class(rect.h, r)
        if s not in packers:
            packers[s] = make_online_packer(inner_alg)
        b = packers[s].add(rect.w)
        shelf = shelves.get((s, b))
        if shelf is None:
            shelf = shelves[(s, b)] = [top, 0.0]
            regions.append(Region("shelf", 0.0, top, 1.0, r ** s))
            top += r ** s
        placements.append(Placement(rect.id, shelf[1], shelf[0]))
        shelf[1] += rect.w
        classes[rect.id] = s
    return StripPacking(tuple(placements), top, tuple(regions), classes)
