"""Seeded instance generators.

All randomness comes from ``numpy.random.default_rng(seed)`` (PCG64), so an
instance is a pure function of its arguments.  Uniform draws on ``(lo, hi]``
are taken as ``hi - (hi - lo) * U`` with ``U`` uniform on ``[0, 1)``.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .core import Instance, InstanceError, Rect


def _check_range(name: str, rng_: tuple[float, float]):
    lo, hi = rng_
    if not (0.0 <= lo < hi <= 1.0):
        raise InstanceError(f"{name} range ({lo}, {hi}] is empty or outside (0, 1]")


def _draw(rng: np.random.Generator, n: int, lo: float, hi: float) -> np.ndarray:
    return hi - (hi - lo) * rng.random(n)


def gen_sizes(n: int, seed: int, lo: float = 0.0, hi: float = 1.0) -> list[float]:
    """n item sizes uniform on (lo, hi]."""
    _check_range("size", (lo, hi))
    return _draw(np.random.default_rng(seed), n, lo, hi).tolist()


def gen_uniform(n: int, seed: int, w_range: tuple[float, float] = (0.0, 1.0),
                h_range: tuple[float, float] = (0.0, 1.0), name: str | None = None) -> Instance:
    _check_range("width", w_range)
    _check_range("height", h_range)
    rng = np.random.default_rng(seed)
    w = _draw(rng, n, *w_range)
    h = _draw(rng, n, *h_range)
    return Instance.from_dims(zip(w.tolist(), h.tolist()), name or f"uniform-n{n}-s{seed}")


def gen_tiling(n: int, H: float, seed: int, name: str | None = None) -> Instance:
    """Cut the 1 x H strip into n rectangles by random guillotine cuts.

    The strip is first cut into ceil(H) equal horizontal bands so no piece
    is taller than 1; then an area-weighted random piece is halved at a
    random point (20%..80%) along a random axis until n pieces exist.  The
    pieces tile the strip, so the optimum is exactly H.
    """
    if n < 1 or H <= 0:
        raise InstanceError("need n >= 1 and H > 0")
    m = math.ceil(H - 1e-12)
    if n < m:
        raise InstanceError(f"H={H} needs at least {m} pieces of height <= 1, asked for {n}")
    rng = np.random.default_rng(seed)
    bh = H / m
    pieces = [(0.0, b * bh, 1.0, bh) for b in range(m)]
    while len(pieces) < n:
        areas = np.array([p[2] * p[3] for p in pieces])
        j = int(rng.choice(len(pieces), p=areas / areas.sum()))
        x, y, w, h = pieces[j]
        f = rng.uniform(0.2, 0.8)
        if rng.random() < 0.5:
            a, b = (x, y, w * f, h), (x + w * f, y, w - w * f, h)
        else:
            a, b = (x, y, w, h * f), (x, y + h * f, w, h - h * f)
        pieces[j] = a
        pieces.append(b)
    order = rng.permutation(n)
    dims = [(pieces[i][2], pieces[i][3]) for i in order.tolist()]
    return Instance.from_dims(dims, name or f"tiling-n{n}-H{H:g}-s{seed}", known_opt=float(H))


def gen_equal_height(sizes: Sequence[float], height: float = 1.0,
                     name: str = "equal-height") -> Instance:
    """Wrap a 1-D item list as rects of one common height."""
    return Instance(name, tuple(Rect(i, float(s), float(height)) for i, s in enumerate(sizes)))
