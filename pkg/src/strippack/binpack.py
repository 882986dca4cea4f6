"""One-dimensional bin packing: NF, FF, FFD, Harmonic, Super Harmonic.

Online algorithms are small stateful packers with an ``add(size)`` method
that returns the bin the item went to.  The function forms (``next_fit``,
``first_fit`` ...) run a packer over a whole list and return a
``BinAssignment``.

Super Harmonic follows the classic red/blue scheme: items are typed by the
interval ``(t[i+1], t[i]]`` they fall in, a fixed fraction ``alpha_i`` of
each type is colored red, blue items fill bins ``beta_i`` at a time from the
left, and red items go into reserved gaps of size ``Delta_j`` on the right of
other types' bins.
"""
from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import TOL, check_sizes


class ParamsError(ValueError):
    """Inconsistent Super Harmonic parameters."""


@dataclass
class BinAssignment:
    bins: list[list[tuple[int, float]]]
    algorithm: str

    def __len__(self) -> int:
        return len(self.bins)

    @property
    def count(self) -> int:
        return len(self.bins)

    def loads(self) -> list[float]:
        return [sum(s for _, s in b) for b in self.bins]


# -- simple online packers ---------------------------------------------------

class NextFit:
    """One open bin; an item that does not fit closes it."""

    name = "nf"

    def __init__(self):
        self.bins: list[list[tuple[int, float]]] = []
        self._load = 0.0
        self._n = 0

    def add(self, size: float) -> int:
        if not self.bins or self._load + size > 1.0 + TOL:
            self.bins.append([])
            self._load = 0.0
        self.bins[-1].append((self._n, size))
        self._load += size
        self._n += 1
        return len(self.bins) - 1


class FirstFit:
    """Lowest-indexed bin with room, else a new bin."""

    name = "ff"

    def __init__(self, capacity_hint: int = 64):
        self.bins: list[list[tuple[int, float]]] = []
        # unused slots keep load 0, so the first free slot is always feasible
        self._loads = np.zeros(max(capacity_hint, 1))
        self._n = 0

    def add(self, size: float) -> int:
        if len(self.bins) == len(self._loads):
            self._loads = np.concatenate([self._loads, np.zeros(len(self._loads))])
        b = int(np.argmax(self._loads[:len(self.bins) + 1] + size <= 1.0 + TOL))
        if b == len(self.bins):
            self.bins.append([])
        self.bins[b].append((self._n, size))
        self._loads[b] += size
        self._n += 1
        return b


def _harmonic_type(x: float, k: int) -> int:
    """i with x in (1/(i+1), 1/i], capped at k+1."""
    i = min(int(1.0 / x), k + 1)
    while i > 1 and x > 1.0 / i + TOL:
        i -= 1
    while i <= k and x <= 1.0 / (i + 1) + TOL:
        i += 1
    return i


class Harmonic:
    """Harmonic_k: type-i items (i <= k) share bins i at a time, the rest use NF."""

    def __init__(self, k: int):
        if k < 1:
            raise ValueError("harmonic needs k >= 1")
        self.k = k
        self.name = f"harmonic:{k}"
        self.bins: list[list[tuple[int, float]]] = []
        self._open: dict[int, int] = {}
        self._small_load = 0.0
        self._n = 0

    def add(self, size: float) -> int:
        i = _harmonic_type(size, self.k)
        if i <= self.k:
            b = self._open.get(i)
            if b is None or len(self.bins[b]) >= i:
                b = len(self.bins)
                self.bins.append([])
                self._open[i] = b
        else:
            b = self._open.get(0)
            if b is None or self._small_load + size > 1.0 + TOL:
                b = len(self.bins)
                self.bins.append([])
                self._open[0] = b
                self._small_load = 0.0
            self._small_load += size
        self.bins[b].append((self._n, size))
        self._n += 1
        return b


# -- Super Harmonic ----------------------------------------------------------

def _as_fraction(a: float) -> Fraction:
    return Fraction(a).limit_denominator(10**9)


def _gamma_for(ti: float, Delta: Sequence[float]) -> int:
    """Red items of size t_i that share one reserved space."""
    if not Delta or ti > Delta[-1] + TOL:
        return 0
    if ti > Delta[0] + TOL:
        return 1
    return max(1, math.floor(Delta[0] / ti + TOL))


def _varphi_for(ti: float, Delta: Sequence[float]) -> int:
    """Index of the smallest reserved space that holds a size-t_i item."""
    return next((j for j, d in enumerate(Delta, 1) if ti <= d + TOL), 0)


@dataclass(frozen=True)
class SuperHarmonicParams:
    """Super Harmonic parameter set.

    Tuples are 0-based: ``t[0]`` is t_1 and ``t[k]`` is t_{k+1} = epsilon;
    ``alpha[i-1]`` etc. belong to type i.  ``Delta[j-1]`` is Delta_j, with
    Delta_0 = 0 implicit.  ``phi`` values live in 0..K, ``varphi`` values in
    1..K (0 where gamma is 0).  Use ``build`` to derive gamma, varphi and
    default beta.
    """

    t: tuple[float, ...]
    alpha: tuple[float, ...]
    beta: tuple[int, ...]
    Delta: tuple[float, ...]
    phi: tuple[int, ...]
    varphi: tuple[int, ...]
    gamma: tuple[int, ...]
    name: str = "superharmonic"
    _alpha_frac: tuple[Fraction, ...] = field(default=(), repr=False, compare=False)
    _neg_t: tuple[float, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_alpha_frac", tuple(_as_fraction(a) for a in self.alpha))
        object.__setattr__(self, "_neg_t", tuple(-x for x in self.t))
        self._validate()

    @property
    def k(self) -> int:
        return len(self.t) - 1

    @property
    def K(self) -> int:
        return len(self.Delta)

    @property
    def epsilon(self) -> float:
        return self.t[-1]

    def space(self, j: int) -> float:
        """Delta_j, with Delta_0 = 0."""
        return 0.0 if j == 0 else self.Delta[j - 1]

    def left_space(self, i: int) -> float:
        """delta_i = 1 - t_i * beta_i."""
        return 1.0 - self.t[i - 1] * self.beta[i - 1]

    def type_of(self, x: float) -> int:
        """Type i in 1..k+1 with x in (t_{i+1}, t_i]; k+1 means x <= epsilon."""
        # number of t_j >= x, up to tolerance
        return max(1, bisect.bisect_right(self._neg_t, -x + TOL))

    def red_count(self, i: int, s: int) -> int:
        """floor(alpha_i * s), exactly."""
        a = self._alpha_frac[i - 1]
        return (a.numerator * s) // a.denominator

    def accepts_red(self, blue_type: int, red_type: int) -> bool:
        """Can a bin with blue type i carry the red items of type j?"""
        return (self.phi[blue_type - 1] != 0 and self.alpha[red_type - 1] != 0
                and self.gamma[red_type - 1] * self.t[red_type - 1]
                <= self.space(self.phi[blue_type - 1]) + TOL)

    def _validate(self):
        k, K = self.k, self.K
        if k < 1:
            raise ParamsError("need k >= 1")
        for name in ("alpha", "beta", "phi", "varphi", "gamma"):
            if len(getattr(self, name)) != k:
                raise ParamsError(f"{name} must have k={k} entries")
        t = self.t
        if abs(t[0] - 1.0) > TOL:
            raise ParamsError("t_1 must be 1")
        if any(t[i] <= t[i + 1] for i in range(k)) or t[k] <= 0:
            raise ParamsError("t must be strictly decreasing and positive")
        D = (0.0,) + self.Delta
        if any(D[j] >= D[j + 1] for j in range(K)) or (K and D[K] >= 0.5):
            raise ParamsError("need 0 = Delta_0 < Delta_1 < ... < Delta_K < 1/2")
        for i in range(1, k + 1):
            a, b, p = self.alpha[i - 1], self.beta[i - 1], self.phi[i - 1]
            if not 0.0 <= a <= 1.0:
                raise ParamsError(f"alpha_{i} outside [0, 1]")
            if b < 1:
                raise ParamsError(f"beta_{i} must be >= 1")
            if self.left_space(i) < -TOL:
                raise ParamsError(f"beta_{i} * t_{i} exceeds 1")
            if not 0 <= p <= K:
                raise ParamsError(f"phi({i}) outside 0..K")
            if p and self.space(p) > self.left_space(i) + TOL:
                raise ParamsError(f"Delta_phi({i}) exceeds delta_{i}")
            g = _gamma_for(self.t[i - 1], self.Delta)
            if self.gamma[i - 1] != g:
                raise ParamsError(f"gamma_{i} = {self.gamma[i - 1]}, expected {g}")
            vp = _varphi_for(self.t[i - 1], self.Delta) if g > 0 else 0
            if self.varphi[i - 1] != vp:
                raise ParamsError(f"varphi({i}) = {self.varphi[i - 1]}, expected {vp}")
            if a > 0 and g == 0:
                raise ParamsError(f"alpha_{i} > 0 but no red space fits type {i}")

    @classmethod
    def build(cls, t: Sequence[float], alpha: Sequence[float], Delta: Sequence[float] = (),
              phi: Sequence[int] | None = None, beta: Sequence[int] | None = None,
              varphi: Sequence[int] | None = None, name: str = "superharmonic"):
        """Complete a parameter set: beta_i defaults to floor(1/t_i), gamma and
        varphi are derived (explicit values are checked against the formulas)."""
        t = tuple(float(x) for x in t)
        k = len(t) - 1
        if beta is None:
            beta = [math.floor(1.0 / x + TOL) for x in t[:k]]
        if phi is None:
            phi = [0] * k
        proto = dict(t=t, alpha=tuple(float(a) for a in alpha), beta=tuple(int(b) for b in beta),
                     Delta=tuple(float(d) for d in Delta), phi=tuple(int(p) for p in phi))
        if len(proto["beta"]) != k or len(proto["alpha"]) != k or len(proto["phi"]) != k:
            raise ParamsError(f"alpha, beta and phi need k={k} entries")
        D = proto["Delta"]
        gamma = [_gamma_for(ti, D) for ti in t[:k]]
        vphi = [_varphi_for(ti, D) if g else 0 for ti, g in zip(t, gamma)]
        if varphi is not None:
            varphi = tuple(int(v) for v in varphi)
            if varphi != tuple(vphi):
                raise ParamsError(f"varphi {list(varphi)} disagrees with derived {vphi}")
        return cls(gamma=tuple(gamma), varphi=tuple(vphi), name=name, **proto)


def harmonic_params(k: int, epsilon: float | None = None) -> SuperHarmonicParams:
    """Classic Harmonic as a Super Harmonic parameter set: t_i = 1/i, no red items.

    ``epsilon`` replaces the last boundary 1/(k+1) when given.
    """
    if k < 1:
        raise ParamsError("harmonic needs k >= 1")
    t = [1.0 / i for i in range(1, k + 1)] + [1.0 / (k + 1) if epsilon is None else epsilon]
    return SuperHarmonicParams.build(t, [0.0] * k, name=f"harmonic:{k}")


def toy_params() -> SuperHarmonicParams:
    """Three wide types, one red space of 0.4; half of the type-3 items are red."""
    return SuperHarmonicParams.build(
        t=[1.0, 0.6, 1.0 / 3.0, 0.25], alpha=[0.0, 0.0, 0.5], beta=[1, 1, 3],
        Delta=[0.4], phi=[0, 1, 0], name="toy")


def params_from_dict(d: dict, name: str = "superharmonic") -> SuperHarmonicParams:
    t = d["t"]
    k = int(d.get("k", len(t) - 1))
    if len(t) != k + 1:
        raise ParamsError(f"t needs k+1={k + 1} entries, got {len(t)}")
    return SuperHarmonicParams.build(
        t, d["alpha"], d.get("Delta", ()), phi=d.get("phi"), beta=d.get("beta"),
        varphi=d.get("varphi"), name=d.get("name", name))


def params_to_dict(p: SuperHarmonicParams) -> dict:
    return {"name": p.name, "k": p.k, "t": list(p.t), "alpha": list(p.alpha),
            "beta": list(p.beta), "Delta": list(p.Delta), "phi": list(p.phi),
            "varphi": list(p.varphi)}


def load_params(spec: str | Path) -> SuperHarmonicParams:
    """``harmonic:<k>``, ``toy``, or a path to a JSON parameter file."""
    s = str(spec)
    if s.startswith("harmonic:"):
        return harmonic_params(int(s.split(":", 1)[1]))
    if s == "toy":
        return toy_params()
    with open(s) as fh:
        return params_from_dict(json.load(fh), name=Path(s).stem)


class SHBin:
    """A Super Harmonic bin: blue items from the left, red items on the right."""

    __slots__ = ("index", "blue_type", "red_type", "blue", "red", "nf")

    def __init__(self, index: int, nf: bool = False):
        self.index = index
        self.blue_type: int | None = None
        self.red_type: int | None = None
        self.blue: list[tuple[int, float]] = []
        self.red: list[tuple[int, float]] = []
        self.nf = nf

    def group(self, params: SuperHarmonicParams):
        """("nf",) | (i,) | (i, "?") | ("?", j) | (i, j)."""
        if self.nf:
            return ("nf",)
        i, j = self.blue_type, self.red_type
        if j is None:
            return (i,) if params.phi[i - 1] == 0 else (i, "?")
        if i is None:
            return ("?", j)
        return (i, j)

    @property
    def items(self) -> list[tuple[int, float]]:
        return self.blue + self.red

    def __repr__(self):
        return f"SHBin({self.index}, blue={self.blue_type}x{len(self.blue)}, red={self.red_type}x{len(self.red)})"


class SuperHarmonic:
    """Online Super Harmonic packer.

    Ties among candidate bins are broken by ascending partner type, then bin
    creation order.  Type-(k+1) items go to a private next-fit bin.
    """

    def __init__(self, params: SuperHarmonicParams):
        self.params = params
        k = params.k
        self.name = params.name
        self.s = [0] * (k + 1)  # 1-based
        self.e = [0] * (k + 1)
        self.sh_bins: list[SHBin] = []
        self._n = 0
        # blue_room[i]: bins holding blue type i with fewer than beta_i of them
        self._blue_room: list[list[SHBin]] = [[] for _ in range(k + 1)]
        # red_room[j]: bins holding red type j with fewer than gamma_j of them
        self._red_room: list[list[SHBin]] = [[] for _ in range(k + 1)]
        self._blue_only: list[list[SHBin]] = [[] for _ in range(k + 1)]  # group (i,?)
        self._red_only: list[list[SHBin]] = [[] for _ in range(k + 1)]  # group (?,j)
        self._nf_bin: SHBin | None = None
        self._nf_load = 0.0

    @property
    def bins(self) -> list[list[tuple[int, float]]]:
        return [b.items for b in self.sh_bins]

    def _new_bin(self, nf: bool = False) -> SHBin:
        b = SHBin(len(self.sh_bins), nf)
        self.sh_bins.append(b)
        return b

    def add(self, size: float) -> int:
        return self.place(size)[0].index

    def place(self, size: float) -> tuple[SHBin, str]:
        """Pack one item; returns the bin and the color ('blue', 'red', 'nf')."""
        p = self.params
        item = (self._n, size)
        self._n += 1
        i = p.type_of(size)
        if i == p.k + 1:
            if self._nf_bin is None or self._nf_load + size > 1.0 + TOL:
                self._nf_bin = self._new_bin(nf=True)
                self._nf_load = 0.0
            self._nf_bin.blue.append(item)
            self._nf_load += size
            return self._nf_bin, "nf"
        self.s[i] += 1
        if self.e[i] < p.red_count(i, self.s[i]):
            self.e[i] += 1
            return self._place_red(i, item), "red"
        return self._place_blue(i, item), "blue"

    def _place_red(self, i: int, item) -> SHBin:
        p = self.params
        gi = p.gamma[i - 1]
        room = self._red_room[i]
        if room:
            # (?,i) before (j,i); then ascending j, creation order
            b = min(room, key=lambda b: (b.blue_type is not None, b.blue_type or 0, b.index))
        else:
            b = None
            for j in range(1, p.k + 1):
                if self._blue_only[j] and p.accepts_red(j, i):
                    b = self._blue_only[j].pop(0)
                    b.red_type = i
                    break
            if b is None:
                b = self._new_bin()
                b.red_type = i
                self._red_only[i].append(b)
            room.append(b)
        b.red.append(item)
        if len(b.red) >= gi:
            room.remove(b)
        return b

    def _place_blue(self, i: int, item) -> SHBin:
        p = self.params
        room = self._blue_room[i]
        if room:
            # (i,j) by ascending j, then (i,?) / (i); creation order
            b = min(room, key=lambda b: (b.red_type is None, b.red_type or 0, b.index))
        else:
            b = None
            if p.phi[i - 1] != 0:
                for j in range(1, p.k + 1):
                    if self._red_only[j] and p.accepts_red(i, j):
                        b = self._red_only[j].pop(0)
                        b.blue_type = i
                        break
            if b is None:
                b = self._new_bin()
                b.blue_type = i
                if p.phi[i - 1] != 0:
                    self._blue_only[i].append(b)
            room.append(b)
        b.blue.append(item)
        if len(b.blue) >= p.beta[i - 1]:
            room.remove(b)
        return b

    def groups(self) -> dict[tuple, list[SHBin]]:
        out: dict[tuple, list[SHBin]] = {}
        for b in self.sh_bins:
            out.setdefault(b.group(self.params), []).append(b)
        return out

    def check_invariants(self) -> list[str]:
        """Return descriptions of any broken state invariant (empty when fine)."""
        p = self.params
        bad = []
        for i in range(1, p.k + 1):
            if self.e[i] != p.red_count(i, self.s[i]):
                bad.append(f"e_{i}={self.e[i]} != floor(alpha_{i} s_{i})")
        for g, bins in self.groups().items():
            if g == ("nf",):
                continue
            under = 0
            for b in bins:
                bt, rt = b.blue_type, b.red_type
                if bt is not None and len(b.blue) > p.beta[bt - 1]:
                    bad.append(f"{b!r}: too many blue items")
                if rt is not None and len(b.red) > p.gamma[rt - 1]:
                    bad.append(f"{b!r}: too many red items")
                if bt is not None and rt is not None:
                    if not p.accepts_red(bt, rt):
                        bad.append(f"{b!r}: group {g} not allowed")
                    if p.beta[bt - 1] * p.t[bt - 1] + p.gamma[rt - 1] * p.t[rt - 1] > 1.0 + TOL:
                        bad.append(f"{b!r}: blue and red extents overlap")
                if sum(s for _, s in b.items) > 1.0 + TOL:
                    bad.append(f"{b!r}: overfull")
                short_blue = bt is not None and len(b.blue) < p.beta[bt - 1]
                short_red = rt is not None and len(b.red) < p.gamma[rt - 1]
                under += short_blue or short_red
            limit = 3 if len(g) == 2 and "?" not in g else 1
            if under > limit:
                bad.append(f"group {g}: {under} under-filled bins")
        return bad


# -- function forms ----------------------------------------------------------

def _run(packer, sizes: Sequence[float], name: str) -> BinAssignment:
    sizes = check_sizes(sizes)
    for s in sizes:
        packer.add(s)
    return BinAssignment([list(b) for b in packer.bins], name)


def next_fit(sizes: Sequence[float]) -> BinAssignment:
    return _run(NextFit(), sizes, "nf")


def first_fit(sizes: Sequence[float]) -> BinAssignment:
    return _run(FirstFit(len(sizes)), sizes, "ff")


def first_fit_decreasing(sizes: Sequence[float]) -> BinAssignment:
    sizes = check_sizes(sizes)
    order = sorted(range(len(sizes)), key=lambda i: (-sizes[i], i))
    ff = first_fit([sizes[i] for i in order])
    bins = [[(order[j], s) for j, s in b] for b in ff.bins]
    return BinAssignment(bins, "ffd")


def harmonic_k(sizes: Sequence[float], k: int) -> BinAssignment:
    return _run(Harmonic(k), sizes, f"harmonic:{k}")


def super_harmonic(sizes: Sequence[float], params: SuperHarmonicParams) -> BinAssignment:
    sizes = check_sizes(sizes)
    for s in sizes:
        if s > params.t[0] + TOL:
            raise ValueError(f"item size {s} exceeds t_1")
    return _run(SuperHarmonic(params), sizes, params.name)


def make_online_packer(name: str):
    """Packer for ``nf``, ``ff``, ``harmonic:<k>`` or ``superharmonic:<params>``."""
    if name == "nf":
        return NextFit()
    if name == "ff":
        return FirstFit()
    if name.startswith("harmonic:"):
        return Harmonic(int(name.split(":", 1)[1]))
    if name.startswith(("superharmonic:", "sh:")):
        return SuperHarmonic(load_params(name.split(":", 1)[1]))
    raise ValueError(f"unknown online bin packing algorithm {name!r}")


def run_bin_algorithm(name: str | SuperHarmonicParams, sizes: Sequence[float]) -> BinAssignment:
    """Dispatch by name; also accepts a parameter set for Super Harmonic."""
    if isinstance(name, SuperHarmonicParams):
        return super_harmonic(sizes, name)
    if name == "ffd":
        return first_fit_decreasing(sizes)
    if name.startswith(("superharmonic:", "sh:")):
        return super_harmonic(sizes, load_params(name.split(":", 1)[1]))
    return _run(make_online_packer(name), sizes, name)


# -- exact oracle ------------------------------------------------------------

MAX_BRUTEFORCE = 16


def bin_opt_bruteforce(sizes: Sequence[float]) -> int:
    """Exact minimum bin count for at most 16 items.

    Dynamic program over item subsets: for each subset, the fewest bins that
    hold it, and among those the smallest load of the last (open) bin.
    Adding items one at a time in any order reaches every packing, so the
    lexicographic minimum is exact.
    """
    sizes = check_sizes(sizes)
    n = len(sizes)
    if n > MAX_BRUTEFORCE:
        raise ValueError(f"brute force oracle limited to {MAX_BRUTEFORCE} items, got {n}")
    if n == 0:
        return 0
    full = (1 << n) - 1
    inf = (n + 1, 2.0)
    best = [inf] * (1 << n)
    best[0] = (1, 0.0)
    for mask in range(1 << n):
        bins, load = best[mask]
        if bins > n:
            continue
        for i in range(n):
            bit = 1 << i
            if mask & bit:
                continue
            s = sizes[i]
            cand = (bins, load + s) if load + s <= 1.0 + TOL else (bins + 1, s)
            if cand < best[mask | bit]:
                best[mask | bit] = cand
    return best[full][0]
