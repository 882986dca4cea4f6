"""Weighting-system analysis of Super Harmonic parameter sets.

Weights live in R^(2K+1) with basis ``b_0, b_1..b_K, r_1..r_K``; index 0 is
``b_0``, indices ``1..K`` the blue classes and ``K+1..2K`` the red classes.
A wide item of type i weighs ``(1-alpha_i)/beta_i`` on ``b_phi(i)`` plus
``alpha_i/gamma_i`` on ``r_varphi(i)``; a small item of size x weighs
``x/(1-eps)`` on ``b_0``.  The consolidation function ``xi`` turns a weight
vector into a bin count.

Worst-case ratio
----------------
``ratio_upper_bound`` maximises ``xi(sum_q chi(q) w(q))`` over distributions
chi on patterns.  For a fixed branch j of the outer max, ``xi`` reduces to
``min(F_j(chi), G_j(chi))`` with F_j and G_j linear in chi.  Maximising that
over the simplex is the LP ``max z  s.t. z <= F_j, z <= G_j, sum chi = 1``;
a basic optimum has at most two nonzero chi, so it is either a single
pattern or a two-pattern mix with F_j = G_j.  With ``d = F_j - G_j`` the
two-pattern candidates are the upper convex hull of the points
``(d_q, G_q)`` evaluated at ``d = 0``.  No LP solver is needed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .binpack import ParamsError, SuperHarmonicParams
from .core import TOL

DEFAULT_CAP = 10**7


class PatternCapExceeded(RuntimeError):
    pass


def _dim(params: SuperHarmonicParams) -> int:
    return 2 * params.K + 1


def weight_of(x: float, params: SuperHarmonicParams) -> np.ndarray:
    """Weight vector of an item of size ``x`` (zero for ``x == 0``)."""
    out = np.zeros(_dim(params))
    if x <= 0:
        return out
    i = params.type_of(x)
    if i == params.k + 1:
        out[0] = x / (1.0 - params.epsilon)
        return out
    a = params.alpha[i - 1]
    out[params.phi[i - 1]] += (1.0 - a) / params.beta[i - 1]
    if a > 0:
        g = params.gamma[i - 1]
        if g == 0:
            raise ParamsError(f"type {i} has alpha > 0 but gamma = 0")
        out[params.K + params.varphi[i - 1]] += a / g
    return out


def weight_of_rect(x: float, y: float, params: SuperHarmonicParams) -> np.ndarray:
    """Weight of an ``x`` by ``y`` rectangle: its height times ``weight_of(x)``."""
    return y * weight_of(x, params)


def total_weight(rects: Iterable[tuple[float, float]], params: SuperHarmonicParams) -> np.ndarray:
    acc = np.zeros(_dim(params))
    for x, y in rects:
        acc += weight_of_rect(x, y, params)
    return acc


def total_weight_sizes(sizes: Iterable[float], params: SuperHarmonicParams) -> np.ndarray:
    acc = np.zeros(_dim(params))
    for x in sizes:
        acc += weight_of(x, params)
    return acc


def _branch_terms(x: np.ndarray, K: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-branch (j = 1..K+1) pair of sums inside the min of ``xi``.

    Works on the last axis so a stack of weight vectors is handled at once.
    """
    b = x[..., 1:K + 1]
    r = x[..., K + 1:2 * K + 1]
    zero = np.zeros(x.shape[:-1] + (1,))
    # suffix_r[j-1] = sum_{i=j}^K r_i ; prefix_b[j-1] = sum_{i<j} b_i
    suffix_r = np.concatenate([np.cumsum(r[..., ::-1], axis=-1)[..., ::-1], zero], axis=-1)
    prefix_b = np.concatenate([zero, np.cumsum(b, axis=-1)], axis=-1)
    first = suffix_r + b.sum(axis=-1, keepdims=True)
    second = r.sum(axis=-1, keepdims=True) + prefix_b
    return first, second


def consolidate(x: np.ndarray, params: SuperHarmonicParams | int) -> float:
    """The consolidation function ``xi`` (``params`` may be K itself)."""
    K = params if isinstance(params, int) else params.K
    x = np.asarray(x, dtype=float)
    first, second = _branch_terms(x, K)
    return float(x[0] + np.max(np.minimum(first, second)))


@dataclass(frozen=True)
class Pattern:
    q: tuple[int, ...]

    def fill(self, params: SuperHarmonicParams) -> float:
        return sum(n * params.t[i + 1] for i, n in enumerate(self.q))


def enumerate_patterns(params: SuperHarmonicParams, maximal_only: bool = False,
                       cap: int = DEFAULT_CAP) -> list[Pattern]:
    """All q with sum_i q_i t_{i+1} < 1, depth first.

    ``maximal_only`` keeps the patterns that cannot take one more item of
    any type.  Raises ``PatternCapExceeded`` when more than ``cap`` patterns
    would be produced.
    """
    k = params.k
    lows = params.t[1:]  # t_{i+1}: smallest size of a type-i item, exclusive

    def room(used: float) -> bool:
        return used < 1.0 - TOL

    out: list[tuple[int, ...]] = []
    q = [0] * k

    def walk(i: int, used: float):
        if i == k:
            if maximal_only and any(room(used + lows[j]) for j in range(k)):
                return
            out.append(tuple(q))
            if len(out) > cap:
                raise PatternCapExceeded(f"more than {cap} patterns for {params.name}")
            return
        n = 0
        while room(used + n * lows[i]):
            q[i] = n
            walk(i + 1, used + n * lows[i])
            n += 1
        q[i] = 0

    walk(0, 0.0)
    return [Pattern(p) for p in sorted(out)]


def count_patterns_estimate(params: SuperHarmonicParams) -> float:
    """Rough |Q| upper bound: product of per-type multiplicity ranges."""
    return math.prod(math.floor(1.0 / x - TOL) + 1 for x in params.t[1:])


def pattern_weight(q: Pattern | Sequence[int], params: SuperHarmonicParams) -> np.ndarray:
    qs = q.q if isinstance(q, Pattern) else tuple(q)
    used = sum(n * params.t[i + 1] for i, n in enumerate(qs))
    residual = 1.0 - used
    out = weight_of(residual, params) if residual > TOL else np.zeros(_dim(params))
    for i, n in enumerate(qs):
        if n:
            out = out + n * weight_of(params.t[i], params)
    return out


@dataclass(frozen=True)
class RatioBound:
    value: float
    patterns: tuple[Pattern, ...]
    mix: tuple[float, ...]
    branch: int
    n_patterns: int

    def __float__(self):
        return self.value


def _upper_hull_at_zero(d: np.ndarray, g: np.ndarray):
    """Max over segments between (d_a, g_a), (d_b, g_b) with d_a < 0 < d_b
    of the segment's height at d = 0.  Returns (value, a, b, lam_a) or None."""
    neg = np.nonzero(d < 0)[0]
    pos = np.nonzero(d > 0)[0]
    if not len(neg) or not len(pos):
        return None
    idx = np.concatenate([neg, pos])
    order = idx[np.lexsort((-g[idx], d[idx]))]
    hull: list[int] = []
    for p in order.tolist():
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            cross = (d[b] - d[a]) * (g[p] - g[a]) - (g[b] - g[a]) * (d[p] - d[a])
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    for a, b in zip(hull, hull[1:]):
        if d[a] < 0 < d[b]:
            lam = d[b] / (d[b] - d[a])  # weight on a
            return lam * g[a] + (1 - lam) * g[b], a, b, lam
    return None


def ratio_upper_bound(params: SuperHarmonicParams, maximal_only: bool = False,
                      cap: int = DEFAULT_CAP) -> RatioBound:
    """max over pattern distributions of xi(sum chi(q) w(q)); exact."""
    pats = enumerate_patterns(params, maximal_only=maximal_only, cap=cap)
    W = np.array([pattern_weight(p, params) for p in pats])
    K = params.K
    first, second = _branch_terms(W, K)
    base = W[:, 0]
    best = RatioBound(-math.inf, (), (), 0, len(pats))
    for j in range(K + 1):
        F = base + first[:, j]
        G = base + second[:, j]
        single = np.minimum(F, G)
        q = int(np.argmax(single))
        if single[q] > best.value:
            best = RatioBound(float(single[q]), (pats[q],), (1.0,), j + 1, len(pats))
        mixed = _upper_hull_at_zero(F - G, G)
        if mixed is not None and mixed[0] > best.value + 1e-15:
            v, a, b, lam = mixed
            best = RatioBound(float(v), (pats[a], pats[b]), (float(lam), float(1 - lam)),
                              j + 1, len(pats))
    return best


def distribution_value(chi: dict[Pattern, float] | Sequence[tuple[Pattern, float]],
                       params: SuperHarmonicParams) -> float:
    """xi of the chi-weighted pattern weight, for a given distribution."""
    items = chi.items() if isinstance(chi, dict) else chi
    acc = np.zeros(_dim(params))
    for p, w in items:
        acc += w * pattern_weight(p, params)
    return consolidate(acc, params)
