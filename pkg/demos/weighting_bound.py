"""Upper bound on Super Harmonic's asymptotic ratio from its weights.

Each item gets a weight vector; the consolidation function turns the total
weight into a bin count that Super Harmonic never exceeds (up to an additive
constant).  The bound is the worst average consolidated weight of a unit of
optimal bins, which a two-pattern mix always attains.
"""
import time

from strippack import ratio_upper_bound
from strippack.binpack import harmonic_params, toy_params

for name, params in [("harmonic k=2", harmonic_params(2)), ("harmonic k=6", harmonic_params(6)),
                     ("harmonic k=12", harmonic_params(12)), ("toy", toy_params())]:
    t0 = time.perf_counter()
    b = ratio_upper_bound(params)
    mix = " + ".join(f"{m:.3f}*{p.q}" for p, m in zip(b.patterns, b.mix))
    print(f"{name:14s} bound {b.value:.6f}  ({b.n_patterns} patterns, "
          f"{time.perf_counter() - t0:.2f} s)\n    worst mix {mix}")
