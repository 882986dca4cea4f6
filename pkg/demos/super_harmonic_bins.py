"""Super Harmonic on a hand-sized example with a reserved space.

The toy parameters have one reserved space of size 0.4.  A fraction 1/2 of
the type-3 items (size in (0.25, 1/3]) are colored red and travel into that
space, next to a blue type-2 item when one is available.
"""
from strippack.binpack import SuperHarmonic, harmonic_k, super_harmonic, toy_params, harmonic_params
from strippack.generators import gen_sizes

params = toy_params()
sh = SuperHarmonic(params)
for size in (0.55, 0.3, 0.3, 0.3, 0.3):
    b, color = sh.place(size)
    print(f"item {size:.2f} -> bin {b.index} ({color})")
for grp, bins in sh.groups().items():
    print(f"group {grp}: {len(bins)} bin(s)")

sizes = gen_sizes(10000, seed=5)
for k in (3, 12):
    same = super_harmonic(sizes, harmonic_params(k)).count == harmonic_k(sizes, k).count
    print(f"harmonic k={k}: {harmonic_k(sizes, k).count} bins; Super Harmonic with alpha=0 agrees: {same}")
