"""Batch-and-Pack on a tiling whose optimum height is known.

Rectangles are sorted by width and stacked into slips of height c.  Each
closed slip is a 1-D item whose size is its width; a bin packing algorithm
groups slips into bands of height c.  Larger c wastes less inside slips but
pays more for the last partially filled band, which shows up clearly on
small instances.
"""
from strippack import bp_pack, ffdh, nfdh, validate_packing
from strippack.generators import gen_tiling
from strippack.render import render_svg

inst = gen_tiling(1000, 50, seed=1)
print(f"{inst.name}: optimum height {inst.known_opt}")

for name, packing in [("NFDH", nfdh(inst)), ("FFDH", ffdh(inst))]:
    print(f"{name:10s} height {packing.height:7.2f}")

for c in (2, 5, 10, 30):
    packing = bp_pack(inst, c, "ffd")
    assert validate_packing(inst, packing).ok
    print(f"B&P c={c:<4} height {packing.height:7.2f}  ratio {packing.height / inst.known_opt:.3f}")

render_svg(inst, bp_pack(inst, 5, "ffd"), "batch_and_pack.svg")
print("wrote batch_and_pack.svg")
