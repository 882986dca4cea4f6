"""Group-and-Pack on a random online stream.

Narrow rectangles (width at most epsilon) go onto shelves whose heights are
powers of r.  Wide rectangles are stacked into slips of their type's width;
each slip is placed by Super Harmonic into a band of height c.  Placements
never move, so packing a prefix of the stream gives a prefix of the answer.
"""
from strippack import GpConfig, gp_insert, gp_run, lower_bound, shelf_pack
from strippack.core import Instance
from strippack.generators import gen_uniform
from strippack.strip_online import GpState

inst = gen_uniform(5000, seed=3)
print(f"{len(inst)} rects, area lower bound {lower_bound(inst):.1f}")

for c in (5.0, 20.0):
    cfg = GpConfig.harmonic(12, r=0.9, c=c)
    print(f"G&P harmonic-12 c={c:<5} height {gp_run(inst, cfg).height:8.1f}")
for inner in ("nf", "ff"):
    print(f"shelf-{inner:2s} r=0.9       height {shelf_pack(inst, inner, 0.9).height:8.1f}")

# the online state can be fed one rectangle at a time
state = GpState(GpConfig.harmonic(12, r=0.9, c=20.0))
for rect in inst.rects[:10]:
    pl = gp_insert(state, rect)
    print(f"  rect {rect.id} ({rect.w:.2f} x {rect.h:.2f}) -> ({pl.x:.3f}, {pl.y:.2f})")
prefix = gp_run(Instance("prefix", inst.rects[:10]), GpConfig.harmonic(12, r=0.9, c=20.0))
assert prefix.placements == tuple(state.placements)
