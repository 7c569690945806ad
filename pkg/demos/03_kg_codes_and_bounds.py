"""
KG codes from stacked selectors, and how their length scales with d
===================================================================

Stacking selectors that halve the active count, then one all-ones slot,
gives a code that resolves any <= k active stations. Raising the channel
capacity d removes the bottom of the chain and thins every component.
"""
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from mprcodes import (
    KGParams,
    SelectorParams,
    build_kg,
    is_kg_sim,
    tkg_upper_explicit,
    tlt_lower_leq,
    tsel_upper,
)

###############################################################################
# A small verified construction.
P = KGParams(k=4, d=1, n=10)
code = build_kg(P, eps=0.5, seed=1)
print("components (k, m, d_eff, rows):", [tuple(vars(c).values()) for c in code.plan])
print("total rows:", code.matrix.t, "| verified:", is_kg_sim(code.matrix, P).passed)

###############################################################################
# Length of the construction at k=16, n=256 as d grows.
ds = [1, 2, 4, 8, 16]
lengths = [tkg_upper_explicit(KGParams(16, d, 256)).raw for d in ds]
for d, t in zip(ds, lengths):
    print(f"d={d:2d}: {t:5.0f} rows   (d * rows = {d * t:.0f})")

fig, ax = plt.subplots()
ax.loglog(ds, lengths, "o-", base=2, label="construction length")
ax.loglog(ds, [lengths[0] / d for d in ds], "--", base=2, label="1/d reference")
ax.set_xlabel("capacity d")
ax.set_ylabel("slots")
ax.legend()
fig.savefig("kg_length_vs_d.png", dpi=100)

###############################################################################
# Closed-form selector upper bound next to the locally thin lower bound.
print(tsel_upper(SelectorParams(8, 4, 3, 64)).to_json())
for n in (216, 1000, 10**6):
    print(tlt_lower_leq(KGParams(9, 2, n)).to_json())
