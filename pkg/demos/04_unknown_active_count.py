"""
Unknown number of active stations
=================================

Without knowing k, run KG codes for 1, 2, 4, ... assumed active stations
back to back. Stations that succeed early stay silent in later stages.
"""
import itertools

from mprcodes import build_staged, staged_simulate
from mprcodes.construct import stage_sizes

n, d = 8, 2
stages = build_staged(n, d, eps=0.5, seed=3)
print("stage guesses:", stage_sizes(n))
print("rows per stage:", [c.matrix.t for c in stages])

###############################################################################
# Every active set resolves; larger sets need later stages.
worst = {}
for r in range(n + 1):
    for S in itertools.combinations(range(1, n + 1), r):
        tr = staged_simulate(stages, S, d)
        assert tr.resolved
        worst[r] = max(worst.get(r, 0), tr.slots_used or 0)
for r, slots in worst.items():
    print(f"{r} active -> finished by slot {slots}")
