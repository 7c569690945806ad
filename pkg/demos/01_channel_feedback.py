"""
Resolving conflicts on a channel that accepts d packets at once
================================================================

A schedule is a 0/1 matrix: rows are time slots, columns are stations.
Active stations transmit whenever scheduled until they get through.
"""
from mprcodes import make_matrix, simulate, is_kg_sim, is_kg_def, KGParams
from mprcodes.channel import trace_to_csv

###############################################################################
# Four slots over three stations. In slot 1 everybody transmits; with room
# for only two packets this is a conflict. The next three slots each serve
# one station.
M = make_matrix([
    [1, 1, 1],
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
])
trace = simulate(M, [1, 2, 3], d=2)
print(trace_to_csv(trace))
print("resolved:", trace.resolved, "last success in slot", trace.slots_used)

###############################################################################
# With capacity 3 the first slot already clears everybody.
print(simulate(M, [1, 2, 3], d=3).success_slot)

###############################################################################
# A matrix that resolves every set of up to k active stations is a KG code.
# Two independent checks: run the channel on every k-set, or search for the
# slot/block partition directly. They always agree.
for k in (1, 2, 3):
    for d in range(1, k + 1):
        P = KGParams(k, d, 3)
        sim, df = is_kg_sim(M, P), is_kg_def(M, P)
        print(f"k={k} d={d}: simulation says {sim.passed}, partition search says {df.passed}")

###############################################################################
# A passing partition search comes with a witness for the first k-set.
print(is_kg_def(M, KGParams(3, 1, 3)).to_json())
