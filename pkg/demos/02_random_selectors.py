"""
Random generalized selectors
============================

A (k, m, d, n)-selector guarantees that, out of any <= k active stations,
all but k - m get through. Random matrices with the right density are
selectors with high probability; here we draw them and check.
"""
import itertools

import numpy as np

from mprcodes import SelectorParams, plan_selector, is_selector, p1p2
from mprcodes.channel import residual_active
from mprcodes.construct import gen_selector_with_attempts

P = SelectorParams(k=4, m=2, d=1, n=10)

###############################################################################
# The plan fixes the Bernoulli density and the number of rows so that one
# draw fails with probability at most eps.
plan = plan_selector(P, eps=0.5)
print(plan)
print("per-row probabilities at that density:", p1p2(P.k, P.m, P.d, plan.p))

###############################################################################
# Draw until the exhaustive check passes. The number of draws is geometric
# with success probability >= 1 - eps, so it averages at most 2.
attempts = [gen_selector_with_attempts(P, 0.5, seed=s)[1] for s in range(50)]
print("mean draws over 50 seeds:", np.mean(attempts))

M, _ = gen_selector_with_attempts(P, 0.5, seed=0)
print(is_selector(M, P).to_json())

###############################################################################
# Channel view: whatever set of <= k stations is active, at most k - m
# remain unresolved after the selector's slots.
worst = max(
    len(residual_active(M, S, P.d))
    for r in range(P.k + 1)
    for S in itertools.combinations(range(1, P.n + 1), r)
)
print(f"worst residual over all active sets: {worst} (allowed: {P.k - P.m})")
