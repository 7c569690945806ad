"""Closed-form length bounds and the per-row failure probabilities of random selectors.

Selector upper bounds use natural logarithms; the locally thin lower bounds
use base-2 logarithms.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .core import KGParams, SelectorParams

__all__ = [
    "BoundValue",
    "P1P2",
    "log_comb",
    "p1p2",
    "prescribed_p",
    "tsel_upper",
    "tkg_upper_explicit",
    "tlt_lower_leq",
    "tlt_lower_exact",
    "claim1_rate",
]

_EXACT_COMB_LIMIT = 5000


@dataclass(frozen=True)
class BoundValue:
    """A bound evaluated at concrete parameters.

    ``integral`` is ceil(raw) for achievable lengths and floor(raw) + 1 for
    strict lower bounds; vacuous lower bounds (raw <= 0) report 0.
    """

    name: str
    raw: float
    integral: int
    preconditions_met: bool
    notes: str = ""
    extras: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "raw": self.raw,
            "integral": self.integral,
            "preconditions_met": self.preconditions_met,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class P1P2:
    P1: float
    P2: float
    log_rate: float  # -ln(P1 + P2)


def log_comb(n: int, k: int) -> float:
    """ln C(n, k); -inf when k is out of range."""
    if k < 0 or k > n:
        return -math.inf
    if n <= _EXACT_COMB_LIMIT or min(k, n - k) <= _EXACT_COMB_LIMIT:
        return math.log(math.comb(n, k))
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _term(logc: float, i: int, k: int, lp: float, lq: float) -> float:
    return math.exp(logc + i * lp + (k - i) * lq)


def p1p2(k: int, m: int, d: int, p: float) -> P1P2:
    """Per-row probabilities for a fixed k-column window and a fixed
    (k-m+1)-column set A, entries i.i.d. Bernoulli(p):

    P1: the row is not good (weight 0 or > d);
    P2: the row is good and zero on A.

    ``log_rate`` is computed from 1 - (P1 + P2), which is a sum of
    positive terms, so it stays accurate when P1 + P2 is close to 1.
    """
    if not (1 <= d <= k and 1 <= m <= k):
        raise ValueError(f"need 1 <= d <= k and 1 <= m <= k, got k={k}, m={m}, d={d}")
    if not 0 < p < 1:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    lp, lq = math.log(p), math.log1p(-p)
    top = min(d, k)
    # P(1 <= weight <= d) and its complement; sum whichever side is shorter
    good = math.fsum(_term(log_comb(k, i), i, k, lp, lq) for i in range(1, top + 1))
    if k - top < top:
        bad = math.fsum(
            [math.exp(k * lq)] + [_term(log_comb(k, i), i, k, lp, lq) for i in range(top + 1, k + 1)]
        )
    else:
        bad = 1.0 - good
    P2 = math.fsum(_term(log_comb(m - 1, i), i, k, lp, lq) for i in range(1, min(d, m - 1) + 1))
    # 1 - (P1 + P2) = sum_i (C(k,i) - C(m-1,i)) p^i (1-p)^(k-i)
    gap_terms = []
    for i in range(1, top + 1):
        if k <= _EXACT_COMB_LIMIT:
            diff = math.comb(k, i) - math.comb(m - 1, i)
            if diff == 0:
                continue
            ld = math.log(diff)
        else:
            a, b = log_comb(k, i), log_comb(m - 1, i)
            if b == -math.inf:
                ld = a
            else:
                ld = a + math.log1p(-math.exp(b - a))
        gap_terms.append(_term(ld, i, k, lp, lq))
    gap = math.fsum(gap_terms)
    log_rate = -math.log1p(-gap) if gap < 1 else math.inf
    return P1P2(bad, P2, log_rate)


def prescribed_p(k: int, d: int) -> float:
    """Bernoulli parameter used for random selectors: d/(2k) for d <= 2, else d/(4k)."""
    return d / (2 * k) if d <= 2 else d / (4 * k)


def _selector_hypotheses(k, m, d, n) -> bool:
    return 1 <= d <= m and 2 * (m - 1) < k <= n


def _selector_numerator(k, m, n) -> float:
    r = k - m + 1
    return k * math.log(n / k) + r * math.log(k / r) + 2 * k - m + 1


def tsel_upper(P: SelectorParams) -> BoundValue:
    """Upper bound on the minimum size of a (k, m, d, n)-selector."""
    k, m, d, n = P.k, P.m, P.d, P.n
    ok = _selector_hypotheses(k, m, d, n)
    notes = [] if ok else ["hypothesis 2(m-1) < k violated"]
    num = _selector_numerator(k, m, n)
    if d <= 2:
        raw = 16 * num
    else:
        den = d * (k - m + 1) / (4 * k) - math.log(4 / 3)
        if den <= 0:
            notes.append("denominator is not positive; bound undefined")
            raw = math.inf
        else:
            raw = num / den
    integral = math.ceil(raw) if math.isfinite(raw) else -1
    return BoundValue("tsel_upper", raw, integral, ok, "; ".join(notes))


def tkg_upper_explicit(P: KGParams, eps: float = 0.5) -> BoundValue:
    """Exact length of the concatenated-selector KG construction.

    One all-ones row plus the planned size of each selector component. The
    sum of closed-form selector bounds over the same components is reported
    in ``extras['closed_form']`` and in the notes for comparison.
    """
    from .construct import plan_selector, selector_chain

    comps = selector_chain(P.k, P.d, P.n)
    sizes = [plan_selector(c, eps).t for c in comps]
    raw = 1 + sum(sizes)
    closed = 1 + sum(tsel_upper(c).raw for c in comps)
    notes = (
        f"components={[(c.k, c.m, c.d) for c in comps]}; "
        f"closed-form selector bound sum = {closed:.6g}"
    )
    return BoundValue(
        "tkg_upper_explicit", float(raw), raw, True, notes,
        {"component_sizes": sizes, "closed_form": closed},
    )


def _lt_lower(name: str, u: int, k: int, d: int, n: int, ok: bool) -> BoundValue:
    notes = [] if ok else ["hypothesis violated"]
    if u < 1:
        notes.append("block count below 1; formula undefined")
        return BoundValue(name, 0.0, 0, ok, "; ".join(notes))
    raw = u / math.log2(math.e * u) * math.log2(n / (k * (d + 1)))
    if raw <= 0:
        notes.append("vacuous: n <= k(d+1)")
        integral = 0
    else:
        integral = math.floor(raw) + 1
    return BoundValue(name, raw, integral, ok, "; ".join(notes))


def tlt_lower_leq(P: KGParams) -> BoundValue:
    """Strict lower bound on the length of a (<= k, d, n)-locally thin code."""
    k, d, n = P.k, P.d, P.n
    return _lt_lower("tlt_lower_leq", k // (d + 1), k, d, n, 3 * (d + 1) <= k <= n)


def tlt_lower_exact(P: KGParams) -> BoundValue:
    """Strict lower bound when exactly k columns must be thin."""
    k, d, n = P.k, P.d, P.n
    return _lt_lower("tlt_lower_exact", k // (d + 1) - 1, k, d, n, 4 * (d + 1) <= k <= n)


def claim1_rate(k: int, m: int, d: int) -> float:
    """Closed-form lower bound on -ln(P1 + P2) at the prescribed p."""
    if not (1 <= d <= m and 2 * (m - 1) < k):
        raise ValueError(f"need 1 <= d <= m and 2(m-1) < k, got k={k}, m={m}, d={d}")
    if d <= 2:
        return 1 / 16
    return (k - m + 1) * d / (4 * k) - math.log(4 / 3)
