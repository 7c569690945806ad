"""Random generalized selectors and the KG codes assembled from them.

A KG (k, d, n)-code is built by stacking selectors with parameters
(2^(v+1), 2^v, d, n) for v = ceil(log2 k) - 1 down to floor(log2 d), each
one halving the number of stations still active, and closing with an
all-ones row that clears the last <= d of them.

Random matrices are drawn with numpy's PCG64 seeded by
``SeedSequence([seed, component, attempt])``, so any single attempt can be
reproduced in isolation.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict
from itertools import combinations_with_replacement

import numpy as np

from .bounds import p1p2, prescribed_p, log_comb
from .core import KGParams, ScheduleMatrix, SelectorParams, all_ones, make_matrix, stack
from .verify import (
    is_kg_sim,
    is_locally_thin_exact,
    is_locally_thin_leq,
    is_selector,
)

__all__ = [
    "GENERATOR",
    "GenPlan",
    "ComponentPlan",
    "KGCode",
    "plan_selector",
    "selector_chain",
    "sample_matrix",
    "gen_selector",
    "gen_selector_with_attempts",
    "build_kg",
    "build_staged",
    "stage_sizes",
    "derive_seed",
    "minimal_t_search",
]

GENERATOR = "numpy.PCG64+SeedSequence([seed,component,attempt])"
MODES = ("verified", "whp")
DEFAULT_EPS = 0.5
DEFAULT_MAX_ATTEMPTS = 1000


@dataclass(frozen=True)
class GenPlan:
    p: float
    t: int
    eps: float
    effective_d: int
    mode: str = "verified"


@dataclass(frozen=True)
class ComponentPlan:
    k: int
    m: int
    d_eff: int
    t: int


@dataclass(frozen=True)
class KGCode:
    matrix: ScheduleMatrix
    params: KGParams
    plan: tuple[ComponentPlan, ...]
    eps: float
    mode: str
    seed: int
    attempts: tuple[int, ...] = ()
    generator: str = GENERATOR

    def sidecar(self) -> dict:
        return {
            "k": self.params.k,
            "d": self.params.d,
            "n": self.params.n,
            "eps": self.eps,
            "seed": self.seed,
            "mode": self.mode,
            "plan": [asdict(c) for c in self.plan],
            "generator": self.generator,
        }

    def sidecar_json(self) -> str:
        return json.dumps(self.sidecar(), sort_keys=True)


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def _check_eps(eps: float) -> None:
    if not 0 < eps <= 1:
        raise ValueError(f"eps must lie in (0, 1], got {eps}")


def plan_selector(P: SelectorParams, eps: float = DEFAULT_EPS, mode: str = "verified") -> GenPlan:
    """Pick p and the row count so that a random matrix fails with probability <= eps.

    Union bound over the k-column windows and the (k-m+1)-sets inside each:
    t >= (ln(C(n,k) C(k,k-m+1)) + ln(1/eps)) / -ln(P1+P2).
    """
    _check_eps(eps)
    _check_mode(mode)
    k, m, d, n = P.k, P.m, P.d, P.n
    if not 2 * (m - 1) < k:
        raise ValueError(f"random selector plan needs 2(m-1) < k, got k={k}, m={m}")
    p = prescribed_p(k, d)
    rate = p1p2(k, m, d, p).log_rate
    if not rate > 0:
        raise RuntimeError(f"non-positive rate {rate} for k={k}, m={m}, d={d}")
    numer = log_comb(n, k) + log_comb(k, k - m + 1) - math.log(eps)
    t = max(1, math.ceil(numer / rate))
    return GenPlan(p, t, eps, d, mode)


def selector_chain(k: int, d: int, n: int) -> list[SelectorParams]:
    """Selector parameters of the KG construction, top component first.

    Powers of two are clamped to n, and d is lowered to m where the chain
    asks for m < d (weight-[1, d'] rows with d' <= d are still good rows).
    """
    KGParams(k, d, n)
    top = (k - 1).bit_length() - 1          # ceil(log2 k) - 1
    bottom = d.bit_length() - 1             # floor(log2 d)
    out = []
    for v in range(top, bottom - 1, -1):
        kv = min(2 ** (v + 1), n)
        mv = min(2 ** v, -(-kv // 2))
        out.append(SelectorParams(kv, mv, min(d, mv), n))
    return out


def derive_seed(seed: int, *key: int) -> int:
    """A 63-bit integer seed derived from (seed, *key)."""
    ss = np.random.SeedSequence([seed, *key])
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def sample_matrix(t: int, n: int, p: float, seed: int, component: int = 0,
                  attempt: int = 0) -> ScheduleMatrix:
    if seed < 0:
        raise ValueError("seed must be non-negative")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, component, attempt])))
    bits = rng.random((t, n)) < p
    return make_matrix(bits.tolist())


def gen_selector_with_attempts(P: SelectorParams, eps: float = DEFAULT_EPS, seed: int = 0,
                               mode: str = "verified", *, component: int = 0,
                               max_attempts: int = DEFAULT_MAX_ATTEMPTS,
                               workers: int | None = None) -> tuple[ScheduleMatrix, int]:
    """Like :func:`gen_selector` but also return the number of draws made."""
    plan = plan_selector(P, eps, mode)
    if mode == "whp":
        return sample_matrix(plan.t, P.n, plan.p, seed, component, 0), 1
    for attempt in range(max_attempts):
        M = sample_matrix(plan.t, P.n, plan.p, seed, component, attempt)
        if is_selector(M, P, workers=workers).passed:
            return M, attempt + 1
    raise RuntimeError(
        f"no selector found in {max_attempts} attempts for {P}; eps={eps} is likely misconfigured"
    )


def gen_selector(P: SelectorParams, eps: float = DEFAULT_EPS, seed: int = 0,
                 mode: str = "verified", **kw) -> ScheduleMatrix:
    """Random (k, m, d, n)-selector.

    ``verified`` redraws until the exhaustive check passes, so the result is
    always a selector. ``whp`` returns the first draw, which is a selector
    with probability at least 1 - eps.
    """
    return gen_selector_with_attempts(P, eps, seed, mode, **kw)[0]


def build_kg(P: KGParams, eps: float = DEFAULT_EPS, seed: int = 0, mode: str = "verified",
             *, max_attempts: int = DEFAULT_MAX_ATTEMPTS, workers: int | None = None) -> KGCode:
    comps = selector_chain(P.k, P.d, P.n)
    blocks = []
    plan = []
    attempts = []
    for c, sp in enumerate(comps):
        M, a = gen_selector_with_attempts(
            sp, eps, seed, mode, component=c, max_attempts=max_attempts, workers=workers
        )
        blocks.append(M)
        plan.append(ComponentPlan(sp.k, sp.m, sp.d, M.t))
        attempts.append(a)
    blocks.append(all_ones(1, P.n))
    return KGCode(stack(blocks), P, tuple(plan), eps, mode, seed, tuple(attempts))


def stage_sizes(n: int) -> list[int]:
    """Assumed active counts min(2^i, n) for i = 0..ceil(log2 n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return [min(2 ** i, n) for i in range((n - 1).bit_length() + 1)]


def build_staged(n: int, d: int, eps: float = DEFAULT_EPS, seed: int = 0,
                 mode: str = "verified", **kw) -> list[KGCode]:
    """KG codes for doubling guesses of the active count, for unknown k.

    Stages whose guess is below d use capacity equal to the guess.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    return [
        build_kg(KGParams(ki, min(d, ki), n), eps, derive_seed(seed, i), mode, **kw)
        for i, ki in enumerate(stage_sizes(n))
    ]


_PROPERTIES = {
    "kg": is_kg_sim,
    "selector": is_selector,
    "lt_leq": is_locally_thin_leq,
    "lt_exact": is_locally_thin_exact,
}


def minimal_t_search(prop: str, P, t_max: int = 4, *, force: bool = False) -> int | None:
    """Smallest t <= t_max admitting a t x n matrix with the property, else None.

    Brute force over column multisets: every verifier is invariant under
    column relabeling, so only the multiset of columns matters.
    """
    try:
        verifier = _PROPERTIES[prop]
    except KeyError:
        raise ValueError(f"unknown property {prop!r}; choose from {sorted(_PROPERTIES)}") from None
    if prop == "selector" and not isinstance(P, SelectorParams):
        raise TypeError("selector search needs SelectorParams")
    if prop != "selector" and not isinstance(P, KGParams):
        raise TypeError(f"{prop} search needs KGParams")
    n = P.n
    if not force and (n > 5 or t_max > 4):
        raise ValueError("search space too large (needs n <= 5 and t_max <= 4); use force")
    for t in range(0, t_max + 1):
        if t == 0 and prop == "selector":
            continue
        for cols in combinations_with_replacement(range(2 ** t), n):
            rows = []
            for i in range(t):
                mask = 0
                for j, c in enumerate(cols):
                    if (c >> i) & 1:
                        mask |= 1 << j
                rows.append(mask)
            M = ScheduleMatrix(t, n, tuple(rows))
            if verifier(M, P, force=True).passed:
                return t
    return None
