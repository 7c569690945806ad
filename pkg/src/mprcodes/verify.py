"""Exhaustive verifiers for KG codes, generalized selectors and locally thin codes.

Every verifier enumerates column subsets in lexicographic order and stops
at the first subset that violates the property. Reports carry that subset
as a counterexample; a passing report carries a witness for the first
subset checked (for the properties that have one).

Enumeration can be split over worker processes with ``workers=N``; the
merged report is identical to the sequential one.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from itertools import combinations
from math import comb
from typing import Callable, Sequence

from .channel import run_masks
from .core import KGParams, ScheduleMatrix, SelectorParams, mask_members

__all__ = [
    "CapExceeded",
    "SelectorWitness",
    "KGWitness",
    "VerificationReport",
    "MAX_N",
    "DEFAULT_MAX_COMBOS",
    "max_combos",
    "check_caps",
    "is_selector",
    "is_kg_sim",
    "is_kg_def",
    "is_locally_thin_leq",
    "is_locally_thin_exact",
    "kg_witness",
    "selector_witness",
    "witness_is_valid",
]

MAX_N = 30
DEFAULT_MAX_COMBOS = 10**8
CAP_ENV = "MPR_MAX_COMBOS"


class CapExceeded(ValueError):
    """Instance too large for exhaustive verification without an override."""


@dataclass(frozen=True)
class SelectorWitness:
    good_rows: tuple[int, ...]
    covered: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"type": "selector", "good_rows": list(self.good_rows),
                "covered": list(self.covered)}


@dataclass(frozen=True)
class KGWitness:
    slot_indices: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]

    def to_dict(self) -> dict:
        return {"type": "kg", "slot_indices": list(self.slot_indices),
                "blocks": [list(b) for b in self.blocks]}


@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    counterexample: tuple[int, ...] | None
    witness: SelectorWitness | KGWitness | None
    subsets_checked: int
    property: str = ""

    def __post_init__(self):
        if self.passed != (self.counterexample is None):
            raise ValueError("pass must hold exactly when there is no counterexample")

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "counterexample": None if self.counterexample is None else list(self.counterexample),
            "witness": None if self.witness is None else self.witness.to_dict(),
            "subsets_checked": self.subsets_checked,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


# caps -----------------------------------------------------------------------

def max_combos() -> int:
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return DEFAULT_MAX_COMBOS
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{CAP_ENV} must be an integer, got {raw!r}") from None


def check_caps(n: int, sizes: Sequence[int], force: bool = False) -> int:
    """Return the number of subsets to enumerate, raising CapExceeded if too many."""
    total = sum(comb(n, s) for s in sizes)
    if force:
        return total
    if n > MAX_N:
        raise CapExceeded(f"n={n} exceeds the verification cap of {MAX_N} columns; use force")
    cap = max_combos()
    if total > cap:
        raise CapExceeded(
            f"{total} column subsets exceed the cap of {cap}; use force or set {CAP_ENV}"
        )
    return total


# per-subset checks ------------------------------------------------------------
# Each returns (ok, witness_or_None); ``want`` asks for a witness on success.

def _check_selector(rows, m, d, K, want):
    covered = 0
    good = []
    for idx, r in enumerate(rows):
        w = (r & K).bit_count()
        if 1 <= w <= d:
            covered |= r & K
            if want:
                good.append(idx + 1)
    ok = covered.bit_count() >= m
    if ok and want:
        return ok, SelectorWitness(tuple(good), mask_members(covered))
    return ok, None


def _check_kg_sim(rows, d, K, want):
    ok = run_masks(rows, K, d) == 0
    if ok and want:
        return ok, _kg_partition(rows, d, K)
    return ok, None


def _check_kg_def(rows, d, K, want):
    w = _kg_partition(rows, d, K)
    return w is not None, (w if want else None)


def _check_thin(rows, d, K, want):
    for r in rows:
        if 1 <= (r & K).bit_count() <= d:
            return True, None
    return False, None


def _kg_partition(rows, d, K) -> KGWitness | None:
    """Search for an ordered partition witness for column set K.

    Picks rows i_1 < i_2 < ... and blocks one at a time. With R the columns
    not yet placed, row i can serve as the next slot only with block
    row & R: it must be all ones on the block and all zeros on R minus the
    block. Branches over which row comes next; dead (R, i) states are cached.
    """
    t = len(rows)
    dead = set()

    def search(R, start):
        if R == 0:
            return []
        if (R, start) in dead:
            return None
        for i in range(start, t):
            block = rows[i] & R
            if 1 <= block.bit_count() <= d:
                rest = search(R & ~block, i + 1)
                if rest is not None:
                    return [(i + 1, block)] + rest
        dead.add((R, start))
        return None

    path = search(K, 0)
    if path is None:
        return None
    return KGWitness(tuple(i for i, _ in path), tuple(mask_members(b) for _, b in path))


# enumeration ------------------------------------------------------------------

def _unrank(n: int, k: int, rank: int) -> list[int]:
    """Lexicographic rank -> k-combination of range(n)."""
    out = []
    x = 0
    for slot in range(k):
        while True:
            c = comb(n - x - 1, k - slot - 1)
            if rank < c:
                break
            rank -= c
            x += 1
        out.append(x)
        x += 1
    return out


def _combos_from(n: int, k: int, start: int, stop: int):
    if start >= stop:
        return
    c = _unrank(n, k, start)
    for _ in range(stop - start):
        yield c
        i = k - 1
        while i >= 0 and c[i] == n - k + i:
            i -= 1
        if i < 0:
            return
        c = c[:]
        c[i] += 1
        for j in range(i + 1, k):
            c[j] = c[j - 1] + 1


def _scan_range(check: Callable, rows, n: int, size: int, start: int, stop: int):
    """Return (fail_rank or None, fail_combo, witness of rank 0 if in range)."""
    first_witness = None
    it = combinations(range(n), size) if start == 0 and stop == comb(n, size) else _combos_from(n, size, start, stop)
    for rank, c in enumerate(it, start=start):
        K = 0
        for j in c:
            K |= 1 << j
        ok, w = check(rows, K=K, want=(rank == 0))
        if rank == 0:
            first_witness = w
        if not ok:
            return rank, tuple(j + 1 for j in c), first_witness
    return None, None, first_witness


def _scan(check: Callable, rows, n: int, sizes: Sequence[int], workers: int | None):
    """Scan each subset size in turn. Returns (fail_combo, witness, checked)."""
    checked = 0
    first_witness = None
    first = True
    for size in sizes:
        total = comb(n, size)
        if total == 0:
            continue
        if workers and workers > 1 and total > 1:
            chunk = -(-total // (workers * 4))
            bounds = [(a, min(a + chunk, total)) for a in range(0, total, chunk)]
            with ProcessPoolExecutor(max_workers=workers) as ex:
                results = list(ex.map(
                    _scan_range_star, [(check, rows, n, size, a, b) for a, b in bounds]
                ))
        else:
            results = [_scan_range(check, rows, n, size, 0, total)]
        if first:
            first_witness = results[0][2]
            first = False
        for fail_rank, combo, _ in results:
            if fail_rank is not None:
                return combo, None, checked + fail_rank + 1
        checked += total
    return None, first_witness, checked


def _scan_range_star(args):
    return _scan_range(*args)


def _report(prop, result) -> VerificationReport:
    combo, witness, checked = result
    return VerificationReport(combo is None, combo, witness, checked, prop)


def _check_params(M: ScheduleMatrix, P) -> None:
    if P.n != M.n:
        raise ValueError(f"parameter n={P.n} does not match matrix n={M.n}")


# public verifiers ------------------------------------------------------------

def is_selector(M: ScheduleMatrix, P: SelectorParams, *, workers: int | None = None,
                force: bool = False) -> VerificationReport:
    """Check that every k columns see rows of weight in [1, d] covering >= m of them."""
    _check_params(M, P)
    if M.t < 1:
        raise ValueError("a selector needs at least one row")
    check_caps(M.n, [P.k], force)
    check = partial(_check_selector, m=P.m, d=P.d)
    return _report("selector", _scan(check, M.rows, M.n, [P.k], workers))


def is_kg_sim(M: ScheduleMatrix, P: KGParams, *, workers: int | None = None,
              force: bool = False) -> VerificationReport:
    """KG check by simulating the channel on every k-subset of stations.

    Smaller active sets need no separate check: a partition witness for a
    k-set containing them restricts to one for them.
    """
    _check_params(M, P)
    check_caps(M.n, [P.k], force)
    check = partial(_check_kg_sim, d=P.d)
    return _report("kg", _scan(check, M.rows, M.n, [P.k], workers))


def is_kg_def(M: ScheduleMatrix, P: KGParams, *, workers: int | None = None,
              force: bool = False) -> VerificationReport:
    """KG check straight from the partition definition (no channel simulation)."""
    _check_params(M, P)
    check_caps(M.n, [P.k], force)
    check = partial(_check_kg_def, d=P.d)
    return _report("kg-def", _scan(check, M.rows, M.n, [P.k], workers))


def is_locally_thin_leq(M: ScheduleMatrix, P: KGParams, *, workers: int | None = None,
                        force: bool = False) -> VerificationReport:
    _check_params(M, P)
    sizes = list(range(P.d, P.k + 1))
    check_caps(M.n, sizes, force)
    check = partial(_check_thin, d=P.d)
    return _report("lt-leq", _scan(check, M.rows, M.n, sizes, workers))


def is_locally_thin_exact(M: ScheduleMatrix, P: KGParams, *, workers: int | None = None,
                          force: bool = False) -> VerificationReport:
    _check_params(M, P)
    check_caps(M.n, [P.k], force)
    check = partial(_check_thin, d=P.d)
    return _report("lt-exact", _scan(check, M.rows, M.n, [P.k], workers))


# witnesses ------------------------------------------------------------------

def kg_witness(M: ScheduleMatrix, S: Sequence[int], d: int) -> KGWitness | None:
    K = 0
    for j in S:
        K |= 1 << (j - 1)
    return _kg_partition(M.rows, d, K)


def selector_witness(M: ScheduleMatrix, S: Sequence[int], m: int, d: int) -> SelectorWitness | None:
    K = 0
    for j in S:
        K |= 1 << (j - 1)
    ok, w = _check_selector(M.rows, m, d, K, True)
    return w if ok else None


def witness_is_valid(M: ScheduleMatrix, S: Sequence[int], witness, d: int, m: int | None = None) -> bool:
    """Re-check a witness against its definition by reading matrix entries."""
    S = set(S)
    if isinstance(witness, KGWitness):
        idx = witness.slot_indices
        if not idx or any(a >= b for a, b in zip(idx, idx[1:])):
            return False
        if len(idx) != len(witness.blocks):
            return False
        placed = [j for b in witness.blocks for j in b]
        if sorted(placed) != sorted(S) or len(placed) != len(set(placed)):
            return False
        for pos, (i, block) in enumerate(zip(idx, witness.blocks)):
            if not 1 <= len(block) <= d:
                return False
            if any(M[i, j] != 1 for j in block):
                return False
            later = [j for b in witness.blocks[pos + 1:] for j in b]
            if any(M[i, j] != 0 for j in later):
                return False
        return True
    if isinstance(witness, SelectorWitness):
        covered = set()
        for i in witness.good_rows:
            ones = [j for j in S if M[i, j] == 1]
            if not 1 <= len(ones) <= d:
                return False
            covered.update(ones)
        if covered != set(witness.covered):
            return False
        return m is None or len(covered) >= m
    raise TypeError(f"unknown witness type {type(witness).__name__}")
