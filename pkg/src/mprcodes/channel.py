"""Multiple-access channel with capacity d and per-station success feedback.

In every slot the still-active stations scheduled by the matrix transmit.
If between 1 and d of them transmit, all succeed and go silent for good;
more than d is a conflict and nobody succeeds.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import ScheduleMatrix, mask_members, stack, station_mask, station_set

__all__ = [
    "SlotOutcome",
    "SimulationTrace",
    "simulate",
    "resolves",
    "residual_active",
    "staged_simulate",
    "trace_to_csv",
    "run_masks",
]

SILENCE = "silence"
SUCCESS = "success"
CONFLICT = "conflict"


@dataclass(frozen=True)
class SlotOutcome:
    slot: int
    transmitters: tuple[int, ...]
    kind: str
    succeeded: tuple[int, ...]


@dataclass(frozen=True)
class SimulationTrace:
    outcomes: tuple[SlotOutcome, ...]
    success_slot: dict  # station -> slot index, or None for "never"
    resolved: bool

    @property
    def slots_used(self) -> int | None:
        """Slot of the last success, or None if nobody succeeded."""
        done = [s for s in self.success_slot.values() if s is not None]
        return max(done) if done else None

    @property
    def residual(self) -> tuple[int, ...]:
        return tuple(j for j, s in sorted(self.success_slot.items()) if s is None)


def run_masks(rows: Sequence[int], active: int, d: int) -> int:
    """Return the mask of stations still active after all rows.

    Hot loop shared with the verifiers; no trace is recorded.
    """
    for r in rows:
        if not active:
            break
        tx = r & active
        if tx and tx.bit_count() <= d:
            active &= ~tx
    return active


def _check_d(d: int) -> None:
    if d < 1:
        raise ValueError(f"capacity d must be >= 1, got {d}")


def simulate(M: ScheduleMatrix, S: Iterable[int], d: int) -> SimulationTrace:
    _check_d(d)
    S = station_set(S, M.n)
    active = station_mask(S)
    success_slot = {j: None for j in S}
    outcomes = []
    for i, r in enumerate(M.rows, start=1):
        tx = r & active
        members = mask_members(tx)
        if not tx:
            outcomes.append(SlotOutcome(i, (), SILENCE, ()))
        elif len(members) <= d:
            for j in members:
                success_slot[j] = i
            active &= ~tx
            outcomes.append(SlotOutcome(i, members, SUCCESS, members))
        else:
            outcomes.append(SlotOutcome(i, members, CONFLICT, ()))
    return SimulationTrace(tuple(outcomes), success_slot, active == 0)


def resolves(M: ScheduleMatrix, S: Iterable[int], d: int) -> bool:
    _check_d(d)
    return run_masks(M.rows, station_mask(station_set(S, M.n)), d) == 0


def residual_active(M: ScheduleMatrix, S: Iterable[int], d: int) -> tuple[int, ...]:
    """Stations of S that never get through."""
    _check_d(d)
    return mask_members(run_masks(M.rows, station_mask(station_set(S, M.n)), d))


def staged_simulate(stage_codes: Sequence, S: Iterable[int], d: int) -> SimulationTrace:
    """Run the stage schedules back to back; activity carries over stages.

    Accepts ScheduleMatrix objects or anything with a ``.matrix`` attribute
    (such as KGCode).
    """
    mats = [getattr(c, "matrix", c) for c in stage_codes]
    return simulate(stack(mats), S, d)


def trace_to_csv(trace: SimulationTrace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["slot", "kind", "num_transmitters", "succeeded_stations"])
    for o in trace.outcomes:
        w.writerow([o.slot, o.kind, len(o.transmitters), ";".join(map(str, o.succeeded))])
    return buf.getvalue()
