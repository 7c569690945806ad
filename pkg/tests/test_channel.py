import itertools

import pytest
from hypothesis import given, strategies as st

from mprcodes.channel import (
    residual_active,
    resolves,
    simulate,
    staged_simulate,
    trace_to_csv,
)
from mprcodes.core import ScheduleMatrix, all_ones, identity, make_matrix, permute_columns, stack

from test_core import matrices

CONFLICT_THEN_SINGLES = make_matrix([[1, 1, 1], [1, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_hand_trace_conflict_then_singletons():
    tr = simulate(CONFLICT_THEN_SINGLES, [1, 2, 3], 2)
    assert [o.kind for o in tr.outcomes] == ["conflict", "success", "success", "success"]
    assert tr.outcomes[0].transmitters == (1, 2, 3)
    assert tr.outcomes[0].succeeded == ()
    assert tr.success_slot == {1: 2, 2: 3, 3: 4}
    assert tr.resolved
    assert tr.slots_used == 4


def test_lone_transmitter():
    tr = simulate(identity(3), [2], 1)
    assert tr.success_slot == {2: 2}
    assert [o.kind for o in tr.outcomes] == ["silence", "success", "silence"]
    assert tr.resolved


def test_everyone_at_once_within_capacity():
    tr = simulate(all_ones(1, 3), [1, 2, 3], 3)
    assert tr.success_slot == {1: 1, 2: 1, 3: 1}


def test_successful_station_goes_silent():
    M = make_matrix([[1, 0], [1, 1]])
    tr = simulate(M, [1, 2], 1)
    assert tr.outcomes[1].transmitters == (2,)
    assert tr.outcomes[1].kind == "success"


def test_resolves_examples():
    assert not resolves(all_ones(1, 3), [1, 2], 1)
    for S in itertools.combinations(range(1, 5), 2):
        assert resolves(identity(4), S, 1)
    assert resolves(CONFLICT_THEN_SINGLES, [1, 2, 3], 2)


def test_residual_active_examples():
    assert residual_active(CONFLICT_THEN_SINGLES, [1, 2, 3], 2) == ()
    assert residual_active(all_ones(1, 3), [1, 3], 1) == (1, 3)


def test_bad_inputs():
    with pytest.raises(ValueError):
        simulate(identity(3), [4], 1)
    with pytest.raises(ValueError):
        simulate(identity(3), [1], 0)


def test_staged():
    stages = [make_matrix([[1, 1]]), identity(2)]
    tr = staged_simulate(stages, [1, 2], 1)
    assert tr.resolved and tr.success_slot == {1: 2, 2: 3}
    empty = staged_simulate(stages, [], 1)
    assert empty.resolved and all(o.kind == "silence" for o in empty.outcomes)
    assert staged_simulate([CONFLICT_THEN_SINGLES], [1, 2], 1) == simulate(CONFLICT_THEN_SINGLES, [1, 2], 1)
    with pytest.raises(ValueError):
        staged_simulate([identity(2), identity(3)], [1], 1)


def test_csv_export():
    text = trace_to_csv(simulate(make_matrix([[1, 1, 1], [1, 1, 0]]), [1, 2, 3], 2))
    assert text == (
        "slot,kind,num_transmitters,succeeded_stations\n"
        "1,conflict,3,\n"
        "2,success,2,1;2\n"
    )


def _active_sets(n):
    for r in range(n + 1):
        yield from itertools.combinations(range(1, n + 1), r)


@given(matrices(max_t=5, max_n=5), st.data())
def test_trace_consistency(M, data):
    S = data.draw(st.lists(st.integers(1, M.n), unique=True))
    d = data.draw(st.integers(1, 3))
    tr = simulate(M, S, d)
    seen = [j for o in tr.outcomes for j in o.succeeded]
    assert len(seen) == len(set(seen)) and set(seen) <= set(S)
    for o in tr.outcomes:
        size = len(o.transmitters)
        assert (o.kind == "silence") == (size == 0)
        assert (o.kind == "success") == (1 <= size <= d)
        assert (o.kind == "conflict") == (size > d)
    assert tr.resolved == (set(seen) == set(S))


@given(matrices(max_t=5, max_n=5), st.data())
def test_capacity_monotone_prefixwise(M, data):
    S = data.draw(st.lists(st.integers(1, M.n), unique=True))
    d = data.draw(st.integers(1, 3))
    for t in range(M.t + 1):
        prefix = ScheduleMatrix(t, M.n, M.rows[:t])
        assert set(residual_active(prefix, S, d + 1)) <= set(residual_active(prefix, S, d))


@given(matrices(max_t=5, max_n=5), st.data())
def test_permutation_equivariance(M, data):
    perm = data.draw(st.permutations(range(1, M.n + 1)))
    S = data.draw(st.lists(st.integers(1, M.n), unique=True))
    d = data.draw(st.integers(1, 3))
    a = simulate(M, S, d)
    b = simulate(permute_columns(M, perm), [perm[j - 1] for j in S], d)
    assert {perm[j - 1]: s for j, s in a.success_slot.items()} == b.success_slot
    assert [o.kind for o in a.outcomes] == [o.kind for o in b.outcomes]


@given(st.lists(matrices(max_t=3, max_n=3), min_size=1, max_size=3), st.data())
def test_staged_equals_stacked(Ms, data):
    n = Ms[0].n
    Ms = [ScheduleMatrix(M.t, n, tuple(r & ((1 << n) - 1) for r in M.rows)) for M in Ms]
    S = data.draw(st.lists(st.integers(1, n), unique=True))
    assert staged_simulate(Ms, S, 1) == simulate(stack(Ms), S, 1)
