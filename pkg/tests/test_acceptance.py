"""Exit criteria. Each test maps to one numbered criterion; a PASS/FAIL line
per criterion is printed in the terminal summary."""
import itertools
import math
import subprocess
import sys
import time

import pytest

from mprcodes.bounds import claim1_rate, p1p2, tkg_upper_explicit, tlt_lower_leq, tsel_upper
from mprcodes.channel import residual_active, resolves, staged_simulate
from mprcodes.core import KGParams, SelectorParams
from mprcodes.construct import build_kg, build_staged, gen_selector, minimal_t_search
from mprcodes.verify import is_kg_def, is_kg_sim, is_locally_thin_leq, is_selector

from conftest import all_matrices, random_matrices

RANDOM_COUNT = 10_000


def kg_grid():
    yield from all_matrices(3, 3)
    yield from random_matrices(RANDOM_COUNT, 8, 6, seed=2024)


def legal_kd(n):
    for k in range(1, n + 1):
        for d in range(1, k + 1):
            yield KGParams(k, d, n)


@pytest.mark.acceptance(1, "simulation and definition KG verifiers agree on every grid instance")
def test_oracle_equivalence():
    start = time.perf_counter()
    disagreements = cases = passes = 0
    for M in kg_grid():
        for P in legal_kd(M.n):
            a = is_kg_sim(M, P).passed
            b = is_kg_def(M, P).passed
            cases += 1
            passes += a
            disagreements += a != b
    elapsed = time.perf_counter() - start
    assert disagreements == 0
    assert 0 < passes < cases
    assert elapsed < 300


@pytest.mark.acceptance(2, "every KG code on the grid is a (<=k,d,n)-locally thin code")
def test_kg_implies_locally_thin():
    violations = 0
    for M in kg_grid():
        for P in legal_kd(M.n):
            if is_kg_sim(M, P).passed and not is_locally_thin_leq(M, P).passed:
                violations += 1
    assert violations == 0


def _selector_params():
    for n in range(2, 11):
        for k in range(2, min(n, 5) + 1):
            for m in range(1, k + 1):
                if 2 * (m - 1) >= k:
                    continue
                for d in range(1, m + 1):
                    yield SelectorParams(k, m, d, n)


@pytest.mark.acceptance(3, "verified selectors leave at most k-m stations unresolved")
def test_selector_semantics():
    built = 0
    for P in _selector_params():
        for seed in (0, 1):
            M = gen_selector(P, 0.5, seed=seed)
            assert is_selector(M, P).passed
            built += 1
            for r in range(P.k + 1):
                for S in itertools.combinations(range(1, P.n + 1), r):
                    assert len(residual_active(M, S, P.d)) <= P.k - P.m
    assert built >= 50


@pytest.mark.acceptance(4, "verified KG constructions pass and staged codes resolve every set")
def test_end_to_end_construction():
    for n in range(1, 11):
        for k in range(1, min(n, 4) + 1):
            for d in range(1, k + 1):
                P = KGParams(k, d, n)
                assert is_kg_sim(build_kg(P, seed=n * 100 + k * 10 + d).matrix, P).passed
    for n in range(1, 11):
        for d in range(1, 5):
            stages = build_staged(n, d, seed=n + 17 * d)
            for r in range(n + 1):
                for S in itertools.combinations(range(1, n + 1), r):
                    assert staged_simulate(stages, S, d).resolved


@pytest.mark.acceptance(5, "exact -ln(P1+P2) dominates the closed form for all 2(m-1) < k <= 64")
def test_claim1_regression():
    checked = 0
    for k in range(1, 65):
        for m in range(1, k + 1):
            if not 2 * (m - 1) < k:
                continue
            for d in range(1, m + 1):
                p = d / (2 * k) if d <= 2 else d / (4 * k)
                exact = p1p2(k, m, d, p).log_rate
                assert exact >= claim1_rate(k, m, d) - 1e-9, (k, m, d)
                checked += 1
    assert checked > 10_000


@pytest.mark.acceptance(6, "bound formulas reproduce hand-computed values")
def test_bound_regression():
    a = tsel_upper(SelectorParams(4, 2, 1, 16))
    assert abs(a.raw - 214.53) <= 0.01 and a.integral == 215
    b = tsel_upper(SelectorParams(8, 4, 3, 64))
    assert abs(b.raw - 176.65) <= 0.05
    c = tlt_lower_leq(KGParams(9, 2, 216))
    assert abs(c.raw - 2.973) <= 0.001


@pytest.mark.acceptance(7, "explicit KG length at k=16, n=256 shrinks with d; d=8 at most half of d=1")
def test_one_over_d_trend():
    vals = [tkg_upper_explicit(KGParams(16, d, 256)).raw for d in (1, 2, 4, 8)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert vals[-1] <= vals[0] / 2


@pytest.mark.acceptance(8, "brute-force minimal KG lengths match hand analysis in under 1 s")
def test_minimal_length_oracle():
    start = time.perf_counter()
    assert minimal_t_search("kg", KGParams(2, 1, 2)) == 2
    assert minimal_t_search("kg", KGParams(2, 2, 2)) == 1
    assert time.perf_counter() - start < 1.0


@pytest.mark.acceptance(9, "resolution under capacity d implies resolution under d+1")
def test_capacity_monotonicity():
    violations = 0
    for M in all_matrices(3, 3):
        for r in range(M.n + 1):
            for S in itertools.combinations(range(1, M.n + 1), r):
                for d in range(1, M.n + 1):
                    if resolves(M, S, d) and not resolves(M, S, d + 1):
                        violations += 1
    assert violations == 0


def _cli(*args, cwd):
    return subprocess.run([sys.executable, "-m", "mprcodes", *args], capture_output=True, cwd=cwd)


@pytest.mark.acceptance(10, "gen and sweep are byte-identical across repeated seeded runs")
def test_determinism(tmp_path):
    gen_outputs = []
    for run in range(3):
        out = tmp_path / f"code{run}.mat"
        r = _cli("gen", "kg", "--k", "4", "--d", "1", "--n", "8", "--eps", "0.5", "--seed", "7",
                 "--mode", "verified", "-o", str(out), cwd=tmp_path)
        assert r.returncode == 0
        gen_outputs.append((out.read_bytes(), (tmp_path / f"code{run}.mat.json").read_bytes()))
    assert gen_outputs[0] == gen_outputs[1] == gen_outputs[2]

    sweeps = []
    for _ in range(3):
        r = _cli("sweep", "--measurement", "residual_actives", "--k", "3,4", "--d", "1,2",
                 "--n", "7", "--trials", "5", "--seed", "11", cwd=tmp_path)
        assert r.returncode == 0
        sweeps.append(r.stdout)
    assert sweeps[0] == sweeps[1] == sweeps[2]
    assert len(sweeps[0].splitlines()) == 1 + 4 * 5
