"""Acceptance criteria, one test per criterion.

Each test prints a single ``ACCEPTANCE <n> PASS|FAIL`` line with the measured
figure before asserting, so the line shows up whether or not it passes.
Run ``pytest tests/test_acceptance.py -s`` to see only these lines.
"""

import numpy as np
import pytest

from risbeam.analysis import approx_ratio_continuous, approx_ratio_limited, approx_ratio_uniform
from risbeam.core import (
    TWO_PI,
    ChannelInstance,
    CoefficientSet,
    PdaProfile,
    build_coefficient_set,
    build_phase_set,
    uniform_threshold,
)
from risbeam.experiments import ChannelModelConfig, generate_channel, run_monte_carlo
from risbeam.search import (
    algorithm1_optimize,
    boundary_offsets,
    build_boundary_schedule,
    complexity_bound,
    exhaustive_search,
    sweep_trace,
)

pi = np.pi
pytestmark = pytest.mark.slow


def report(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\nACCEPTANCE {n} {'PASS' if ok else 'FAIL'}: {detail}")


def uniform_ws(K, bmin, alpha=1.6):
    return build_coefficient_set(build_phase_set(K, TWO_PI), PdaProfile(bmin, alpha))


# 1 -------------------------------------------------------------------------


def test_1_oracle_optimality(capsys):
    worst = 0.0
    total = 0
    for i, bmin in enumerate((0.2, 0.5, 0.8)):
        ws = uniform_ws(4, bmin)
        cfg = ChannelModelConfig(10, seed=1000 + i)
        for t in range(1000):
            ch = generate_channel(cfg, t)
            a = algorithm1_optimize(ch, ws).power
            e = exhaustive_search(ch, ws).power
            worst = max(worst, (e - a) / e)
            total += 1
    ok = worst <= 1e-9 and total == 3000
    report(capsys, 1, ok, f"{total} trials N=10 K=4, max relative gap {worst:.2e} (limit 1e-9)")
    assert ok


# 2 -------------------------------------------------------------------------

TABLE_K = (2, 3, 4, 6, 8)
TABLE = {
    0.2: (8.359, 7.252, 6.395, 5.906, 5.731),
    0.5: (6.421, 4.712, 3.918, 3.416, 3.242),
    0.8: (4.838, 2.749, 1.993, 1.485, 1.309),
}


def test_2_loss_table(capsys):
    errs = [
        abs(approx_ratio_uniform(uniform_ws(K, b)).loss_db - TABLE[b][j])
        for b in TABLE
        for j, K in enumerate(TABLE_K)
    ]
    ok = len(errs) == 15 and max(errs) <= 0.002
    report(capsys, 2, ok, f"15 loss entries, max deviation {max(errs):.2e} dB (limit 2e-3)")
    assert ok


# 3 -------------------------------------------------------------------------


def test_3_constant_gain_reduction(capsys):
    worst = 0.0
    for K in range(2, 9):
        for R in (pi / 2, pi, 3 * pi / 2, TWO_PI):
            ws = build_coefficient_set(build_phase_set(K, R), PdaProfile(1.0))
            deltas, _ = boundary_offsets(ws)
            worst = max(worst, float(np.max(np.abs(deltas - np.roll(ws.gaps, 1) / 2))))
    ok = worst <= 1e-12
    report(capsys, 3, ok, f"28 (K, R) sets, max |delta - gap/2| {worst:.2e} (limit 1e-12)")
    assert ok


# 4 and 8 share one pool of random instances --------------------------------


def _random_instance(rng):
    K = int(rng.integers(2, 9))
    N = int(rng.integers(1, 65))
    kind = rng.integers(3)
    if kind == 0:
        # unit gains on an arbitrary phase range
        ws = build_coefficient_set(build_phase_set(K, rng.uniform(0.05, TWO_PI)), PdaProfile(1.0))
    elif kind == 1:
        ws = build_coefficient_set(
            build_phase_set(K, rng.uniform(0.05, TWO_PI)),
            PdaProfile(rng.uniform(0.4, 1.0), rng.uniform(1.4, 2.0), rng.uniform(-pi, pi)),
            peak_offset=rng.choice([0.0, None]),
        )
    else:
        # arbitrary phases and gains, kept only if locally convex
        while True:
            ws = CoefficientSet.from_arrays(rng.uniform(-pi, pi, K), rng.uniform(0.2, 1.0, K))
            if ws.locally_convex and np.all(np.diff(ws.phases) > 1e-6):
                break
    direct = rng.rayleigh() if rng.random() < 0.9 else 0.0
    ch = ChannelInstance(direct, rng.uniform(-pi, pi), rng.rayleigh(size=N), rng.uniform(-pi, pi, N))
    return ch, ws


@pytest.fixture(scope="module")
def sweep_pool():
    rng = np.random.default_rng(20240601)
    stats = {"instances": 0, "L_viol": 0, "closure_viol": 0, "worst_rel": 0.0, "add_viol": 0, "add_ratio": 0.0}
    for _ in range(10_000):
        ch, ws = _random_instance(rng)
        sched = build_boundary_schedule(ch, ws)
        tr = sweep_trace(ch, ws, full_revolution=True)
        stats["instances"] += 1
        stats["L_viol"] += sched.L > ch.N * ws.K
        stats["closure_viol"] += not np.array_equal(tr.selections[0], tr.selections[-1])
        sels = np.array(tr.selections)
        direct = ch.h0 + (ch.h[None, :] * ws.coefficients[sels]).sum(axis=1)
        rel = np.abs(np.array(tr.g) - direct) / np.maximum(np.abs(direct), 1e-300)
        stats["worst_rel"] = max(stats["worst_rel"], float(rel.max()))
        bound = complexity_bound(ch.N, ws.K)
        stats["add_viol"] += tr.additions > bound
        stats["add_ratio"] = max(stats["add_ratio"], tr.additions / bound)
    return stats


def test_4_sweep_invariants(capsys, sweep_pool):
    s = sweep_pool
    ok = s["instances"] >= 10_000 and s["L_viol"] == 0 and s["closure_viol"] == 0 and s["worst_rel"] <= 1e-9
    report(
        capsys,
        4,
        ok,
        f"{s['instances']} instances, L>NK: {s['L_viol']}, closure failures: {s['closure_viol']}, "
        f"max incremental-g relative error {s['worst_rel']:.2e} (limit 1e-9)",
    )
    assert ok


# 5 -------------------------------------------------------------------------


def test_5_threshold_continuity(capsys):
    worst = 0.0
    for K in (2, 3, 4, 8):
        for bmin in (0.2, 0.5, 0.8, 1.0):
            ws = uniform_ws(K, bmin)
            lim = approx_ratio_limited(ws, uniform_threshold(K)).e_pda
            worst = max(worst, abs(lim - approx_ratio_uniform(ws).e_pda))
    ok = worst <= 1e-12
    report(capsys, 5, ok, f"K in {{2,3,4,8}}, max |limited - uniform| {worst:.2e} (limit 1e-12)")
    assert ok


# 6 -------------------------------------------------------------------------


def test_6_monte_carlo_convergence(capsys):
    worst = 0.0
    for K in (2, 3, 4):
        for bmin in (0.2, 0.8):
            ws = uniform_ws(K, bmin)
            res = run_monte_carlo(ChannelModelConfig(1024, seed=K * 10 + int(bmin * 10)), ws, ["apq"], 2000)
            worst = max(worst, abs(float(np.mean(res.normalized_power["apq"])) - approx_ratio_uniform(ws).e_pda))
    ok = worst <= 0.01
    report(capsys, 6, ok, f"6 settings N=1024 x 2000 trials, max |mean APQ - ratio| {worst:.4f} (limit 0.01)")
    assert ok


# 7 -------------------------------------------------------------------------


def test_7_continuous_limit(capsys):
    flat = abs(approx_ratio_continuous(PdaProfile(1.0, 1.6)).e_pda - 1.0)
    linear = max(
        abs(approx_ratio_continuous(PdaProfile(b, 1.0)).e_pda - ((1 + b) / 2) ** 2)
        for b in (0.0, 0.2, 0.5, 0.8, 1.0)
    )
    ok = flat <= 1e-12 and linear <= 1e-10
    report(capsys, 7, ok, f"flat-curve error {flat:.1e} (limit 1e-12), linear-law error {linear:.1e} (limit 1e-10)")
    assert ok


# 8 -------------------------------------------------------------------------


def test_8_complexity_accounting(capsys, sweep_pool):
    s = sweep_pool
    ok = s["add_viol"] == 0
    report(
        capsys,
        8,
        ok,
        f"{s['instances']} full sweeps, additions above N(2K+1): {s['add_viol']}, "
        f"peak additions / bound {s['add_ratio']:.3f}",
    )
    assert ok
