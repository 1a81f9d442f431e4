"""Acceptance criteria, each checked at its stated tolerance.

Every test prints one PASS/FAIL line; the lines are repeated in the pytest
terminal summary.
"""

import math
import time

import numpy as np
import pytest
from scipy.integrate import quad

from conftest import record
from oracles import picard_oracle
from shearlattice import (
    INDETERMINATE,
    LYAPUNOV_STABLE,
    PATHSUM_STABLE,
    UNSTABLE,
    Params,
    WeightSpec,
    build_lattice,
    classify_regime,
    decay_monitor,
    gronwall_check,
    integrate,
    partial_sum,
    resonance_gain,
    run_cascade,
    series_tail_bound,
    total_sum,
    verify_growth,
)
from shearlattice.cli import sweep
from shearlattice.duhamel import lattice_distance, nonresonant_step_integral

SAMPLES = list(np.arange(0.0, 50.0 + 1e-9, 0.5))


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


@pytest.fixture(scope="module")
def runs():
    """The four simulations shared by several criteria, with their wall times."""
    p = Params(c=0.03, k=1.0)
    delta = build_lattice(0.0, -16, 16, "delta")
    out = {}
    out["stable"], out["stable_time"] = timed(integrate, delta, p, tau_end=50.0, sample_times=SAMPLES)

    rand = build_lattice(0.0, -10, 10, "random", seed=20240501)
    out["lyap"], out["lyap_time"] = timed(integrate, rand, p, tau_end=50.0, sample_times=SAMPLES[1:])

    pu = Params(c=0.03, k=1 / 300)
    out["cascade"], out["cascade_time"] = timed(run_cascade, pu, delta, 6)

    small = build_lattice(0.0, -3, 3, "random", seed=7)
    out["pathsum_ode"] = integrate(small, p, tau_end=2.0)
    out["pathsum_input"] = small
    return out


def test_1_conservation(runs):
    traj = runs["stable"]
    drift = max(abs(total_sum(s) - 1) for _, s in traj)
    ok = drift <= 1e-8 and runs["stable_time"] < 5.0 and len(traj) == 101
    record("1 conservation", ok, f"max |sum - 1| = {drift:.2e}, runtime {runs['stable_time']:.2f} s")
    assert ok


def test_2_stability_envelope(runs):
    p = Params(c=0.03, k=1.0)
    d = p.d_stab
    assert d == pytest.approx(0.03 * math.pi)
    assert 2 * math.pi * p.c * p.L < 1
    violations, worst = 0, -math.inf
    for _, snap in runs["stable"]:
        for eta, w in zip(snap.etas, snap.amplitudes):
            w0 = 1.0 if eta == 0 else 0.0
            bound = (2 * d) ** lattice_distance(0.0, eta) / (1 - 2 * d)
            diff = abs(w - w0)
            worst = max(worst, diff / bound)
            violations += diff > bound
    ok = violations == 0
    record("2 stability envelope", ok, f"violations {violations}, worst |w - w0| / bound = {worst:.3f}")
    assert ok


def test_3_lyapunov_monotone(runs):
    p = Params(c=0.03, k=1.0)
    assert 4 - 2 * math.exp(0.06) > 0
    spec = WeightSpec(C1=4.0, C2=1.0, order_j=2)
    rep, t_mon = timed(decay_monitor, runs["lyap"], spec, p, tol_rel=1e-10)
    runtime = runs["lyap_time"] + t_mon
    ok = rep.passed and set(rep.worst_increase) == {0, 1, 2} and runtime < 10.0
    worst = max(rep.worst_increase.values())
    record("3 lyapunov monotone (j = 0, 1, 2)", ok, f"worst relative increase {worst:.2e}, runtime {runtime:.2f} s")
    assert ok


def test_4_instability_cascade(runs):
    p = Params(c=0.03, k=1 / 300)
    cls = classify_regime(p)
    assert math.pi * p.c * p.L > 20 and math.pi * p.c**2 * p.L < 1 and cls.label == UNSTABLE
    rep = runs["cascade"]
    growth = verify_growth(rep, p)
    res6 = rep.steps[6].res_amp
    ok = (
        rep.all_dominant
        and len(rep.ratios) == 6
        and bool(np.all(rep.ratios >= 5))
        and growth.applicable
        and growth.passed
        and res6 >= p.d_grow**6
        and runs["cascade_time"] < 60.0
    )
    diag = ", ".join(f"{rho:.3f}" for _, rho, _, _ in rep.ratio_diagnostics())
    ref = 0.75 * p.r_exact
    record(
        "4 instability cascade",
        ok,
        f"rho = [{diag}] vs 3/4 r_exact = {ref:.3f}; |w(T_6, 6)| = {res6:.3e} >= d^6 = {p.d_grow ** 6:.1f}; "
        f"runtime {runs['cascade_time']:.2f} s",
    )
    assert ok


def test_5_picard_equivalence(runs):
    p = Params(c=0.03, k=1.0)
    lat = runs["pathsum_input"]
    ps, t_ps = timed(partial_sum, lat, p, 0.0, 2.0, 4)
    win, oracle = picard_oracle(lat, p, 0.0, 2.0, 4)
    err_oracle = float(np.max(np.abs(ps.with_window(win.n_min, win.n_max).amplitudes - oracle)))

    ode = runs["pathsum_ode"].final
    lo, hi = min(ode.n_min, ps.n_min), max(ode.n_max, ps.n_max)
    diff = ps.with_window(lo, hi).amplitudes - ode.with_window(lo, hi).amplitudes
    err_ode = float(np.max(np.abs(diff)))
    # the tail bound controls the operator norm on l1 data
    tail = series_tail_bound(p, 2.0, 4) * float(np.abs(lat.amplitudes).sum())
    ok = err_oracle <= 1e-9 and err_ode <= tail and t_ps < 5.0
    record(
        "5 picard / path-sum equivalence",
        ok,
        f"|partial - oracle| = {err_oracle:.2e}, |partial - ode| = {err_ode:.2e} <= tail {tail:.2e}, "
        f"runtime {t_ps:.2f} s",
    )
    assert ok


def test_6_closed_form_constants():
    p = Params(c=0.03, k=1 / 300)
    f = lambda s: p.c / (p.k**2 + s * s)
    r_quad = quad(f, -0.5, 0.5, points=[0.0], epsabs=0.0, epsrel=1e-13, limit=500)[0]
    r = resonance_gain(p)
    gain_ok = abs(r - 18 * math.atan(150)) <= 1e-12 and abs(r - r_quad) <= 1e-12
    worst = 0.0
    step_ok = True
    for c in (0.01, 0.03, 0.1):
        for k in (1 / 300, 1.0):
            q = Params(c=c, k=k)
            for offset in (-3, -2, -1, 1, 2, 3):
                g = lambda s: c / (k * k + (offset - s) ** 2)
                val = quad(g, -0.5, 0.5, epsabs=1e-15, epsrel=1e-14)[0]
                closed = nonresonant_step_integral(q, offset)
                step_ok &= val <= 4 * c and abs(val - closed) <= 1e-12 * max(1.0, val)
                worst = max(worst, val / (4 * c))
    ok = gain_ok and step_ok
    record(
        "6 closed-form constants",
        ok,
        f"r = {r:.15g} vs 18 atan(150) diff {abs(r - 18 * math.atan(150)):.1e}, "
        f"vs quadrature diff {abs(r - r_quad):.1e}; max step integral / 4c = {worst:.3f}",
    )
    assert ok


def test_7_gronwall_envelope(runs):
    p_s, p_u = Params(c=0.03, k=1.0), Params(c=0.03, k=1 / 300)
    reports = {
        "stable": gronwall_check(runs["stable"], p_s),
        "lyapunov": gronwall_check(runs["lyap"], p_s),
        "pathsum": gronwall_check(runs["pathsum_ode"], p_s),
        "cascade": gronwall_check(runs["cascade"].trajectory, p_u),
    }
    frac = reports["cascade"].max_growth_fraction
    ok = all(r.passed for r in reports.values()) and frac <= 0.5
    record("7 gronwall envelope", ok, f"all runs inside; unstable growth / envelope exponent = {frac:.2e}")
    assert ok


def test_8_regime_sweep():
    rows = sweep({"c": [0.01, 0.03], "L": [1.0, 300.0]}, J=6)
    ok = len(rows) == 4
    notes = []
    for row in rows:
        c, L = row["c"], row["L"]
        if math.pi * c * L > 20 and math.pi * c * c * L < 1:
            want = UNSTABLE
        elif 2 * math.pi * c * L < 1:
            want = PATHSUM_STABLE
        elif 4 - 2 * math.exp(2 * c * L) > 0:
            want = LYAPUNOV_STABLE
        else:
            want = INDETERMINATE
        ok &= row["label"] == want and row["status"] == "ok"
        if want in (PATHSUM_STABLE, LYAPUNOV_STABLE):
            ok &= row["max_growth"] <= 2.0 and row["check"] == "pass"
        if want == UNSTABLE:
            ok &= row["check"] == "pass"
        notes.append(f"({c:g}, {L:g}) {row['label']} growth {row['max_growth']:.3g} {row['check']}")
    ok &= sum(r["label"] == UNSTABLE for r in rows) == 1
    record("8 regime sweep", ok, "; ".join(notes))
    assert ok
