"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Criteria 5-7 share one full default-protocol run (6 n-values x 4 noise
rates x 12 circuits x 1e5 shots) via a module fixture; on one core this
takes tens of minutes, nearly all of it in the noisy grid.

Two criteria are expected red and are kept faithful rather than loosened
(see notes/decisions.md): the transcribed PF reference 0.99775 for n=4
contradicts its own closed form, and a handful of noisy success
probabilities sit a few thousandths outside tolerance because the published
table's toolkit placed slightly less noise per ancilla than any per-qubit
depolarizing placement reproduces.
"""

import math
import time
import warnings

import numpy as np
import pytest

from rotbench import planner, qmath, simplify, tomography
from rotbench.builder import build, set_target_measurement
from rotbench.circuit import gate_census
from rotbench.experiment import (ExperimentConfig, compare_reference,
                                 fit_exponential, predicted_c,
                                 run_experiment)
from rotbench.simnoise import NoiseSpec, run_exact, run_shots

THETA = math.pi / 4
ALL_N = (2, 4, 5, 6, 7, 8)
TABLE1 = {2: 0.62500, 4: 0.57031, 5: 0.59570, 6: 0.58252, 7: 0.58899,
          8: 0.58572}
PAPER_C = {0.01: 0.02925, 0.05: 0.13280, 0.1: 0.23788}
PREDICTED_C = {0.01: 0.02940, 0.05: 0.13550, 0.1: 0.24400}
BRACKET_SHOTS = 25_000


def report(criterion, ok, detail=""):
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} {detail}")


@pytest.fixture(scope="module")
def full_report():
    cfg = ExperimentConfig()  # defaults: mixed_state, 1e5 shots, seed 20240
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rows = run_experiment(cfg)
    return cfg, rows


def test_c1_table1_closed_form():
    t0 = time.perf_counter()
    probs = {n: planner.success_probability(planner.choose_k(THETA, n), n)
             for n in ALL_N}
    elapsed = time.perf_counter() - t0
    ok = all(abs(probs[n] - TABLE1[n]) <= 5e-6 for n in ALL_N)
    ok = ok and elapsed < 1e-3
    report(1, ok, f"max|diff|={max(abs(probs[n] - TABLE1[n]) for n in ALL_N):.1e}"
                  f" runtime={elapsed * 1e6:.0f}us")
    assert ok


def test_c2_channel_oracle():
    worst_fid = 1.0
    worst_prob = 0.0
    for n in ALL_N:
        pl = planner.plan(THETA, n=n)
        circ = build(pl, target_init="input")
        r = qmath.rz(pl.theta_star)
        for name, psi in qmath.STATES.items():
            if name == "input":
                continue
            res = run_exact(circ, target_state=psi)
            zero = "0" * n
            br = res.branches[zero]
            worst_prob = max(worst_prob, abs(br.probability - pl.p_success))
            worst_fid = min(worst_fid,
                            qmath.state_fidelity(br.target_state, r @ psi))
            for bits, b in res.branches.items():
                if bits != zero:
                    worst_fid = min(worst_fid, qmath.state_fidelity(
                        b.target_state, qmath.Z @ psi))
    ok = worst_fid >= 1 - 1e-10 and worst_prob <= 1e-10
    report(2, ok, f"min fidelity={worst_fid:.12f} "
                  f"max prob err={worst_prob:.1e}")
    assert ok


def test_c3_gate_count_invariants():
    ok = True
    for n in ALL_N:
        c = build(planner.plan(THETA, n=n))
        ok &= gate_census(c)["ccx"] == 2 * n - 2
        ok &= len(c.outer_ids()) + len(c.inner_ids()) == 2 * n - 2
    naive = build(planner.plan(THETA, n=8), style="naive")
    piped = simplify.simplify(naive)
    dx = gate_census(naive)["x"] - gate_census(piped)["x"]
    dh = gate_census(naive)["h"] - gate_census(piped)["h"]
    ok &= (dx, dh) == (30, 8)
    report(3, ok, f"pipeline dX={dx} dH={dh}")
    assert ok


def test_c4_angle_errors_and_pf_n2():
    checks = []
    for n, want in ((2, 0.14190), (4, 0.06786)):
        k = planner.choose_k(THETA, n)
        err = abs(THETA - planner.theta_star(k, n))
        checks.append(abs(err - want) <= 5e-6)
    err8 = abs(THETA - planner.theta_star(181, 8))
    checks.append(abs(err8 - 2.579e-4) <= 5e-8)
    pf2 = tomography.rotation_fidelity(
        THETA, planner.theta_star(planner.choose_k(THETA, 2), 2))
    checks.append(round(pf2, 5) == 0.99497)
    ok = all(checks)
    report(4, ok, f"angle errors + PF(n=2)={pf2:.5f}")
    assert ok


def test_c4_pf_reference_n4():
    # Faithful to the transcribed reference value 0.99775, which contradicts
    # the closed form: 1/2 + 1/2 cos(0.06786) = 0.99885. Expected red; the
    # reference value appears to be a typo in the source material (its own
    # Table I pins k=11, hence the 0.06786 angle error, hence 0.99885).
    pf4 = tomography.rotation_fidelity(
        THETA, planner.theta_star(planner.choose_k(THETA, 4), 4))
    ok = round(pf4, 5) == 0.99775
    report("4 (n=4 PF reference)", ok,
           f"closed form gives {pf4:.5f}, transcribed reference 0.99775")
    assert ok, (f"closed form 1/2+1/2cos gives {pf4:.5f}; the transcribed "
                "reference 0.99775 is unattainable (see decisions ledger)")


def test_c5_noiseless_rows(full_report):
    cfg, rows = full_report
    diff = compare_reference([r for r in rows if r.delta == 0.0], "table2")
    failures = [d for d in diff.diffs if not d.ok]
    affine_ok = all(
        r.agf_t == pytest.approx((2 * r.pf_t + 1) / 3, abs=1e-12)
        and r.agf_z == pytest.approx((2 * r.pf_z + 1) / 3, abs=1e-12)
        for r in rows if r.delta == 0.0)
    worst = max(d.abs_diff for d in diff.diffs)
    ok = not failures and affine_ok
    report(5, ok, f"24 delta=0 cells, worst |diff|={worst:.4f}, "
                  f"AGF affine exact={affine_ok}")
    assert ok, failures


def test_c6_noisy_rows(full_report):
    cfg, rows = full_report
    noisy = [r for r in rows if r.delta > 0.0]
    diff = compare_reference(noisy, "table2")
    failures = [d for d in diff.diffs if not d.ok]
    detail = "all 90 noisy cells within tolerance"
    bracket_ok = True
    if failures:
        # convention-sensitivity fallback: the published value must at least
        # be bracketed between the two conventions; report both runs
        cells = sorted({d.key for d in failures})
        lines = []
        for n, delta in cells:
            ucfg = ExperimentConfig(n_list=(n,), delta_list=(delta,),
                                    shots=BRACKET_SHOTS, seed=cfg.seed,
                                    convention="uniform_pauli")
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                urow = run_experiment(ucfg)[0]
            mrow = next(r for r in noisy
                        if (r.n, r.delta) == (n, delta))
            for d in [f for f in failures if f.key == (n, delta)]:
                uval = getattr(urow, d.column)
                lo, hi = sorted((uval, d.reported))
                inside = lo <= d.reference <= hi
                bracket_ok &= inside
                lines.append(
                    f"(n={n}, d={delta}, {d.column}): mixed={d.reported:.5f}"
                    f" uniform={uval:.5f} published={d.reference:.5f}"
                    f" bracketed={inside}")
        detail = (f"{len(failures)} of 90 cells out of tolerance; "
                  + "; ".join(lines))
    ok = not failures or bracket_ok
    report(6, ok, detail)
    assert ok, detail


def test_c7_exponential_fits(full_report):
    cfg, rows = full_report
    lines = []
    ok = True
    for delta in (0.01, 0.05, 0.1):
        fit = fit_exponential(rows, delta, theta=cfg.theta)
        good_r2 = fit.r_squared >= 0.99
        good_c = abs(fit.c_delta - PAPER_C[delta]) <= 0.01
        good_pred = round(predicted_c(delta), 5) == PREDICTED_C[delta]
        ok &= good_r2 and good_c and good_pred
        lines.append(f"d={delta}: c={fit.c_delta:.5f} "
                     f"(ref {PAPER_C[delta]}) R2={fit.r_squared:.4f}")
    report(7, ok, "; ".join(lines))
    assert ok, lines


def test_c8_property_suites():
    checks = {}

    # pass-pipeline channel equivalence
    pl = planner.plan(THETA, n=5)
    piped = simplify.simplify(build(pl, style="naive", target_init="+i"))
    direct = build(pl, style="simplified", target_init="+i")
    ra, rb = run_exact(piped), run_exact(direct)
    eq = set(ra.branches) == set(rb.branches) and all(
        abs(ra.branches[b].probability - rb.branches[b].probability) < 1e-10
        and qmath.state_fidelity(ra.branches[b].target_state,
                                 rb.branches[b].target_state) > 1 - 1e-10
        for b in ra.branches)
    checks["pipeline-channel"] = eq

    # rotation fidelity closed form on 100 random angle pairs
    rng = np.random.default_rng(99)
    closed = all(
        abs(tomography.process_fidelity(
            qmath.unitary_choi(qmath.rz(b)), qmath.rz(a))
            - tomography.rotation_fidelity(a, b)) <= 1e-10
        for a, b in rng.uniform(-math.pi, math.pi, size=(100, 2)))
    checks["pf-closed-form"] = closed

    # tomography identity / T / depolarized oracles
    pures = [np.outer(v, v.conj()) for v in
             (qmath.KET0, qmath.KET1, qmath.KET_PLUS, qmath.KET_PLUS_I)]
    ident = np.allclose(tomography.reconstruct_channel(*pures),
                        qmath.unitary_choi(qmath.I2), atol=1e-12)
    t_out = [qmath.T @ r @ qmath.T.conj().T for r in pures]
    t_ok = abs(tomography.process_fidelity(
        tomography.reconstruct_channel(*t_out), qmath.T) - 1) < 1e-10
    mixed = np.eye(2) / 2
    dep = abs(tomography.process_fidelity(
        tomography.reconstruct_channel(mixed, mixed, mixed, mixed),
        qmath.T) - 0.25) < 1e-12
    checks["tomography-oracles"] = ident and t_ok and dep

    # trajectory vs exact at delta = 0 (4 sigma)
    c = set_target_measurement(build(planner.plan(THETA, n=4),
                                     target_init="+"), "x")
    exact = run_exact(c)
    res = run_shots(c, NoiseSpec(0.0), shots=100_000, seed=808)
    traj = all(
        abs(res.counts.get(bits, 0) / res.shots - p)
        <= 4 * math.sqrt(p * (1 - p) / res.shots) + 1e-9
        for bits, p in exact.probabilities.items())
    checks["trajectory-vs-exact"] = traj

    # bit-exact rerun reproducibility
    noise = NoiseSpec(0.05)
    c2 = build(planner.plan(THETA, n=4), target_init="0")
    a = run_shots(c2, noise, shots=20_000, seed=809)
    b = run_shots(c2, noise, shots=20_000, seed=809)
    checks["bit-exact-rerun"] = a.counts == b.counts

    ok = all(checks.values())
    report(8, ok, ", ".join(f"{k}={v}" for k, v in checks.items()))
    assert ok, checks


def test_c9_table3_informational(full_report):
    cfg, rows = full_report
    diff = compare_reference(rows, "table3")
    ok = diff.passed is None and not diff.gated and len(diff.diffs) > 0
    report(9, ok, f"{len(diff.diffs)} informational live-hardware diffs, "
                  "no pass/fail gate")
    assert ok
