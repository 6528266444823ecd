"""Acceptance suite: one test and one printed PASS/FAIL line per criterion.

Lines are printed as each test runs and repeated in the terminal summary.
"""

import time

import numpy as np

import conftest
from conftest import random_hermitian, random_pd, scipy_mean
from opmean.hermitian import eig_hermitian, matrix_function
from opmean.inequalities import (
    COUNTEREXAMPLE_A,
    COUNTEREXAMPLE_B,
    REFERENCE_VALUES,
    ScalarMeansInput,
    calibrate_strictness,
    crossing_construction,
    power_bounds,
    ratio_eigen,
    reciprocal_eigen,
    reproduce_counterexample,
    scalar_kyfan_suite,
)
from opmean.means import barbour, geometric, power_function
from opmean.measure import f_from_measure, geometric_measure, mean_from_measure
from opmean.trials import MU_GRID, RunConfig, mixture_mean, run

SEED = 20250101
MUS = MU_GRID


def _report(number, title, ok, detail, seconds):
    line = f"criterion {number} {title}: {'PASS' if ok else 'FAIL'} ({detail}; {seconds:.2f} s)"
    print(line)
    conftest.ACCEPTANCE_LINES.append(line)
    return ok


def _worst(reports, prefix=""):
    rows = [r for r in reports if r.check_id.startswith(prefix)]
    return min(r.slack for r in rows), sum(r.failed for r in rows), len(rows)


def test_c1_counterexample_reproduction():
    t0 = time.perf_counter()
    rep = reproduce_counterexample()
    dt = time.perf_counter() - t0
    err = max(rep.reference_errors.values())
    mins = [rep.loewner[k].min_eigenvalue_of_difference for k in REFERENCE_VALUES]
    ok = err <= 5e-6 and max(mins) < -1e-6 and dt < 1.0
    assert _report(1, "2x2 counterexample reproduction", ok,
                   f"max entry error {err:.1e}, min eigenvalues {', '.join(f'{m:.2e}' for m in mins)}", dt)


def test_c2_identities():
    t0 = time.perf_counter()
    res = run(RunConfig(seed=SEED, trials=200, dims=(1, 8), suites=("identities",)))
    dt = time.perf_counter() - t0
    worst = max(r.gap for r in res.reports)
    trials = len({r.trial for r in res.reports})
    labels = {r.mean_spec.split(":")[0] for r in res.reports}
    ok = worst <= 1e-9 and trials >= 200 and labels == {"geometric", "harmonic", "measure"} and dt < 30
    by_name = {}
    for r in res.reports:
        by_name[r.check_id] = max(by_name.get(r.check_id, 0.0), r.gap)
    detail = ", ".join(f"{k} {v:.1e}" for k, v in sorted(by_name.items()))
    assert _report(2, "mean identities", ok, f"{trials} trials, worst residual {worst:.1e} [{detail}]", dt)


def test_c3_measure_representation():
    t0 = time.perf_counter()
    grid = np.geomspace(1e-3, 1e3, 241)
    f_err = 0.0
    for mu in MUS:
        f = f_from_measure(geometric_measure(mu))
        f_err = max(f_err, float(np.max(np.abs(f(grid) / grid**mu - 1))))
    rng = np.random.default_rng(SEED)
    m_err = 0.0
    for mu in MUS:
        for n in (1, 2, 4, 8):
            a, b = random_pd(rng, n, 100.0), random_pd(rng, n, 100.0)
            ref = scipy_mean(a.data, b.data, lambda t: t**mu)
            got = mean_from_measure(geometric_measure(mu), a, b).data
            m_err = max(m_err, np.linalg.norm(got - ref) / np.linalg.norm(ref))
    dt = time.perf_counter() - t0
    ok = f_err <= 1e-8 and m_err <= 1e-8
    assert _report(3, "measure representation", ok,
                   f"function error {f_err:.1e}, operator error {m_err:.1e}", dt)


def test_c4_additive_complement_inequality():
    t0 = time.perf_counter()
    res = run(RunConfig(seed=SEED, trials=200, suites=("additive", "equality")))
    dt = time.perf_counter() - t0
    slack, bad, n = _worst(res.reports, "additive")
    eq = [r for r in res.reports if r.check_id == "equality_equal_inputs"]
    ne = [r for r in res.reports if r.check_id == "equality_distinct_inputs"]
    max_eq = max(r.gap for r in eq)
    min_ne = min(r.gap for r in ne)
    calib = min(calibrate_strictness(geometric(mu)) for mu in MUS)
    calib = min(calib, min(calibrate_strictness(mixture_mean(mu)) for mu in MUS))
    ok = slack >= -1e-10 and bad == 0 and max_eq <= 1e-11 and min_ne >= 1e-8 and calib >= 1e-8
    assert _report(4, "additive complement inequality", ok,
                   f"{n} trials, min slack {slack:.1e}, equal-input gap {max_eq:.1e}, "
                   f"distinct-input gap {min_ne:.1e}, calibrated scalar floor {calib:.1e}", dt)


def test_c5_eigenvalue_complement_inequalities():
    t0 = time.perf_counter()
    res = run(RunConfig(seed=SEED, trials=200, suites=("reciprocal", "ratio")))
    slack, bad, n = _worst(res.reports)
    f = geometric(0.5)
    pair = list(reciprocal_eigen(f, COUNTEREXAMPLE_A, COUNTEREXAMPLE_B).values())
    pair += list(ratio_eigen(f, COUNTEREXAMPLE_A, COUNTEREXAMPLE_B).values())
    eig_ok = all(c.holds for c in pair)
    loewner_fail = all(not c.loewner.holds and c.loewner.witness_vector is not None for c in pair)
    dt = time.perf_counter() - t0
    ok = slack >= -1e-9 and bad == 0 and eig_ok and loewner_fail
    worst_witness = max(c.loewner.min_eigenvalue_of_difference for c in pair)
    assert _report(5, "eigenvalue complement inequalities", ok,
                   f"{n} comparisons, min slack {slack:.1e}; on the 2x2 pair eigenvalue forms hold={eig_ok}, "
                   f"operator forms fail={loewner_fail} (largest min eigenvalue {worst_witness:.1e})", dt)


def test_c6_double_barbour_values():
    t0 = time.perf_counter()
    h = 1e-6
    vals, slopes, ones = [], [], []
    for r in (0.2, 0.5, 0.8):
        f = barbour(barbour(power_function(2.0, r)))
        ones.append(abs(f(1.0) - 1.0))
        vals.append(abs(f(0.5) - 5 / 7))
        slopes.append(abs((f(1 + h) - f(1 - h)) / (2 * h) - 0.5))
    across = [barbour(barbour(power_function(2.0, r)))(0.5) for r in (0.1, 0.3, 0.6, 0.9)]
    spread = max(across) - min(across)
    dt = time.perf_counter() - t0
    ok = max(ones) <= 1e-9 and max(vals) <= 1e-9 and max(slopes) <= 1e-6 and spread <= 1e-9
    assert _report(6, "double Barbour values", ok,
                   f"|f(1)-1| {max(ones):.1e}, |f(1/2)-5/7| {max(vals):.1e}, slope error {max(slopes):.1e}, "
                   f"spread across r {spread:.1e}", dt)


def test_c7_scalar_suite():
    t0 = time.perf_counter()
    res = run(RunConfig(seed=SEED, trials=200, suites=("scalar",)))
    slack, bad, _ = _worst(res.reports)
    rng = np.random.default_rng(SEED)
    eq_max, strict_min = 0.0, np.inf
    for _ in range(500):
        n = int(rng.integers(2, 11))
        ws = rng.dirichlet(np.ones(n))
        ws = ws / ws.sum()
        x = rng.uniform(1e-3, 0.5)
        for c in scalar_kyfan_suite(ScalarMeansInput((x,) * n, tuple(ws))).values():
            eq_max = max(eq_max, abs(c.slack))
        m = int(rng.integers(2, 6))
        xs = rng.choice(np.arange(1, 51) / 100.0, size=m, replace=False)
        w = 0.1 + rng.dirichlet(np.ones(m)) * (1.0 - 0.1 * m)
        w = w / w.sum()
        for c in scalar_kyfan_suite(ScalarMeansInput(tuple(xs), tuple(w))).values():
            strict_min = min(strict_min, c.slack)
    dt = time.perf_counter() - t0
    ok = slack >= -1e-14 and bad == 0 and eq_max <= 1e-12 and strict_min >= 1e-10 and dt < 5
    assert _report(7, "scalar complement suite", ok,
                   f"10^4 inputs, min slack {slack:.1e}; equal points max |slack| {eq_max:.1e}, "
                   f"separated points min slack {strict_min:.1e}", dt)


def test_c8_sandwich():
    t0 = time.perf_counter()
    res = run(RunConfig(seed=SEED, trials=200, suites=("sandwich",)))
    slack, bad, n = _worst(res.reports)
    cross = crossing_construction()
    dt = time.perf_counter() - t0
    ok = slack >= -1e-10 and bad == 0 and cross["equality_with_distinct_inputs"] and cross["status"] == "expected"
    assert _report(8, "two-mean sandwich", ok,
                   f"{n} comparisons, min slack {slack:.1e}; crossing means gaps "
                   f"{max(cross['sandwich_gaps']):.1e} at distance {cross['input_distance']:.2f}, expected", dt)


def test_c9_oracles():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    eig_err = 0.0
    for n in range(1, 7):
        for _ in range(20):
            h = random_hermitian(rng, n)
            roots = np.sort(np.roots(np.poly(h.data)).real)[::-1]
            eig_err = max(eig_err, float(np.max(np.abs(eig_hermitian(h).eigenvalues - roots))))
    sq_err = 0.0
    for n in range(1, 9):
        h = random_hermitian(rng, n)
        sq = matrix_function(h, lambda t: t**2).data
        sq_err = max(sq_err, np.linalg.norm(sq - h.data @ h.data) / max(1.0, np.linalg.norm(h.data @ h.data)))
    grid = np.linspace(0.1, 3.0, 30)
    lemma_ok = True
    for a in (-0.5, -1.0, -2.0):
        for u in grid:
            for v in grid:
                p = power_bounds(u, v, a)
                strict = min(p.lower_slack, p.upper_slack) > 0
                equal = p.lower_slack == 0 and p.upper_slack == 0
                lemma_ok &= p.holds() and (equal if u == v else strict)
    dt = time.perf_counter() - t0
    ok = eig_err <= 1e-10 and sq_err <= 1e-12 and lemma_ok
    assert _report(9, "oracle checks", ok,
                   f"eigenvalue error {eig_err:.1e}, square error {sq_err:.1e}, power bounds grid {lemma_ok}", dt)

