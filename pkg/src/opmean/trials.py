"""Seeded randomized suites producing per-check trial reports.

Every trial owns ``numpy.random.default_rng([seed, suite_index, trial])``,
so results do not depend on worker count or execution order. Reports are
sorted by ``(check_id, trial)`` before they leave this module.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import identities, inequalities
from .errors import LinearMean
from .means import geometric, harmonic, parse_mean_spec
from .measure import dirac, f_from_measure, geometric_measure
from .repfunc import RepresentingFunction
from .sampling import PAIR_MODES, random_band_pair, random_pd_pair

SUITES = ("identities", "additive", "reciprocal", "ratio", "sandwich", "scalar", "equality", "counterexample")
DEFAULT_SUITES = SUITES
MU_GRID = tuple(round(0.1 * k, 1) for k in range(1, 10))
MEAN_KINDS = ("geometric", "harmonic", "measure")
SCALAR_TRIALS_PER_TRIAL = 50

DEFAULT_TOLERANCES = {
    "identity": 1e-9,
    "loewner": inequalities.LOEWNER_TOL,
    "eigen": inequalities.EIGEN_TOL,
    "scalar": inequalities.SCALAR_TOL,
    "equality_gap": inequalities.EQUALITY_GAP,
    "strict_gap": inequalities.STRICT_GAP,
    "strict_distance": inequalities.STRICT_DISTANCE,
}


@dataclass
class TrialReport:
    seed: int
    trial: int
    dim: int
    mean_spec: str
    check_id: str
    slack: float
    gap: float
    verdict: str
    witness: Optional[list] = None

    @property
    def failed(self) -> bool:
        return self.verdict in ("fail", "inconsistent")

    def to_dict(self) -> dict:
        out = {
            "seed": self.seed,
            "trial": self.trial,
            "dim": self.dim,
            "mean_spec": self.mean_spec,
            "check_id": self.check_id,
            "slack": self.slack,
            "gap": self.gap,
            "verdict": self.verdict,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class RunConfig:
    seed: int = 20250101
    trials: int = 200
    dims: tuple = (1, 8)
    suites: tuple = DEFAULT_SUITES
    mean_spec: Optional[str] = None
    tolerances: dict = field(default_factory=dict)
    workers: int = 1

    def tol(self, name: str) -> float:
        return self.tolerances.get(name, DEFAULT_TOLERANCES[name])


@dataclass
class RunResult:
    reports: list
    extras: dict

    @property
    def failures(self) -> int:
        return sum(r.failed for r in self.reports)

    def summary(self) -> list:
        """Rows ``(check_id, trials, min_slack, failures)`` sorted by check id."""
        rows = {}
        for r in self.reports:
            n, lo, bad = rows.get(r.check_id, (0, math.inf, 0))
            rows[r.check_id] = (n + 1, min(lo, r.slack), bad + int(r.failed))
        return [(k, *rows[k]) for k in sorted(rows)]

    def jsonl(self) -> str:
        return "".join(json.dumps(r.to_dict(), sort_keys=True) + "\n" for r in self.reports)

    def csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check_id", "trials", "min_slack", "failures"])
        for check_id, n, lo, bad in self.summary():
            w.writerow([check_id, n, repr(float(lo)), bad])
        return buf.getvalue()


# ---------------------------------------------------------------------------
# mean pools


def mixture_mean(mu: float) -> RepresentingFunction:
    """Mean of the measure ``(delta_mu + geometric density of weight mu) / 2``."""
    m = dirac(mu, 0.5) + geometric_measure(mu) * 0.5
    return f_from_measure(m, f"measure:mix({mu:g})")


def pool_mean(kind: str, mu: float) -> RepresentingFunction:
    if kind == "geometric":
        return geometric(mu)
    if kind == "harmonic":
        return harmonic(mu)
    if kind == "measure":
        return mixture_mean(mu)
    raise ValueError(f"unknown mean kind {kind!r}")


def _draw_mean(cfg: RunConfig, rng: np.random.Generator, trial: int, extra: bool = False) -> RepresentingFunction:
    if cfg.mean_spec is not None:
        return parse_mean_spec(cfg.mean_spec)
    kinds = MEAN_KINDS + (("barbour2",) if extra else ())
    kind = kinds[trial % len(kinds)]
    if kind == "barbour2":
        r = float(rng.choice(MU_GRID))
        return parse_mean_spec(f"barbour2:(2t)^r:r={r:g}")
    return pool_mean(kind, float(rng.choice(MU_GRID)))


def _dim(cfg: RunConfig, rng: np.random.Generator, lo: int = 1) -> int:
    return int(rng.integers(max(lo, cfg.dims[0]), max(lo, cfg.dims[1]) + 1))


def _witness(cmp) -> Optional[list]:
    w = cmp.witness_vector
    return None if w is None else [[float(z.real), float(z.imag)] for z in w]


def _order(cfg, trial, n, f, check_id, cmp, tol, gap=None, verdict=None) -> TrialReport:
    ok = cmp.min_eigenvalue_of_difference >= -tol
    return TrialReport(cfg.seed, trial, n, f.label, check_id, float(cmp.min_eigenvalue_of_difference),
                       float(gap if gap is not None else 0.0),
                       verdict if verdict is not None and ok else ("pass" if ok else "fail"),
                       None if ok else _witness(cmp))


# ---------------------------------------------------------------------------
# suites: each returns the reports of one trial


def _identities_trial(cfg: RunConfig, rng, trial: int) -> list:
    n = _dim(cfg, rng)
    f = _draw_mean(cfg, rng, trial)
    a, b = random_pd_pair(rng, n)
    tol = cfg.tol("identity")
    out = []
    for r in identities.all_identity_residuals(f, a, b, tol):
        out.append(TrialReport(cfg.seed, trial, n, f.label, r.name, -r.relative, r.relative,
                               "pass" if r.relative <= tol else "fail"))
    return out


def _additive_trial(cfg: RunConfig, rng, trial: int) -> list:
    n = _dim(cfg, rng)
    f = _draw_mean(cfg, rng, trial, extra=True)
    a, b = random_band_pair(rng, n, PAIR_MODES[trial % len(PAIR_MODES)])
    res = inequalities.complement_additive(f, a, b, cfg.tol("loewner"), _thresholds(cfg))
    return [_order(cfg, trial, n, f, "additive", res.comparison, cfg.tol("loewner"),
                   res.equality.inequality_gap, res.equality.verdict)]


def _eigen_reports(cfg, trial, n, f, comparisons) -> list:
    tol = cfg.tol("eigen")
    out = []
    for c in comparisons.values():
        ok = c.max_violation <= tol
        out.append(TrialReport(cfg.seed, trial, n, f.label, c.name, -c.max_violation,
                               float(np.max(np.abs(c.rhs_eigs - c.lhs_eigs))), "pass" if ok else "fail"))
    return out


def _reciprocal_trial(cfg: RunConfig, rng, trial: int) -> list:
    n = _dim(cfg, rng)
    f = _draw_mean(cfg, rng, trial, extra=True)
    a, b = random_band_pair(rng, n, PAIR_MODES[trial % len(PAIR_MODES)])
    return _eigen_reports(cfg, trial, n, f, inequalities.reciprocal_eigen(f, a, b, cfg.tol("eigen")))


def _ratio_trial(cfg: RunConfig, rng, trial: int) -> list:
    n = _dim(cfg, rng)
    f = _draw_mean(cfg, rng, trial, extra=True)
    a, b = random_band_pair(rng, n, PAIR_MODES[trial % len(PAIR_MODES)])
    return _eigen_reports(cfg, trial, n, f, inequalities.ratio_eigen(f, a, b, cfg.tol("eigen")))


def _sandwich_trial(cfg: RunConfig, rng, trial: int) -> list:
    n = _dim(cfg, rng)
    f = _draw_mean(cfg, rng, trial)
    g = pool_mean(MEAN_KINDS[(trial + 1) % len(MEAN_KINDS)], float(rng.choice(MU_GRID)))
    a, b = random_pd_pair(rng, n)
    tol = cfg.tol("loewner")
    pair = f.with_label(f"{f.label}|{g.label}")
    general = inequalities.sandwich(f, g, a, b, tol)
    arith = inequalities.sandwich_arithmetic(f, a, b, tol)
    return [
        _order(cfg, trial, n, pair, "sandwich_left", general.left, tol),
        _order(cfg, trial, n, pair, "sandwich_right", general.right, tol),
        _order(cfg, trial, n, f, "sandwich_arithmetic_left", arith.left, tol),
        _order(cfg, trial, n, f, "sandwich_arithmetic_right", arith.right, tol),
    ]


def _scalar_trial(cfg: RunConfig, rng, trial: int) -> list:
    """``SCALAR_TRIALS_PER_TRIAL`` random inputs, reduced to the worst slack per check."""
    tol = cfg.tol("scalar")
    worst = {k: math.inf for k in inequalities.SCALAR_CHECKS}
    size = 0
    for _ in range(SCALAR_TRIALS_PER_TRIAL):
        size = int(rng.integers(2, 11))
        xs = rng.uniform(0.0, 0.5, size)
        xs = np.where(xs == 0.0, 0.5, xs)
        ws = rng.dirichlet(np.ones(size))
        ws /= ws.sum()
        checks = inequalities.scalar_kyfan_suite(inequalities.ScalarMeansInput(tuple(xs), tuple(ws)))
        for k, c in checks.items():
            worst[k] = min(worst[k], c.slack)
    return [TrialReport(cfg.seed, trial, size, "scalar", f"scalar_{k}", s, 0.0, "pass" if s >= -tol else "fail")
            for k, s in worst.items()]


def _equality_trial(cfg: RunConfig, rng, trial: int) -> list:
    n = _dim(cfg, rng)
    f = _draw_mean(cfg, rng, trial, extra=True)
    if f.is_linear:
        raise LinearMean(f"{f.label} is linear; the equality conditions need a non-linear mean")
    a, b = random_band_pair(rng, n, PAIR_MODES[trial % len(PAIR_MODES)])
    equal = trial % 2 == 0
    if equal:
        b = a
    elif (a - b).norm() < cfg.tol("strict_distance"):
        return []
    v = inequalities.complement_additive(f, a, b, cfg.tol("loewner"), _thresholds(cfg)).equality
    check = "equality_equal_inputs" if equal else "equality_distinct_inputs"
    slack = cfg.tol("equality_gap") - v.inequality_gap if equal else v.inequality_gap - cfg.tol("strict_gap")
    return [TrialReport(cfg.seed, trial, n, f.label, check, slack, v.inequality_gap, v.verdict)]


def _thresholds(cfg: RunConfig) -> dict:
    return {k: cfg.tol(k) for k in ("equality_gap", "strict_gap", "strict_distance")}


_TRIAL_FUNCS = {
    "identities": _identities_trial,
    "additive": _additive_trial,
    "reciprocal": _reciprocal_trial,
    "ratio": _ratio_trial,
    "sandwich": _sandwich_trial,
    "scalar": _scalar_trial,
    "equality": _equality_trial,
}


def _run_chunk(args) -> list:
    cfg, suite, start, stop = args
    func = _TRIAL_FUNCS[suite]
    index = SUITES.index(suite)
    out = []
    for trial in range(start, stop):
        out.extend(func(cfg, np.random.default_rng([cfg.seed, index, trial]), trial))
    return out


def _counterexample_reports(cfg: RunConfig) -> tuple:
    rep = inequalities.reproduce_counterexample(cfg.tol("eigen"))
    out = []
    for k, cmp in rep.loewner.items():
        # The operator form is expected to fail here; a witness is the pass condition.
        ok = cmp.min_eigenvalue_of_difference < -inequalities.INDEFINITE_TOL
        out.append(TrialReport(cfg.seed, 0, 2, "geometric:0.5", f"counterexample_loewner_{k}",
                               cmp.min_eigenvalue_of_difference, 0.0, "pass" if ok else "fail", _witness(cmp)))
    for k, c in rep.eigen.items():
        out.append(TrialReport(cfg.seed, 0, 2, "geometric:0.5", f"counterexample_eigen_{k}", -c.max_violation,
                               0.0, "pass" if c.holds else "fail"))
    for k, err in rep.reference_errors.items():
        out.append(TrialReport(cfg.seed, 0, 2, "geometric:0.5", f"counterexample_reference_{k}", -err, err,
                               "pass" if err <= inequalities.REFERENCE_TOL else "fail"))
    return out, rep.to_dict()


def run(cfg: RunConfig) -> RunResult:
    """Run the configured suites; reports come back sorted by ``(check_id, trial)``."""
    for s in cfg.suites:
        if s not in SUITES:
            raise ValueError(f"unknown suite {s!r}; choose from {', '.join(SUITES)}")
    jobs = []
    for s in cfg.suites:
        if s == "counterexample":
            continue
        step = max(1, math.ceil(cfg.trials / max(1, cfg.workers)))
        jobs.extend((cfg, s, i, min(i + step, cfg.trials)) for i in range(0, cfg.trials, step))
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            chunks = list(pool.map(_run_chunk, jobs))
    else:
        chunks = [_run_chunk(j) for j in jobs]
    reports = [r for chunk in chunks for r in chunk]
    extras = {}
    if "counterexample" in cfg.suites:
        extra, extras["counterexample"] = _counterexample_reports(cfg)
        reports.extend(extra)
    if "equality" in cfg.suites:
        extras["crossing"] = inequalities.crossing_construction(tol=cfg.tol("equality_gap"))
        c = extras["crossing"]
        reports.append(TrialReport(cfg.seed, 0, 2, " vs ".join(c["means"]), "equality_crossing_means",
                                   -max(c["sandwich_gaps"]), max(c["sandwich_gaps"]),
                                   "equality_expected" if c["equality_with_distinct_inputs"] else "fail"))
    reports.sort(key=lambda r: (r.check_id, r.trial))
    return RunResult(reports, extras)
