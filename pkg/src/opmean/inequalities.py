"""Ky Fan type inequalities: scalar, Loewner-order and eigenvalue forms.

Throughout, ``A' = I - A`` and ``0 < A, B <= I/2``. Checks report a
*slack* (``rhs - lhs`` for scalars, the minimum eigenvalue of ``rhs - lhs``
for operators, the minimum per-index gap for eigenvalue sequences) so that
``holds`` is simply ``slack >= -tol``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, LinearMean
from .hermitian import (
    HermitianMatrix,
    OrderComparison,
    as_hermitian,
    congruence,
    eigvals_desc,
    inv_pd,
    inv_sqrt_pd,
    psd_check,
    same_dim,
    sqrt_psd,
)
from .means import (
    Pencil,
    adjoint_mean,
    arithmetic,
    arithmetic_op,
    barbour,
    complement,
    geometric_op,
    harmonic_op,
    power_function,
)
from .repfunc import RepresentingFunction
from .sampling import PAIR_MODES, random_band_pair

LOEWNER_TOL = 1e-10
EIGEN_TOL = 1e-9
SCALAR_TOL = 1e-14

# Strictness calibration; see calibrate_strictness().
EQUAL_DISTANCE = 1e-14
STRICT_DISTANCE = 0.01
EQUALITY_GAP = 1e-11
STRICT_GAP = 1e-8


# ---------------------------------------------------------------------------
# scalar classes


@dataclass(frozen=True)
class ScalarMeansInput:
    xs: tuple
    weights: tuple

    def __post_init__(self):
        xs = tuple(float(x) for x in self.xs)
        ws = tuple(float(w) for w in self.weights)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "weights", ws)
        if len(xs) != len(ws) or len(xs) < 2:
            raise DomainError("need at least two points and one weight per point")
        if any(not (0.0 < x <= 0.5) for x in xs):
            raise DomainError("every x_i must lie in (0, 1/2]")
        if any(w < 0 for w in ws) or abs(sum(ws) - 1.0) > 1e-12:
            raise DomainError("weights must be nonnegative and sum to 1")

    @classmethod
    def uniform(cls, xs) -> "ScalarMeansInput":
        return cls(tuple(xs), (1.0 / len(xs),) * len(xs))


def _amg(xs: np.ndarray, ws: np.ndarray):
    return float(ws @ xs), float(np.exp(ws @ np.log(xs))), float(1.0 / (ws @ (1.0 / xs)))


@dataclass(frozen=True)
class ScalarCheck:
    name: str
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    def holds(self, tol: float = SCALAR_TOL) -> bool:
        return self.slack >= -tol


SCALAR_CHECKS = (
    "additive_AG", "additive_AH",
    "reciprocal_GA", "reciprocal_HG", "reciprocal_HA",
    "ratio_AG", "ratio_GH", "ratio_AH",
)

NOT_COMPARABLE_NOTE = (
    "G' - H' versus G - H is not comparable in general and is deliberately "
    "absent from this suite"
)


def scalar_kyfan_suite(inp: ScalarMeansInput) -> dict:
    """All eight complement inequalities for weighted scalar means.

    Returns ``{name: ScalarCheck}``; each check compares the primed side
    (built from ``1 - x_i``) with the unprimed side.
    """
    xs = np.asarray(inp.xs)
    ws = np.asarray(inp.weights)
    a, g, h = _amg(xs, ws)
    a_, g_, h_ = _amg(1.0 - xs, ws)
    pairs = {
        "additive_AG": (a_ - g_, a - g),
        "additive_AH": (a_ - h_, a - h),
        "reciprocal_GA": (1 / g_ - 1 / a_, 1 / g - 1 / a),
        "reciprocal_HG": (1 / h_ - 1 / g_, 1 / h - 1 / g),
        "reciprocal_HA": (1 / h_ - 1 / a_, 1 / h - 1 / a),
        "ratio_AG": (a_ / g_, a / g),
        "ratio_GH": (g_ / h_, g / h),
        "ratio_AH": (a_ / h_, a / h),
    }
    return {k: ScalarCheck(k, lhs, rhs) for k, (lhs, rhs) in pairs.items()}


@dataclass(frozen=True)
class PowerBounds:
    """``a v^{a-1}(u - v) <= u^a - v^a <= a u^{a-1}(u - v)`` for ``a < 0``."""

    lower: float
    middle: float
    upper: float

    @property
    def lower_slack(self) -> float:
        return self.middle - self.lower

    @property
    def upper_slack(self) -> float:
        return self.upper - self.middle

    def holds(self, tol: float = 0.0) -> bool:
        return self.lower_slack >= -tol and self.upper_slack >= -tol


def power_bounds(u: float, v: float, a: float) -> PowerBounds:
    """Mean-value bounds on ``u^a - v^a``; both are equalities iff ``u == v``."""
    if u <= 0 or v <= 0 or a >= 0:
        raise DomainError("need u, v > 0 and a < 0")
    d = u - v
    return PowerBounds(a * v ** (a - 1) * d, u**a - v**a, a * u ** (a - 1) * d)


# ---------------------------------------------------------------------------
# operator comparisons


def _mu_of(f: RepresentingFunction) -> float:
    if not f.is_mean:
        raise DomainError(f"{f.label} is not normalised (f(1) = {f.at_one!r})")
    return f.mu


def _band_pair(a, b):
    a = as_hermitian(a)
    b = as_hermitian(b)
    same_dim(a, b)
    ca = complement(a, name="A")
    cb = complement(b, name="B")
    return ca.a, cb.a, ca.a_prime, cb.a_prime


@dataclass(frozen=True)
class EqualityVerdict:
    input_distance: float
    inequality_gap: float
    verdict: str

    @classmethod
    def classify(cls, distance: float, gap: float, thresholds: Optional[dict] = None) -> "EqualityVerdict":
        """Verdict from ``(distance, gap)`` alone.

        Equal inputs must give a gap within ``equality_gap``; inputs at least
        ``strict_distance`` apart must give a gap of at least ``strict_gap``.
        In between, the smaller gap reads as equality and anything larger as
        strict, without a failure either way.
        """
        t = {"equal_distance": EQUAL_DISTANCE, "strict_distance": STRICT_DISTANCE,
             "equality_gap": EQUALITY_GAP, "strict_gap": STRICT_GAP}
        t.update(thresholds or {})
        if distance <= t["equal_distance"]:
            verdict = "equality_consistent" if gap <= t["equality_gap"] else "inconsistent"
        elif distance >= t["strict_distance"]:
            verdict = "strict_consistent" if gap >= t["strict_gap"] else "inconsistent"
        else:
            verdict = "equality_consistent" if gap <= t["equality_gap"] else "strict_consistent"
        return cls(distance, gap, verdict)

    def to_dict(self) -> dict:
        return {"input_distance": self.input_distance, "inequality_gap": self.inequality_gap, "verdict": self.verdict}


@dataclass(frozen=True)
class AdditiveResult:
    lhs: HermitianMatrix
    rhs: HermitianMatrix
    comparison: OrderComparison
    equality: EqualityVerdict


def complement_additive(f: RepresentingFunction, a, b, tol: float = LOEWNER_TOL,
                        thresholds: Optional[dict] = None) -> AdditiveResult:
    """``A' nabla_mu B' - A' s B' <= A nabla_mu B - A s B`` with ``mu = f'(1)``."""
    mu = _mu_of(f)
    a, b, a_, b_ = _band_pair(a, b)
    lhs = arithmetic_op(a_, b_, mu) - Pencil(a_, b_).mean(f)
    rhs = arithmetic_op(a, b, mu) - Pencil(a, b).mean(f)
    diff = rhs - lhs
    verdict = EqualityVerdict.classify((a - b).norm(), diff.norm(), thresholds)
    return AdditiveResult(lhs, rhs, psd_check(diff, tol), verdict)


@dataclass(frozen=True)
class EigSeqComparison:
    """Per-index comparison ``lambda_j(lhs) <= lambda_j(rhs)``.

    ``loewner`` records the stronger operator statement ``lhs <= rhs``,
    which is not claimed and may fail.
    """

    name: str
    lhs_eigs: np.ndarray
    rhs_eigs: np.ndarray
    max_violation: float
    holds: bool
    tolerance: float
    loewner: Optional[OrderComparison] = None

    @property
    def slack(self) -> float:
        return -self.max_violation

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "lhs_eigs": self.lhs_eigs.tolist(),
            "rhs_eigs": self.rhs_eigs.tolist(),
            "max_violation": self.max_violation,
            "holds": self.holds,
            "tolerance": self.tolerance,
        }
        if self.loewner is not None:
            out["loewner"] = self.loewner.to_dict()
        return out


def compare_eigenvalues(name: str, lhs: HermitianMatrix, rhs: HermitianMatrix,
                        tol: float = EIGEN_TOL, loewner_tol: float = LOEWNER_TOL) -> EigSeqComparison:
    le = eigvals_desc(lhs)
    re = eigvals_desc(rhs)
    worst = float(np.max(le - re))
    return EigSeqComparison(name, le, re, worst, worst <= tol, tol, psd_check(rhs - lhs, loewner_tol))


def _reciprocal_pieces(f, a, b):
    mu = f.mu
    s_inv = inv_pd(Pencil(a, b).mean(f))
    return {
        "mean": s_inv - inv_pd(arithmetic_op(a, b, mu)),
        "adjoint": inv_pd(harmonic_op(a, b, mu)) - inv_pd(adjoint_mean(f, a, b)),
    }


def reciprocal_eigen(f: RepresentingFunction, a, b, tol: float = EIGEN_TOL) -> dict:
    """Eigenvalue forms of the reciprocal complement inequalities.

    ``mean``:    ``(X s Y)^{-1} - (X nabla_mu Y)^{-1}``
    ``adjoint``: ``(X !_mu Y)^{-1} - (X s* Y)^{-1}``

    each with ``X, Y`` = ``A', B'`` on the left and ``A, B`` on the right.
    """
    _mu_of(f)
    a, b, a_, b_ = _band_pair(a, b)
    left = _reciprocal_pieces(f, a_, b_)
    right = _reciprocal_pieces(f, a, b)
    return {k: compare_eigenvalues(f"reciprocal_{k}", left[k], right[k], tol) for k in left}


def _ratio_pieces(f, a, b):
    mu = f.mu
    return {
        "mean": congruence(inv_sqrt_pd(Pencil(a, b).mean(f)), arithmetic_op(a, b, mu)),
        "adjoint": congruence(inv_sqrt_pd(harmonic_op(a, b, mu)), adjoint_mean(f, a, b)),
    }


def ratio_eigen(f: RepresentingFunction, a, b, tol: float = EIGEN_TOL) -> dict:
    """Eigenvalue forms of the multiplicative complement inequalities.

    ``mean``:    ``(X s Y)^{-1/2} (X nabla_mu Y) (X s Y)^{-1/2}``
    ``adjoint``: ``(X !_mu Y)^{-1/2} (X s* Y) (X !_mu Y)^{-1/2}``
    """
    _mu_of(f)
    a, b, a_, b_ = _band_pair(a, b)
    left = _ratio_pieces(f, a_, b_)
    right = _ratio_pieces(f, a, b)
    return {k: compare_eigenvalues(f"ratio_{k}", left[k], right[k], tol) for k in left}


# ---------------------------------------------------------------------------
# two-mean sandwich


@dataclass(frozen=True)
class SandwichResult:
    left: OrderComparison
    right: OrderComparison
    outer_lower: HermitianMatrix
    middle: HermitianMatrix
    outer_upper: HermitianMatrix

    @property
    def holds(self) -> bool:
        return self.left.holds and self.right.holds

    def gaps(self) -> tuple:
        """Frobenius norms of ``middle - outer_lower`` and ``outer_upper - middle``."""
        return (self.middle - self.outer_lower).norm(), (self.outer_upper - self.middle).norm()


def sandwich(f: RepresentingFunction, g: RepresentingFunction, a, b, tol: float = LOEWNER_TOL) -> SandwichResult:
    """With ``S = A s B`` (from ``f``) and ``X = A t B`` (from ``g``)::

        X^{-1}(X - S)X^{-1} <= S^{-1} - X^{-1} <= S^{-1}(X - S)S^{-1}
    """
    p = Pencil(a, b)
    s = p.mean(f)
    x = p.mean(g)
    s_inv, x_inv = inv_pd(s), inv_pd(x)
    lower = congruence(x_inv, x - s)
    middle = s_inv - x_inv
    upper = congruence(s_inv, x - s)
    return SandwichResult(psd_check(middle - lower, tol), psd_check(upper - middle, tol), lower, middle, upper)


def sandwich_arithmetic(f: RepresentingFunction, a, b, tol: float = LOEWNER_TOL) -> SandwichResult:
    """:func:`sandwich` with the arithmetic mean ``nabla_mu``, ``mu = f'(1)``, as the second mean."""
    return sandwich(f, arithmetic(_mu_of(f)), a, b, tol)


# ---------------------------------------------------------------------------
# the 2 x 2 counterexample


COUNTEREXAMPLE_A = np.array([[1 / 5, -1 / 10], [-1 / 10, 1 / 3]])
COUNTEREXAMPLE_B = np.array([[2 / 15, -1 / 10], [-1 / 10, 1 / 3]])
REFERENCE_VALUES = {
    "reciprocal_AG": np.array([[0.226844, 0.0685098], [0.0685098, 0.0204844]]),
    "ratio_AG": np.array([[0.0292946, 0.00560064], [0.00560064, 0.00101542]]),
    "ratio_AG_outer": np.array([[0.0293063, 0.00556985], [0.00556985, 0.00100374]]),
}
REFERENCE_TOL = 5e-6
INDEFINITE_TOL = 1e-6


def _counterexample_terms(a, b):
    ar = arithmetic_op(a, b, 0.5)
    gm = geometric_op(a, b, 0.5)
    hm = harmonic_op(a, b, 0.5)
    ar_inv, gm_inv, hm_inv = inv_pd(ar), inv_pd(gm), inv_pd(hm)
    return {
        "reciprocal_AG": gm_inv - ar_inv,
        "reciprocal_HG": hm_inv - gm_inv,
        "reciprocal_HA": hm_inv - ar_inv,
        "ratio_AG": congruence(inv_sqrt_pd(gm), ar),
        "ratio_AG_outer": congruence(sqrt_psd(ar), gm_inv),
        "ratio_GH": congruence(inv_sqrt_pd(hm), gm),
        "ratio_AH": congruence(inv_sqrt_pd(hm), ar),
    }


@dataclass(frozen=True)
class CounterexampleReport:
    differences: dict  # name -> HermitianMatrix, unprimed minus primed
    loewner: dict  # name -> OrderComparison of "difference >= 0"
    eigen: dict  # name -> EigSeqComparison, primed vs unprimed
    reference_errors: dict  # name -> max entrywise deviation from REFERENCE_VALUES

    @property
    def matches_reference(self) -> bool:
        return all(e <= REFERENCE_TOL for e in self.reference_errors.values())

    @property
    def all_indefinite(self) -> bool:
        return all(c.min_eigenvalue_of_difference < -INDEFINITE_TOL for c in self.loewner.values())

    @property
    def eigen_hold(self) -> bool:
        return all(c.holds for c in self.eigen.values())

    def to_dict(self) -> dict:
        return {
            "differences": {k: np.real(v.data).tolist() for k, v in self.differences.items()},
            "reference_errors": self.reference_errors,
            "loewner": {k: v.to_dict() for k, v in self.loewner.items()},
            "eigen": {k: v.to_dict() for k, v in self.eigen.items()},
            "matches_reference": self.matches_reference,
            "all_indefinite": self.all_indefinite,
            "eigen_hold": self.eigen_hold,
        }


def reproduce_counterexample(tol: float = EIGEN_TOL) -> CounterexampleReport:
    """Equal-weight means of the fixed order-comparable 2 x 2 pair.

    Every operator difference (unprimed minus primed) of the reciprocal and
    ratio classes is indefinite here, while the eigenvalue sequences remain
    ordered index by index.
    """
    a = HermitianMatrix(COUNTEREXAMPLE_A)
    b = HermitianMatrix(COUNTEREXAMPLE_B)
    eye = HermitianMatrix.identity(2)
    unprimed = _counterexample_terms(a, b)
    primed = _counterexample_terms(eye - a, eye - b)
    diffs = {k: unprimed[k] - primed[k] for k in unprimed}
    loewner = {k: psd_check(d, 0.0) for k, d in diffs.items()}
    eigen = {k: compare_eigenvalues(k, primed[k], unprimed[k], tol) for k in unprimed}
    errors = {k: float(np.max(np.abs(diffs[k].data - ref))) for k, ref in REFERENCE_VALUES.items()}
    return CounterexampleReport(diffs, loewner, eigen, errors)


# ---------------------------------------------------------------------------
# equality conditions


def crossing_pair(r: float = 0.3, s: float = 0.6):
    """Two distinct means agreeing at ``t = 1/2`` with equal slope at 1.

    Both are the doubly Barbour-transformed powers ``(2t)^r`` and ``(2t)^s``;
    each takes the value 5/7 at 1/2 and has derivative 1/2 at 1.
    """
    if not 0 < r < s < 1:
        raise DomainError("need 0 < r < s < 1")
    f = barbour(barbour(power_function(2.0, r))).with_label(f"barbour2:(2t)^r:r={r:g}")
    g = barbour(barbour(power_function(2.0, s))).with_label(f"barbour2:(2t)^r:r={s:g}")
    return f, g


@dataclass
class EqualitySummary:
    mean_label: str
    equal_trials: int = 0
    strict_trials: int = 0
    max_equal_gap: float = 0.0
    min_strict_gap: float = math.inf
    inconsistent: list = field(default_factory=list)
    crossing: Optional[dict] = None

    @property
    def passes(self) -> bool:
        crossing_ok = self.crossing is None or self.crossing["equality_with_distinct_inputs"]
        return not self.inconsistent and crossing_ok

    def to_dict(self) -> dict:
        return {
            "mean": self.mean_label,
            "equal_trials": self.equal_trials,
            "strict_trials": self.strict_trials,
            "max_equal_gap": self.max_equal_gap,
            "min_strict_gap": self.min_strict_gap,
            "inconsistent": self.inconsistent,
            "crossing": self.crossing,
            "passes": self.passes,
        }


def crossing_construction(r: float = 0.3, s: float = 0.6, tol: float = EQUALITY_GAP) -> dict:
    """Sandwich on ``A = 2I, B = I`` for the :func:`crossing_pair` means.

    The spectrum of ``A^{-1/2} B A^{-1/2}`` is ``{1/2}``, where the two
    means agree, so both sandwich inequalities are equalities although
    ``A != B``. This is expected behaviour, not a failure.
    """
    f, g = crossing_pair(r, s)
    a = HermitianMatrix.diag([2.0, 2.0])
    b = HermitianMatrix.identity(2)
    res = sandwich(f, g, a, b)
    gaps = res.gaps()
    return {
        "means": [f.label, g.label],
        "values_at_half": [f(0.5), g(0.5)],
        "slopes_at_one": [f.mu, g.mu],
        "input_distance": (a - b).norm(),
        "sandwich_gaps": list(gaps),
        "equality_with_distinct_inputs": max(gaps) <= tol and (a - b).norm() > 0,
        "status": "expected",
    }


def equality_condition_suite(f: RepresentingFunction, trials: int = 50, seed: int = 0,
                             dims=(1, 6), thresholds: Optional[dict] = None,
                             include_crossing: bool = True) -> EqualitySummary:
    """Equality cases of the additive complement inequality for non-linear ``f``.

    Half the trials use ``B = A`` (gap must vanish); the rest use pairs at
    least ``strict_distance`` apart (gap must be at least ``strict_gap``).
    """
    if f.is_linear:
        raise LinearMean(f"{f.label} is linear; both sides vanish identically")
    t = {"strict_distance": STRICT_DISTANCE}
    t.update(thresholds or {})
    out = EqualitySummary(f.label)
    for i in range(trials):
        rng = np.random.default_rng([seed, i])
        n = int(rng.integers(dims[0], dims[1] + 1))
        a, b = random_band_pair(rng, n, PAIR_MODES[i % len(PAIR_MODES)])
        if i % 2 == 0:
            b = a
        elif (a - b).norm() < t["strict_distance"]:
            continue
        v = complement_additive(f, a, b, thresholds=thresholds).equality
        if i % 2 == 0:
            out.equal_trials += 1
            out.max_equal_gap = max(out.max_equal_gap, v.inequality_gap)
        else:
            out.strict_trials += 1
            out.min_strict_gap = min(out.min_strict_gap, v.inequality_gap)
        if v.verdict == "inconsistent":
            out.inconsistent.append({"trial": i, **v.to_dict()})
    if include_crossing:
        out.crossing = crossing_construction()
    return out


def calibrate_strictness(f: RepresentingFunction, distance: float = STRICT_DISTANCE, samples: int = 401) -> float:
    """Smallest scalar gap of the additive complement inequality at ``|a - b| = distance``.

    For 1 x 1 inputs both sides are closed-form numbers, so the minimum over
    ``a`` across the band bounds the gap a strictness threshold may demand.
    """
    mu = _mu_of(f)
    lo, hi = 0.05, 0.45
    a = np.linspace(lo, hi - distance, samples)
    worst = math.inf
    for x, y in ((a, a + distance), (a + distance, a)):
        rhs = (1 - mu) * x + mu * y - x * f(y / x)
        xp, yp = 1 - x, 1 - y
        lhs = (1 - mu) * xp + mu * yp - xp * f(yp / xp)
        worst = min(worst, float(np.min(rhs - lhs)))
    return worst

