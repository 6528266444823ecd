"""Kubo-Ando means: named families, transforms, and operator evaluation.

A connection with representing function ``f`` acts on positive definite
``A, B`` as ``A s B = A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}``. The argument
order is fixed: ``f`` always sees ``A^{-1/2} B A^{-1/2}``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, PreconditionViolated, SpecParseError
from .hermitian import (
    HermitianMatrix,
    _apply_scalar,
    _check_pd,
    as_hermitian,
    congruence,
    eig_hermitian,
    eigvals_desc,
    inv_pd,
    same_dim,
)
from .measure import (
    arithmetic_measure,
    dirac,
    f_from_measure,
    geometric_measure,
    load_measure,
    measure_k,
)
from .repfunc import RepresentingFunction

# ---------------------------------------------------------------------------
# named families


def _check_weight(mu: float) -> float:
    mu = float(mu)
    if not 0.0 <= mu <= 1.0:
        raise DomainError(f"weight mu must lie in [0, 1], got {mu!r}")
    return mu


def arithmetic(mu: float) -> RepresentingFunction:
    mu = _check_weight(mu)
    return RepresentingFunction(
        func=lambda t: (1.0 - mu) + mu * t,
        mu=mu,
        second_at_one=0.0,
        label=f"arithmetic:{mu:g}",
        measure=arithmetic_measure(mu),
    )


def geometric(mu: float) -> RepresentingFunction:
    mu = _check_weight(mu)
    if mu in (0.0, 1.0):
        f = arithmetic(mu)
        return RepresentingFunction(lambda t: t**mu, mu, 0.0, f"geometric:{mu:g}", measure=f.measure)
    m = geometric_measure(mu)
    coef = 0.5 * mu * (1.0 - mu)
    return RepresentingFunction(
        func=lambda t: t**mu,
        mu=mu,
        second_at_one=mu * (mu - 1.0),
        label=f"geometric:{mu:g}",
        measure=m,
        tau_func=lambda t: coef / measure_k(m, t),
    )


def harmonic(mu: float) -> RepresentingFunction:
    mu = _check_weight(mu)
    if mu == 0.0:
        func = np.ones_like
    else:
        def func(t):
            return t / ((1.0 - mu) * t + mu)
    return RepresentingFunction(
        func=func,
        mu=mu,
        second_at_one=-2.0 * mu * (1.0 - mu),
        label=f"harmonic:{mu:g}",
        measure=dirac(mu),
        tau_func=lambda t: mu + (1.0 - mu) * t,
    )


_NAMED = {"arithmetic": arithmetic, "geometric": geometric, "harmonic": harmonic}


def named_mean(kind: str, mu: float) -> RepresentingFunction:
    """``1 - mu + mu t``, ``t**mu`` or ``(1 - mu + mu/t)^{-1}``."""
    try:
        return _NAMED[kind](mu)
    except KeyError:
        raise ValueError(f"unknown mean kind {kind!r}; expected one of {sorted(_NAMED)}") from None


def power_function(scale: float, r: float) -> RepresentingFunction:
    """``t -> (scale t)**r``: operator monotone for ``0 <= r <= 1``, not normalized."""
    if not 0.0 <= r <= 1.0 or scale <= 0:
        raise DomainError(f"(c t)^r needs c > 0 and 0 <= r <= 1, got c={scale!r}, r={r!r}")
    c = scale**r
    return RepresentingFunction(
        func=lambda t: (scale * t) ** r,
        mu=r * c,
        second_at_one=r * (r - 1.0) * c,
        label=f"({scale:g}t)^{r:g}",
        at_one=c,
    )


# ---------------------------------------------------------------------------
# transforms; Taylor data at 1 follows from the chain rule with
# c = f(1), d = f'(1), e = f''(1)


def adjoint(f: RepresentingFunction) -> RepresentingFunction:
    """``t -> 1 / f(1/t)``."""
    c, d, e = f.at_one, f.mu, f.second_at_one
    inner = f.func

    def func(t):
        with np.errstate(divide="ignore"):
            s = 1.0 / t
        return 1.0 / inner(s)

    return RepresentingFunction(
        func=func,
        mu=d / c**2,
        second_at_one=-(e + 2.0 * d) / c**2 + 2.0 * d**2 / c**3,
        label=f"adjoint({f.label})",
        at_one=1.0 / c,
    )


def transpose(f: RepresentingFunction) -> RepresentingFunction:
    """``t -> t f(1/t)``; the measure is reflected through 1/2."""
    inner = f.func

    def func(t):
        out = np.empty_like(t)
        pos = t > 0
        out[pos] = t[pos] * inner(1.0 / t[pos])
        # right limit at 0 is the slope of f at infinity
        out[~pos] = inner(np.full((~pos).sum(), 1e300)) / 1e300
        return out

    tau_func = None
    if f.tau_func is not None:
        g = f.tau_func

        def tau_func(t):
            return t * g(1.0 / t)

    return RepresentingFunction(
        func=func,
        mu=f.at_one - f.mu,
        second_at_one=f.second_at_one,
        label=f"transpose({f.label})",
        at_one=f.at_one,
        measure=f.measure.reflected() if f.measure is not None else None,
        tau_func=tau_func,
    )


def dual(f: RepresentingFunction) -> RepresentingFunction:
    """``t -> t / f(t)``, built as the transpose of the adjoint."""
    return transpose(adjoint(f)).with_label(f"dual({f.label})")


def barbour(f: RepresentingFunction) -> RepresentingFunction:
    """``t -> (t + f(t)) / (1 + f(t))``; always normalized with slope ``1/(1+f(1))``."""
    c, d = f.at_one, f.mu
    inner = f.func

    def func(t):
        v = inner(t)
        return (t + v) / (1.0 + v)

    return RepresentingFunction(
        func=func,
        mu=1.0 / (1.0 + c),
        second_at_one=-2.0 * d / (1.0 + c) ** 2,
        label=f"barbour({f.label})",
    )


# ---------------------------------------------------------------------------
# operator evaluation


class Pencil:
    """Spectral data of a positive definite pair ``(A, B)``.

    Holds ``A^{1/2}``, ``A^{-1/2}`` and the eigendecomposition of
    ``T = A^{-1/2} B A^{-1/2}`` so that any number of connections of the
    same pair cost one congruence each.
    """

    def __init__(self, a, b):
        a = as_hermitian(a)
        b = as_hermitian(b)
        same_dim(a, b)
        da = eig_hermitian(a)
        _check_pd(da.eigenvalues)
        r = np.sqrt(da.eigenvalues)
        self.a, self.b = a, b
        self.root = da.apply(r)
        self.inv_root = da.apply(1.0 / r)
        self.t = eig_hermitian(congruence(self.inv_root, b))
        _check_pd(self.t.eigenvalues)

    @property
    def spectrum(self) -> np.ndarray:
        """Eigenvalues of ``A^{-1/2} B A^{-1/2}``, decreasing."""
        return self.t.eigenvalues

    def apply(self, phi: Callable) -> HermitianMatrix:
        """``A^{1/2} phi(T) A^{1/2}``."""
        return congruence(self.root, self.t.apply(_apply_scalar(phi, self.t.eigenvalues)))

    def mean(self, f: RepresentingFunction) -> HermitianMatrix:
        return self.apply(f)


def evaluate_mean(f: RepresentingFunction, a, b) -> HermitianMatrix:
    """``A s B = A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}`` for positive definite ``A, B``."""
    return Pencil(a, b).mean(f)


def arithmetic_op(a, b, mu: float) -> HermitianMatrix:
    """``A nabla_mu B = (1 - mu) A + mu B``."""
    return (1.0 - mu) * as_hermitian(a) + mu * as_hermitian(b)


def harmonic_op(a, b, mu: float) -> HermitianMatrix:
    """``A !_mu B = ((1 - mu) A^{-1} + mu B^{-1})^{-1}``."""
    return inv_pd((1.0 - mu) * inv_pd(a) + mu * inv_pd(b))


def geometric_op(a, b, mu: float) -> HermitianMatrix:
    """``A #_mu B = A^{1/2} (A^{-1/2} B A^{-1/2})^mu A^{1/2}``."""
    return evaluate_mean(geometric(mu), a, b)


def adjoint_mean(f: RepresentingFunction, a, b) -> HermitianMatrix:
    """``A s* B = (A^{-1} s B^{-1})^{-1}``."""
    return inv_pd(evaluate_mean(f, inv_pd(a), inv_pd(b)))


def transpose_mean(f: RepresentingFunction, a, b) -> HermitianMatrix:
    """``A s0 B = B s A``."""
    return evaluate_mean(f, b, a)


def dual_mean(f: RepresentingFunction, a, b) -> HermitianMatrix:
    """``A s^perp B = (B^{-1} s A^{-1})^{-1}``."""
    return inv_pd(evaluate_mean(f, inv_pd(b), inv_pd(a)))


# ---------------------------------------------------------------------------
# complement pairs 0 < A <= I/2, A' = I - A


@dataclass(frozen=True)
class ComplementPair:
    a: HermitianMatrix
    a_prime: HermitianMatrix


def complement(a, tol: float = 1e-12, name: str = "A") -> ComplementPair:
    """``(A, I - A)`` after checking ``0 < A <= I/2`` up to ``tol``."""
    a = as_hermitian(a)
    lam = eigvals_desc(a)
    if lam[-1] <= 0.0 or lam[0] > 0.5 + tol:
        raise PreconditionViolated(
            f"{name} must satisfy 0 < {name} <= I/2; spectrum is [{lam[-1]:.6g}, {lam[0]:.6g}]"
        )
    return ComplementPair(a, HermitianMatrix.identity(a.n) - a)


# ---------------------------------------------------------------------------
# mean specification strings

_NUMBER = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_POWER = re.compile(rf"\((?P<c>{_NUMBER})t\)\^r")
_TRANSFORMS = {"adjoint": adjoint, "transpose": transpose, "dual": dual}


def parse_mean_spec(spec: str, base_dir: Optional[Path] = None) -> RepresentingFunction:
    """Build a representing function from a specification string.

    Accepted forms::

        arithmetic:0.5   geometric:0.3   harmonic:0.5
        measure:<file>
        barbour:(2t)^r:r=0.3   barbour2:(2t)^r:r=0.3
        adjoint:<spec>   transpose:<spec>   dual:<spec>
    """
    return _parse(spec, 0, base_dir)


def _parse_number(text: str, pos: int, what: str) -> float:
    if not re.fullmatch(_NUMBER, text):
        raise SpecParseError(f"expected a number for {what}, got {text!r}", pos)
    return float(text)


def _parse(spec: str, offset: int, base_dir) -> RepresentingFunction:
    kind, sep, rest = spec.partition(":")
    rest_pos = offset + len(kind) + 1
    if not sep:
        raise SpecParseError(f"missing ':' in mean specification {spec!r}", offset + len(spec))
    if kind in _TRANSFORMS:
        return _TRANSFORMS[kind](_parse(rest, rest_pos, base_dir))
    if kind in _NAMED:
        mu = _parse_number(rest, rest_pos, "the weight")
        if not 0.0 <= mu <= 1.0:
            raise SpecParseError(f"weight {mu!r} outside [0, 1]", rest_pos)
        return named_mean(kind, mu)
    if kind == "measure":
        if not rest:
            raise SpecParseError("measure: needs a file path", rest_pos)
        path = Path(rest)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        try:
            m = load_measure(path)
        except OSError as exc:
            raise SpecParseError(f"cannot read measure file {str(path)!r}: {exc.strerror}", rest_pos) from None
        return f_from_measure(m, label=f"measure:{rest}")
    if kind in ("barbour", "barbour2"):
        base, sep, param = rest.partition(":")
        match = _POWER.fullmatch(base)
        if match is None:
            raise SpecParseError(f"expected '(<c>t)^r', got {base!r}", rest_pos)
        param_pos = rest_pos + len(base) + 1
        if not sep or not param.startswith("r="):
            raise SpecParseError("expected ':r=<value>'", param_pos)
        r = _parse_number(param[2:], param_pos + 2, "r")
        try:
            f = power_function(float(match["c"]), r)
        except DomainError as exc:
            raise SpecParseError(str(exc), param_pos + 2) from None
        f = barbour(f)
        if kind == "barbour2":
            f = barbour(f)
        return f.with_label(f"{kind}:{rest}")
    raise SpecParseError(f"unknown mean kind {kind!r}", offset)
