"""Exact mean identities, each evaluated as a residual ``lhs - rhs``.

For a non-linear mean ``s`` with representing function ``f`` and
``mu = f'(1)`` there is a unique mean ``tau`` with

    A nabla_mu B - A s B = -(f''(1)/2) (A - B) (A tau B)^{-1} (A - B),

whose representing function is
``g(t) = -(f''(1)/2) (t - 1)^2 / (1 - mu + mu t - f(t))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import LinearMean
from .hermitian import HermitianMatrix, as_hermitian, congruence, inv_pd, same_dim
from .means import (
    Pencil,
    adjoint_mean,
    arithmetic_op,
    geometric,
    geometric_op,
    harmonic_op,
    transpose_mean,
)
from .measure import BorelMeasure, measure_f, measure_k
from .repfunc import RepresentingFunction

DEFAULT_TOL = 1e-10
G_WINDOW = 1e-4
G_SLOPE_STEP = 1e-3


@dataclass(frozen=True)
class IdentityResidual:
    name: str
    lhs: HermitianMatrix
    rhs: HermitianMatrix
    residual_fro: float
    scale: float
    tol: float

    @property
    def passes(self) -> bool:
        return self.residual_fro <= self.tol * self.scale

    @property
    def relative(self) -> float:
        return self.residual_fro / self.scale


def residual(name: str, lhs: HermitianMatrix, rhs: HermitianMatrix, tol: float = DEFAULT_TOL) -> IdentityResidual:
    same_dim(lhs, rhs)
    res = float(np.linalg.norm(lhs.data - rhs.data))
    scale = max(lhs.norm(), rhs.norm(), 1.0)
    return IdentityResidual(name, lhs, rhs, res, scale, tol)


# ---------------------------------------------------------------------------
# the companion mean tau


def g_from_f(f: RepresentingFunction) -> RepresentingFunction:
    """Representing function of ``tau`` from the closed formula in ``f``.

    Within ``|t - 1| < 1e-4`` the quotient is 0/0 up to roundoff; there the
    value is the linear bridge through ``g(1 - h)``, ``g(1) = 1`` and
    ``g(1 + h)``. ``mu`` holds ``g'(1)`` by central difference.
    """
    if f.is_linear:
        raise LinearMean(f"{f.label} is linear; tau is an arbitrary mean and is not constructed")
    mu, curv = f.mu, f.second_at_one
    inner = f.func

    def raw(t):
        return -0.5 * curv * (t - 1.0) ** 2 / (1.0 - mu + mu * t - inner(t))

    h = G_WINDOW
    lo, hi = raw(np.array([1.0 - h, 1.0 + h]))

    def func(t):
        t = np.asarray(t, dtype=float)
        out = np.empty_like(t)
        near = np.abs(t - 1.0) < h
        far = ~near
        out[far] = raw(t[far])
        tn = t[near]
        out[near] = np.where(tn < 1.0, 1.0 + (1.0 - lo) * (tn - 1.0) / h, 1.0 + (hi - 1.0) * (tn - 1.0) / h)
        return out

    s = G_SLOPE_STEP
    gm, gp = raw(np.array([1.0 - s, 1.0 + s]))
    slope = (gp - gm) / (2 * s)
    s2 = 1e-2
    gm2, gp2 = raw(np.array([1.0 - s2, 1.0 + s2]))
    return RepresentingFunction(
        func=func,
        mu=float(slope),
        # g is concave; a positive difference quotient is cancellation noise
        second_at_one=min(float((gp2 - 2.0 + gm2) / s2**2), 0.0),
        label=f"g[{f.label}]",
    )


def tau_scalar(f: RepresentingFunction, t) -> np.ndarray:
    """Best available representing function of ``tau`` at ``t > 0``.

    Measure kernel when ``f`` carries a measure, then a known closed form,
    then the closed formula of :func:`g_from_f`.
    """
    if f.is_linear:
        raise LinearMean(f"{f.label} is linear; tau is not unique")
    t = np.asarray(t, dtype=float)
    if f.measure is not None:
        return -0.5 * f.second_at_one / measure_k(f.measure, t)
    if f.tau_func is not None:
        return f.tau_func(t)
    return g_from_f(f)(t)


def tau_mean(f: RepresentingFunction, a, b, pencil: Optional[Pencil] = None) -> HermitianMatrix:
    """``A tau B`` for the companion mean of ``f``."""
    p = pencil if pencil is not None else Pencil(a, b)
    return p.apply(lambda t: tau_scalar(f, t))


def _quadratic(coef: float, d: HermitianMatrix, x: HermitianMatrix) -> HermitianMatrix:
    """``coef * D X^{-1} D``."""
    return coef * congruence(d, inv_pd(x))


def _zero(n: int) -> HermitianMatrix:
    return HermitianMatrix._trusted(np.zeros((n, n)))


# ---------------------------------------------------------------------------
# residuals


def mean_identity_residual(f: RepresentingFunction, a, b, tol: float = DEFAULT_TOL) -> IdentityResidual:
    """``A nabla_mu B - A s B`` against ``-(f''(1)/2)(A - B)(A tau B)^{-1}(A - B)``.

    For linear ``f`` both sides are compared with ``tau`` absent (rhs = 0).
    """
    a = as_hermitian(a)
    b = as_hermitian(b)
    n = same_dim(a, b)
    p = Pencil(a, b)
    lhs = arithmetic_op(a, b, f.mu) - p.mean(f)
    if f.is_linear:
        rhs = _zero(n)
    else:
        rhs = _quadratic(-0.5 * f.second_at_one, a - b, tau_mean(f, a, b, p))
    return residual("mean_identity", lhs, rhs, tol)


def geometric_identity_residual(mu: float, a, b, tol: float = DEFAULT_TOL) -> IdentityResidual:
    """``A nabla_mu B - A #_mu B = (mu(1-mu)/2)(A - B)(A tau B)^{-1}(A - B)``.

    At ``mu = 1/2`` the companion mean is ``(nabla + #)/2`` in closed form.
    """
    a = as_hermitian(a)
    b = as_hermitian(b)
    n = same_dim(a, b)
    f = geometric(mu)
    sharp = geometric_op(a, b, mu)
    lhs = arithmetic_op(a, b, mu) - sharp
    if f.is_linear:
        return residual("geometric_identity", lhs, _zero(n), tol)
    if mu == 0.5:
        tau = 0.5 * (arithmetic_op(a, b, 0.5) + sharp)
        rhs = _quadratic(0.125, a - b, tau)
    else:
        rhs = _quadratic(0.5 * mu * (1.0 - mu), a - b, tau_mean(f, a, b))
    return residual("geometric_identity", lhs, rhs, tol)


def harmonic_identity_residual(mu: float, a, b, tol: float = DEFAULT_TOL) -> IdentityResidual:
    """``A nabla_mu B - A !_mu B = mu(1-mu)(A - B)(B nabla_mu A)^{-1}(A - B)``."""
    a = as_hermitian(a)
    b = as_hermitian(b)
    same_dim(a, b)
    lhs = arithmetic_op(a, b, mu) - harmonic_op(a, b, mu)
    rhs = _quadratic(mu * (1.0 - mu), a - b, arithmetic_op(b, a, mu))
    return residual("harmonic_identity", lhs, rhs, tol)


def transpose_identity_residual(f: RepresentingFunction, a, b, tol: float = DEFAULT_TOL) -> IdentityResidual:
    """``A nabla_{1-mu} B - A s0 B = -(f''(1)/2)(A - B)(B tau A)^{-1}(A - B)``."""
    a = as_hermitian(a)
    b = as_hermitian(b)
    n = same_dim(a, b)
    lhs = arithmetic_op(a, b, 1.0 - f.mu) - transpose_mean(f, a, b)
    if f.is_linear:
        rhs = _zero(n)
    else:
        rhs = _quadratic(-0.5 * f.second_at_one, a - b, tau_mean(f, b, a))
    return residual("transpose_identity", lhs, rhs, tol)


def sharp_conjugation_residuals(f: RepresentingFunction, a, b, tol: float = DEFAULT_TOL) -> dict:
    """The three conjugation identities through ``(A # B)^{-1}``.

    Keys ``sharp_adjoint``, ``sharp_gap``, ``sharp_adjoint_gap``:

    * ``(A#B)^{-1}(A s* B)(A#B)^{-1} = (A s0 B)^{-1}``
    * ``(A#B)^{-1}(A nabla_{1-mu} B - A s0 B)(A#B)^{-1} = (A !_mu B)^{-1} - (A s* B)^{-1}``
    * ``(A#B)^{-1}(A s* B - A !_mu B)(A#B)^{-1} = (A s0 B)^{-1} - (A nabla_{1-mu} B)^{-1}``
    """
    a = as_hermitian(a)
    b = as_hermitian(b)
    same_dim(a, b)
    mu = f.mu
    sharp_inv = inv_pd(geometric_op(a, b, 0.5))
    star = adjoint_mean(f, a, b)
    zero = transpose_mean(f, a, b)
    harm = harmonic_op(a, b, mu)
    arith = arithmetic_op(a, b, 1.0 - mu)
    zero_inv = inv_pd(zero)
    return {
        "sharp_adjoint": residual("sharp_adjoint", congruence(sharp_inv, star), zero_inv, tol),
        "sharp_gap": residual("sharp_gap", congruence(sharp_inv, arith - zero), inv_pd(harm) - inv_pd(star), tol),
        "sharp_adjoint_gap": residual("sharp_adjoint_gap", congruence(sharp_inv, star - harm), zero_inv - inv_pd(arith), tol),
    }


def all_identity_residuals(f: RepresentingFunction, a, b, tol: float = DEFAULT_TOL) -> list:
    """Every identity for ``f`` plus the geometric and harmonic special cases at ``mu = f'(1)``."""
    mu = f.mu
    half = geometric_identity_residual(0.5, a, b, tol)
    out = [
        mean_identity_residual(f, a, b, tol),
        geometric_identity_residual(mu, a, b, tol),
        residual("geometric_identity_half", half.lhs, half.rhs, tol),
        harmonic_identity_residual(mu, a, b, tol),
        transpose_identity_residual(f, a, b, tol),
    ]
    out.extend(sharp_conjugation_residuals(f, a, b, tol).values())
    return out


# ---------------------------------------------------------------------------
# scalar identities


def scalar_measure_identity(m: BorelMeasure, t) -> tuple:
    """``1 - mu + mu t - f(t)`` and ``(t - 1)^2 int lam(1-lam)(t nabla_lam 1)^{-1} dm``."""
    t = np.asarray(t, dtype=float)
    mass, mu, _ = m.moments()
    lhs = mass - mu + mu * t - measure_f(m, t)
    rhs = (t - 1.0) ** 2 * measure_k(m, t)
    return lhs, rhs


def scalar_kernel_identity(lam, t) -> tuple:
    """``phi(1) + phi'(1)(t - 1) - phi(t)`` and ``lam(1-lam)(t-1)^2 (t nabla_lam 1)^{-1}``."""
    lam = np.asarray(lam, dtype=float)
    t = np.asarray(t, dtype=float)
    lhs = 1.0 + lam * (t - 1.0) - t / ((1.0 - lam) * t + lam)
    rhs = lam * (1.0 - lam) * (t - 1.0) ** 2 / ((1.0 - lam) * t + lam)
    return lhs, rhs
