"""Finite Borel measures on [0, 1] as representations of connections.

A measure ``m`` determines the connection

    f(t)   = int phi_lam(t) dm(lam),     phi_lam(t) = t / ((1 - lam) t + lam)
    A s B  = int A !_lam B dm(lam)

and, for non-linear ``f``, the companion mean ``tau`` of the mean identity
through the kernel ``k(t) = int lam (1 - lam) / ((1 - lam) t + lam) dm``.

Densities are integrated with Gauss-Jacobi rules that absorb the endpoint
powers exactly. The rule is re-centred per evaluation point by the Moebius
substitution ``lam = c u / (1 - u + c u)``: with ``c = t`` the pole of
``phi_lam(t)`` at ``lam = t / (t - 1)`` is sent to infinity, which keeps 64
nodes accurate for ``t`` far from 1.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, LinearMean, SpecParseError
from .hermitian import (
    HermitianMatrix,
    as_hermitian,
    congruence,
    eig_hermitian,
    inv_pd,
    same_dim,
    _check_pd,
)
from .quadrature import gauss_jacobi01
from .repfunc import RepresentingFunction

DEFAULT_NODES = 64
SELF_CHECK_TOL = 1e-9
PROBABILITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Density:
    """Density ``smooth(lam) * lam**a * (1 - lam)**b`` on (0, 1).

    The endpoint powers are handled by the Gauss-Jacobi weight; ``smooth``
    should be free of singularities on [0, 1].
    """

    smooth: Callable[[np.ndarray], np.ndarray]
    a: float = 0.0
    b: float = 0.0
    nodes: int = DEFAULT_NODES
    kind: str = "custom"
    params: dict = field(default_factory=dict)

    def pdf(self, lam):
        lam = np.asarray(lam, dtype=float)
        with np.errstate(divide="ignore"):
            return self.smooth(lam) * lam**self.a * (1.0 - lam) ** self.b

    def rule(self, center=1.0, nodes: Optional[int] = None):
        """Nodes and weights of the rule re-centred at ``center``.

        ``center`` may be an array; the result then has shape
        ``center.shape + (nodes,)``.
        """
        lam, _, weights = self.rule_with_complement(center, nodes)
        return lam, weights

    def rule_with_complement(self, center=1.0, nodes: Optional[int] = None):
        """Like :meth:`rule`, also returning ``1 - lam`` without cancellation."""
        u, w = gauss_jacobi01(nodes or self.nodes, self.a, self.b)
        c = np.asarray(center, dtype=float)[..., None]
        d = 1.0 - u + c * u
        lam = c * u / d
        lam_c = (1.0 - u) / d
        weights = w * np.asarray(self.smooth(lam), dtype=float) * c ** (self.a + 1.0) * d ** (-self.a - self.b - 2.0)
        return lam, lam_c, weights

    def scaled(self, factor: float) -> "Density":
        smooth = self.smooth
        params = dict(self.params, weight=self.params.get("weight", 1.0) * factor)
        return Density(lambda lam: factor * smooth(lam), self.a, self.b, self.nodes, self.kind, params)

    def reflected(self) -> "Density":
        smooth = self.smooth
        return Density(lambda lam: smooth(1.0 - lam), self.b, self.a, self.nodes, self.kind + "-reflected", dict(self.params))


@dataclass(frozen=True, eq=False)
class BorelMeasure:
    """Atoms plus an optional absolutely continuous part on [0, 1]."""

    atoms: tuple = ()
    density: Optional[Density] = None

    def __post_init__(self):
        atoms = tuple((float(lam), float(w)) for lam, w in self.atoms)
        for lam, w in atoms:
            if not 0.0 <= lam <= 1.0:
                raise DomainError(f"atom location {lam!r} outside [0, 1]")
            if not w > 0.0:
                raise DomainError(f"atom weight {w!r} must be positive")
        object.__setattr__(self, "atoms", atoms)

    def moments(self):
        """``(mass, int lam dm, int lam (1 - lam) dm)``."""
        mass = sum(w for _, w in self.atoms)
        first = sum(w * lam for lam, w in self.atoms)
        second = sum(w * lam * (1 - lam) for lam, w in self.atoms)
        if self.density is not None:
            lam, w = self.density.rule(1.0)
            mass += float(np.sum(w))
            first += float(np.sum(w * lam))
            second += float(np.sum(w * lam * (1 - lam)))
        return mass, first, second

    @property
    def total_mass(self) -> float:
        return self.moments()[0]

    def is_probability(self, tol: float = PROBABILITY_TOL) -> bool:
        return abs(self.total_mass - 1.0) <= tol

    def supported_on_endpoints(self) -> bool:
        return self.density is None and all(lam in (0.0, 1.0) for lam, _ in self.atoms)

    def __add__(self, other: "BorelMeasure") -> "BorelMeasure":
        if self.density is not None and other.density is not None:
            raise ValueError("cannot add two measures that both carry a density")
        return BorelMeasure(self.atoms + other.atoms, self.density or other.density)

    def __mul__(self, factor: float) -> "BorelMeasure":
        factor = float(factor)
        if not factor > 0:
            raise DomainError("measures can only be scaled by positive numbers")
        atoms = tuple((lam, factor * w) for lam, w in self.atoms)
        density = self.density.scaled(factor) if self.density is not None else None
        return BorelMeasure(atoms, density)

    __rmul__ = __mul__

    def reflected(self) -> "BorelMeasure":
        """Image under ``lam -> 1 - lam``; represents the transposed connection."""
        atoms = tuple((1.0 - lam, w) for lam, w in self.atoms)
        density = self.density.reflected() if self.density is not None else None
        return BorelMeasure(atoms, density)

    def describe(self) -> str:
        parts = [f"{w:g}*delta_{lam:g}" for lam, w in self.atoms]
        if self.density is not None:
            parts.append(f"{self.density.kind}{self.density.params or ''}")
        return " + ".join(parts) or "0"


def dirac(location: float, weight: float = 1.0) -> BorelMeasure:
    return BorelMeasure(((location, weight),))


def arithmetic_measure(mu: float) -> BorelMeasure:
    atoms = tuple((lam, w) for lam, w in ((0.0, 1.0 - mu), (1.0, mu)) if w > 0)
    return BorelMeasure(atoms)


def geometric_measure(mu: float, nodes: int = DEFAULT_NODES) -> BorelMeasure:
    """Measure of ``t**mu``: ``sin(mu pi)/pi * lam**(mu-1) (1-lam)**(-mu) dlam``."""
    if not 0.0 < mu < 1.0:
        raise DomainError(f"geometric density needs 0 < mu < 1, got {mu!r}; use Dirac atoms at the endpoints")
    c = math.sin(mu * math.pi) / math.pi
    density = Density(lambda lam: np.full_like(lam, c), a=mu - 1.0, b=-mu, nodes=nodes,
                      kind="geometric", params={"mu": mu})
    return BorelMeasure((), density)


def table_density(values, nodes: int = DEFAULT_NODES) -> Density:
    """Piecewise-linear density through equispaced samples on [0, 1]."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size < 2:
        raise DomainError("table density needs at least two samples")
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        raise DomainError("table density values must be finite and nonnegative")
    grid = np.linspace(0.0, 1.0, values.size)
    return Density(lambda lam: np.interp(lam, grid, values), nodes=nodes,
                   kind="table", params={"values": values.tolist()})


def check_density_accuracy(density: Density, tol: float = SELF_CHECK_TOL) -> float:
    """Compare the rule at n and 2n nodes; warn when they disagree beyond ``tol``."""
    t = np.array([1e-2, 1e-1, 1.0, 1e1, 1e2])
    vals = []
    for n in (density.nodes, 2 * density.nodes):
        lam, lam_c, w = density.rule_with_complement(t, nodes=n)
        vals.append(np.sum(w * _phi(lam, t[:, None], lam_c), axis=-1))
    err = float(np.max(np.abs(vals[0] - vals[1]) / np.maximum(1.0, np.abs(vals[1]))))
    if err > tol:
        warnings.warn(
            f"{density.kind} density: {density.nodes}- and {2 * density.nodes}-node rules "
            f"disagree by {err:.2e}; consider more nodes",
            RuntimeWarning,
            stacklevel=2,
        )
    return err


# ---------------------------------------------------------------------------
# scalar kernels


def _phi(lam, t, lam_c=None):
    lam_c = 1.0 - lam if lam_c is None else lam_c
    return t / (lam_c * t + lam)


def measure_f(m: BorelMeasure, t) -> np.ndarray:
    """``int phi_lam(t) dm(lam)`` for an array of ``t >= 0``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros_like(t)
    pos = t > 0
    tp = t[pos]
    for lam, w in m.atoms:
        out[pos] += w * _phi(lam, tp)
        if lam == 0.0:
            out[~pos] += w  # right limit of phi_0 at t = 0
    if m.density is not None and tp.size:
        lam, lam_c, w = m.density.rule_with_complement(tp)
        out[pos] += np.sum(w * _phi(lam, tp[:, None], lam_c), axis=-1)
    return out


def measure_k(m: BorelMeasure, t) -> np.ndarray:
    """``int lam (1 - lam) / ((1 - lam) t + lam) dm(lam)`` for ``t > 0``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t <= 0):
        raise DomainError("tau kernel is evaluated on strictly positive spectra only")
    out = np.zeros_like(t)
    for lam, w in m.atoms:
        out += w * lam * (1.0 - lam) / ((1.0 - lam) * t + lam)
    if m.density is not None:
        # Centre sqrt(t) balances the pole of the integrand against the
        # Jacobian of the substitution; both sit ~t^{-1/2} outside [0, 1],
        # so the node count grows like t^{1/4} far from 1.
        spread = np.maximum(t, 1.0 / t) ** 0.25
        need = np.maximum(m.density.nodes, 32 * np.ceil(10.0 * spread / 32)).astype(int)
        for n in np.unique(need):
            sel = need == n
            ts = t[sel]
            lam, lam_c, w = m.density.rule_with_complement(np.sqrt(ts), nodes=int(n))
            out[sel] += np.sum(w * lam * lam_c / (lam_c * ts[:, None] + lam), axis=-1)
    return out


def f_from_measure(m: BorelMeasure, label: Optional[str] = None) -> RepresentingFunction:
    """Representing function ``t -> int 1 !_lam t dm(lam)`` of the measure ``m``."""
    mass, first, second = m.moments()
    curvature = -2.0 * second
    tau_func = None
    if second > 0:
        def tau_func(t, _m=m, _c=curvature):
            return (-0.5 * _c) / measure_k(_m, t)
    return RepresentingFunction(
        func=lambda t, _m=m: measure_f(_m, t),
        mu=first,
        second_at_one=curvature,
        label=label or f"measure[{m.describe()}]",
        at_one=mass,
        measure=m,
        tau_func=tau_func,
    )


# ---------------------------------------------------------------------------
# operator forms


def _harmonic(a_inv: np.ndarray, b_inv: np.ndarray, lam: float) -> HermitianMatrix:
    return inv_pd(HermitianMatrix._trusted((1.0 - lam) * a_inv + lam * b_inv))


def mean_from_measure(m: BorelMeasure, a, b, center: Optional[float] = None) -> HermitianMatrix:
    """``int A !_lam B dm(lam)`` summed node by node.

    Each node contributes ``((1 - lam) A^{-1} + lam B^{-1})^{-1}``. Unless
    given, the rule is centred at the geometric midpoint of the spectrum of
    ``A^{-1/2} B A^{-1/2}``.
    """
    a = as_hermitian(a)
    b = as_hermitian(b)
    same_dim(a, b)
    da = eig_hermitian(a)
    _check_pd(da.eigenvalues)
    a_inv = da.apply(1.0 / da.eigenvalues).data
    b_inv = inv_pd(b).data
    total = np.zeros_like(a.data)
    for lam, w in m.atoms:
        if lam == 0.0:
            total += w * a.data
        elif lam == 1.0:
            total += w * b.data
        else:
            total += w * _harmonic(a_inv, b_inv, lam).data
    if m.density is not None:
        if center is None:
            t = eig_hermitian(congruence(da.apply(da.eigenvalues**-0.5), b)).eigenvalues
            center = math.sqrt(t[0] * t[-1])
        lam, w = m.density.rule(center)
        for lam_i, w_i in zip(lam, w):
            total += w_i * _harmonic(a_inv, b_inv, lam_i).data
    return HermitianMatrix._trusted(total)


def tau_measure_form(f: RepresentingFunction, a, b, method: str = "spectral") -> HermitianMatrix:
    """``A tau B = -(f''(1)/2) (int lam (1-lam) (B nabla_lam A)^{-1} dm)^{-1}``.

    ``method="direct"`` sums the integrand node by node with operator
    inverses. ``method="spectral"`` uses the congruence
    ``B nabla_lam A = A^{1/2} (T nabla_lam I) A^{1/2}`` with
    ``T = A^{-1/2} B A^{-1/2}`` so the integral collapses to the scalar
    kernel on the spectrum of ``T``.
    """
    m = f.measure
    if m is None:
        raise ValueError(f"{f.label} carries no measure")
    _, _, second = m.moments()
    if second <= 0.0:
        raise LinearMean(f"{f.label} is linear (f''(1) = 0); tau is not unique")
    coef = second  # -(f''(1) / 2)
    a = as_hermitian(a)
    b = as_hermitian(b)
    same_dim(a, b)
    if method == "spectral":
        da = eig_hermitian(a)
        _check_pd(da.eigenvalues)
        r = np.sqrt(da.eigenvalues)
        root, inv_root = da.apply(r), da.apply(1.0 / r)
        dt = eig_hermitian(congruence(inv_root, b))
        _check_pd(dt.eigenvalues)
        inner = dt.apply(coef / measure_k(m, dt.eigenvalues))
        return congruence(root, inner)
    if method != "direct":
        raise ValueError(f"unknown method {method!r}")
    a_arr, b_arr = a.data, b.data
    total = np.zeros_like(a_arr)

    def term(lam):
        return inv_pd(HermitianMatrix._trusted((1.0 - lam) * b_arr + lam * a_arr)).data

    for lam, w in m.atoms:
        if 0.0 < lam < 1.0:
            total += w * lam * (1.0 - lam) * term(lam)
    if m.density is not None:
        lam, w = m.density.rule(1.0)
        for lam_i, w_i in zip(lam, w):
            total += w_i * lam_i * (1.0 - lam_i) * term(lam_i)
    return coef * inv_pd(HermitianMatrix._trusted(total))


# ---------------------------------------------------------------------------
# JSON measure format


def measure_from_json(obj) -> BorelMeasure:
    """Parse ``{"atoms": [...], "density": {...}, "nodes": 64}``."""
    if isinstance(obj, (str, bytes)):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise SpecParseError(f"invalid JSON: {exc.msg}", exc.pos) from None
    if not isinstance(obj, dict):
        raise SpecParseError("measure file must hold a JSON object")
    nodes = int(obj.get("nodes", DEFAULT_NODES))
    try:
        atoms = tuple((float(a["lambda"]), float(a["w"])) for a in obj.get("atoms", []))
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecParseError(f"bad atom entry: {exc!r}") from None
    density = None
    spec = obj.get("density")
    try:
        if spec is not None:
            kind = spec.get("kind")
            if kind == "geometric":
                density = geometric_measure(float(spec["mu"]), nodes=nodes).density
            elif kind == "table":
                density = table_density(spec["values"], nodes=nodes)
                check_density_accuracy(density)
            else:
                raise SpecParseError(f"unknown density kind {kind!r}")
            weight = float(spec.get("weight", 1.0))
            if weight != 1.0:
                density = density.scaled(weight)
        return BorelMeasure(atoms, density)
    except (KeyError, TypeError) as exc:
        raise SpecParseError(f"bad density entry: {exc!r}") from None
    except DomainError as exc:
        raise SpecParseError(str(exc)) from None


def load_measure(path) -> BorelMeasure:
    with open(path) as fh:
        return measure_from_json(fh.read())
