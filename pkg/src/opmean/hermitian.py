"""Dense complex Hermitian matrices and their spectral calculus.

Everything downstream (operator means, identities, Ky Fan checks) is built
on three primitives defined here: a cyclic Jacobi eigensolver, functional
calculus ``V diag(phi(lambda)) V*``, and Loewner-order comparison.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .errors import (
    DimensionMismatch,
    DomainError,
    NotHermitian,
    NotPositiveDefinite,
    NumericalFailure,
    SpecParseError,
)

SYMMETRY_TOL = 1e-13
PSD_CLAMP = 1e-12
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 40
JACOBI_POLISH_SWEEPS = 2
DEFAULT_ORDER_TOL = 1e-10


class HermitianMatrix:
    """Immutable ``n x n`` complex Hermitian matrix.

    The constructor rejects input whose anti-Hermitian part exceeds
    ``tol * ||H||_F`` and then stores the exact Hermitian part
    ``(H + H*) / 2``.
    """

    __slots__ = ("_data",)

    def __init__(self, entries, *, tol: float = SYMMETRY_TOL):
        arr = np.array(entries, dtype=np.complex128)
        if arr.ndim == 0:
            arr = arr.reshape(1, 1)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise DimensionMismatch(f"expected a non-empty square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("matrix has non-finite entries")
        skew = np.linalg.norm(arr - arr.conj().T)
        if skew > tol * np.linalg.norm(arr):
            raise NotHermitian(f"matrix is not Hermitian: ||H - H*||_F = {skew:.3e}")
        self._data = _freeze(0.5 * (arr + arr.conj().T))

    @classmethod
    def _trusted(cls, arr: np.ndarray) -> "HermitianMatrix":
        # Internal results are Hermitian up to roundoff; symmetrize without checking.
        obj = cls.__new__(cls)
        arr = np.asarray(arr, dtype=np.complex128)
        obj._data = _freeze(0.5 * (arr + arr.conj().T))
        return obj

    @classmethod
    def identity(cls, n: int) -> "HermitianMatrix":
        return cls._trusted(np.eye(n))

    @classmethod
    def diag(cls, values) -> "HermitianMatrix":
        values = np.asarray(values, dtype=float)
        return cls._trusted(np.diag(values))

    @property
    def data(self) -> np.ndarray:
        """Read-only ``complex128`` array view."""
        return self._data

    @property
    def n(self) -> int:
        return self._data.shape[0]

    @property
    def shape(self):
        return self._data.shape

    def norm(self) -> float:
        """Frobenius norm."""
        return float(np.linalg.norm(self._data))

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._data.copy()
        return self._data.astype(dtype)

    def __add__(self, other):
        other = _coerce(other, self.n)
        return HermitianMatrix._trusted(self._data + other._data)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other, self.n)
        return HermitianMatrix._trusted(self._data - other._data)

    def __rsub__(self, other):
        other = _coerce(other, self.n)
        return HermitianMatrix._trusted(other._data - self._data)

    def __neg__(self):
        return HermitianMatrix._trusted(-self._data)

    def __mul__(self, scalar):
        if isinstance(scalar, complex) and scalar.imag != 0:
            raise TypeError("Hermitian matrices can only be scaled by real numbers")
        return HermitianMatrix._trusted(float(np.real(scalar)) * self._data)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / float(scalar))

    def __matmul__(self, other):
        other_arr = other.data if isinstance(other, HermitianMatrix) else np.asarray(other)
        return self._data @ other_arr

    def __rmatmul__(self, other):
        return np.asarray(other) @ self._data

    def __repr__(self):
        return f"HermitianMatrix(n={self.n}, entries={np.array2string(self._data, precision=6)})"

    def allclose(self, other, atol: float = 1e-12) -> bool:
        other = _coerce(other, self.n)
        return bool(np.linalg.norm(self._data - other._data) <= atol)

    def is_real(self) -> bool:
        return bool(np.all(self._data.imag == 0))


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _coerce(x, n: int) -> HermitianMatrix:
    if isinstance(x, HermitianMatrix):
        if x.n != n:
            raise DimensionMismatch(f"dimension {x.n} != {n}")
        return x
    if np.isscalar(x):
        return HermitianMatrix._trusted(float(np.real(x)) * np.eye(n))
    return as_hermitian(x, n=n)


def as_hermitian(x, n: Optional[int] = None) -> HermitianMatrix:
    """Return ``x`` as a :class:`HermitianMatrix`, validating arrays."""
    h = x if isinstance(x, HermitianMatrix) else HermitianMatrix(x)
    if n is not None and h.n != n:
        raise DimensionMismatch(f"dimension {h.n} != {n}")
    return h


def same_dim(*mats: HermitianMatrix) -> int:
    n = mats[0].n
    for m in mats[1:]:
        if m.n != n:
            raise DimensionMismatch(f"operands have dimensions {[x.n for x in mats]}")
    return n


def congruence(x, h) -> HermitianMatrix:
    """``X H X*`` for any square ``X`` and Hermitian ``H``."""
    x_arr = x.data if isinstance(x, HermitianMatrix) else np.asarray(x, dtype=np.complex128)
    h_arr = h.data if isinstance(h, HermitianMatrix) else np.asarray(h, dtype=np.complex128)
    return HermitianMatrix._trusted(x_arr @ h_arr @ x_arr.conj().T)


# ---------------------------------------------------------------------------
# eigensolver


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray  # decreasing
    eigenvectors: np.ndarray  # columns match eigenvalues
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def apply(self, values) -> HermitianMatrix:
        """``V diag(values) V*`` for values aligned with ``eigenvalues``."""
        v = self.eigenvectors
        return HermitianMatrix._trusted((v * np.asarray(values)) @ v.conj().T)


@lru_cache(maxsize=128)
def _round_robin(n: int):
    """Tournament schedule: n-1 (n even) or n (n odd) rounds of disjoint pairs.

    Every pair (p, q), p < q, appears exactly once per sweep.
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = sorted((min(x, y), max(x, y)) for x, y in pairs if max(x, y) < n)
        p = np.array([x for x, _ in pairs], dtype=np.intp)
        q = np.array([y for _, y in pairs], dtype=np.intp)
        rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _jacobi(a: np.ndarray):
    """Cyclic complex Jacobi on a Hermitian array; returns (diag, V, sweeps).

    Rotations follow a fixed round-robin ordering, so each step annihilates
    up to n/2 disjoint off-diagonal pairs with one unitary congruence.
    """
    n = a.shape[0]
    a = np.array(a, dtype=np.complex128)
    v = np.eye(n, dtype=np.complex128)
    scale = np.linalg.norm(a)
    target = JACOBI_TOL * scale
    tiny = np.finfo(float).tiny / np.finfo(float).eps
    offmask = ~np.eye(n, dtype=bool)
    rounds = _round_robin(n)
    off = 0.0
    polish = 0
    eps = np.finfo(float).eps

    for sweep in range(JACOBI_MAX_SWEEPS + 1):
        off = np.linalg.norm(a[offmask]) if n > 1 else 0.0
        if off <= target:
            # Converged in norm; a couple more sweeps buy small eigenvalues
            # their relative accuracy, which the absolute test cannot see.
            d = np.sqrt(np.abs(a.diagonal().real))
            if polish == JACOBI_POLISH_SWEEPS or np.all(np.abs(a[offmask]) <= eps * np.outer(d, d)[offmask]):
                return a.diagonal().real.copy(), v, sweep
            polish += 1
        if sweep == JACOBI_MAX_SWEEPS:
            break
        for p, q in rounds:
            apq = a[p, q]
            mag = np.abs(apq)
            live = mag > tiny
            if not live.any():
                continue
            safe = np.where(live, mag, 1.0)
            theta = (a[q, q].real - a[p, p].real) / (2.0 * safe)
            t = np.where(theta < 0.0, -1.0, 1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            t = np.where(live, t, 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            # U = diag(1, e^{-i phi}) [[c, s], [-s, c]] on each (p, q) with apq = |apq| e^{i phi}
            ph = np.where(live, apq / safe, 1.0).conj()
            u = np.eye(n, dtype=np.complex128)
            u[p, p] = c
            u[p, q] = s
            u[q, p] = -s * ph
            u[q, q] = c * ph
            a = u.conj().T @ a @ u
            a[p, q] = 0.0
            a[q, p] = 0.0
            v = v @ u
        a = 0.5 * (a + a.conj().T)
    raise NumericalFailure(
        f"Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps "
        f"(off-diagonal norm {off:.3e}, target {target:.3e})"
    )


def _eig_array(arr: np.ndarray) -> SpectralDecomposition:
    if not np.all(np.isfinite(arr)):
        raise NumericalFailure("eigensolver received non-finite entries")
    w, v, sweeps = _jacobi(arr)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    w.setflags(write=False)
    v.setflags(write=False)
    return SpectralDecomposition(w, v, sweeps)


def eig_hermitian(h) -> SpectralDecomposition:
    """Eigendecomposition with eigenvalues in decreasing order.

    Cyclic Jacobi sweeps (round-robin pair order) until the off-diagonal
    Frobenius norm drops below ``1e-13 * ||H||_F``, then at most two more
    while any ``|h_pq|`` exceeds ``eps * sqrt(|h_pp h_qq|)``. Raises
    :class:`NumericalFailure` after 40 sweeps.
    """
    h = as_hermitian(h)
    return _eig_array(h.data)


def eigvals_desc(h) -> np.ndarray:
    return eig_hermitian(h).eigenvalues


def matrix_function(h, phi: Callable, decomposition: Optional[SpectralDecomposition] = None) -> HermitianMatrix:
    """Apply the real scalar function ``phi`` to ``h`` through its spectrum."""
    d = decomposition if decomposition is not None else eig_hermitian(h)
    values = _apply_scalar(phi, d.eigenvalues)
    return d.apply(values)


def _apply_scalar(phi: Callable, lam: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        try:
            out = np.asarray(phi(lam), dtype=float)
            if out.shape != lam.shape:
                raise ValueError
        except (TypeError, ValueError):
            out = np.array([float(phi(float(x))) for x in lam])
    bad = ~np.isfinite(out)
    if np.any(bad):
        x = lam[np.argmax(bad)]
        raise DomainError(f"function is not finite at eigenvalue {x!r}")
    return out


def _psd_floor(lam: np.ndarray) -> float:
    return PSD_CLAMP * max(1.0, float(np.max(np.abs(lam))))


def _check_pd(lam: np.ndarray) -> None:
    lo = float(lam[-1])
    if lo <= _psd_floor(lam):
        raise NotPositiveDefinite(f"matrix is not positive definite: minimum eigenvalue {lo:.6e}", lo)


def sqrt_psd(h, decomposition: Optional[SpectralDecomposition] = None) -> HermitianMatrix:
    d = decomposition if decomposition is not None else eig_hermitian(h)
    lam = d.eigenvalues
    lo = float(lam[-1])
    if lo < -_psd_floor(lam):
        raise NotPositiveDefinite(f"matrix is not positive semidefinite: minimum eigenvalue {lo:.6e}", lo)
    return d.apply(np.sqrt(np.clip(lam, 0.0, None)))


def inv_pd(h, decomposition: Optional[SpectralDecomposition] = None) -> HermitianMatrix:
    d = decomposition if decomposition is not None else eig_hermitian(h)
    _check_pd(d.eigenvalues)
    return d.apply(1.0 / d.eigenvalues)


def inv_sqrt_pd(h, decomposition: Optional[SpectralDecomposition] = None) -> HermitianMatrix:
    d = decomposition if decomposition is not None else eig_hermitian(h)
    _check_pd(d.eigenvalues)
    return d.apply(1.0 / np.sqrt(d.eigenvalues))


def pd_roots(h) -> tuple[HermitianMatrix, HermitianMatrix]:
    """``(H^{1/2}, H^{-1/2})`` from a single eigendecomposition."""
    d = eig_hermitian(h)
    _check_pd(d.eigenvalues)
    r = np.sqrt(d.eigenvalues)
    return d.apply(r), d.apply(1.0 / r)


def require_pd(h, name: str = "matrix") -> None:
    lam = eigvals_desc(h)
    try:
        _check_pd(lam)
    except NotPositiveDefinite as exc:
        raise NotPositiveDefinite(f"{name}: {exc}", exc.min_eigenvalue) from None


# ---------------------------------------------------------------------------
# Loewner order


@dataclass(frozen=True)
class OrderComparison:
    """Outcome of testing ``A <= B`` (i.e. ``B - A >= 0``) up to ``tolerance``."""

    holds: bool
    min_eigenvalue_of_difference: float
    tolerance: float
    witness_vector: Optional[np.ndarray] = None

    @property
    def slack(self) -> float:
        return self.min_eigenvalue_of_difference

    def to_dict(self) -> dict:
        out = {
            "holds": self.holds,
            "min_eigenvalue_of_difference": self.min_eigenvalue_of_difference,
            "tolerance": self.tolerance,
        }
        if self.witness_vector is not None:
            out["witness"] = {"re": self.witness_vector.real.tolist(), "im": self.witness_vector.imag.tolist()}
        return out


def psd_check(diff, tol: float = DEFAULT_ORDER_TOL) -> OrderComparison:
    """Compare ``diff >= 0``; the witness is the eigenvector of its lowest eigenvalue."""
    d = eig_hermitian(diff)
    lo = float(d.eigenvalues[-1])
    holds = lo >= -tol
    witness = None if holds else np.array(d.eigenvectors[:, -1])
    return OrderComparison(holds, lo, tol, witness)


def loewner_leq(a, b, tol: float = DEFAULT_ORDER_TOL) -> OrderComparison:
    """Test ``a <= b`` in the Loewner order."""
    a = as_hermitian(a)
    b = as_hermitian(b)
    same_dim(a, b)
    return psd_check(b - a, tol)


# ---------------------------------------------------------------------------
# JSON matrix format: {"n": int, "re": [[...]], "im": [[...]]}


def matrix_from_json(obj) -> HermitianMatrix:
    if isinstance(obj, (str, bytes)):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise SpecParseError(f"invalid JSON: {exc.msg}", exc.pos) from None
    if not isinstance(obj, dict) or "re" not in obj:
        raise SpecParseError("matrix object must contain 're'")
    try:
        re = np.array(obj["re"], dtype=float)
        im = np.array(obj["im"], dtype=float) if obj.get("im") is not None else np.zeros_like(re)
    except (TypeError, ValueError) as exc:
        raise SpecParseError(f"matrix entries must be numeric: {exc}") from None
    n = obj.get("n", re.shape[0] if re.ndim else 0)
    if re.ndim != 2 or re.shape != (n, n) or im.shape != re.shape:
        raise SpecParseError(f"matrix shape does not match n={n}: re {re.shape}, im {im.shape}")
    return HermitianMatrix(re + 1j * im)


def matrix_to_json(h: HermitianMatrix) -> dict:
    out = {"n": h.n, "re": h.data.real.tolist()}
    if not h.is_real():
        out["im"] = h.data.imag.tolist()
    return out


def load_matrix(path) -> HermitianMatrix:
    with open(path) as fh:
        return matrix_from_json(fh.read())
