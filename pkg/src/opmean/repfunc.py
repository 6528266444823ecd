"""Representing functions of operator connections and means."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Callable, Optional

import numpy as np

from .errors import DomainError

NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class RepresentingFunction:
    """An operator monotone ``f: [0, inf) -> [0, inf)`` with Taylor data at 1.

    ``func`` must accept a float array and return an array of the same
    shape. ``at_one``, ``mu`` and ``second_at_one`` are ``f(1)``, ``f'(1)``
    and ``f''(1)``, carried analytically through every transform. A
    representing function of a *mean* has ``at_one == 1``.

    ``measure`` is the associated Borel measure on [0, 1] when known, and
    ``tau_func`` a closed form for the representing function of the mean
    ``tau`` paired with ``f`` in the mean identity, when known.
    """

    func: Callable[[np.ndarray], np.ndarray]
    mu: float
    second_at_one: float
    label: str
    at_one: float = 1.0
    measure: Optional[Any] = None
    tau_func: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False)

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        if np.any(arr < 0):
            raise DomainError(f"{self.label}: representing functions live on [0, inf)")
        with np.errstate(all="ignore"):
            out = np.asarray(self.func(np.atleast_1d(arr)), dtype=float)
        bad = ~np.isfinite(out)
        if np.any(bad):
            x = np.atleast_1d(arr)[np.argmax(bad)]
            raise DomainError(f"{self.label} is not finite at t={x!r}")
        return out.reshape(arr.shape) if arr.ndim else float(out[0])

    @property
    def is_linear(self) -> bool:
        return abs(self.second_at_one) <= 1e-15 * max(1.0, abs(self.at_one))

    @property
    def is_mean(self) -> bool:
        return abs(self.at_one - 1.0) <= NORMALIZATION_TOL

    def with_label(self, label: str) -> "RepresentingFunction":
        return replace(self, label=label)

    def validate(self, grid=None) -> None:
        """Check the necessary conditions a mean's representing function must meet.

        Raises :class:`DomainError` on the first violation.
        """
        grid = np.geomspace(1e-3, 1e3, 121) if grid is None else np.asarray(grid, dtype=float)
        f1 = self(1.0)
        if abs(f1 - self.at_one) > NORMALIZATION_TOL:
            raise DomainError(f"{self.label}: f(1) = {f1!r} disagrees with recorded {self.at_one!r}")
        vals = self(grid)
        if np.any(vals < 0):
            raise DomainError(f"{self.label}: negative value on sample grid")
        if np.any(np.diff(vals) < -1e-12 * np.maximum(1.0, vals[1:])):
            raise DomainError(f"{self.label}: not monotone nondecreasing on sample grid")
        if self.second_at_one > 1e-12:
            raise DomainError(f"{self.label}: f''(1) = {self.second_at_one!r} > 0 (not concave)")
        if self.is_mean and not (-1e-12 <= self.mu <= 1 + 1e-12):
            raise DomainError(f"{self.label}: f'(1) = {self.mu!r} outside [0, 1]")
