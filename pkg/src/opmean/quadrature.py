"""Gaussian quadrature rules on [0, 1].

Nodes and weights come from the Golub-Welsch construction: the nodes are
the eigenvalues of the symmetric tridiagonal Jacobi matrix of the
orthogonal-polynomial recurrence, the weights are ``mu0 * v[0]**2``.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


def _jacobi_recurrence(n: int, alpha: float, beta: float):
    """Recurrence coefficients of P_k^{(alpha, beta)} on [-1, 1], monic form.

    Weight ``(1 - x)^alpha (1 + x)^beta``.
    """
    k = np.arange(n, dtype=float)
    ab = alpha + beta
    diag = np.empty(n)
    diag[0] = (beta - alpha) / (ab + 2.0)
    kk = k[1:]
    diag[1:] = (beta**2 - alpha**2) / ((2 * kk + ab) * (2 * kk + ab + 2))

    off = np.empty(max(n - 1, 0))
    if n > 1:
        # k = 1 written with the (k + ab) / (2k + ab - 1) factor cancelled,
        # which is 0/0 when alpha + beta = -1.
        off[0] = 4.0 * (1 + alpha) * (1 + beta) / ((2 + ab) ** 2 * (3 + ab))
        kk = np.arange(2, n, dtype=float)
        off[1:] = (
            4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab)
            / ((2 * kk + ab) ** 2 * (2 * kk + ab + 1) * (2 * kk + ab - 1))
        )
        off = np.sqrt(off)
    return diag, off


@lru_cache(maxsize=64)
def gauss_jacobi01(n: int, a: float, b: float):
    """Gauss rule for ``int_0^1 g(x) x^a (1 - x)^b dx``.

    Returns ``(nodes, weights)`` as read-only arrays, nodes increasing.
    Exact for polynomial ``g`` of degree ``2n - 1``.
    """
    if n < 1:
        raise ValueError("need at least one node")
    if a <= -1 or b <= -1:
        raise ValueError(f"exponents must exceed -1, got a={a}, b={b}")
    # on [-1, 1]: x = 2 lam - 1, (1 - x) <-> 2(1 - lam) carries b, (1 + x) <-> 2 lam carries a
    diag, off = _jacobi_recurrence(n, alpha=b, beta=a)
    jac = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    x, v = np.linalg.eigh(jac)
    mu0 = math.exp(math.lgamma(a + 1) + math.lgamma(b + 1) - math.lgamma(a + b + 2))
    nodes = 0.5 * (x + 1.0)
    weights = mu0 * v[0, :] ** 2
    nodes = np.clip(nodes, 0.0, 1.0)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_legendre01(n: int):
    return gauss_jacobi01(n, 0.0, 0.0)
