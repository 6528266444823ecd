"""Seeded random Hermitian matrices for randomized checks."""

from __future__ import annotations

import numpy as np

from .hermitian import HermitianMatrix

BAND = (0.05, 0.45)
MAX_CONDITION = 1e4
PAIR_MODES = ("independent", "perturbed", "commuting")


def _gaussian(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar unitary from the QR factorisation of a complex Gaussian matrix."""
    q, r = np.linalg.qr(_gaussian(rng, n))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _assemble(v: np.ndarray, lam: np.ndarray) -> HermitianMatrix:
    return HermitianMatrix._trusted((v * lam) @ v.conj().T)


def _remap(lam: np.ndarray, lo: float, hi: float, rng: np.random.Generator) -> np.ndarray:
    span = lam.max() - lam.min()
    if lam.size == 1 or span == 0.0:
        return rng.uniform(lo, hi, lam.size)
    return lo + (lam - lam.min()) * (hi - lo) / span


def random_band_matrix(rng: np.random.Generator, n: int, band=BAND) -> HermitianMatrix:
    """Hermitian part of a complex Gaussian matrix, spectrum mapped onto ``band``."""
    x = _gaussian(rng, n)
    lam, v = np.linalg.eigh(0.5 * (x + x.conj().T))
    return _assemble(v, _remap(lam, band[0], band[1], rng))


def _project(h: np.ndarray, band) -> HermitianMatrix:
    lam, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    return _assemble(v, np.clip(lam, band[0], band[1]))


def random_band_pair(rng: np.random.Generator, n: int, mode: str = "independent", band=BAND):
    """A pair ``A, B`` with spectra inside ``band``.

    ``independent`` draws B afresh; ``perturbed`` adds a Hermitian
    perturbation of norm 1e-3..1e-1 to A and clips back into the band;
    ``commuting`` reuses A's eigenvectors.
    """
    a = random_band_matrix(rng, n, band)
    if mode == "independent":
        b = random_band_matrix(rng, n, band)
    elif mode == "perturbed":
        x = _gaussian(rng, n)
        e = 0.5 * (x + x.conj().T)
        e *= 10.0 ** rng.uniform(-3.0, -1.0) / np.linalg.norm(e)
        b = _project(a.data + e, band)
    elif mode == "commuting":
        _, v = np.linalg.eigh(a.data)
        b = _assemble(v, rng.uniform(band[0], band[1], n))
    else:
        raise ValueError(f"unknown pair mode {mode!r}")
    return a, b


def random_pd(rng: np.random.Generator, n: int, condition: float) -> HermitianMatrix:
    """Random PD matrix with spectrum in ``[c^{-1/2}, c^{1/2}]`` and condition number ``c``."""
    half = 0.5 * np.log(condition)
    lam = np.exp(rng.uniform(-half, half, n))
    if n > 1:
        lam[0], lam[-1] = np.exp(-half), np.exp(half)
    return _assemble(random_unitary(rng, n), lam)


def random_pd_pair(rng: np.random.Generator, n: int, max_condition: float = MAX_CONDITION):
    """Two random PD matrices sharing a condition number drawn log-uniformly up to ``max_condition``."""
    cond = float(np.exp(rng.uniform(0.0, np.log(max_condition))))
    return random_pd(rng, n, cond), random_pd(rng, n, cond)
