"""Unnormalised 2-D DFT and finite Fourier transforms on the half-open grid.

The finite Fourier transform of a field is

    f^(k; L) = delta^2 * sum_ij f(x_i, x_j) exp(-pi i (k1 x_i + k2 x_j)),

and since ``x_i = -1 + (i - 1) delta`` it folds onto one DFT entry:

    f^(k; L) = delta^2 (-1)^(k1 + k2) F^[tau(k1), tau(k2)],   tau(k) = k mod L.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError
from .sampling import Grid, SampledField

__all__ = [
    "dft2",
    "tau",
    "frequencies",
    "fold_signs",
    "finite_fourier_disk",
    "finite_fourier_table",
    "direct_finite_fourier",
    "finite_fourier_coeff_1d",
    "finite_fourier_coeff_2d",
]


def dft2(A) -> np.ndarray:
    """Unnormalised forward DFT of a square table (no ``1/L`` factors)."""
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidArgumentError(f"dft2 needs a square table, got shape {A.shape}")
    return np.fft.fft2(A)


def tau(k, L: int):
    """Fold an integer frequency onto a 0-based DFT index in ``[0, L - 1]``."""
    return np.mod(k, L)


def frequencies(L: int) -> np.ndarray:
    """Signed frequency carried by each 0-based DFT index (``fftfreq`` order).

    For odd ``L = 2K + 1`` this is ``0, 1, ..., K, -K, ..., -1``.
    """
    return np.rint(np.fft.fftfreq(L, 1.0 / L)).astype(int)


def fold_signs(L: int) -> np.ndarray:
    """``(-1)^(k(l) + k(j))`` over the DFT index square."""
    s = 1 - 2 * (np.abs(frequencies(L)) % 2)
    return np.outer(s, s)


def _as_field(fld) -> SampledField:
    if isinstance(fld, SampledField):
        return fld
    vals = np.asarray(fld)
    return SampledField(Grid(vals.shape[0]), vals)


def finite_fourier_disk(fld, k) -> complex:
    """``f^(k; L)`` read off the cached DFT of ``fld`` via the folding identity."""
    fld = _as_field(fld)
    k1, k2 = (int(v) for v in k)
    L = fld.L
    sign = -1.0 if (k1 + k2) % 2 else 1.0
    return complex(fld.delta**2 * sign * fld.dft[k1 % L, k2 % L])


def finite_fourier_table(fld, K: int) -> np.ndarray:
    """``f^(k; L)`` for ``|k1|, |k2| <= K``; entry ``[k1 + K, k2 + K]``."""
    fld = _as_field(fld)
    ks = np.arange(-K, K + 1)
    idx = np.mod(ks, fld.L)
    sign = 1 - 2 * (np.abs(ks) % 2)
    return fld.delta**2 * np.outer(sign, sign) * fld.dft[np.ix_(idx, idx)]


def direct_finite_fourier(fld, k) -> complex:
    """Brute-force ``f^(k; L)`` straight from the definition (no DFT)."""
    fld = _as_field(fld)
    x = fld.grid.nodes
    e1 = np.exp(-1j * np.pi * k[0] * x)
    e2 = np.exp(-1j * np.pi * k[1] * x)
    return complex(fld.delta**2 * (e1 @ fld.values @ e2))


def finite_fourier_coeff_1d(u, k: int, L: int) -> complex:
    """``(1/L) sum_i u(x_i) exp(-pi i k x_i)`` for a vectorised ``u`` on [-1, 1]."""
    x = Grid(L).nodes
    vals = np.broadcast_to(np.asarray(u(x), dtype=complex), x.shape)
    return complex(np.mean(vals * np.exp(-1j * np.pi * k * x)))


def finite_fourier_coeff_2d(U, k, L: int) -> complex:
    """``(1/L^2) sum_ij U(x_i, x_j) exp(-pi i (k1 x_i + k2 x_j))``.

    ``U`` is called once on ``ij``-indexed meshgrid arrays.
    """
    x = Grid(L).nodes
    X, Y = np.meshgrid(x, x, indexing="ij")
    vals = np.broadcast_to(np.asarray(U(X, Y), dtype=complex), X.shape)
    e1 = np.exp(-1j * np.pi * k[0] * x)
    e2 = np.exp(-1j * np.pi * k[1] * x)
    return complex(e1 @ vals @ e2) / L**2
