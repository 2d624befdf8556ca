"""Unified FFBT / iFFBT of a convolution ``f * g`` from the factors' DFTs.

The convolution is never sampled: its finite Fourier transform is replaced
by the product ``f^(k; L) g^(k; L) = delta^4 F^ G^`` (the alternating signs
square away), so

    C^K_{m,n}[f, g] = delta^4 trace(Q_cross(m, n) (F^ * G^)).

Both factors should be supported in the disk of radius 1/2 so that the
convolution fits in the unit disk.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .coefficients import build_kernel, coeff_c
from .errors import GridMismatchError, InvalidArgumentError, OutOfRegimeError
from .fourier import direct_finite_fourier, finite_fourier_disk
from .sampling import SampledField, sample
from .special import as_index
from .transform import (
    Spectrum,
    _as_points,
    _block_table,
    _synth_from_table,
    _trace_batch,
    TRACE_CROSSOVER,
    synthesis_kernel,
)

__all__ = [
    "support_violation",
    "ffbt_conv",
    "ffbt_conv_sum",
    "ffbt_conv_block",
    "iffbt_conv",
    "iffbt_conv_trace",
    "conv_scaled",
    "ScaledConvolution",
    "fft_product_error",
]


def support_violation(fld: SampledField, radius: float = 0.5, tol: float = 1e-12) -> bool:
    """True if some sample beyond ``radius + delta`` has magnitude above ``tol``."""
    x = fld.grid.nodes
    r = np.hypot(x[:, None], x[None, :])
    outside = r > radius + fld.delta
    return bool(np.any(np.abs(fld.values[outside]) > tol))


def _check_pair(F: SampledField, G: SampledField, K: int):
    if int(K) != K or K < 1:
        raise InvalidArgumentError("band limit K must be an integer >= 1")
    if F.L != G.L:
        raise GridMismatchError(f"factor grids differ: {F.L} vs {G.L}")
    if F.L != 2 * K + 1:
        raise GridMismatchError(f"fields have L = {F.L}, band limit K = {K} needs L = {2 * K + 1}")
    for name, fld in (("f", F), ("g", G)):
        if support_violation(fld):
            warnings.warn(f"{name} has samples outside the disk of radius 1/2", stacklevel=3)


def _product(F: SampledField, G: SampledField) -> np.ndarray:
    return F.dft * G.dft


def ffbt_conv(F: SampledField, G: SampledField, idx, K: int) -> complex:
    """``C^K_{m,n}[f, g] = delta^4 trace(Q_cross (F^ * G^))``."""
    _check_pair(F, G, K)
    kern = build_kernel(idx, K)
    return complex(F.delta**4 * np.sum(kern.q_cross.T * _product(F, G)))


def ffbt_conv_sum(F: SampledField, G: SampledField, idx, K: int) -> complex:
    """Definitional sum of ``c(k) f^(k; L) g^(k; L)`` without any DFT (slow)."""
    _check_pair(F, G, K)
    idx = as_index(idx)
    total = 0.0j
    for k1 in range(-K, K + 1):
        for k2 in range(-K, K + 1):
            k = (k1, k2)
            total += coeff_c(k, idx) * direct_finite_fourier(F, k) * direct_finite_fourier(G, k)
    return total


def ffbt_conv_block(F: SampledField, G: SampledField, M: int, N: int, K: int) -> Spectrum:
    """All unified convolution coefficients ``|m| <= M``, ``n <= N``."""
    _check_pair(F, G, K)
    real = F.is_real and G.is_real
    table = _block_table(_product(F, G), F.delta**4, M, N, K, real, cross=True)
    return Spectrum.from_array(table, K, 1.0)


def iffbt_conv(F: SampledField, G: SampledField, M: int, N: int, K: int, points,
               path: str = "auto") -> np.ndarray:
    """``S^K_{M,N}[f, g]`` at unit-disk points (exactly 0 outside the unit disk).

    ``path`` is ``"two-stage"``, ``"trace"`` or ``"auto"``.
    """
    _check_pair(F, G, K)
    pts = _as_points(points)
    if path == "auto":
        path = "trace" if len(pts) > TRACE_CROSSOVER else "two-stage"
    if path == "trace":
        return _trace_batch(_product(F, G), F.delta**4, M, N, K, 1.0, pts, cross=True)
    if path != "two-stage":
        raise InvalidArgumentError(f"unknown synthesis path {path!r}")
    real = F.is_real and G.is_real
    table = _block_table(_product(F, G), F.delta**4, M, N, K, real, cross=True)
    return _synth_from_table(table, M, N, 1.0, pts)


def iffbt_conv_trace(F: SampledField, G: SampledField, M: int, N: int, K: int, point) -> complex:
    """``delta^4 trace(K_cross(x, y) (F^ * G^))`` at one point."""
    _check_pair(F, G, K)
    x, y = (float(v) for v in point)
    if math.hypot(x, y) > 1.0:
        return 0j
    sk = synthesis_kernel(M, N, K, (x, y), cross=True)
    return complex(F.delta**4 * np.sum(sk.kmat.T * _product(F, G)))


@dataclass(frozen=True, eq=False)
class ScaledConvolution:
    """Scaled convolution synthesis with its unit bookkeeping.

    Unless ``physical`` is set, ``values`` approximate
    ``(f~ * g~)(x / a) = a^-2 (f * g)(x)``; multiplying by ``jacobian = a^2``
    recovers the physical convolution.
    """

    values: np.ndarray
    a: float
    jacobian: float
    physical: bool = False


def conv_scaled(f, g, a: float, M: int, N: int, K: int, points, physical: bool = False):
    """``S^K_{M,N}[f~, g~](x / a)`` with ``f~(x) = f(a x)``, ``g~(x) = g(a x)``.

    Parameters
    ----------
    f, g : callable
        Vectorised generators supported in the disk of radius ``a / 2``.
    a : float
        Scale; points are in physical units.
    physical : bool
        Multiply by ``a^2`` so the result approximates ``(f * g)(x)`` itself.

    Returns
    -------
    ScaledConvolution
    """
    if not a > 0:
        raise InvalidArgumentError("scale a must be positive")
    L = 2 * K + 1
    F, G = sample(f, L, a), sample(g, L, a)
    pts = _as_points(points) / a
    vals = iffbt_conv(F, G, M, N, K, pts)
    if physical:
        vals = vals * a * a
    return ScaledConvolution(vals, float(a), float(a * a), physical)


def fft_product_error(f, g, k, K: int, q=None) -> float:
    """``|(f * g)^(k; L) - f^(k; L) g^(k; L)|`` with ``L = 2K + 1``.

    The convolution samples come from :func:`ffbt.oracle.direct_convolution`
    (one quadrature per grid node, so this is slow for large ``K``).
    """
    from .oracle import QuadratureSpec, convolution_samples

    k1, k2 = (int(v) for v in k)
    if max(abs(k1), abs(k2)) > K:
        raise OutOfRegimeError(f"|k|_inf = {max(abs(k1), abs(k2))} exceeds the band limit K = {K}")
    L = 2 * K + 1
    if q is None:
        q = QuadratureSpec()
    F, G = sample(f, L), sample(g, L)
    FG = convolution_samples(f, g, L, q)
    prod = finite_fourier_disk(F, (k1, k2)) * finite_fourier_disk(G, (k1, k2))
    return float(abs(finite_fourier_disk(FG, (k1, k2)) - prod))
