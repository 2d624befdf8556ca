"""Forward FFBT coefficients, block spectra and iFFBT synthesis.

A coefficient is a trace against the field's DFT,

    C^K_{m,n}(f) = delta^2 trace(Q(m, n) F^),

and the partial sum ``S^K_{M,N}`` is evaluated either in two stages
(coefficients, then harmonics) or through the per-point kernel
``K(x, y) = sum_{m,n} Q(m, n) Psi_{m,n}(x, y)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .coefficients import build_kernel, coeff_c, k_min_block, kernel_stack
from .errors import GridMismatchError, InvalidArgumentError
from .fourier import direct_finite_fourier
from .sampling import SampledField, sample
from .special import as_index, polar_harmonics

__all__ = [
    "Spectrum",
    "ffbt",
    "ffbt_sum",
    "ffbt_block",
    "iffbt",
    "SynthesisKernel",
    "synthesis_kernel",
    "iffbt_trace",
    "synthesize",
    "analyze_scaled",
    "steer_residual",
    "TRACE_CROSSOVER",
    "eval_points",
]

TRACE_CROSSOVER = 64
_CHUNK = 256


@dataclass(frozen=True, eq=False)
class Spectrum:
    """FFBT coefficients ``C^K_{m,n}`` for ``|m| <= M``, ``1 <= n <= N``."""

    M: int
    N: int
    K: int
    a: float = 1.0
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.M < 0 or self.N < 1:
            raise InvalidArgumentError("spectrum needs M >= 0 and N >= 1")
        want = {(m, n) for m in range(-self.M, self.M + 1) for n in range(1, self.N + 1)}
        if set(self.coeffs) != want:
            raise InvalidArgumentError(f"spectrum must hold exactly the {len(want)} modes |m| <= M, n <= N")

    def __getitem__(self, idx) -> complex:
        m, n = as_index(idx)
        return self.coeffs[(m, n)]

    def array(self) -> np.ndarray:
        """Coefficients as a ``(2M + 1, N)`` table, row ``t`` for ``m = t - M``."""
        out = np.empty((2 * self.M + 1, self.N), dtype=complex)
        for (m, n), c in self.coeffs.items():
            out[m + self.M, n - 1] = c
        return out

    @classmethod
    def from_array(cls, table, K: int, a: float = 1.0) -> "Spectrum":
        table = np.asarray(table, dtype=complex)
        M = (table.shape[0] - 1) // 2
        N = table.shape[1]
        coeffs = {(t - M, n + 1): complex(table[t, n]) for t in range(2 * M + 1) for n in range(N)}
        return cls(M, N, int(K), float(a), coeffs)


def _check_grid(fld: SampledField, K: int):
    if int(K) != K or K < 1:
        raise InvalidArgumentError("band limit K must be an integer >= 1")
    if fld.L != 2 * K + 1:
        raise GridMismatchError(f"field has L = {fld.L}, band limit K = {K} needs L = {2 * K + 1}")


def ffbt(fld: SampledField, idx, K: int) -> complex:
    """``C^K_{m,n}(f) = delta^2 trace(Q F^)`` for a field on the ``2K + 1`` grid."""
    _check_grid(fld, K)
    kern = build_kernel(idx, K)
    return complex(fld.delta**2 * np.sum(kern.q.T * fld.dft))


def ffbt_sum(fld: SampledField, idx, K: int) -> complex:
    """Definitional double sum of ``c(k) f^(k; L)`` without any DFT (slow)."""
    _check_grid(fld, K)
    idx = as_index(idx)
    total = 0.0j
    for k1 in range(-K, K + 1):
        for k2 in range(-K, K + 1):
            total += coeff_c((k1, k2), idx) * direct_finite_fourier(fld, (k1, k2))
    return total


def _block_table(spectral: np.ndarray, weight: float, M: int, N: int, K: int,
                 real: bool, cross: bool) -> np.ndarray:
    stack = kernel_stack(M, N, K, cross=cross)
    if real:
        half = np.einsum("tnjl,lj->tn", stack[M:], spectral) * weight
        out = np.empty((2 * M + 1, N), dtype=complex)
        out[M:] = half
        for m in range(1, M + 1):
            out[M - m] = (-1) ** m * np.conj(half[m])
        return out
    return np.einsum("tnjl,lj->tn", stack, spectral) * weight


def ffbt_block(fld: SampledField, M: int, N: int, K: int, real: bool | None = None) -> Spectrum:
    """All coefficients ``|m| <= M``, ``n <= N`` from one shared DFT.

    Real fields (auto-detected unless ``real`` is given) are computed for
    ``m >= 0`` only and reflected with ``C_{-m} = (-1)^m conj(C_m)``.
    """
    _check_grid(fld, K)
    if K < k_min_block(M, N):
        warnings.warn(
            f"K = {K} is below the threshold K[{M},{N}] = {k_min_block(M, N)}; "
            "the error bounds do not apply",
            stacklevel=2,
        )
    if real is None:
        real = fld.is_real
    table = _block_table(fld.dft, fld.delta**2, M, N, K, real, cross=False)
    return Spectrum.from_array(table, K, fld.a)


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(1, 2)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise InvalidArgumentError("points must be an (P, 2) array of (x, y) pairs")
    if not np.all(np.isfinite(pts)):
        raise InvalidArgumentError("points must be finite")
    return pts


def _synth_from_table(table: np.ndarray, M: int, N: int, a: float, pts: np.ndarray) -> np.ndarray:
    out = np.zeros(len(pts), dtype=complex)
    inside = np.hypot(pts[:, 0], pts[:, 1]) <= a
    if inside.any():
        p = pts[inside] / a
        harm = polar_harmonics(M, N, p[:, 0], p[:, 1])
        out[inside] = np.einsum("tn,tnp->p", table, harm)
    return out


def iffbt(spec: Spectrum, points) -> np.ndarray:
    """Partial sum ``sum C_{m,n} Psi_{m,n}(x / a, y / a)`` at each point.

    Points farther than ``a`` from the origin get exactly 0.
    """
    pts = _as_points(points)
    return _synth_from_table(spec.array(), spec.M, spec.N, spec.a, pts)


@dataclass(frozen=True, eq=False)
class SynthesisKernel:
    """Per-point synthesis matrices.

    ``p[t, n]`` is ``Psi_{t-M, n+1}`` at the (unit-disk) point, ``h[l, j, t, n]``
    the folded kernel of mode ``(t - M, n + 1)`` at entry ``[j, l]``, and
    ``kmat[j, l] = trace(h[l, j] @ p.T)``.  ``cross`` selects the unsigned
    convolution kernels.
    """

    point: tuple
    M: int
    N: int
    K: int
    p: np.ndarray
    h: np.ndarray
    kmat: np.ndarray
    cross: bool = False


def synthesis_kernel(M: int, N: int, K: int, point, cross: bool = False) -> SynthesisKernel:
    x, y = (float(v) for v in point)
    p = polar_harmonics(M, N, x, y)
    h = kernel_stack(M, N, K, cross=cross).transpose(3, 2, 0, 1)
    kmat = np.einsum("ljtn,tn->jl", h, p)
    return SynthesisKernel((x, y), M, N, K, p, h, kmat, cross)


def iffbt_trace(fld: SampledField, M: int, N: int, K: int, point) -> complex:
    """``S^K_{M,N}(f)(x, y) = delta^2 trace(K(x, y) F^)`` at one point.

    ``point`` is in physical units; it is divided by the field's ``a``.
    """
    _check_grid(fld, K)
    x, y = (float(v) for v in point)
    if math.hypot(x, y) > fld.a:
        return 0j
    sk = synthesis_kernel(M, N, K, (x / fld.a, y / fld.a))
    return complex(fld.delta**2 * np.sum(sk.kmat.T * fld.dft))


def _trace_batch(spectral: np.ndarray, weight: float, M: int, N: int, K: int, a: float,
                 pts: np.ndarray, cross: bool) -> np.ndarray:
    h = kernel_stack(M, N, K, cross=cross).transpose(3, 2, 0, 1)
    out = np.zeros(len(pts), dtype=complex)
    inside = np.flatnonzero(np.hypot(pts[:, 0], pts[:, 1]) <= a)
    for start in range(0, inside.size, _CHUNK):
        sel = inside[start:start + _CHUNK]
        p = pts[sel] / a
        harm = polar_harmonics(M, N, p[:, 0], p[:, 1])
        kmats = np.einsum("ljtn,tnp->pjl", h, harm)
        out[sel] = weight * np.einsum("pjl,lj->p", kmats, spectral)
    return out


def synthesize(fld: SampledField, M: int, N: int, K: int, points, path: str = "auto",
               real: bool | None = None) -> np.ndarray:
    """``S^K_{M,N}(f)`` at many points straight from a field.

    ``path`` is ``"two-stage"``, ``"trace"`` or ``"auto"`` (trace form only
    for batches larger than :data:`TRACE_CROSSOVER`).
    """
    _check_grid(fld, K)
    pts = _as_points(points)
    if path == "auto":
        path = "trace" if len(pts) > TRACE_CROSSOVER else "two-stage"
    if path == "trace":
        return _trace_batch(fld.dft, fld.delta**2, M, N, K, fld.a, pts, cross=False)
    if path != "two-stage":
        raise InvalidArgumentError(f"unknown synthesis path {path!r}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        spec = ffbt_block(fld, M, N, K, real=real)
    return iffbt(spec, pts)


def analyze_scaled(f, a: float, M: int, N: int, K: int) -> Spectrum:
    """Spectrum of ``f~(x) = f(a x)`` on the ``2K + 1`` grid, tagged with radius ``a``.

    Synthesising it with :func:`iffbt` evaluates ``S^K_{M,N}(f~)(x / a)``.
    """
    if not a > 0:
        raise InvalidArgumentError("radius a must be positive")
    return ffbt_block(sample(f, 2 * K + 1, a), M, N, K)


def steer_residual(f, idx, K: int, phi: float, a: float = 1.0) -> float:
    """``|C^K_{m,n}(R_phi f) - exp(i m phi) C^K_{m,n}(f)|``.

    ``f`` is the vectorised generator; the rotated function
    ``R_phi f(r, theta) = f(r, theta + phi)`` is sampled exactly, never
    interpolated.
    """
    idx = as_index(idx)
    c, s = math.cos(phi), math.sin(phi)

    def rotated(x, y):
        return f(c * x - s * y, s * x + c * y)

    L = 2 * K + 1
    base = ffbt(sample(f, L, a), idx, K)
    turned = ffbt(sample(rotated, L, a), idx, K)
    return float(abs(turned - np.exp(1j * idx.m * phi) * base))


def eval_points(L_eval: int, a: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Node coordinates of an ``L_eval`` grid on ``[-a, a)^2`` and the point list.

    Returns the 1-D nodes and an ``(L_eval^2, 2)`` row-major point array.
    """
    x = a * (-1.0 + np.arange(L_eval) * (2.0 / L_eval))
    X, Y = np.meshgrid(x, x, indexing="ij")
    return x, np.column_stack([X.ravel(), Y.ravel()])

