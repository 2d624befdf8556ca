"""The transform kernel c(k; m, n), its order thresholds, error constants and
folded matrix forms.

For ``m >= 0``

    c(k; m, n) = sqrt(pi) (-1)^n i^m z J_m(pi |k|) exp(-i m Phi(k))
                 / (2 (pi^2 |k|^2 - z^2)),          z = z_{m,n},

with ``Phi = atan2(k2, k1)`` and ``Phi(0, 0) = 0``.  Negative orders carry an
extra ``(-1)^m``, which makes ``c(k; -m, n) = conj(c(k; m, n))``.

Kernel tables are laid out in DFT index order: entry ``[l, j]`` belongs to
the frequency ``(k(l), k(j))`` of :func:`ffbt.fourier.frequencies`, so they
multiply a field's DFT entrywise.
"""

from __future__ import annotations

import math
import threading
from collections import OrderedDict
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidArgumentError, NearResonanceError
from .fourier import fold_signs, frequencies
from .special import HarmonicIndex, as_index, bessel_j, bessel_zero, jn_table, radial_norm

__all__ = [
    "RESONANCE_GAP",
    "coeff_c",
    "coefficient_table",
    "coefficient_stack",
    "k_min",
    "k_min_block",
    "alpha",
    "beta_partial",
    "gamma",
    "D_MN",
    "ErrorBudget",
    "epsilon_plan",
    "CoefficientKernel",
    "build_kernel",
    "kernel_stack",
    "save_kernel",
    "load_kernel",
]

RESONANCE_GAP = 1e-9
_I_POW = (1.0, 1.0j, -1.0, -1.0j)


def _check_resonance(rho2, z: float, m: int, n: int):
    gap = np.abs(rho2 - z * z)
    if np.any(gap < RESONANCE_GAP * z * z):
        raise NearResonanceError(
            f"pi^2 |k|^2 is within {RESONANCE_GAP:g} (relative) of z_{{{m},{n}}}^2"
        )


def coeff_c(k, idx) -> complex:
    """Scalar kernel value ``c(k; m, n)`` evaluated literally from its formula."""
    m, n = as_index(idx)
    k1, k2 = (int(v) for v in k)
    z = bessel_zero(abs(m), n)
    norm = math.hypot(k1, k2)
    rho2 = math.pi**2 * (k1 * k1 + k2 * k2)
    _check_resonance(rho2, z, m, n)
    phi = math.atan2(k2, k1) if (k1 or k2) else 0.0
    sign_n = -1.0 if n % 2 else 1.0
    val = (
        math.sqrt(math.pi) * sign_n * _I_POW[m % 4] * z * bessel_j(m, math.pi * norm)
        * complex(math.cos(m * phi), -math.sin(m * phi))
        / (2.0 * (rho2 - z * z))
    )
    if m < 0 and m % 2:
        val = -val
    return complex(val)


def _freq_grid(K: int):
    ks = frequencies(2 * K + 1)
    k1, k2 = np.meshgrid(ks, ks, indexing="ij")
    norm = np.hypot(k1, k2)
    phi = np.arctan2(k2, k1)  # atan2(0, 0) is 0 in numpy
    return k1, k2, norm, phi


def coefficient_stack(M: int, N: int, K: int) -> np.ndarray:
    """``c(k; m, n)`` for ``|m| <= M``, ``1 <= n <= N``, ``|k|_inf <= K``.

    Returns
    -------
    ndarray
        Shape ``(2M + 1, N, L, L)``; row ``t`` is order ``m = t - M`` and the
        last two axes follow DFT index order.
    """
    if M < 0 or N < 1 or K < 0:
        raise InvalidArgumentError("need M >= 0, N >= 1, K >= 0")
    L = 2 * K + 1
    _, _, norm, phi = _freq_grid(K)
    rho2 = np.pi**2 * norm**2
    bes = jn_table(M, np.pi * norm)
    out = np.empty((2 * M + 1, N, L, L), dtype=complex)
    for m in range(M + 1):
        angular = np.exp(-1j * m * phi) * _I_POW[m % 4]
        for n in range(1, N + 1):
            z = bessel_zero(m, n)
            _check_resonance(rho2, z, m, n)
            sign_n = -1.0 if n % 2 else 1.0
            vals = math.sqrt(math.pi) * sign_n * z * bes[m] * angular / (2.0 * (rho2 - z * z))
            out[M + m, n - 1] = vals
            if m:
                out[M - m, n - 1] = np.conj(vals)
    return out


def coefficient_table(idx, K: int) -> np.ndarray:
    """``c(k; m, n)`` over ``|k|_inf <= K`` in DFT index order (``L x L``)."""
    m, n = as_index(idx)
    stack = coefficient_stack(abs(m), n, K)
    return stack[abs(m) + m, n - 1]


# -- thresholds and error constants ------------------------------------------


def k_min(idx) -> int:
    """``K_{m,n} = ceil(z_{|m|,n} / pi)``."""
    m, n = as_index(idx)
    return int(math.ceil(bessel_zero(abs(m), n) / math.pi))


def k_min_block(M: int, N: int) -> int:
    """``K[M, N]``: the largest ``K_{m,n}`` over ``0 <= m <= M``, ``1 <= n <= N``."""
    if M < 0 or N < 1:
        raise InvalidArgumentError("k_min_block needs M >= 0 and N >= 1")
    return max(k_min((m, n)) for m in range(M + 1) for n in range(1, N + 1))


def alpha(idx) -> float:
    """Tail constant: ``|c(k)| <= alpha / K^2`` whenever ``|k|_inf > K >= K_{m,n}``."""
    m, n = as_index(idx)
    z = bessel_zero(abs(m), n)
    Kmn = k_min(idx)
    return math.sqrt(math.pi) * Kmn**2 * z / (math.pi**2 * Kmn**2 - z * z)


def _sqrt_x_bessel_bound(m: int, x0: float) -> float:
    """Bound for ``sqrt(x) |J_m(x)|`` on ``x >= x0`` (``x0 > m``).

    Debye's envelope ``sqrt(2 / pi) (1 - m^2/x^2)^(-1/4)`` with a 1% margin,
    floored by a dense scan just past ``x0``.
    """
    env = math.sqrt(2.0 / math.pi) * (1.0 - (m / x0) ** 2) ** -0.25 * 1.01
    xs = np.linspace(x0, x0 + 64.0, 4097)
    scan = float(np.max(np.sqrt(xs) * np.abs(bessel_j(m, xs))))
    return max(env, scan)


def beta_partial(idx, cutoff: int) -> tuple[float, float]:
    """Truncated absolute kernel sum and a bound for what was cut off.

    Parameters
    ----------
    idx : HarmonicIndex or (m, n)
    cutoff : int
        Box half-width, at least ``k_min(idx)``.

    Returns
    -------
    partial : float
        ``sum |c(k)|`` over ``|k|_inf <= cutoff``.
    tail_bound : float
        Upper bound for the remaining sum.  Uses ``|J_m(x)| <= a_J x^(-1/2)``
        past ``pi (cutoff + 1)``, the threshold inequality for the
        denominator, ``8 s`` lattice points on the shell ``|k|_inf = s`` and
        ``sum_{s > c} s^(-3/2) <= 2 / sqrt(c)``.
    """
    m, n = as_index(idx)
    Kmn = k_min(idx)
    if cutoff < Kmn:
        raise InvalidArgumentError(f"cutoff {cutoff} is below K_{{{m},{n}}} = {Kmn}")
    z = bessel_zero(abs(m), n)
    partial = float(np.sum(np.abs(coefficient_table((m, n), cutoff))))
    a_j = _sqrt_x_bessel_bound(abs(m), math.pi * (cutoff + 1))
    lead = z * Kmn**2 / (2.0 * (math.pi**2 * Kmn**2 - z * z))
    tail = lead * a_j * 16.0 / math.sqrt(cutoff)
    return partial, tail


def gamma(idx, cutoff: int | None = None) -> float:
    """``max(alpha, partial + tail_bound)``, a computable upper surrogate."""
    if cutoff is None:
        cutoff = max(32, 4 * k_min(idx))
    partial, tail = beta_partial(idx, cutoff)
    return max(alpha(idx), partial + tail)


def D_MN(M: int, N: int, cutoff: int | None = None) -> float:
    """``sum_{|m| <= M, n <= N} gamma_{m,n} / |J_{m+1}(z_{m,n})|``."""
    total = 0.0
    for m in range(M + 1):
        for n in range(1, N + 1):
            term = gamma((m, n), cutoff) / radial_norm(m, n)
            total += term if m == 0 else 2.0 * term
    return total


@dataclass(frozen=True)
class ErrorBudget:
    """User-supplied smoothness constants of the unknown input.

    ``c_f`` may be given directly or derived from ``grad_norm`` (sup of
    ``|grad f|``) and ``wiener_norm`` (sum of ``|f^(k)|``).
    """

    c_f: float | None = None
    d_fg: float | None = None
    grad_norm: float | None = None
    wiener_norm: float | None = None

    def __post_init__(self):
        for name in ("c_f", "d_fg", "grad_norm", "wiener_norm"):
            v = getattr(self, name)
            if v is not None and not (v > 0 and math.isfinite(v)):
                raise InvalidArgumentError(f"{name} must be a positive finite number")

    def resolved_c_f(self) -> float | None:
        if self.c_f is not None:
            return self.c_f
        if self.grad_norm is not None and self.wiener_norm is not None:
            return max(96.0 * self.grad_norm / math.pi, self.wiener_norm)
        return None


_MODES = ("fourier", "single", "block", "conv", "conv-block")


def epsilon_plan(eps: float, budget: ErrorBudget, mode: str, *, m: int = 0, n: int = 1,
                 M: int = 0, N: int = 1, k=(0, 0), cutoff: int | None = None) -> tuple[int, int]:
    """Smallest ``K`` (and ``L = 2K + 1``) the error bounds certify for ``eps``.

    Modes
    -----
    fourier     finite Fourier transform at ``k``; needs ``grad_norm``.
    single      one coefficient ``(m, n)``; needs ``c_f``.
    block       synthesis ``S_{M,N}``; needs ``c_f``.
    conv        unified convolution coefficient ``(m, n)``; needs ``d_fg``.
    conv-block  unified convolution synthesis; needs ``d_fg``.
    """
    if not (eps > 0 and math.isfinite(eps)):
        raise InvalidArgumentError("target eps must be positive and finite")
    if mode not in _MODES:
        raise InvalidArgumentError(f"unknown mode {mode!r}; expected one of {_MODES}")

    def need(value, what):
        if value is None:
            raise InvalidArgumentError(f"mode {mode!r} needs {what}")
        return value

    if mode == "fourier":
        g = need(budget.grad_norm, "grad_norm (sup of |grad f|)")
        raw, floor = 96.0 * g / (math.pi * eps), max(abs(int(k[0])), abs(int(k[1])))
    elif mode in ("single", "conv"):
        const = (need(budget.resolved_c_f(), "c_f (or grad_norm and wiener_norm)")
                 if mode == "single" else need(budget.d_fg, "d_fg"))
        raw, floor = 2.0 * const * gamma((m, n), cutoff) / eps, k_min((m, n))
    else:
        const = (need(budget.resolved_c_f(), "c_f (or grad_norm and wiener_norm)")
                 if mode == "block" else need(budget.d_fg, "d_fg"))
        raw, floor = 2.0 * const * D_MN(M, N, cutoff) / eps, k_min_block(M, N)
    K = int(math.ceil(max(raw, floor)))
    return K, 2 * K + 1


# -- folded kernels -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CoefficientKernel:
    """Folded matrix forms of ``c(.; m, n)`` at band limit ``K``.

    ``q[j, l] = (-1)^(k(l) + k(j)) c((k(l), k(j)))`` so that the coefficient is
    ``delta^2 trace(q @ F^)``; ``q_cross`` is the same without the signs and
    gives ``delta^4 trace(q_cross @ (F^ * G^))``.
    """

    idx: HarmonicIndex
    K: int
    q: np.ndarray
    q_cross: np.ndarray

    @property
    def L(self) -> int:
        return 2 * self.K + 1


_CACHE: OrderedDict = OrderedDict()
_CACHE_SIZE = 256
_CACHE_LOCK = threading.Lock()


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def build_kernel(idx, K: int, cache_dir=None) -> CoefficientKernel:
    """Folded tables ``Q`` and ``Q_cross`` for one mode.

    Results are memoised in memory; with ``cache_dir`` they are also read
    from (or written to) kernel files there.
    """
    idx = as_index(idx)
    if int(K) != K or K < 1:
        raise InvalidArgumentError("band limit K must be an integer >= 1")
    key = (idx.m, idx.n, int(K))
    with _CACHE_LOCK:
        hit = _CACHE.get(key)
        if hit is not None:
            _CACHE.move_to_end(key)
    if hit is not None:
        if cache_dir is not None and not _kernel_path(cache_dir, "Qx", idx, int(K)).exists():
            save_kernel(hit, cache_dir)
        return hit
    kern = None
    if cache_dir is not None:
        try:
            kern = load_kernel(cache_dir, idx, K)
        except FileNotFoundError:
            kern = None
    if kern is None:
        table = coefficient_table(idx, K)
        kern = CoefficientKernel(
            idx, int(K),
            _frozen((table * fold_signs(2 * K + 1)).T.copy()),
            _frozen(table.T.copy()),
        )
        if cache_dir is not None:
            save_kernel(kern, cache_dir)
    with _CACHE_LOCK:
        _CACHE[key] = kern
        while len(_CACHE) > _CACHE_SIZE:
            _CACHE.popitem(last=False)
    return kern


def kernel_stack(M: int, N: int, K: int, cross: bool = False) -> np.ndarray:
    """Folded tables for a whole block, shape ``(2M + 1, N, L, L)``.

    Entry ``[t, n - 1]`` is ``q`` (or ``q_cross``) of mode ``(t - M, n)``,
    already transposed into the trace convention.
    """
    stack = coefficient_stack(M, N, K)
    if not cross:
        stack = stack * fold_signs(2 * K + 1)
    return stack.transpose(0, 1, 3, 2)


def _kernel_path(directory, kind: str, idx: HarmonicIndex, K: int) -> Path:
    return Path(directory) / f"{kind}_m{idx.m}_n{idx.n}_K{K}.json"


def save_kernel(kern: CoefficientKernel, directory) -> list[Path]:
    from .io import write_table

    paths = []
    for kind, table in (("Q", kern.q), ("Qx", kern.q_cross)):
        path = _kernel_path(directory, kind, kern.idx, kern.K)
        write_table(path, table, {"kind": kind, "m": kern.idx.m, "n": kern.idx.n, "K": kern.K})
        paths.append(path)
    return paths


def load_kernel(directory, idx, K: int) -> CoefficientKernel:
    from .io import read_table

    idx = as_index(idx)
    tables = {}
    for kind in ("Q", "Qx"):
        head, table = read_table(_kernel_path(directory, kind, idx, K))
        if (head.get("kind"), head.get("m"), head.get("n"), head.get("K")) != (kind, idx.m, idx.n, K):
            raise InvalidArgumentError(f"kernel file header does not match {kind} ({idx.m}, {idx.n}, {K})")
        tables[kind] = _frozen(table)
    return CoefficientKernel(idx, int(K), tables["Q"], tables["Qx"])
