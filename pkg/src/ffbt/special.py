"""Bessel functions of the first kind, their zeros, and the polar harmonics.

All Bessel values come from Miller's backward recurrence normalised with
``J_0 + 2 * sum(J_2k) = 1``.  One sweep yields every order ``0..nmax`` at
once, which is what the coefficient tables need (``J_m(pi * |k|)`` for all
``m`` at every frequency).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidArgumentError

__all__ = [
    "HarmonicIndex",
    "as_index",
    "jn_table",
    "bessel_j",
    "BesselZeroTable",
    "ZEROS",
    "bessel_zero",
    "radial_norm",
    "normalized_radial",
    "polar_harmonic",
    "polar_harmonics",
]

_RESCALE_AT = 1e100
_SMALL_X = 1e-8


@dataclass(frozen=True, order=True)
class HarmonicIndex:
    """Angular order ``m`` and radial index ``n >= 1`` of a polar harmonic."""

    m: int
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InvalidArgumentError(f"radial index n must be >= 1, got {self.n}")
        if int(self.m) != self.m:
            raise InvalidArgumentError(f"angular order m must be an integer, got {self.m}")

    def __iter__(self):
        yield self.m
        yield self.n


def as_index(idx) -> HarmonicIndex:
    if isinstance(idx, HarmonicIndex):
        return idx
    m, n = idx
    return HarmonicIndex(int(m), int(n))


def _check_finite(x):
    if not np.all(np.isfinite(x)):
        raise InvalidArgumentError("Bessel argument must be finite")


def _miller_scalar(nmax: int, x: float) -> list:
    # same recurrence as the array path, in plain floats for one argument
    top = max(nmax, int(math.ceil(x)))
    start = top + int(math.sqrt(60.0 * top)) + 20
    start += start % 2
    two_over_x = 2.0 / x
    res = [0.0] * (nmax + 1)
    nxt, cur, total = 0.0, 1.0, 2.0
    for j in range(start, 0, -1):
        nxt, cur = cur, j * two_over_x * cur - nxt
        order = j - 1
        if order <= nmax:
            res[order] = cur
        if order % 2 == 0:
            total += cur if order == 0 else 2.0 * cur
        if j % 8 == 0 and abs(cur) > _RESCALE_AT:
            cur /= _RESCALE_AT
            nxt /= _RESCALE_AT
            total /= _RESCALE_AT
            res = [r / _RESCALE_AT for r in res]
    return [r / total for r in res]


def jn_table(nmax: int, x) -> np.ndarray:
    """Return ``J_0(x), ..., J_nmax(x)`` stacked along a new leading axis.

    Parameters
    ----------
    nmax : int
        Highest order wanted (``>= 0``).
    x : array_like
        Finite real arguments, any shape.

    Returns
    -------
    ndarray
        Shape ``(nmax + 1,) + np.shape(x)``.
    """
    if nmax < 0:
        raise InvalidArgumentError("nmax must be >= 0")
    x = np.asarray(x, dtype=float)
    _check_finite(x)
    shape = x.shape
    ax = np.abs(x).ravel()
    out = np.zeros((nmax + 1, ax.size))

    small = ax < _SMALL_X
    if small.any():
        h = ax[small] / 2.0
        lead = np.ones_like(h)
        for m in range(nmax + 1):
            out[m, small] = lead * (1.0 - h * h / (m + 1))
            lead = lead * h / (m + 1)

    big = ~small
    if ax.size == 1 and big[0]:
        out[:, 0] = _miller_scalar(nmax, float(ax[0]))
    elif big.any():
        xb = ax[big]
        top = max(nmax, int(math.ceil(xb.max())))
        start = top + int(math.sqrt(60.0 * top)) + 20
        start += start % 2
        two_over_x = 2.0 / xb
        res = np.zeros((nmax + 1, xb.size))
        nxt = np.zeros_like(xb)
        cur = np.ones_like(xb)
        total = 2.0 * cur
        for j in range(start, 0, -1):
            prev = j * two_over_x * cur - nxt
            nxt, cur = cur, prev
            order = j - 1
            if order <= nmax:
                res[order] = cur
            if order % 2 == 0:
                total = total + (cur if order == 0 else 2.0 * cur)
            # x >= _SMALL_X bounds the growth over 8 steps well below overflow.
            if j % 8:
                continue
            huge = np.abs(cur) > _RESCALE_AT
            if huge.any():
                cur[huge] /= _RESCALE_AT
                nxt[huge] /= _RESCALE_AT
                total[huge] /= _RESCALE_AT
                res[:, huge] /= _RESCALE_AT
        out[:, big] = res / total

    neg = x.ravel() < 0
    if neg.any():
        out[1::2, neg] *= -1.0
    return out.reshape((nmax + 1,) + shape)


def bessel_j(m: int, x):
    """Bessel function of the first kind ``J_m(x)`` for integer ``m``.

    Negative orders use ``J_{-m} = (-1)^m J_m``.  Returns a float for scalar
    ``x`` and an array otherwise.
    """
    if int(m) != m:
        raise InvalidArgumentError("only integer orders are supported")
    m = int(m)
    order = abs(m)
    vals = jn_table(order, x)[order]
    if m < 0 and order % 2:
        vals = -vals
    if np.ndim(vals) == 0:
        return float(vals)
    return vals


def _bessel_and_slope(m: int, x: np.ndarray):
    tab = jn_table(m + 1, x)
    val = tab[m]
    if m == 0:
        slope = -tab[1]
    else:
        slope = 0.5 * (tab[m - 1] - tab[m + 1])
    return val, slope


def _refine_roots(m: int, lo: np.ndarray, hi: np.ndarray, first_n: int) -> np.ndarray:
    """Safeguarded Newton on each sign-change bracket ``[lo, hi]``."""
    lo, hi = lo.astype(float), hi.astype(float)
    flo = bessel_j(m, lo)
    # McMahon's large-zero estimate, clamped into the bracket.
    beta = (np.arange(first_n, first_n + lo.size) + 0.5 * m - 0.25) * math.pi
    guess = beta - (4.0 * m * m - 1.0) / (8.0 * beta)
    x = np.where((guess > lo) & (guess < hi), guess, 0.5 * (lo + hi))
    done = np.zeros(x.size, dtype=bool)
    for _ in range(200):
        f, fp = _bessel_and_slope(m, x)
        hit = f == 0.0
        left = np.sign(f) == np.sign(flo)
        lo = np.where(left & ~done, x, lo)
        flo = np.where(left & ~done, f, flo)
        hi = np.where(~left & ~done, x, hi)
        with np.errstate(divide="ignore", invalid="ignore"):
            trial = x - f / fp
        ok = np.isfinite(trial) & (trial > lo) & (trial < hi)
        new = np.where(ok, trial, 0.5 * (lo + hi))
        new = np.where(hit | done, x, new)
        done |= hit | (np.abs(new - x) <= 1e-14 * np.maximum(1.0, np.abs(x)))
        x = new
        if done.all():
            break
    return x


class BesselZeroTable:
    """Lazily grown table of the positive zeros ``z_{m,n}`` of ``J_m``.

    Zeros for one order are found by scanning for sign changes with a step
    well below the minimum zero spacing, then polishing each bracket.
    Reads are lock-free; growth is serialised by a lock and publishes a new
    immutable tuple.
    """

    _STEP = 0.5
    _CHUNK = 256

    def __init__(self):
        self._zeros: dict[int, tuple[float, ...]] = {}
        self._lock = threading.Lock()

    def zeros(self, m: int, count: int) -> tuple[float, ...]:
        """First ``count`` zeros of ``J_|m|``."""
        m = abs(int(m))
        have = self._zeros.get(m, ())
        if len(have) >= count:
            return have[:count]
        with self._lock:
            have = self._zeros.get(m, ())
            if len(have) < count:
                want = max(count, 2 * len(have), 8)
                have = have + self._find(m, have, want - len(have))
                self._zeros[m] = have
        return have[:count]

    def __call__(self, m: int, n: int) -> float:
        if m < 0 or n < 1:
            raise InvalidArgumentError(f"bessel_zero needs m >= 0 and n >= 1, got ({m}, {n})")
        return self.zeros(m, n)[n - 1]

    def _find(self, m: int, have: tuple[float, ...], count: int) -> tuple[float, ...]:
        # J_m has no zero on (0, m]; resume just past the last known zero.
        start = have[-1] + 0.25 if have else max(float(m), 1.0)
        found: list[float] = []
        while len(found) < count:
            xs = start + self._STEP * np.arange(self._CHUNK + 1)
            fs = bessel_j(m, xs)
            flips = np.flatnonzero(np.sign(fs[:-1]) * np.sign(fs[1:]) <= 0)
            flips = flips[fs[flips] != 0.0] if flips.size else flips
            if flips.size:
                need = count - len(found)
                flips = flips[:need]
                roots = _refine_roots(m, xs[flips], xs[flips + 1], len(have) + len(found) + 1)
                found.extend(float(r) for r in roots)
            start = xs[-1]
        return tuple(found)

    def known(self) -> dict[int, tuple[float, ...]]:
        return dict(self._zeros)


ZEROS = BesselZeroTable()


def bessel_zero(m: int, n: int) -> float:
    """The ``n``-th positive zero of ``J_m`` (``m >= 0``, ``n >= 1``)."""
    if int(m) != m or int(n) != n:
        raise InvalidArgumentError("bessel_zero needs integer arguments")
    return ZEROS(int(m), int(n))


def radial_norm(m: int, n: int) -> float:
    """``|J_{m+1}(z_{|m|,n})|``, the normaliser of the radial profile.

    For ``m < 0`` the recurrence at a zero of ``J_|m|`` gives
    ``|J_{m+1}| = |J_{|m|-1}| = |J_{|m|+1}|``; the last form is used so that
    ``Psi_{-m,n}`` and ``Psi_{m,n}`` share one bit-identical normaliser.
    """
    order = abs(m)
    return abs(bessel_j(order + 1, bessel_zero(order, n)))


def normalized_radial(idx, r):
    """Unit-norm radial profile ``sqrt(2) J_m(z_{m,n} r) / |J_{m+1}(z_{m,n})|``.

    ``r`` must lie in ``[0, 1]``.
    """
    m, n = as_index(idx)
    r_arr = np.asarray(r, dtype=float)
    if np.any((r_arr < 0) | (r_arr > 1)) or not np.all(np.isfinite(r_arr)):
        raise DomainError("normalized_radial is defined for r in [0, 1]")
    z = bessel_zero(abs(m), n)
    vals = math.sqrt(2.0) * bessel_j(m, z * r_arr) / radial_norm(m, n)
    if np.ndim(vals) == 0:
        return float(vals)
    return vals


def polar_harmonic(idx, x, y):
    """``Psi_{m,n}(x, y)``: ``exp(i m theta) J_{m,n}(r) / sqrt(2 pi)`` inside the unit disk, 0 outside."""
    m, n = as_index(idx)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_finite(x)
    _check_finite(y)
    x, y = np.broadcast_arrays(x, y)
    r = np.hypot(x, y)
    inside = r <= 1.0
    out = np.zeros(x.shape, dtype=complex)
    if inside.any():
        theta = np.arctan2(y[inside], x[inside])
        radial = normalized_radial((m, n), r[inside])
        out[inside] = np.exp(1j * m * theta) * radial / math.sqrt(2.0 * math.pi)
    if out.ndim == 0:
        return complex(out)
    return out


def polar_harmonics(M: int, N: int, x, y) -> np.ndarray:
    """All ``Psi_{m,n}`` for ``|m| <= M``, ``1 <= n <= N`` at the points ``(x, y)``.

    Returns an array of shape ``(2M + 1, N) + shape`` whose row ``t`` holds
    order ``m = t - M``.  Negative orders come from
    ``Psi_{-m,n} = (-1)^m conj(Psi_{m,n})``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_finite(x)
    _check_finite(y)
    x, y = np.broadcast_arrays(x, y)
    shape = x.shape
    r = np.hypot(x, y).ravel()
    theta = np.arctan2(y, x).ravel()
    inside = r <= 1.0
    out = np.zeros((2 * M + 1, N, r.size), dtype=complex)
    ri, ti = r[inside], theta[inside]
    scale = 1.0 / math.sqrt(math.pi)
    for m in range(M + 1):
        phase = np.exp(1j * m * ti) * scale
        for n in range(1, N + 1):
            z = bessel_zero(m, n)
            radial = jn_table(m, z * ri)[m] / radial_norm(m, n)
            vals = radial * phase
            out[M + m, n - 1, inside] = vals
            if m:
                out[M - m, n - 1, inside] = (-1) ** m * np.conj(vals)
    return out.reshape((2 * M + 1, N) + shape)
