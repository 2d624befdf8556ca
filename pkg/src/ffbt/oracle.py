"""Slow reference values for every continuous quantity the fast paths approximate.

Disk integrals use Gauss-Legendre in the radius (weight ``r`` folded into
the weights) and the trapezoid rule in the angle, both taken about
``QuadratureSpec.center`` over a disk of ``QuadratureSpec.radius``.  Centering
the rule on the support of a compactly supported integrand keeps the
integrand smooth in ``r`` and periodic in ``theta``, so both rules converge
spectrally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coefficients import coefficient_table
from .errors import InvalidArgumentError
from .sampling import Grid, SampledField
from .special import as_index, bessel_zero, jn_table, polar_harmonics, radial_norm

__all__ = [
    "QuadratureSpec",
    "polar_rule",
    "fb_coefficient_quadrature",
    "fb_coefficients",
    "fourier_integral_quadrature",
    "fourier_integral_table",
    "truncated_closed_form",
    "DiskIndicator",
    "lens_area",
    "direct_convolution",
    "convolution_samples",
    "PartialSumReference",
    "partial_sum_reference",
    "fourier_coefficient_trapezoid",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Node counts and integration disk of the reference quadratures."""

    radial_nodes: int = 256
    angular_nodes: int = 512
    cartesian_nodes: int = 256
    center: tuple = (0.0, 0.0)
    radius: float = 1.0

    def __post_init__(self):
        for name in ("radial_nodes", "angular_nodes", "cartesian_nodes"):
            if getattr(self, name) < 8:
                raise InvalidArgumentError(f"{name} must be >= 8")
        if not self.radius > 0:
            raise InvalidArgumentError("integration radius must be positive")

    def doubled(self) -> "QuadratureSpec":
        return QuadratureSpec(2 * self.radial_nodes, 2 * self.angular_nodes,
                              2 * self.cartesian_nodes, self.center, self.radius)


def polar_rule(q: QuadratureSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Flattened nodes ``x, y`` and area weights of the polar tensor rule."""
    t, wt = np.polynomial.legendre.leggauss(q.radial_nodes)
    r = 0.5 * q.radius * (t + 1.0)
    wr = 0.5 * q.radius * wt * r
    theta = 2.0 * np.pi * np.arange(q.angular_nodes) / q.angular_nodes
    wth = 2.0 * np.pi / q.angular_nodes
    R, T = np.meshgrid(r, theta, indexing="ij")
    x = q.center[0] + R * np.cos(T)
    y = q.center[1] + R * np.sin(T)
    w = np.broadcast_to((wr * wth)[:, None], R.shape)
    return x.ravel(), y.ravel(), w.ravel().copy()


def _weighted_values(f, q: QuadratureSpec):
    x, y, w = polar_rule(q)
    vals = np.broadcast_to(np.asarray(f(x, y), dtype=complex), x.shape)
    return x, y, w * vals


def _harmonic_nodes(m: int, n: int, x, y) -> np.ndarray:
    """``Psi_{m,n}`` (``m >= 0``) at scattered nodes, 0 outside the unit disk."""
    r = np.hypot(x, y)
    inside = r <= 1.0
    out = np.zeros(x.shape, dtype=complex)
    z = bessel_zero(m, n)
    theta = np.arctan2(y[inside], x[inside])
    radial = jn_table(m, z * r[inside])[m] / radial_norm(m, n)
    out[inside] = radial * np.exp(1j * m * theta) / math.sqrt(math.pi)
    return out


def fb_coefficient_quadrature(f, idx, q: QuadratureSpec = QuadratureSpec()) -> complex:
    """``C_{m,n}(f) = int f conj(Psi_{m,n}) dA`` by tensor quadrature."""
    m, n = as_index(idx)
    x, y, wf = _weighted_values(f, q)
    psi = _harmonic_nodes(abs(m), n, x, y)
    if m < 0:
        psi = (-1) ** m * np.conj(psi)
    return complex(np.sum(wf * np.conj(psi)))


def fb_coefficients(f, M: int, N: int, q: QuadratureSpec = QuadratureSpec()) -> np.ndarray:
    """All ``C_{m,n}(f)``, ``|m| <= M``, ``n <= N``, as a ``(2M + 1, N)`` table."""
    x, y, wf = _weighted_values(f, q)
    out = np.empty((2 * M + 1, N), dtype=complex)
    for m in range(M + 1):
        for n in range(1, N + 1):
            psi = _harmonic_nodes(m, n, x, y)
            out[M + m, n - 1] = np.sum(wf * np.conj(psi))
            if m:
                out[M - m, n - 1] = (-1) ** m * np.sum(wf * psi)
    return out


def fourier_integral_table(f, K: int, q: QuadratureSpec = QuadratureSpec(),
                           chunk: int = 16384) -> np.ndarray:
    """``f^(k) = int f exp(-pi i k.x) dA`` for ``|k|_inf <= K``.

    Entry ``[k1 + K, k2 + K]``.  The exponential factorises per node, so the
    table is ``E1 diag(w f) E2^T`` accumulated over node chunks.
    """
    x, y, wf = _weighted_values(f, q)
    ks = np.arange(-K, K + 1)
    out = np.zeros((ks.size, ks.size), dtype=complex)
    for s in range(0, x.size, chunk):
        e1 = np.exp(-1j * np.pi * np.outer(ks, x[s:s + chunk]))
        e2 = np.exp(-1j * np.pi * np.outer(ks, y[s:s + chunk]))
        out += (e1 * wf[s:s + chunk]) @ e2.T
    return out


def fourier_integral_quadrature(f, k, q: QuadratureSpec = QuadratureSpec()) -> complex:
    """``f^(k) = int f(x) exp(-pi i k.x) dA`` at one frequency."""
    x, y, wf = _weighted_values(f, q)
    return complex(np.sum(wf * np.exp(-1j * np.pi * (k[0] * x + k[1] * y))))


def truncated_closed_form(f, idx, cutoff: int, q: QuadratureSpec = QuadratureSpec()) -> complex:
    """``sum_{|k|_inf <= cutoff} c(k; m, n) f^(k)`` with quadrature ``f^(k)``."""
    from .coefficients import k_min

    if cutoff < k_min(idx):
        raise InvalidArgumentError(f"cutoff {cutoff} is below K_{{m,n}} = {k_min(idx)}")
    table = np.fft.ifftshift(fourier_integral_table(f, cutoff, q))
    return complex(np.sum(coefficient_table(idx, cutoff) * table))


class DiskIndicator:
    """Indicator of the closed disk of ``radius`` about ``center`` (vectorised)."""

    def __init__(self, radius: float, center=(0.0, 0.0)):
        self.radius = float(radius)
        self.center = (float(center[0]), float(center[1]))

    def __call__(self, x, y):
        dx = np.asarray(x) - self.center[0]
        dy = np.asarray(y) - self.center[1]
        return (dx * dx + dy * dy <= self.radius**2).astype(float)

    def __repr__(self):
        return f"DiskIndicator({self.radius!r}, {self.center!r})"


def lens_area(r: float, s: float, d: float) -> float:
    """Area of the intersection of disks with radii ``r``, ``s`` at distance ``d``."""
    if d >= r + s:
        return 0.0
    if d <= abs(r - s):
        return math.pi * min(r, s) ** 2
    a = r * r * math.acos((d * d + r * r - s * s) / (2 * d * r))
    b = s * s * math.acos((d * d + s * s - r * r) / (2 * d * s))
    c = 0.5 * math.sqrt((-d + r + s) * (d + r - s) * (d - r + s) * (d + r + s))
    return a + b - c


def _both_disks(f, g) -> bool:
    return isinstance(f, DiskIndicator) and isinstance(g, DiskIndicator)


def _disk_conv(f: DiskIndicator, g: DiskIndicator, x, y):
    # (f * g)(x) = |B(cf, rf) n B(x - cg, rg)|
    px = np.asarray(x, dtype=float) - g.center[0] - f.center[0]
    py = np.asarray(y, dtype=float) - g.center[1] - f.center[1]
    d = np.hypot(px, py)
    return np.vectorize(lambda t: lens_area(f.radius, g.radius, t))(d).astype(complex)


def _cartesian_rule(q: QuadratureSpec):
    t, wt = np.polynomial.legendre.leggauss(q.cartesian_nodes)
    u = q.center[0] + q.radius * t
    v = q.center[1] + q.radius * t
    U, V = np.meshgrid(u, v, indexing="ij")
    W = np.outer(wt, wt) * q.radius**2
    return U.ravel(), V.ravel(), W.ravel()


def direct_convolution(f, g, x, q: QuadratureSpec = QuadratureSpec(cartesian_nodes=128)) -> complex:
    """``(f * g)(x) = int f(y) g(x - y) dy`` at one point.

    Tensor Gauss-Legendre over the square enclosing the support disk of ``f``
    (``q.center``, ``q.radius``); two centred-or-not disk indicators use the
    exact lens area instead.
    """
    x0, y0 = (float(v) for v in x)
    if _both_disks(f, g):
        return complex(_disk_conv(f, g, x0, y0))
    u, v, w = _cartesian_rule(q)
    fv = np.asarray(f(u, v), dtype=complex)
    gv = np.asarray(g(x0 - u, y0 - v), dtype=complex)
    return complex(np.sum(w * fv * gv))


def convolution_samples(f, g, L: int, q: QuadratureSpec = QuadratureSpec(cartesian_nodes=128),
                        a: float = 1.0, chunk: int = 64) -> SampledField:
    """``(f * g)(a x_i, a x_j)`` on the ``L`` grid, one quadrature per node."""
    grid = Grid(L)
    xs = a * grid.nodes
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    if _both_disks(f, g):
        vals = _disk_conv(f, g, X, Y)
    else:
        u, v, w = _cartesian_rule(q)
        wf = w * np.asarray(f(u, v), dtype=complex)
        keep = wf != 0
        u, v, wf = u[keep], v[keep], wf[keep]
        px, py = X.ravel(), Y.ravel()
        flat = np.empty(px.size, dtype=complex)
        for s in range(0, px.size, chunk):
            gv = np.asarray(g(px[s:s + chunk, None] - u, py[s:s + chunk, None] - v), dtype=complex)
            flat[s:s + chunk] = gv @ wf
        vals = flat.reshape(X.shape)
    return SampledField(grid, vals, float(a))


@dataclass(frozen=True, eq=False)
class PartialSumReference:
    """Evaluator of ``S_{M,N}(f)`` built from quadrature coefficients."""

    M: int
    N: int
    coeffs: np.ndarray

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        harm = polar_harmonics(self.M, self.N, x, y)
        return np.tensordot(self.coeffs, harm, axes=([0, 1], [0, 1]))


def partial_sum_reference(f, M: int, N: int, q: QuadratureSpec = QuadratureSpec()) -> PartialSumReference:
    return PartialSumReference(M, N, fb_coefficients(f, M, N, q))


def fourier_coefficient_trapezoid(U, k, q: QuadratureSpec = QuadratureSpec(cartesian_nodes=512)) -> complex:
    """``(1/4) int_Omega U(x) exp(-pi i k.x) dx`` by the tensor trapezoid rule.

    Spectrally accurate for smooth 2-periodic ``U``.
    """
    n = q.cartesian_nodes
    t = -1.0 + 2.0 * np.arange(n) / n
    X, Y = np.meshgrid(t, t, indexing="ij")
    vals = np.broadcast_to(np.asarray(U(X, Y), dtype=complex), X.shape)
    e1 = np.exp(-1j * np.pi * k[0] * t)
    e2 = np.exp(-1j * np.pi * k[1] * t)
    return complex(e1 @ vals @ e2) / n**2
