"""Built-in test functions and the registry of study cases."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .oracle import DiskIndicator
from .special import polar_harmonic

__all__ = [
    "SmoothBump",
    "C2_BUMP",
    "C1_BUMP_F",
    "C1_BUMP_G",
    "harmonic_sum",
    "gaussian_pair",
    "exp_sin",
    "rectangle_indicator",
    "polygon_indicator",
    "POLYGON_VERTICES",
    "astroid_indicator",
    "Case",
    "CASES",
    "get_case",
]


class SmoothBump:
    """``(1 - |x - c|^2 / rho^2)_+^p * (b0 + b1 x + b2 y + b3 x y)``.

    The bump is ``C^(p-1)`` with support in the closed disk about ``c`` of
    radius ``rho``.  The bilinear factor breaks radial symmetry so that
    every angular order is excited.
    """

    def __init__(self, center=(0.15, -0.1), radius=0.65, power=3, poly=(1.0, 0.5, -0.3, 0.2)):
        self.center = (float(center[0]), float(center[1]))
        self.radius = float(radius)
        self.power = int(power)
        self.poly = tuple(float(b) for b in poly)

    def _parts(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        dx, dy = x - self.center[0], y - self.center[1]
        base = np.maximum(1.0 - (dx * dx + dy * dy) / self.radius**2, 0.0)
        b0, b1, b2, b3 = self.poly
        p = b0 + b1 * x + b2 * y + b3 * x * y
        return x, y, dx, dy, base, p

    def __call__(self, x, y):
        _, _, _, _, base, p = self._parts(x, y)
        return base**self.power * p

    def grad(self, x, y):
        """Analytic gradient ``(df/dx, df/dy)``."""
        x, y, dx, dy, base, p = self._parts(x, y)
        b0, b1, b2, b3 = self.poly
        k = self.power
        outer = -k * base ** (k - 1) * 2.0 / self.radius**2
        gx = outer * dx * p + base**k * (b1 + b3 * y)
        gy = outer * dy * p + base**k * (b2 + b3 * x)
        return gx, gy

    def grad_norm(self, samples: int = 1201) -> float:
        """``sup |grad f|`` of the analytic gradient over a dense grid of the support."""
        t = np.linspace(-self.radius, self.radius, samples)
        X, Y = np.meshgrid(self.center[0] + t, self.center[1] + t, indexing="ij")
        gx, gy = self.grad(X, Y)
        return float(np.max(np.hypot(gx, gy)))

    def __repr__(self):
        return f"SmoothBump({self.center}, {self.radius}, {self.power}, {self.poly})"


C2_BUMP = SmoothBump()
C1_BUMP_F = SmoothBump((0.05, -0.03), 0.4, 2, (1.0, 0.4, 0.3, -0.2))
C1_BUMP_G = SmoothBump((-0.04, 0.06), 0.35, 2, (1.0, -0.3, 0.5, 0.1))


def harmonic_sum(x, y):
    """``Psi_{1,2} + Psi_{2,1}``."""
    return polar_harmonic((1, 2), x, y) + polar_harmonic((2, 1), x, y)


_A = np.diag([1 / 0.1, 1 / 0.05])
_B = np.diag([1 / 0.05, 1 / 0.1])


def gaussian_pair(x, y):
    """``exp(-x^T A x) + i exp(-x^T B x)``, ``A = diag(0.1, 0.05)^-1``, ``B = diag(0.05, 0.1)^-1``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    qa = _A[0, 0] * x * x + _A[1, 1] * y * y
    qb = _B[0, 0] * x * x + _B[1, 1] * y * y
    return np.exp(-qa) + 1j * np.exp(-qb)


def exp_sin(x, y):
    """``exp(-x y) + i sin(x y)`` on the closed unit disk, zero outside."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    inside = x * x + y * y <= 1.0
    return np.where(inside, np.exp(-x * y) + 1j * np.sin(x * y), 0.0)


def rectangle_indicator(a: float = 0.25, b: float = 0.5):
    def chi(x, y):
        return ((np.abs(x) <= a) & (np.abs(y) <= b)).astype(float)

    return chi


POLYGON_VERTICES = (
    (0, 0), (0, 3), (-3, 3), (-3, 0), (-2, 0), (-2, -1), (-1, 1), (-1, -2), (2, -2), (2, 0),
)


def polygon_indicator(vertices=POLYGON_VERTICES, tol: float = 1e-12):
    """Closed-polygon indicator: even-odd ray casting, boundary points inside."""
    v = np.asarray(vertices, dtype=float)
    xi, yi = v[:, 0], v[:, 1]
    xj, yj = np.roll(xi, -1), np.roll(yi, -1)

    def chi(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        px, py = x[..., None], y[..., None]
        straddle = (yi > py) != (yj > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            cross_x = xi + (py - yi) * (xj - xi) / (yj - yi)
        odd = np.sum(straddle & (px < cross_x), axis=-1) % 2 == 1
        ex, ey = xj - xi, yj - yi
        cross = ex * (py - yi) - ey * (px - xi)
        dot = (px - xi) * ex + (py - yi) * ey
        on_edge = (np.abs(cross) <= tol) & (dot >= -tol) & (dot <= ex * ex + ey * ey + tol)
        return (odd | on_edge.any(axis=-1)).astype(float)

    return chi


def astroid_indicator(p: float = 2.0 / 3.0):
    """Indicator of ``|x|^p + |y|^p <= 1``."""
    def chi(x, y):
        return (np.abs(x) ** p + np.abs(y) ** p <= 1.0).astype(float)

    return chi


@dataclass(frozen=True)
class Case:
    """A registered experiment.

    ``kind`` is ``"analysis"`` (one function) or ``"conv"`` (pair ``f, g``).
    ``a`` is the disk radius of the scaled transforms; ``indicator`` marks
    discontinuous inputs whose pass/fail metric is the grid L2 error.
    """

    name: str
    kind: str
    f: object
    M: int
    N: int
    K: int
    eval_grid: int
    a: float = 1.0
    g: object = None
    indicator: bool = False
    K_list: tuple = ()
    note: str = ""

    def default_K_list(self) -> tuple:
        return self.K_list or (self.K, 2 * self.K)


CASES: dict[str, Case] = {
    c.name: c
    for c in (
        Case("harmonic-sum", "analysis", harmonic_sum, 2, 2, 3, 41, K_list=(3, 6, 12, 24)),
        Case("gaussian-pair", "analysis", gaussian_pair, 5, 5, 8, 51, K_list=(8, 16, 32)),
        Case("exp-sin", "analysis", exp_sin, 5, 6, 9, 53, indicator=True, K_list=(9, 18, 36)),
        Case("rectangle", "analysis", rectangle_indicator(0.25, 0.5), 10, 10, 15, 65,
             indicator=True, K_list=(15, 30, 60)),
        Case("polygon", "analysis", polygon_indicator(), 10, 10, 15, 81, a=6.0,
             indicator=True, K_list=(15, 30, 60), note="a = 6 holds every vertex (max radius 3 sqrt 2)"),
        Case("astroid", "analysis", astroid_indicator(2.0 / 3.0), 15, 15, 22, 95, a=2.0,
             indicator=True, K_list=(22, 44)),
        Case("bump", "analysis", C2_BUMP, 3, 3, 8, 41, K_list=(8, 16, 32)),
        Case("disk-pair", "conv", DiskIndicator(1.0), 10, 10, 15, 82, a=3.0,
             g=DiskIndicator(1.0), indicator=True, K_list=(15, 30)),
        Case("disk-pair-12", "conv", DiskIndicator(1.0), 10, 10, 15, 82, a=6.0,
             g=DiskIndicator(2.0), indicator=True, K_list=(15, 30),
             note="a = 6 so that both supports fit in the disk of radius a / 2"),
        Case("half-disk-pair", "conv", DiskIndicator(0.5), 10, 10, 15, 61,
             g=DiskIndicator(0.5), indicator=True, K_list=(15, 30)),
        Case("bump-conv", "conv", C1_BUMP_F, 3, 3, 8, 61, g=C1_BUMP_G, K_list=(8, 16, 32)),
    )
}


def get_case(name: str) -> Case:
    try:
        return CASES[name]
    except KeyError:
        raise InvalidArgumentError(f"unknown case {name!r}; known: {', '.join(sorted(CASES))}") from None
