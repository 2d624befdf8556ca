"""Uniform grids on the square [-1, 1]^2 and fields sampled on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InvalidArgumentError, SamplingError

__all__ = ["Grid", "make_grid", "disk_mask", "SampledField", "sample", "field_from_values"]


@dataclass(frozen=True)
class Grid:
    """Half-open uniform grid ``x_i = -1 + (i - 1) * delta``, ``delta = 2 / L``.

    The left end ``-1`` is a node; ``+1`` never is.
    """

    L: int

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 1:
            raise InvalidArgumentError(f"grid size L must be a positive integer, got {self.L}")

    @property
    def delta(self) -> float:
        return 2.0 / self.L

    @cached_property
    def nodes(self) -> np.ndarray:
        nodes = -1.0 + np.arange(self.L) * self.delta
        nodes.flags.writeable = False
        return nodes


def make_grid(L: int) -> Grid:
    return Grid(L)


def disk_mask(grid: Grid) -> set[tuple[int, int]]:
    """1-based index pairs ``(i, j)`` whose node lies in the closed unit disk."""
    x = grid.nodes
    inside = x[:, None] ** 2 + x[None, :] ** 2 <= 1.0
    return {(int(i) + 1, int(j) + 1) for i, j in zip(*np.nonzero(inside))}


@dataclass(frozen=True, eq=False)
class SampledField:
    """Samples ``values[i, j] = f(a * x_i, a * x_j)`` on an ``L x L`` grid.

    ``a`` is the half-width of the physical square; ``a = 1`` is the plain
    unit-disk setting, other values hold the rescaled function
    ``f~(x) = f(a x)`` used for disks of radius ``a``.  The DFT of the samples
    is computed on first use and kept.
    """

    grid: Grid
    values: np.ndarray
    a: float = 1.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.shape != (self.grid.L, self.grid.L):
            raise InvalidArgumentError(
                f"values must be {self.grid.L}x{self.grid.L}, got {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise SamplingError("field values must be finite")
        if not self.a > 0:
            raise InvalidArgumentError("domain half-width a must be positive")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def L(self) -> int:
        return self.grid.L

    @property
    def delta(self) -> float:
        return self.grid.delta

    @cached_property
    def dft(self) -> np.ndarray:
        """Unnormalised 2-D DFT of the samples (no ``1/L`` factors)."""
        from .fourier import dft2

        out = dft2(self.values)
        out.flags.writeable = False
        return out

    @cached_property
    def is_real(self) -> bool:
        return bool(np.all(self.values.imag == 0.0))


def field_from_values(values, a: float = 1.0, **meta) -> SampledField:
    values = np.asarray(values)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise InvalidArgumentError("field values must be a square table")
    return SampledField(Grid(values.shape[0]), values, float(a), dict(meta))


def sample(f, L: int, a: float = 1.0) -> SampledField:
    """Sample ``f`` at ``(a x_i, a x_j)`` for every node pair of the ``L``-grid.

    ``f`` is called once with two broadcast coordinate arrays (``X[i, j] =
    a x_i``, ``Y[i, j] = a x_j``); it must be vectorised and pure.
    """
    grid = Grid(L)
    x = a * grid.nodes
    X, Y = np.meshgrid(x, x, indexing="ij")
    vals = np.asarray(f(X, Y), dtype=complex)
    vals = np.broadcast_to(vals, X.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        i, j = (int(v) for v in np.argwhere(bad)[0])
        raise SamplingError(
            f"f returned {vals[i, j]} at node ({i + 1}, {j + 1}) = ({X[i, j]!r}, {Y[i, j]!r})"
        )
    return SampledField(grid, vals, float(a))
