import numpy as np
import pytest

from ffbt.cases import (
    C1_BUMP_F,
    C1_BUMP_G,
    C2_BUMP,
    CASES,
    POLYGON_VERTICES,
    astroid_indicator,
    exp_sin,
    gaussian_pair,
    get_case,
    polygon_indicator,
    rectangle_indicator,
)
from ffbt.coefficients import k_min_block
from ffbt.errors import InvalidArgumentError


def test_polygon_vertices_and_edges_inside():
    chi = polygon_indicator()
    v = np.asarray(POLYGON_VERTICES, dtype=float)
    assert np.all(chi(v[:, 0], v[:, 1]) == 1)
    mid = 0.5 * (v + np.roll(v, -1, axis=0))
    assert np.all(chi(mid[:, 0], mid[:, 1]) == 1)


@pytest.mark.parametrize("pt, inside", [
    ((-1.5, 2.0), 1), ((1.0, -1.0), 1), ((-2.5, -0.5), 0), ((1.0, 1.0), 0), ((5.0, 0.0), 0),
])
def test_polygon_points(pt, inside):
    assert polygon_indicator()(*pt) == inside


def test_polygon_area():
    # shoelace area against the sampled indicator
    v = np.asarray(POLYGON_VERTICES, dtype=float)
    area = 0.5 * abs(np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1]))
    t = np.linspace(-4, 4, 801)
    X, Y = np.meshgrid(t, t, indexing="ij")
    approx = polygon_indicator()(X, Y).sum() * (t[1] - t[0]) ** 2
    assert abs(approx - area) <= 0.2


def test_other_indicators():
    rect = rectangle_indicator(0.25, 0.5)
    assert rect(0.25, -0.5) == 1 and rect(0.26, 0.0) == 0
    ast = astroid_indicator()
    assert ast(1.0, 0.0) == 1 and ast(0.5, 0.5) == 0 and ast(0.1, 0.1) == 1
    assert exp_sin(1.0, 0.5) == 0
    assert exp_sin(0.3, 0.4) == pytest.approx(np.exp(-0.12) + 1j * np.sin(0.12))
    assert gaussian_pair(0.0, 0.0) == 1 + 1j
    assert gaussian_pair(0.1, 0.0) == pytest.approx(np.exp(-0.1) + 1j * np.exp(-0.2))


@pytest.mark.parametrize("bump", [C2_BUMP, C1_BUMP_F, C1_BUMP_G])
def test_bump_gradient(bump, rng):
    pts = bump.center + rng.uniform(-0.9, 0.9, size=(50, 2)) * bump.radius / np.sqrt(2)
    h = 1e-6
    gx, gy = bump.grad(pts[:, 0], pts[:, 1])
    fx = (bump(pts[:, 0] + h, pts[:, 1]) - bump(pts[:, 0] - h, pts[:, 1])) / (2 * h)
    fy = (bump(pts[:, 0], pts[:, 1] + h) - bump(pts[:, 0], pts[:, 1] - h)) / (2 * h)
    np.testing.assert_allclose(gx, fx, atol=1e-7)
    np.testing.assert_allclose(gy, fy, atol=1e-7)
    assert bump.grad_norm() >= np.max(np.hypot(gx, gy))


def test_bump_support():
    assert C2_BUMP(C2_BUMP.center[0] + C2_BUMP.radius, C2_BUMP.center[1]) == 0
    for b in (C1_BUMP_F, C1_BUMP_G):
        assert np.hypot(*b.center) + b.radius < 0.5


@pytest.mark.parametrize("name", sorted(CASES))
def test_case_thresholds(name):
    case = CASES[name]
    assert case.K >= k_min_block(case.M, case.N)
    ks = case.default_K_list()
    assert all(b > a for a, b in zip(ks, ks[1:]))


def test_unknown_case():
    with pytest.raises(InvalidArgumentError, match="unknown case"):
        get_case("nope")
