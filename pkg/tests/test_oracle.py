import math

import numpy as np
import pytest

from ffbt.cases import harmonic_sum
from ffbt.errors import InvalidArgumentError
from ffbt.oracle import (
    DiskIndicator,
    QuadratureSpec,
    direct_convolution,
    fb_coefficient_quadrature,
    fb_coefficients,
    fourier_integral_quadrature,
    fourier_integral_table,
    lens_area,
    partial_sum_reference,
    polar_rule,
    truncated_closed_form,
)
from ffbt.special import polar_harmonic


def _psi(idx):
    return lambda x, y: polar_harmonic(idx, x, y)


def test_rule_area():
    _, _, w = polar_rule(QuadratureSpec(radial_nodes=16, angular_nodes=16, radius=0.3))
    assert w.sum() == pytest.approx(math.pi * 0.09, rel=1e-14)


@pytest.mark.parametrize("name", ["radial_nodes", "angular_nodes", "cartesian_nodes"])
def test_minimum_nodes(name):
    with pytest.raises(InvalidArgumentError):
        QuadratureSpec(**{name: 7})


def test_orthonormality():
    assert abs(fb_coefficient_quadrature(_psi((1, 2)), (1, 2)) - 1) <= 1e-8
    assert abs(fb_coefficient_quadrature(_psi((1, 2)), (2, 1))) <= 1e-8
    assert fb_coefficient_quadrature(lambda x, y: 0 * x, (0, 1)) == 0


def test_rotation(bump, bump_rule):
    phi = 0.7
    c, s = math.cos(phi), math.sin(phi)
    rot = lambda x, y: bump(c * x - s * y, s * x + c * y)  # noqa: E731
    # rotating the support disk keeps the rule matched to it
    cx, cy = bump.center
    q_rot = QuadratureSpec(center=(c * cx + s * cy, -s * cx + c * cy), radius=bump.radius)
    for m, n in [(1, 1), (2, 3), (-3, 2)]:
        lhs = fb_coefficient_quadrature(rot, (m, n), q_rot)
        rhs = np.exp(1j * m * phi) * fb_coefficient_quadrature(bump, (m, n), bump_rule)
        assert abs(lhs - rhs) <= 1e-8


def test_block_matches_single(bump, bump_rule):
    tab = fb_coefficients(bump, 2, 2, bump_rule)
    for m in range(-2, 3):
        for n in (1, 2):
            assert abs(tab[m + 2, n - 1] - fb_coefficient_quadrature(bump, (m, n), bump_rule)) <= 1e-13


def test_doubling_is_stable(bump, bump_rule):
    a = fb_coefficients(bump, 3, 3, bump_rule)
    b = fb_coefficients(bump, 3, 3, bump_rule.doubled())
    assert np.max(np.abs(a - b)) <= 1e-8


def test_fourier_integral_examples(bump, bump_rule):
    assert fourier_integral_quadrature(lambda x, y: 0 * x, (1, 1)) == 0
    x, y, w = polar_rule(bump_rule)
    assert fourier_integral_quadrature(bump, (0, 0), bump_rule) == pytest.approx(np.sum(w * bump(x, y)))
    tab = fourier_integral_table(bump, 3, bump_rule)
    assert abs(tab[3 + 2, 3 - 1] - fourier_integral_quadrature(bump, (2, -1), bump_rule)) <= 1e-13


def test_fourier_integral_of_disk():
    # disk of radius r: 2 pi r^2 J_1(pi r |k|) / (pi r |k|)
    from ffbt.special import bessel_j

    r = 0.5
    val = fourier_integral_quadrature(DiskIndicator(r), (1, 1), QuadratureSpec(radius=r))
    t = math.pi * r * math.sqrt(2)
    assert abs(val - 2 * math.pi * r * r * bessel_j(1, t) / t) <= 1e-10


def test_bridge_zero_and_harmonic():
    assert truncated_closed_form(lambda x, y: 0 * x, (0, 1), 8) == 0
    gaps = [abs(truncated_closed_form(_psi((0, 1)), (0, 1), c) - 1) for c in (16, 32, 64)]
    assert gaps[-1] < gaps[0]
    assert gaps[-1] <= 0.01


def test_bridge_rejects_small_cutoff():
    with pytest.raises(InvalidArgumentError):
        truncated_closed_form(_psi((0, 1)), (0, 3), 2)


@pytest.mark.parametrize("r, s, d", [(0.5, 0.5, 0.3), (1.0, 0.4, 0.8), (0.7, 0.2, 0.1), (0.5, 0.5, 1.2)])
def test_lens_area_against_quadrature(r, s, d):
    q = QuadratureSpec(radial_nodes=512, angular_nodes=1024, radius=r)
    x, y, w = polar_rule(q)
    # the integrand is discontinuous, so this only checks to a few digits
    approx = np.sum(w * DiskIndicator(s, (d, 0.0))(x, y))
    assert abs(lens_area(r, s, d) - approx) <= 1e-3


def test_direct_convolution_values():
    assert abs(direct_convolution(DiskIndicator(0.5), DiskIndicator(0.5), (0.0, 0.0)) - math.pi / 4) <= 1e-4
    assert abs(direct_convolution(DiskIndicator(0.5), DiskIndicator(0.5), (1.2, 0.3))) <= 1e-6
    # quadrature path on the same pair, viewed as generic callables
    f = lambda x, y: DiskIndicator(0.5)(x, y)  # noqa: E731
    val = direct_convolution(f, f, (0.3, 0.0), QuadratureSpec(cartesian_nodes=256, radius=0.5))
    assert abs(val - lens_area(0.5, 0.5, 0.3)) <= 5e-3


def test_partial_sum_reference():
    ref = partial_sum_reference(harmonic_sum, 2, 2)
    pts = np.array([[0.1, 0.2], [-0.5, 0.4], [0.0, -0.9]])
    np.testing.assert_allclose(ref(pts[:, 0], pts[:, 1]), harmonic_sum(pts[:, 0], pts[:, 1]), atol=1e-6)
    small = partial_sum_reference(harmonic_sum, 1, 2)
    np.testing.assert_allclose(small(pts[:, 0], pts[:, 1]), polar_harmonic((1, 2), pts[:, 0], pts[:, 1]),
                               atol=1e-6)
    assert ref(1.5, 0.0) == 0
