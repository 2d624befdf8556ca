"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the lines are printed
even when pytest captures output.
"""

import math
import time

import numpy as np
import pytest

from ffbt.cases import C1_BUMP_F, C1_BUMP_G, C2_BUMP, harmonic_sum
from ffbt.cli import main
from ffbt.coefficients import k_min_block
from ffbt.convolution import ffbt_conv, iffbt_conv
from ffbt.fourier import finite_fourier_coeff_2d, finite_fourier_disk, finite_fourier_table
from ffbt.oracle import (
    DiskIndicator,
    QuadratureSpec,
    convolution_samples,
    direct_convolution,
    fb_coefficient_quadrature,
    fourier_integral_quadrature,
    lens_area,
    truncated_closed_form,
)
from ffbt.sampling import Grid, field_from_values, sample
from ffbt.special import BesselZeroTable, bessel_j
from ffbt.study import StudyConfig, _conv_reference
from ffbt.transform import ffbt, ffbt_block, ffbt_sum, iffbt_trace, steer_residual, synthesize

BUMP_RULE = QuadratureSpec(center=C2_BUMP.center, radius=C2_BUMP.radius)


@pytest.fixture
def report(capsys):
    def emit(num, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {num}: {detail}")
        assert ok, detail

    return emit


def _decreasing(seq):
    return all(b < a for a, b in zip(seq, seq[1:]))


def test_c01_bessel_zeros(report):
    t0 = time.perf_counter()
    table = BesselZeroTable()
    worst, ordered = 0.0, True
    for m in range(21):
        zs = table.zeros(m, 20)
        worst = max(worst, float(np.max(np.abs(bessel_j(m, np.array(zs))))))
        ordered &= _decreasing(zs[::-1])
    dt = time.perf_counter() - t0
    report(1, worst <= 1e-12 and ordered and dt < 5.0,
           f"max |J_m(z_mn)| = {worst:.2e}, ordered = {ordered}, {dt:.2f} s")


def test_c02_trig_exactness(report):
    rng = np.random.default_rng(2)
    worst, spot = 0.0, 0.0
    for _ in range(100):
        K = int(rng.integers(0, 17))
        n, L = 2 * K + 1, 2 * K + 1
        coef = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        ks = np.arange(-K, K + 1)
        x = Grid(L).nodes
        e = np.exp(1j * np.pi * np.outer(x, ks))
        vals = e @ coef @ e.T
        # finite coefficient (1/L^2) sum U exp(-pi i k.x) = f^(k; L) / 4
        got = finite_fourier_table(field_from_values(vals), K) / 4.0
        worst = max(worst, float(np.max(np.abs(got - coef))))
        k = tuple(int(v) for v in rng.integers(-K, K + 1, size=2))

        def U(X, Y, coef=coef, ks=ks):
            return np.sum((np.exp(1j * np.pi * np.multiply.outer(X, ks)) @ coef)
                          * np.exp(1j * np.pi * np.multiply.outer(Y, ks)), axis=-1)

        spot = max(spot, abs(finite_fourier_coeff_2d(U, k, L) - coef[k[0] + K, k[1] + K]))
    report(2, worst <= 1e-12 and spot <= 1e-12,
           f"max coefficient error {worst:.2e} (direct sums {spot:.2e}) over 100 polynomials")


def test_c03_finite_fourier_convergence(report):
    t0 = time.perf_counter()
    k = (1, 2)
    exact = fourier_integral_quadrature(C2_BUMP, k, BUMP_RULE)
    g = C2_BUMP.grad_norm()
    Ks = (8, 16, 32, 64)
    errs = [abs(finite_fourier_disk(sample(C2_BUMP, 2 * K + 1), k) - exact) for K in Ks]
    bounded = all(e <= 96 * g / (math.pi * K) for e, K in zip(errs, Ks))
    dt = time.perf_counter() - t0
    report(3, _decreasing(errs) and bounded and dt < 30.0,
           f"errors {', '.join(f'{e:.2e}' for e in errs)}; bound at K=64 {96 * g / (math.pi * 64):.2e}; {dt:.2f} s")


def test_c04_kernel_bridge(report):
    gaps = {}
    for m in (0, 1, 2):
        for n in (1, 2):
            ref = fb_coefficient_quadrature(C2_BUMP, (m, n), BUMP_RULE)
            gaps[(m, n)] = abs(truncated_closed_form(C2_BUMP, (m, n), 48, BUMP_RULE) - ref)
    worst = max(gaps.values())
    report(4, worst <= 1e-4, f"max bridge gap at cutoff 48: {worst:.2e}")


def test_c05_ffbt_convergence(report):
    exact = fb_coefficient_quadrature(C2_BUMP, (1, 1), BUMP_RULE)
    Ks = (8, 16, 32, 64)
    errs = [abs(ffbt(sample(C2_BUMP, 2 * K + 1), (1, 1), K) - exact) for K in Ks]
    ratios = [b / a for a, b in zip(errs, errs[1:])]
    gm = float(np.prod(ratios)) ** (1.0 / len(ratios))
    report(5, _decreasing(errs) and gm <= 0.75,
           f"errors {', '.join(f'{e:.2e}' for e in errs)}; geometric-mean ratio {gm:.3f}")


def test_c06_matrix_forms(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    worst_c, worst_s = 0.0, 0.0
    for _ in range(20):
        K = int(rng.integers(1, 6))
        M = int(rng.integers(0, 4))
        L = 2 * K + 1
        fld = field_from_values(rng.normal(size=(L, L)) + 1j * rng.normal(size=(L, L)))
        for m in range(-M, M + 1):
            for n in range(1, M + 2):
                raw = ffbt_sum(fld, (m, n), K)
                worst_c = max(worst_c, abs(ffbt(fld, (m, n), K) - raw) / max(abs(raw), 1e-300))
        pts = rng.uniform(-0.7, 0.7, size=(5, 2))
        two = synthesize(fld, M, M + 1, K, pts, path="two-stage")
        for p, v in zip(pts, two):
            tr = iffbt_trace(fld, M, M + 1, K, p)
            worst_s = max(worst_s, abs(tr - v) / max(abs(v), 1e-300))
    dt = time.perf_counter() - t0
    report(6, worst_c <= 1e-10 and worst_s <= 1e-10 and dt < 10.0,
           f"trace vs raw {worst_c:.2e}, two-stage vs trace {worst_s:.2e} (relative); {dt:.2f} s")


def test_c07_thresholds(report):
    want = {(2, 2): 3, (5, 5): 8, (5, 6): 9, (10, 10): 15, (15, 15): 22}
    got = {mn: k_min_block(*mn) for mn in want}
    report(7, got == want, f"K[M,N] = {got}")


def test_c08_harmonic_recovery(report):
    out = {}
    for K, tol in ((3, 0.1), (12, 0.02)):
        spec = ffbt_block(sample(harmonic_sum, 2 * K + 1), 2, 2, K)
        err = max(abs(c - (1.0 if mn in ((1, 2), (2, 1)) else 0.0)) for mn, c in spec.coeffs.items())
        out[K] = (err, err <= tol)
    report(8, all(ok for _, ok in out.values()),
           f"max deviation {out[3][0]:.2e} at K=3 (tol 0.1), {out[12][0]:.2e} at K=12 (tol 0.02)")


@pytest.mark.filterwarnings("ignore:K = .* below the threshold")
def test_c09_symmetries(report):
    rng = np.random.default_rng(9)
    refl, conj = 0.0, 0.0
    for _ in range(50):
        K = int(rng.integers(1, 8))
        L = 2 * K + 1
        fld = field_from_values(rng.normal(size=(L, L)))
        # full (non-reflected) computation so the identity is actually tested
        spec = ffbt_block(fld, 3, 2, K, real=False)
        for m in range(1, 4):
            for n in (1, 2):
                refl = max(refl, abs(spec[(-m, n)] - (-1) ** m * np.conj(spec[(m, n)])))
    for _ in range(50):
        K = int(rng.integers(1, 8))
        L = 2 * K + 1
        vals = rng.normal(size=(L, L)) + 1j * rng.normal(size=(L, L))
        tab = finite_fourier_table(field_from_values(vals), K)
        tab_c = finite_fourier_table(field_from_values(np.conj(vals)), K)
        conj = max(conj, float(np.max(np.abs(tab_c - np.conj(tab[::-1, ::-1])))))
    report(9, refl <= 1e-12 and conj <= 1e-12,
           f"reflection {refl:.2e} on real fields, conjugation {conj:.2e} on complex fields")


def test_c10_steerability(report):
    res = [steer_residual(C2_BUMP, (2, 1), K, math.pi / 3) for K in (8, 16, 32)]
    zero = steer_residual(C2_BUMP, (2, 1), 16, 0.0)
    report(10, _decreasing(res) and zero == 0.0,
           f"residuals {', '.join(f'{r:.2e}' for r in res)}; phi = 0 gives {zero}")


def test_c11_convolution(report):
    half = DiskIndicator(0.5)
    F = sample(half, 31)
    center = iffbt_conv(F, F, 10, 10, 15, [[0.0, 0.0]])[0]
    rel = abs(center - math.pi / 4) / (math.pi / 4)
    lens = max(abs(direct_convolution(half, half, (d, 0.0)) - lens_area(0.5, 0.5, d)) for d in (0, 0.3, 0.7))
    lens = max(lens, abs(direct_convolution(half, half, (0.0, 0.0)) - math.pi / 4))

    q = QuadratureSpec(cartesian_nodes=128, center=C1_BUMP_F.center, radius=C1_BUMP_F.radius)
    exact = _conv_reference(C1_BUMP_F, C1_BUMP_G, 2, 1, 64)
    modes = ((0, 1), (1, 1), (2, 1))
    sampled = {mn: [] for mn in modes}
    full = {mn: [] for mn in modes}
    for K in (8, 16, 32):
        L = 2 * K + 1
        Fb, Gb = sample(C1_BUMP_F, L), sample(C1_BUMP_G, L)
        FG = convolution_samples(C1_BUMP_F, C1_BUMP_G, L, q)
        for m, n in modes:
            u = ffbt_conv(Fb, Gb, (m, n), K)
            sampled[(m, n)].append(abs(u - ffbt(FG, (m, n), K)))
            full[(m, n)].append(abs(u - exact[m + 2, n - 1]))
    dec = all(_decreasing(s) for s in sampled.values()) and all(_decreasing(s) for s in full.values())
    report(11, rel <= 0.05 and lens <= 1e-4 and dec,
           f"S(0,0) off pi/4 by {100 * rel:.2f}%, lens gap {lens:.1e}, "
           f"unified vs sampled (0,1) gaps {', '.join(f'{v:.1e}' for v in sampled[(0, 1)])}")


def test_c12_reproducible_study(report, tmp_path, capsys):
    blobs = []
    for i in range(2):
        out = tmp_path / f"bump{i}.csv"
        rc = main(["--threads", "1", "--seed", "0", "study", "--case", "bump", "--out", str(out)])
        blobs.append((rc, out.read_bytes()))
    capsys.readouterr()
    same = blobs[0][1] == blobs[1][1]
    cfg = StudyConfig("bump").resolve()
    report(12, same and blobs[0][0] == 0,
           f"two 'study --case bump' runs (K = {list(cfg[1])}) byte-identical: {same}, exit {blobs[0][0]}")
