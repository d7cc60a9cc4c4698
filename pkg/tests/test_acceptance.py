"""Acceptance gate: one PASS/FAIL line per criterion.

Run under pytest (lines are repeated in the terminal summary) or directly
with ``python tests/test_acceptance.py``.
"""

import csv
import math
import tempfile
import time
from pathlib import Path

import pytest

from oracles import fourier_dirichlet_temp
from slabgreen.cli import run
from slabgreen.eigen_oracle import basis_for, eigen_green_z, eigen_uniform_temp
from slabgreen.image_kernel import (
    SlabConfig,
    TruncationPolicy,
    green_halfspace,
    green_z,
    green_z_dirichlet,
    green_z_neumann,
    p_coeff,
)
from slabgreen.special_fn import erfcx, f_k
from slabgreen.temp_field import _backward_tables, _forward_tables, temp, temp_dirichlet
from slabgreen.validation import paired_residual, pde_residual, robin_residual

CRITERIA = {}


def criterion(num, title):
    def wrap(fn):
        CRITERIA[num] = (title, fn)
        return fn

    return wrap


def _best_of(fn, repeat=50):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


TAU = 0.25  # L = kappa = 1


@criterion(1, "Dirichlet centre value")
def c01():
    cfg = SlabConfig.dirichlet()
    v = temp_dirichlet(0.5, TAU, cfg)
    sine = fourier_dirichlet_temp(0.5, TAU)
    secs = _best_of(lambda: temp_dirichlet(0.5, TAU, cfg))
    ok = abs(v - 0.107977) <= 1e-5 and abs(v - sine) <= 1e-12 and secs < 1e-3
    return ok, f"T={v:.7f} (sine series {sine:.7f}), {secs * 1e6:.0f} us"


@criterion(2, "Bi=10 centre ratio to fixed walls")
def c02():
    cfg = SlabConfig.from_biot(10.0)
    num = temp(0.5, TAU, cfg)
    ratio = num / temp_dirichlet(0.5, TAU, SlabConfig.dirichlet())
    oracle = eigen_uniform_temp(0.5, TAU, basis_for(cfg, TAU))
    ok = abs(ratio - 1.521) <= 0.01 and abs(num - oracle) <= 1e-10
    return ok, f"ratio={ratio:.5f}, numerator {num:.7f} (spectral {oracle:.7f})"


@criterion(3, "Bi=1 edge/centre ratio")
def c03():
    cfg = SlabConfig.from_biot(1.0)
    ratio = temp(0.0, TAU, cfg) / temp(0.5, TAU, cfg)
    a1 = basis_for(cfg, TAU).alphas[0]
    ok = abs(ratio - 0.652) <= 0.005 and abs(a1 - 1.7207) <= 5e-5
    return ok, f"ratio={ratio:.5f}, cos(a1 L/2)={math.cos(a1 / 2):.5f}, a1 L={a1:.6f}"


@criterion(4, "Bi=0.1 ratio and centre value")
def c04():
    cfg = SlabConfig.from_biot(0.1)
    centre = temp(0.5, TAU, cfg)
    ratio = temp(0.0, TAU, cfg) / centre
    ok = abs(ratio - 0.951) <= 0.005 and abs(centre - 0.9207) <= 0.002
    return ok, f"ratio={ratio:.5f}, T(L/2, tau)={centre:.5f}"


@criterion(5, "Bi=100 surface cooling")
def c05():
    cfg = SlabConfig.from_biot(100.0)
    early = temp(0.0, 0.01 * TAU, cfg)
    span = [temp(0.0, (0.01 + 0.0009 * j) * TAU, cfg) for j in range(101)]
    ok = abs(early - 0.056) <= 0.003 and abs(early - erfcx(10.0)) <= 1e-6
    ok = ok and all(0.015 <= v <= 0.060 for v in span)
    return ok, f"T(0, 0.01 tau)={early:.5f}, range over [0.01, 0.1] tau = [{min(span):.4f}, {max(span):.4f}]"


@criterion(6, "image series vs spectral sum on 1452 points")
def c06():
    t0 = time.perf_counter()
    worst = 0.0
    for lam in (0.2, 2.0, 20.0):
        cfg = SlabConfig(lam=lam)
        for tt in (0.05, 0.2, 1.0, 5.0):
            t = tt * cfg.tau
            basis = basis_for(cfg, t)
            for i in range(11):
                for j in range(11):
                    g = green_z(i / 10, j / 10, t, cfg).value
                    e = eigen_green_z(i / 10, j / 10, t, basis)
                    worst = max(worst, abs(g - e) / max(abs(g), 1.0))
    secs = time.perf_counter() - t0
    return worst <= 1e-8 and secs < 10.0, f"max scaled difference {worst:.2e}, {secs:.2f} s"


@criterion(7, "limit degeneration")
def c07():
    import numpy as np

    neu = SlabConfig(lam=0.0)
    same = all(
        green_z(z, zp, t, neu) == green_z_neumann(z, zp, t, 1.0, 1.0)
        for z in (0.0, 0.5, 1.0)
        for zp in (0.2, 0.8)
        for t in (0.01, 0.3)
    )
    x, w = np.polynomial.legendre.leggauss(200)
    mass = max(
        abs(0.5 * math.fsum(wi * green_z(z, 0.5 * (xi + 1), t, neu).value for xi, wi in zip(x, w)) - 1.0)
        for z in (0.0, 0.4)
        for t in (0.0025, 0.25, 2.5)
    )
    big = SlabConfig(lam=1e6)
    dirich = 0.0
    for t in (0.0125, 0.05, 0.25):
        for z, zp in ((0.2, 0.3), (0.5, 0.5), (0.8, 0.6)):
            ref = green_z_dirichlet(z, zp, t, 1.0, 1.0).value
            dirich = max(dirich, abs(green_z(z, zp, t, big).value - ref) / abs(ref))
    half = 0.0
    for lam in (0.5, 3.0, 40.0):
        t = 1e-4
        thick = SlabConfig(L=100.0 * math.sqrt(t), lam=lam)
        for z, zp in ((0.0, 0.0), (0.001, 0.003), (0.004, 0.0)):
            half = max(half, abs(green_z(z, zp, t, thick).value - green_halfspace(z, zp, t, lam, 1.0)))
    ok = same and mass <= 1e-10 and dirich <= 1e-4 and half <= 1e-12
    return ok, f"same path={same}, |mass-1|={mass:.1e}, lamL=1e6 rel {dirich:.1e}, half space {half:.1e}"


@criterion(8, "PDE, wall and paired-term residuals")
def c08():
    tight = TruncationPolicy(abs_tol=1e-14)
    pde = 0.0
    cfg = SlabConfig(lam=2.0)
    for z in (0.15, 0.3, 0.5, 0.7, 0.85):
        for zp in (0.1, 0.35, 0.5, 0.65, 0.9):
            res, scale = pde_residual(cfg, z, zp, cfg.tau, tight)
            pde = max(pde, res / scale)
    wall = 0.0
    for lam in (0.2, 2.0, 20.0):
        c = SlabConfig(lam=lam)
        for zp in (0.0, 0.5, 0.9):
            for side in (0, 1):
                res, scale = robin_residual(c, zp, 0.5 * c.tau, side, tight)
                wall = max(wall, res / scale)
    pair = 0.0
    for n in range(-3, 4):
        for side in (0, 1):
            res, scale = paired_residual(cfg, n, 0.4, 0.5 * cfg.tau, side)
            pair = max(pair, res / scale)
    ok = pde <= 1e-5 and wall <= 1e-6 and pair <= 1e-6
    return ok, f"heat eq {pde:.1e} (25 pts), walls {wall:.1e}, pairs |n|<=3 {pair:.1e}"


@criterion(9, "coefficient tables and far-image weights")
def c09():
    tables = all(_forward_tables(n) == _backward_tables(n) for n in range(1, 31))
    cfg = SlabConfig(lam=2.0)
    limit = math.exp(-4.0 * cfg.lam * cfg.kappa * TAU / cfg.L)
    worst = 0.0
    for sign in "+-":
        for n in (40, -40):
            Z = abs((0.7 if sign == "+" else -0.1) + 2 * n)
            worst = max(worst, abs(p_coeff(sign, n, Z, cfg, TAU, row_cap=81) / limit - 1.0))
    return tables and worst <= 0.05, f"tables equal for n<=30: {tables}; |P/e^(-4 lam k t/L) - 1| <= {worst:.2%}"


@criterion(10, "F_k kernel")
def c10():
    signs = all(
        math.copysign(1.0, f_k(12, -2.0 + 0.05 * i)[k]) == (-1.0) ** k for i in range(241) for k in range(13)
    )
    worst = 0.0
    h = 1e-5
    for k in range(13):
        for i in range(34):
            x = -3.0 + i
            d = (f_k(k, x + h)[k] - f_k(k, x - h)[k]) / (2 * h)
            want = (k + 1) * f_k(k + 1, x)[k + 1]
            worst = max(worst, abs(d - want) / abs(want))
    big = erfcx(1e4)
    ok = signs and worst <= 1e-6 and math.isfinite(big) and abs(big * 1e4 * math.sqrt(math.pi) - 1) < 1e-8
    return ok, f"sign law {signs}, derivative identity {worst:.1e}, erfcx(1e4)={big:.6e}"


@criterion(11, "fig2 data regeneration")
def c11():
    with tempfile.TemporaryDirectory() as tmp:
        t0 = time.perf_counter()
        code = run(["fig2", "--bi", "inf,100,10,1,0.1", "--nz", "51", "--nt", "60", "--out", tmp])
        secs = time.perf_counter() - t0
        bounds = True
        mirror = 0.0
        counts = []
        for label, bi in (("inf", math.inf), ("100", 100.0), ("10", 10.0), ("1", 1.0), ("0.1", 0.1)):
            with open(Path(tmp) / f"fig2_bi_{label}.csv", newline="") as fh:
                rows = list(csv.reader(fh))[1:]
            counts.append(len(rows))
            cfg = SlabConfig.from_biot(bi)
            for k, (z, t, v) in enumerate(rows):
                z, t, v = float(z), float(t), float(v)
                bounds = bounds and 0.0 <= v <= 1.0 + 1e-9
                if k % 7 == 0:
                    mirror = max(mirror, abs(temp(1.0 - z, t, cfg) - v))
    ok = code == 0 and secs < 60.0 and bounds and mirror <= 1e-9 and counts == [51 * 60] * 5
    return ok, f"exit {code}, {secs:.1f} s, rows {counts[0]} x {len(counts)}, in bounds {bounds}, mirror {mirror:.1e}"


def _line(num):
    title, fn = CRITERIA[num]
    ok, detail = fn()
    return ok, f"{'PASS' if ok else 'FAIL'} [{num:2d}] {title}: {detail}"


@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num, acceptance_lines):
    ok, line = _line(num)
    print(line)
    acceptance_lines[num] = line
    assert ok, line


if __name__ == "__main__":
    for n in sorted(CRITERIA):
        print(_line(n)[1])
