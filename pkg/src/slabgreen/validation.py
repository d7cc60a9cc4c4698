"""Self-checks run by ``slabgreen validate``.

Each check returns a :class:`Check`; a suite is a list of check callables.
The checks recompute their expectations from independent routes (spectral
sums, finite differences, closed forms) rather than stored numbers, except
for the handful of published ratios in the ``published`` suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eigen_oracle import basis_for, eigen_green_z, eigen_uniform_temp
from .image_kernel import (
    DEFAULT_POLICY,
    SlabConfig,
    TruncationPolicy,
    green_halfspace,
    green_z,
    green_z_dirichlet,
    green_z_neumann,
    image_term,
)
from .temp_field import temp, temp_dirichlet, temp_quadrature

__all__ = ["Check", "SUITES", "run_suite", "pde_residual", "robin_residual", "paired_residual"]

# tight tolerance so truncation jumps never pollute finite-difference stencils
FD_POLICY = TruncationPolicy(abs_tol=1e-14)

# first derivative, one-sided, sixth order
_FWD6 = (-49 / 20, 6.0, -15 / 2, 20 / 3, -15 / 4, 6 / 5, -1 / 6)


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str

    def line(self):
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}: {self.detail}"


def _fd_policy(policy):
    if policy.abs_tol <= FD_POLICY.abs_tol:
        return policy
    return TruncationPolicy(abs_tol=FD_POLICY.abs_tol, n_max=policy.n_max, safety=policy.safety)


def _one_sided_dz(f, z0, h):
    """df/dz at z0 using points z0 + j*h (h may be negative)."""
    return math.fsum(c * f(z0 + j * h) for j, c in enumerate(_FWD6)) / h


def pde_residual(cfg, z, zp, t, policy=FD_POLICY):
    """(|dG/dt - kappa d2G/dz2|, |dG/dt|) by centered differences, dz = L/2000, dt = t/2000."""
    dz, dt = cfg.L / 2000.0, t / 2000.0

    def g(zz, tt):
        return green_z(zz, zp, tt, cfg, policy).value

    g_t = (g(z, t + dt) - g(z, t - dt)) / (2.0 * dt)
    g_zz = (g(z + dz, t) - 2.0 * g(z, t) + g(z - dz, t)) / (dz * dz)
    return abs(g_t - cfg.kappa * g_zz), abs(g_t)


def robin_residual(cfg, zp, t, wall, policy=FD_POLICY):
    """(|(d/dz -/+ lam) G| at a wall, |dG/dz| + lam |G|)."""
    h = cfg.L / 1000.0
    z0, step, sgn = (0.0, h, -1.0) if wall == 0 else (cfg.L, -h, 1.0)

    def g(zz):
        return green_z(zz, zp, t, cfg, policy).value

    dg = _one_sided_dz(g, z0, step)
    val = g(z0)
    return abs(dg + sgn * cfg.lam * val), abs(dg) + cfg.lam * abs(val)


def paired_residual(cfg, n, zp, t, wall):
    """Boundary residual of the image pair (-, n) + (+, -n) at z=0, or (-, n) + (+, -(n+1)) at z=L."""
    h = cfg.L / 1000.0
    if wall == 0:
        z0, step, sgn, partner = 0.0, h, -1.0, -n
    else:
        z0, step, sgn, partner = cfg.L, -h, 1.0, -(n + 1)

    def g(zz):
        return image_term("-", n, zz, zp, t, cfg) + image_term("+", partner, zz, zp, t, cfg)

    dg = _one_sided_dz(g, z0, step)
    val = g(z0)
    return abs(dg + sgn * cfg.lam * val), abs(dg) + cfg.lam * abs(val)


def _gl_integral(f, L, nodes=200):
    x, w = np.polynomial.legendre.leggauss(nodes)
    return 0.5 * L * math.fsum(wi * f(0.5 * L * (xi + 1.0)) for xi, wi in zip(x, w))


def check_neumann_conservation(policy=DEFAULT_POLICY):
    worst = 0.0
    cfg = SlabConfig(lam=0.0)
    for tt in (0.01, 1.0, 10.0):
        t = tt * cfg.tau
        for z in (0.0, 0.3, 0.5, 1.0):
            total = _gl_integral(lambda zp: green_z(z, zp, t, cfg, policy).value, cfg.L)
            worst = max(worst, abs(total - 1.0))
    return Check("neumann-conservation", worst <= 1e-10, f"max |int G dz' - 1| = {worst:.2e}")


def check_neumann_same_path(policy=DEFAULT_POLICY):
    cfg = SlabConfig(lam=0.0)
    same = all(
        green_z(z, zp, t, cfg, policy) == green_z_neumann(z, zp, t, cfg.L, cfg.kappa, policy)
        for z in (0.0, 0.4, 1.0)
        for zp in (0.1, 0.7)
        for t in (0.01, 0.3)
    )
    return Check("neumann-closed-form", same, "lambda=0 dispatches to the unit-weight sum")


def check_dirichlet_degeneration(policy=DEFAULT_POLICY):
    big = SlabConfig(lam=1e6)
    worst = 0.0
    for tt in (0.05, 0.2, 1.0):
        t = tt * big.tau
        ref = [green_z_dirichlet(z, zp, t, 1.0, 1.0, policy).value for z in (0.2, 0.5, 0.8) for zp in (0.3, 0.6)]
        got = [green_z(z, zp, t, big, policy).value for z in (0.2, 0.5, 0.8) for zp in (0.3, 0.6)]
        scale = max(abs(v) for v in ref)
        worst = max(worst, max(abs(a - b) for a, b in zip(got, ref)) / scale)
    return Check("dirichlet-degeneration", worst <= 1e-4, f"lambda L = 1e6 vs fixed-wall: {worst:.2e}")


def check_dirichlet_wall(policy=DEFAULT_POLICY):
    cfg = SlabConfig.dirichlet()
    worst = max(abs(green_z(0.0, zp, 0.1, cfg, policy).value) for zp in (0.0, 0.2, 0.5, 0.9))
    return Check("dirichlet-wall-zero", worst <= 1e-10, f"max |G(0, z')| = {worst:.2e}")


def check_halfspace_limit(policy=DEFAULT_POLICY):
    worst = 0.0
    for lam in (0.5, 3.0, 40.0):
        t = 1e-4
        cfg = SlabConfig(L=100.0 * math.sqrt(t), lam=lam)
        for z, zp in ((0.0, 0.0), (0.001, 0.003), (0.004, 0.0)):
            a = green_z(z, zp, t, cfg, policy).value
            b = green_halfspace(z, zp, t, lam, 1.0)
            worst = max(worst, abs(a - b))
    return Check("halfspace-limit", worst <= 1e-12, f"thick slab vs half space: {worst:.2e}")


def check_oracle_grid(policy=DEFAULT_POLICY):
    worst = 0.0
    for lam_l in (0.2, 2.0, 20.0):
        cfg = SlabConfig(lam=lam_l)
        for tt in (0.05, 0.2, 1.0, 5.0):
            t = tt * cfg.tau
            basis = basis_for(cfg, t)
            for i in range(11):
                for j in range(11):
                    z, zp = i / 10, j / 10
                    g = green_z(z, zp, t, cfg, policy).value
                    e = eigen_green_z(z, zp, t, basis)
                    worst = max(worst, abs(g - e) / max(abs(g), 1.0 / cfg.L))
    return Check("image-vs-spectral", worst <= 1e-8, f"max scaled difference {worst:.2e} over 1452 points")


def check_three_paths(policy=DEFAULT_POLICY):
    worst = 0.0
    for bi in (0.1, 1.0, 10.0, 100.0):
        cfg = SlabConfig.from_biot(bi)
        for tt in (0.05, 0.2, 1.0):
            t = tt * cfg.tau
            basis = basis_for(cfg, t)
            for z in (0.0, 0.25, 0.5):
                a = temp(z, t, cfg)
                b = temp_quadrature(z, t, cfg, policy)
                c = eigen_uniform_temp(z, t, basis)
                worst = max(worst, abs(a - b), abs(a - c), abs(b - c))
    return Check("temperature-three-paths", worst <= 1e-6, f"max pairwise difference {worst:.2e}")


def check_pde_residual(policy=DEFAULT_POLICY):
    # sampled at t = tau, where dG/dt keeps one sign over the slab; near a sign
    # change no fixed stencil can meet a bound relative to |dG/dt|
    worst = 0.0
    for lam_l in (0.2, 2.0, 20.0):
        cfg = SlabConfig(lam=lam_l)
        for z in (0.15, 0.3, 0.5, 0.7, 0.85):
            for zp in (0.1, 0.35, 0.5, 0.65, 0.9):
                res, scale = pde_residual(cfg, z, zp, cfg.tau, _fd_policy(policy))
                worst = max(worst, res / scale)
    return Check("pde-residual", worst <= 1e-5, f"max |G_t - k G_zz| / |G_t| = {worst:.2e}")


def check_robin_residual(policy=DEFAULT_POLICY):
    worst = 0.0
    for lam_l in (0.2, 2.0, 20.0):
        cfg = SlabConfig(lam=lam_l)
        for zp in (0.2, 0.5, 0.9):
            for wall in (0, 1):
                res, scale = robin_residual(cfg, zp, 0.5 * cfg.tau, wall, _fd_policy(policy))
                worst = max(worst, res / scale)
    return Check("robin-residual", worst <= 1e-6, f"max relative wall residual {worst:.2e}")


def check_paired_residual(policy=DEFAULT_POLICY):
    cfg = SlabConfig(lam=2.0)
    worst = 0.0
    for n in range(-3, 4):
        for wall in (0, 1):
            res, scale = paired_residual(cfg, n, 0.4, 0.5 * cfg.tau, wall)
            if scale > 0.0:
                worst = max(worst, res / scale)
    return Check("paired-boundary-identity", worst <= 1e-6, f"max relative pair residual {worst:.2e}")


def check_published_ratios(policy=DEFAULT_POLICY):
    inf_cfg = SlabConfig.dirichlet()
    c10, c1, c01, c100 = (SlabConfig.from_biot(b) for b in (10.0, 1.0, 0.1, 100.0))
    tau = inf_cfg.tau
    r10 = temp(0.5, tau, c10) / temp_dirichlet(0.5, tau, inf_cfg)
    r1 = temp(0.0, tau, c1) / temp(0.5, tau, c1)
    r01 = temp(0.0, tau, c01) / temp(0.5, tau, c01)
    mid01 = temp(0.5, tau, c01)
    surf100 = temp(0.0, 0.01 * tau, c100)
    checks = [
        (abs(r10 - 1.521) <= 0.01, f"Bi=10 centre ratio {r10:.4f}"),
        (abs(r1 - 0.652) <= 0.005, f"Bi=1 edge/centre {r1:.4f}"),
        (abs(r01 - 0.951) <= 0.005, f"Bi=0.1 edge/centre {r01:.4f}"),
        (abs(mid01 - 0.9207) <= 0.002, f"Bi=0.1 centre {mid01:.4f}"),
        (abs(surf100 - 0.056) <= 0.003, f"Bi=100 surface at 0.01 tau {surf100:.4f}"),
    ]
    return Check("published-ratios", all(ok for ok, _ in checks), "; ".join(d for _, d in checks))


SUITES = {
    "limits": [
        check_neumann_same_path,
        check_neumann_conservation,
        check_dirichlet_wall,
        check_dirichlet_degeneration,
        check_halfspace_limit,
    ],
    "oracle": [check_oracle_grid, check_three_paths],
    "residuals": [check_pde_residual, check_robin_residual, check_paired_residual],
    "published": [check_published_ratios],
}
SUITES["all"] = [c for name in ("limits", "oracle", "residuals", "published") for c in SUITES[name]]


def run_suite(name, policy=DEFAULT_POLICY):
    return [check(policy) for check in SUITES[name]]
