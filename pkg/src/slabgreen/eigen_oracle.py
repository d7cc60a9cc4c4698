"""Classical eigenfunction expansion of the symmetric Robin slab.

Used only as an independent reference for the image series.  Modes are

    phi_m(z) = cos(a_m z) + (lam / a_m) sin(a_m z),

with ``a_m`` the positive roots of ``(a^2 - lam^2) sin(a L) - 2 lam a cos(a L) = 0``
(the pole-free form of ``tan(a L) = 2 lam a / (a^2 - lam^2)``).  Exactly one
root sits in each interval ``((m-1) pi / L, m pi / L)``.  The insulated case
adds the constant mode; the fixed-temperature case uses the sine basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError, NumericalError
from .image_kernel import SlabConfig

__all__ = [
    "EigenBasis",
    "find_roots",
    "basis_for",
    "eigen_green_z",
    "eigen_uniform_temp",
    "modes_needed",
    "MIN_T_OVER_TAU",
]

# exp(-kappa a^2 t) below this is treated as negligible
_DECAY_FLOOR = 1e-16
_LOG_DECAY = -math.log(_DECAY_FLOOR)
MIN_T_OVER_TAU = 1e-3
_GL_NODES = 64
_MAX_COUNT = 10_000


@dataclass(frozen=True)
class EigenBasis:
    L: float
    lam: float
    alphas: tuple[float, ...]
    norms: tuple[float, ...]
    kind: str  # "robin", "neumann" (adds the constant mode) or "dirichlet"
    kappa: float = 1.0

    @property
    def count(self) -> int:
        return len(self.alphas)

    def phi(self, m, z):
        a = self.alphas[m]
        if self.kind == "dirichlet":
            return math.sin(a * z)
        return math.cos(a * z) + (self.lam / a) * math.sin(a * z)

    def phi_integral(self, m):
        """Integral of phi_m over [0, L]."""
        a, L = self.alphas[m], self.L
        if self.kind == "dirichlet":
            return (1.0 - math.cos(a * L)) / a
        return math.sin(a * L) / a + self.lam * (1.0 - math.cos(a * L)) / (a * a)


def _char(alpha, L, lam):
    return (alpha * alpha - lam * lam) * math.sin(alpha * L) - 2.0 * lam * alpha * math.cos(alpha * L)


@lru_cache(maxsize=8)
def _gauss_legendre(n):
    return np.polynomial.legendre.leggauss(n)


def _norm_quadrature(alpha, L, lam):
    """Composite 64-node Gauss-Legendre integral of phi^2 over [0, L]."""
    x, w = _gauss_legendre(_GL_NODES)
    panels = 1 + int(alpha * L / (4.0 * math.pi))
    edges = np.linspace(0.0, L, panels + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        zq = 0.5 * (b - a) * x + 0.5 * (a + b)
        phi = np.cos(alpha * zq) + (lam / alpha) * np.sin(alpha * zq)
        total += 0.5 * (b - a) * float(np.dot(w, phi * phi))
    return total


def _norm_closed(alpha, L, lam):
    r = lam / alpha
    s2 = math.sin(2.0 * alpha * L) / (4.0 * alpha)
    return 0.5 * L * (1.0 + r * r) + s2 * (1.0 - r * r) + r * math.sin(alpha * L) ** 2 / alpha


def find_roots(L: float, lam: float, count: int, kappa: float = 1.0) -> EigenBasis:
    """First ``count`` positive eigenvalues of the symmetric Robin slab.

    Each root is bracketed in its own ``((m-1) pi/L, m pi/L)`` interval and
    polished with Brent's method to ~1e-15 relative.  ``lam = inf`` returns
    the sine basis ``a_m = m pi / L``; ``lam = 0`` returns ``a_m = m pi / L``
    and flags the extra constant mode.
    """
    if not (L > 0.0 and math.isfinite(L)):
        raise DomainError(f"L must be positive, got {L!r}")
    if math.isnan(lam) or lam < 0.0:
        raise DomainError(f"lambda must be >= 0, got {lam!r}")
    if not 1 <= count <= _MAX_COUNT:
        raise DomainError(f"count must be in [1, {_MAX_COUNT}], got {count}")

    step = math.pi / L
    if math.isinf(lam) or lam == 0.0:
        alphas = tuple(m * step for m in range(1, count + 1))
        return EigenBasis(
            L=L,
            lam=lam,
            alphas=alphas,
            norms=(0.5 * L,) * count,
            kind="dirichlet" if math.isinf(lam) else "neumann",
            kappa=kappa,
        )

    alphas, norms = [], []
    for m in range(1, count + 1):
        lo, hi = (m - 1) * step, m * step
        if m == 1:
            lo = 1e-3 * step
            while _char(lo, L, lam) >= 0.0:
                lo *= 1e-3
                if lo < 1e-300:
                    raise NumericalError(f"cannot bracket first root for lambda*L={lam * L:g}")
        f_lo, f_hi = _char(lo, L, lam), _char(hi, L, lam)
        if f_lo * f_hi > 0.0:
            raise NumericalError(
                f"root {m} not bracketed in ({lo:.6g}, {hi:.6g}): "
                f"f={f_lo:.3e}, {f_hi:.3e}; found {len(alphas)} of {count}"
            )
        a = brentq(_char, lo, hi, args=(L, lam), xtol=1e-300, rtol=4.0 * 2.0**-52, maxiter=500)
        n_quad = _norm_quadrature(a, L, lam)
        n_closed = _norm_closed(a, L, lam)
        if abs(n_quad - n_closed) > 1e-10 * n_closed:
            raise NumericalError(f"mode {m}: norm quadrature {n_quad!r} vs closed form {n_closed!r}")
        alphas.append(a)
        norms.append(n_quad)
    return EigenBasis(L=L, lam=lam, alphas=tuple(alphas), norms=tuple(norms), kind="robin", kappa=kappa)


def _count_for(L, kappa, t):
    a_min = math.sqrt(_LOG_DECAY / (kappa * t))
    return int(math.ceil(a_min * L / math.pi)) + 2


def basis_for(cfg: SlabConfig, t: float) -> EigenBasis:
    """Basis with enough modes that ``exp(-kappa a^2 t) <= 1e-16`` at the last one.

    Refuses ``t / tau < 1e-3``, where the spectral series is too slow to be a
    useful reference.
    """
    if not t > 0.0:
        raise DomainError(f"t must be positive, got {t!r}")
    if t / cfg.tau < MIN_T_OVER_TAU:
        raise ConvergenceError(
            f"spectral oracle refuses t/tau={t / cfg.tau:.3g} < {MIN_T_OVER_TAU:g}"
        )
    count = _count_for(cfg.L, cfg.kappa, t)
    if count > _MAX_COUNT:
        raise ConvergenceError(f"spectral oracle would need {count} modes")
    return _cached_basis(cfg.L, cfg.lam, count, cfg.kappa)


@lru_cache(maxsize=64)
def _cached_basis(L, lam, count, kappa):
    return find_roots(L, lam, count, kappa)


def _check_modes(basis, t):
    kappa = basis.kappa
    a = basis.alphas[-1]
    if math.exp(-kappa * a * a * t) > _DECAY_FLOOR:
        raise ConvergenceError(
            f"{basis.count} modes insufficient at t={t!r}: "
            f"last decay factor {math.exp(-kappa * a * a * t):.2e} > {_DECAY_FLOOR:g}"
        )


def _check_z(z, L):
    if not 0.0 <= z <= L:
        raise DomainError(f"z={z!r} outside [0, L={L!r}]")


def eigen_green_z(z: float, zp: float, t: float, basis: EigenBasis, modes: int | None = None) -> float:
    """Spectral axial kernel ``sum_m phi_m(z) phi_m(z') e^{-kappa a_m^2 t} / ||phi_m||^2``.

    ``modes`` truncates the sum to the first ``modes`` terms (as chosen by
    :func:`modes_needed`); without it every mode is used and the basis must be
    long enough that the last decay factor is below 1e-16.
    """
    if not t > 0.0:
        raise DomainError(f"t must be positive, got {t!r}")
    _check_z(z, basis.L)
    _check_z(zp, basis.L)
    if modes is None:
        _check_modes(basis, t)
        modes = basis.count
    kappa = basis.kappa
    terms = [
        basis.phi(m, z) * basis.phi(m, zp) * math.exp(-kappa * a * a * t) / basis.norms[m]
        for m, a in enumerate(basis.alphas[:modes])
    ]
    if basis.kind == "neumann":
        terms.append(1.0 / basis.L)
    return math.fsum(terms)


def eigen_uniform_temp(z: float, t: float, basis: EigenBasis) -> float:
    """Normalized temperature of an initially uniform layer, by modal projection."""
    if not t > 0.0:
        raise DomainError(f"t must be positive, got {t!r}")
    _check_z(z, basis.L)
    if basis.kind == "neumann":
        return 1.0
    _check_modes(basis, t)
    kappa = basis.kappa
    terms = [
        basis.phi_integral(m) / basis.norms[m] * basis.phi(m, z) * math.exp(-kappa * a * a * t)
        for m, a in enumerate(basis.alphas)
    ]
    return math.fsum(terms)


def modes_needed(basis: EigenBasis, t: float, tol: float) -> int:
    """Smallest mode count whose discarded tail is below ``tol`` (pointwise kernel bound).

    Each discarded mode contributes at most ``(1 + (lam/a)^2) e^{-kappa a^2 t} / ||phi||^2``.
    """
    kappa = basis.kappa
    weights = []
    for m, a in enumerate(basis.alphas):
        amp = 1.0 if basis.kind == "dirichlet" else 1.0 + (basis.lam / a) ** 2
        weights.append(amp * math.exp(-kappa * a * a * t) / basis.norms[m])
    tail = 0.0
    for m in range(len(weights) - 1, -1, -1):
        if tail + weights[m] > tol:
            return m + 1
        tail += weights[m]
    return 0
