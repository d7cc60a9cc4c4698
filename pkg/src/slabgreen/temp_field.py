"""Cooling of an initially uniform layer (T0 = 1) through Robin walls.

The temperature splits into the fixed-wall solution plus a Robin correction,

    T(z, t) = T_dirichlet(z, t) + dT(z, t),

where ``T_dirichlet`` is an alternating sum of erfc terms and ``dT`` is a sum
over image rings with integer weights ``l_{m,n}`` / ``lt_{m,n}`` multiplying
Gaussians times ``eta_m = (-1)^m 2^-(m+1) beta_m``.  Two cheaper closed forms
(large ``lambda_tilde``, thick layer) and a quadrature of the Green's function
are provided for cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapacityError, ConvergenceError, DomainError, ValidityError
from .image_kernel import DEFAULT_POLICY, SlabConfig, TruncationPolicy, green_z
from .special_fn import beta_sequence, binomial, erfc

__all__ = [
    "LayerCoefficients",
    "TemperatureField",
    "l_coeffs",
    "temp_dirichlet",
    "delta_temp",
    "temp",
    "temp_large_lambda",
    "temp_thick",
    "temp_quadrature",
    "temperature_field",
    "N_TERMS_MAX",
]

N_TERMS_MAX = 30
_ERFC_CUTOFF = 7.0
_GAUSS_FLOOR = 1e-18
_SQRT_PI = math.sqrt(math.pi)
# exp(-x^2) < 1e-18 once |x| exceeds this
_GAUSS_ARG = math.sqrt(-math.log(_GAUSS_FLOOR))


@dataclass(frozen=True)
class LayerCoefficients:
    """Integer weights for ring ``n``; both tuples are indexed by ``m``.

    ``l_vals[0]`` is a 0 placeholder so that ``l_vals[m] == l_{m,n}``.
    """

    n: int
    l_vals: tuple[int, ...]
    lt_vals: tuple[int, ...]


def _forward_tables(n):
    l_vals = [0, -2 * n]
    for m in range(2, 2 * n):
        l_vals.append(l_vals[m - 1] + (-1) ** m * 2 ** (m - 1) * binomial(2 * n, m))
    lt_vals = [1, -2 * n]
    for m in range(2, 2 * n + 1):
        lt_vals.append(lt_vals[m - 1] + (-1) ** m * 2 ** (m - 1) * binomial(2 * n + 1, m))
    return l_vals[: 2 * n], lt_vals


def _backward_tables(n):
    l_vals = [0] * (2 * n)
    l_vals[2 * n - 1] = -(2 ** (2 * n - 1))
    for m in range(2 * n - 2, 0, -1):
        l_vals[m] = l_vals[m + 1] + (-2) ** m * binomial(2 * n, 2 * n - m - 1)
    lt_vals = [0] * (2 * n + 1)
    lt_vals[2 * n] = 2 ** (2 * n)
    for m in range(2 * n - 1, -1, -1):
        lt_vals[m] = lt_vals[m + 1] + (-2) ** m * binomial(2 * n + 1, 2 * n - m)
    return l_vals, lt_vals


@lru_cache(maxsize=None)
def l_coeffs(n: int) -> LayerCoefficients:
    """Exact ``l_{m,n}`` (m = 1..2n-1) and ``lt_{m,n}`` (m = 0..2n) for ring ``n``.

    Built with the ascending recurrence and re-derived with the descending one;
    any disagreement is a hard error.
    """
    if n < 0:
        raise DomainError(f"ring index must be >= 0, got {n}")
    if n > N_TERMS_MAX:
        raise CapacityError(f"ring index {n} exceeds cap {N_TERMS_MAX}")
    if n == 0:
        return LayerCoefficients(n=0, l_vals=(), lt_vals=(1,))
    fwd = _forward_tables(n)
    bwd = _backward_tables(n)
    if fwd != bwd:
        raise ArithmeticError(f"coefficient recurrences disagree for n={n}")
    return LayerCoefficients(n=n, l_vals=tuple(fwd[0]), lt_vals=tuple(fwd[1]))


def _check_zt(z, t, cfg):
    if not t > 0.0 or not math.isfinite(t):
        raise DomainError(f"t must be positive and finite, got {t!r}")
    if not 0.0 <= z <= cfg.L:
        raise DomainError(f"z={z!r} outside [0, L={cfg.L!r}]")


def temp_dirichlet(z: float, t: float, cfg: SlabConfig) -> float:
    """Fixed-wall solution ``sum_n (-1)^n [erfc(n l - xi) + erfc((n+1) l + xi)] - 1``.

    Summed in the paired form ``erf(xi) + sum_{n>=1} (-1)^n [erfc(n l - xi) - erfc(n l + xi)]``
    with ``xi`` measured from the nearer wall: every bracket vanishes exactly
    at the wall, so the result is exactly 0 there and exactly symmetric.
    """
    _check_zt(z, t, cfg)
    scale = math.sqrt(4.0 * cfg.kappa * t)
    l, xi = cfg.L / scale, min(z, cfg.L - z) / scale
    terms = [math.erf(xi)]
    n = 1
    while n * l - xi <= _ERFC_CUTOFF:
        sign = 1.0 if n % 2 == 0 else -1.0
        terms.append(sign * (erfc(n * l - xi) - erfc(n * l + xi)))
        n += 1
    return math.fsum(terms)


class _EtaCache:
    """``exp(-(w / sqrt(4 kappa t))^2) * eta_m(w)`` for m = 0..kmax, cached per w."""

    def __init__(self, cfg, t):
        self.cfg = cfg
        self.t = t
        self.scale = math.sqrt(4.0 * cfg.kappa * t)
        self._cache = {}

    def weighted(self, w, kmax):
        key = w
        hit = self._cache.get(key)
        if hit is not None and len(hit) > kmax:
            return hit
        u = w / self.scale
        g = math.exp(-u * u)
        if g == 0.0:
            vals = [0.0] * (kmax + 1)
        else:
            betas = beta_sequence(kmax, abs(w), self.cfg.lam, self.t, self.cfg.kappa)
            vals = [g * (-1) ** m * 0.5 ** (m + 1) * b for m, b in enumerate(betas)]
        self._cache[key] = vals
        return vals


def delta_temp(z: float, t: float, cfg: SlabConfig, n_terms: int = N_TERMS_MAX) -> float:
    """Robin correction ``dT`` collected by powers of ``eta_m``.

    Rings are summed until every Gaussian in the next ring is below 1e-18;
    ``n_terms`` caps the ring index.
    """
    _check_zt(z, t, cfg)
    if cfg.is_dirichlet:
        return 0.0
    if cfg.lam <= 0.0:
        raise DomainError("delta_temp needs a finite lambda > 0")
    if not 1 <= n_terms <= N_TERMS_MAX:
        raise CapacityError(f"n_terms must be in [1, {N_TERMS_MAX}], got {n_terms}")

    L = cfg.L
    eta = _EtaCache(cfg, t)
    lam_t = cfg.lam * math.sqrt(cfg.kappa * t)

    def zn(n, s):
        return 2 * n * L + s * z

    def zt(n, s):
        return (2 * n - 1) * L + s * z

    def v_tilde(n):
        # sum_m lt_{m,n} [G eta_m](z_n^+) - [..](z_{n+1}^-) + [..](zt_{n+1}^-) - [..](zt_{n+1}^+)
        coeffs = l_coeffs(n).lt_vals
        kmax = 2 * n
        a = eta.weighted(zn(n, 1), kmax)
        b = eta.weighted(zn(n + 1, -1), kmax)
        c = eta.weighted(zt(n + 1, -1), kmax)
        d = eta.weighted(zt(n + 1, 1), kmax)
        return [coeffs[m] * (a[m] - b[m] + c[m] - d[m]) for m in range(kmax + 1)]

    def v_plain(n):
        coeffs = l_coeffs(n).l_vals
        kmax = 2 * n - 1
        a = eta.weighted(zn(n, -1), kmax)
        b = eta.weighted(zn(n, 1), kmax)
        c = eta.weighted(zt(n, 1), kmax)
        d = eta.weighted(zt(n + 1, -1), kmax)
        return [coeffs[m] * (a[m] - b[m] + c[m] - d[m]) for m in range(1, kmax + 1)]

    terms = v_tilde(0)
    scale = math.sqrt(4.0 * cfg.kappa * t)
    n = 1
    while True:
        # smallest image distance touched by ring n is (2n - 1) L - z >= (2n - 2) L
        if ((2 * n - 1) * L - z) / scale > _GAUSS_ARG and (2 * n * L - z) / scale > _GAUSS_ARG:
            break
        if n > n_terms:
            raise ConvergenceError(
                f"correction series not converged within n_terms={n_terms} rings at t={t!r}"
            )
        terms.extend(v_plain(n))
        terms.extend(v_tilde(n))
        n += 1
    return math.fsum(terms) / (lam_t * _SQRT_PI)


def temp(z: float, t: float, cfg: SlabConfig) -> float:
    """Normalized temperature ``T / T0``; exactly 1 for an insulated layer."""
    _check_zt(z, t, cfg)
    if cfg.is_neumann:
        return 1.0
    base = temp_dirichlet(z, t, cfg)
    if cfg.is_dirichlet:
        return base
    return base + delta_temp(z, t, cfg)


def _large_lambda_factor(g, power, interior_sign):
    """``[1 - (1+|g|)(1+2|g|)^power] / (g (1+|g|))``; the g -> 0 limit takes ``interior_sign``."""
    a = abs(g)
    if a == 0.0:
        return -(1 + 2 * power) * interior_sign
    grow = math.expm1(math.log1p(a) + power * math.log1p(2.0 * a))
    return -math.copysign(1.0, g) * grow / (a * (1.0 + a))


def temp_large_lambda(z: float, t: float, cfg: SlabConfig) -> float:
    """Fixed-wall solution plus the leading ``1 / lambda_tilde`` correction.

    Requires ``lambda_tilde >= 5``.
    """
    _check_zt(z, t, cfg)
    if cfg.is_dirichlet:
        return temp_dirichlet(z, t, cfg)
    scale = math.sqrt(4.0 * cfg.kappa * t)
    l, xi = cfg.L / scale, z / scale
    lam_t = cfg.lam * math.sqrt(cfg.kappa * t)
    if lam_t < 5.0:
        raise ValidityError(f"large-lambda form needs lambda_tilde >= 5, got {lam_t:.4g}")

    terms = []
    n_hi = int(math.ceil((_GAUSS_ARG + xi) / (2.0 * l))) + 1
    for n in range(-n_hi, n_hi + 1):
        ga = 2 * n * l - xi
        al = (2 * n + 1) * l - xi
        k = 2 * n - 1 if n > 0 else -2 * n
        m = 2 * n if n >= 0 else -(2 * n + 1)
        # at g == 0 the limit is taken from inside the slab: gamma -> 0-, alpha -> 0+
        terms.append(_large_lambda_factor(ga / lam_t, k, -1.0) * math.exp(-ga * ga))
        terms.append(-_large_lambda_factor(al / lam_t, m, 1.0) * math.exp(-al * al))
    return temp_dirichlet(z, t, cfg) + math.fsum(terms) / (lam_t * _SQRT_PI)


def _semibounded(xi, lam_t):
    return math.erf(xi) + math.exp(-xi * xi) / (_SQRT_PI * (xi + lam_t))


def temp_thick(z: float, t: float, cfg: SlabConfig) -> float:
    """Two independent half-space solutions superposed: ``T_sb(z) + T_sb(L - z) - 1``.

    Requires ``l >= 3`` and ``lambda_tilde >= 1``.
    """
    _check_zt(z, t, cfg)
    scale = math.sqrt(4.0 * cfg.kappa * t)
    l = cfg.L / scale
    if l < 3.0:
        raise ValidityError(f"thick-layer form needs l >= 3, got {l:.4g}")
    if cfg.is_dirichlet:
        return math.erf(z / scale) + math.erf((cfg.L - z) / scale) - 1.0
    lam_t = cfg.lam * math.sqrt(cfg.kappa * t)
    if lam_t < 1.0:
        raise ValidityError(f"thick-layer form needs lambda_tilde >= 1, got {lam_t:.4g}")
    return _semibounded(z / scale, lam_t) + _semibounded((cfg.L - z) / scale, lam_t) - 1.0


@lru_cache(maxsize=4)
def _gl(n):
    return np.polynomial.legendre.leggauss(n)


def temp_quadrature(
    z: float,
    t: float,
    cfg: SlabConfig,
    policy: TruncationPolicy = DEFAULT_POLICY,
    nodes: int = 200,
) -> float:
    """Integral of :func:`green_z` over the source height by Gauss-Legendre quadrature."""
    _check_zt(z, t, cfg)
    x, w = _gl(nodes)
    half = 0.5 * cfg.L
    vals = [
        wi * green_z(z, min(cfg.L, max(0.0, half * (xi + 1.0))), t, cfg, policy).value
        for xi, wi in zip(x, w)
    ]
    return half * math.fsum(vals)


@dataclass(frozen=True)
class TemperatureField:
    """``values[i][j] = T(z_nodes[i], t_nodes[j])``."""

    values: tuple[tuple[float, ...], ...]
    z_nodes: tuple[float, ...]
    t_nodes: tuple[float, ...]
    config: SlabConfig

    def rows(self):
        for i, z in enumerate(self.z_nodes):
            for j, t in enumerate(self.t_nodes):
                yield z, t, self.values[i][j]


def temperature_field(cfg: SlabConfig, z_nodes, t_nodes) -> TemperatureField:
    z_nodes = tuple(float(v) for v in z_nodes)
    t_nodes = tuple(float(v) for v in t_nodes)
    values = tuple(tuple(temp(z, t, cfg) for t in t_nodes) for z in z_nodes)
    return TemperatureField(values=values, z_nodes=z_nodes, t_nodes=t_nodes, config=cfg)
