"""Image-source Green's function of the heat equation in a slab 0 <= z <= L.

Both walls carry the same Robin condition ``dT/dz -/+ lam T = 0``.  The axial
kernel is a sum over mirrored free-space Gaussians at

    Z_-(n) = z - z' + 2 n L,     Z_+(n) = z + z' + 2 n L,

each weighted by a coefficient ``P_n^(+/-)`` built from binomially weighted
``beta_k`` values.  ``lam = 0`` (insulated) and ``lam = inf`` (fixed
temperature) reduce to unit weights ``+1`` and ``+1 / -1`` respectively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError, PrecisionLossError
from .special_fn import BINOMIAL_M_MAX, beta_sequence, binomial, erfc, erfcx

__all__ = [
    "SlabConfig",
    "ScaledVars",
    "TruncationPolicy",
    "SeriesValue",
    "DEFAULT_POLICY",
    "p_coeff",
    "image_term",
    "green_z",
    "green_z_neumann",
    "green_z_dirichlet",
    "green_3d",
    "green_halfspace",
    "truncation_N",
    "tail_majorant",
]

_EPS = 2.0**-52


@dataclass(frozen=True)
class SlabConfig:
    """Layer thickness ``L``, diffusivity ``kappa`` and Robin coefficient ``lam``.

    ``lam = math.inf`` is the explicit fixed-temperature (Dirichlet) variant and
    is never substituted into the finite-``lam`` formulas; ``lam = 0`` is the
    insulated (Neumann) case.
    """

    L: float = 1.0
    kappa: float = 1.0
    lam: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.L) and self.L > 0.0):
            raise DomainError(f"L must be finite and positive, got {self.L!r}")
        if not (math.isfinite(self.kappa) and self.kappa > 0.0):
            raise DomainError(f"kappa must be finite and positive, got {self.kappa!r}")
        if math.isnan(self.lam) or self.lam < 0.0:
            raise DomainError(f"lambda must be >= 0 or inf, got {self.lam!r}")

    @classmethod
    def dirichlet(cls, L=1.0, kappa=1.0):
        return cls(L=L, kappa=kappa, lam=math.inf)

    @classmethod
    def from_biot(cls, bi, L=1.0, kappa=1.0):
        """Build from ``Bi = L * lam / 2`` (note the factor 2)."""
        if bi < 0.0:
            raise DomainError(f"Biot number must be >= 0, got {bi!r}")
        return cls(L=L, kappa=kappa, lam=math.inf if math.isinf(bi) else 2.0 * bi / L)

    @property
    def is_dirichlet(self) -> bool:
        return math.isinf(self.lam)

    @property
    def is_neumann(self) -> bool:
        return self.lam == 0.0

    @property
    def tau(self) -> float:
        """Diffusion time ``L**2 / (4 kappa)``."""
        return self.L * self.L / (4.0 * self.kappa)

    @property
    def bi(self) -> float:
        return self.L * self.lam / 2.0


@dataclass(frozen=True)
class ScaledVars:
    """Dimensionless bundle for a point ``(z, t)``."""

    xi: float
    l: float
    lambda_tilde: float
    tau: float
    bi: float

    @classmethod
    def from_point(cls, z, t, cfg: SlabConfig):
        if not t > 0.0:
            raise DomainError(f"t must be positive, got {t!r}")
        scale = math.sqrt(4.0 * cfg.kappa * t)
        lam_t = math.inf if cfg.is_dirichlet else cfg.lam * math.sqrt(cfg.kappa * t)
        return cls(xi=z / scale, l=cfg.L / scale, lambda_tilde=lam_t, tau=cfg.tau, bi=cfg.bi)


@dataclass(frozen=True)
class TruncationPolicy:
    abs_tol: float = 1e-10
    n_max: int = 64
    safety: float = 2.0

    def __post_init__(self):
        if not self.abs_tol > 0.0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol!r}")
        if self.n_max < 1:
            raise DomainError(f"n_max must be >= 1, got {self.n_max!r}")
        if not self.safety >= 1.0:
            raise DomainError(f"safety must be >= 1, got {self.safety!r}")


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class SeriesValue:
    """A truncated series: value, largest ``|n|`` kept, and a tail bound."""

    value: float
    terms_used: int
    remainder_bound: float

    def __float__(self):
        return self.value


def _check_point(z, zp, t, cfg):
    if not t > 0.0 or not math.isfinite(t):
        raise DomainError(f"t must be positive and finite, got {t!r}")
    for name, v in (("z", z), ("zp", zp)):
        if not 0.0 <= v <= cfg.L:
            raise DomainError(f"{name}={v!r} outside [0, L={cfg.L!r}]")


def _image_positions(sign, n, z, zp, L):
    return (z - zp if sign == "-" else z + zp) + 2.0 * n * L


def _coeff_row(sign, n):
    """Binomial row m and highest beta order kmax of P_n^(sign), or None if P == 1."""
    if sign == "-":
        if n == 0:
            return None
        return 2 * abs(n), 2 * abs(n) - 1
    if sign != "+":
        raise DomainError(f"sign must be '+' or '-', got {sign!r}")
    if n >= 0:
        return 2 * n + 1, 2 * n
    m = 2 * abs(n) - 1
    return m, m - 1


def _p_with_error(sign, n, z_img, lam, t, kappa, row_cap=BINOMIAL_M_MAX):
    row = _coeff_row(sign, n)
    if row is None or lam == 0.0:
        return 1.0, 0.0
    m, kmax = row
    # C(m, k+1) with m > row_cap raises CapacityError before any beta is formed
    weights = [binomial(m, k + 1, row_cap) for k in range(kmax + 1)]
    betas = beta_sequence(kmax, abs(z_img), lam, t, kappa)
    terms = [-w * b for w, b in zip(weights, betas)]
    terms.append(1.0)
    scale = math.fsum(abs(v) for v in terms)
    return math.fsum(terms), (kmax + 4) * _EPS * scale


def p_coeff(
    sign: str, n: int, z_img: float, cfg: SlabConfig, t: float, row_cap: int = BINOMIAL_M_MAX
) -> float:
    """Image weight ``P_n^(sign)`` at image distance ``|z_img|``.

    Returns exactly 1 for ``sign='-', n=0`` and whenever ``lam == 0``.
    Weights use binomial rows up to ``2|n| + 1``; rows above ``row_cap``
    (default 64, i.e. ``|n| <= 31``) raise :class:`CapacityError` unless the
    cap is raised explicitly.
    """
    if cfg.is_dirichlet:
        raise DomainError("P coefficients are defined for finite lambda; use green_z_dirichlet")
    if not t > 0.0:
        raise DomainError(f"t must be positive, got {t!r}")
    return _p_with_error(sign, n, z_img, cfg.lam, t, cfg.kappa, row_cap)[0]


def image_term(sign: str, n: int, z: float, zp: float, t: float, cfg: SlabConfig) -> float:
    """Single image contribution ``P_n e^{-Z^2/4 kappa t} / sqrt(4 pi kappa t)``."""
    _check_point(z, zp, t, cfg)
    return _image_term(sign, n, z, zp, t, cfg)


def _image_term(sign, n, z, zp, t, cfg):
    Z = _image_positions(sign, n, z, zp, cfg.L)
    gauss = math.exp(-Z * Z / (4.0 * cfg.kappa * t)) / math.sqrt(4.0 * math.pi * cfg.kappa * t)
    if cfg.is_dirichlet:
        return gauss if sign == "-" else -gauss
    return _p_with_error(sign, n, Z, cfg.lam, t, cfg.kappa)[0] * gauss


def truncation_N(policy: TruncationPolicy, cfg: SlabConfig, t: float) -> int:
    """Smallest ring count N with ``safety * erfc((2N-1) L / sqrt(kappa t)) / l <= abs_tol``.

    This is the coarse, closed-form starting estimate; :func:`green_z` then
    grows N until the tail majorant and the last-ring check both pass.
    """
    if not t > 0.0:
        raise DomainError(f"t must be positive, got {t!r}")
    root = math.sqrt(cfg.kappa * t)
    inv_l = 2.0 * root / cfg.L
    for N in range(1, policy.n_max + 1):
        if policy.safety * inv_l * erfc((2 * N - 1) * cfg.L / root) <= policy.abs_tol:
            return N
    raise ConvergenceError(
        f"no N <= n_max={policy.n_max} meets abs_tol={policy.abs_tol:g}",
        achieved=policy.safety * inv_l * erfc((2 * policy.n_max - 1) * cfg.L / root),
    )


def _gauss_run_sum(d, step, four_kt):
    """Upper bound of sum_{j>=0} exp(-(d + j*step)^2 / four_kt) for d >= 0."""
    root = math.sqrt(four_kt)
    return math.exp(-d * d / four_kt) + 0.5 * math.sqrt(math.pi) * root / step * erfc(d / root)


def tail_majorant(N, z, zp, t, cfg: SlabConfig, p_bound=1.0):
    """Bound on the images with ``|n| > N``, assuming ``|P| <= p_bound``.

    Each of the four excluded runs (two signs, two directions) is a sequence of
    Gaussians spaced 2L apart; each run is bounded by its first term plus the
    integral of the rest.
    """
    L = cfg.L
    four_kt = 4.0 * cfg.kappa * t
    first = 2.0 * (N + 1) * L
    starts = (first + (z - zp), first - (z - zp), first + (z + zp), first - (z + zp))
    total = sum(_gauss_run_sum(d, 2.0 * L, four_kt) for d in starts)
    return p_bound * total / math.sqrt(math.pi * four_kt)


def _image_sum(z, zp, t, cfg, policy, coeff):
    """Shared ring-by-ring summation; ``coeff(sign, n, Z)`` -> (P, rounding error)."""
    four_kt = 4.0 * cfg.kappa * t
    norm = 1.0 / math.sqrt(math.pi * four_kt)
    L = cfg.L

    terms = []
    err = 0.0
    mag = 0.0
    p_bound = 1.0

    def ring(n):
        nonlocal err, mag, p_bound
        out = []
        p_bound = 1.0
        signs_n = (("-", 0), ("+", 0)) if n == 0 else (("-", n), ("+", n), ("-", -n), ("+", -n))
        for sign, k in signs_n:
            Z = _image_positions(sign, k, z, zp, L)
            g = math.exp(-Z * Z / four_kt)
            if g == 0.0:
                out.append(0.0)
                continue
            p, perr = coeff(sign, k, Z)
            p_bound = max(p_bound, abs(p))
            out.append(p * g * norm)
            err += perr * g * norm
            mag += g * norm
        return out

    terms.extend(ring(0))
    N_start = truncation_N(policy, cfg, t)
    N = 0
    while True:
        while N < N_start:
            N += 1
            last = ring(N)
            terms.extend(last)
        bound = policy.safety * tail_majorant(N, z, zp, t, cfg, p_bound)
        last_ring = math.fsum(abs(v) for v in last)
        if bound <= policy.abs_tol and last_ring <= 0.1 * policy.abs_tol:
            break
        if N >= policy.n_max:
            raise ConvergenceError(
                f"image series needs more than n_max={policy.n_max} rings "
                f"(tail bound {bound:.3e} > {policy.abs_tol:g})",
                achieved=bound,
            )
        N_start = N + 1

    if err > max(policy.abs_tol, 64.0 * _EPS * mag):
        raise PrecisionLossError(
            f"cancellation inside P coefficients leaves error ~{err:.2e} "
            f"above abs_tol={policy.abs_tol:g}"
        )
    return SeriesValue(value=math.fsum(terms), terms_used=N, remainder_bound=bound)


def _unit_coeff(sign, n, Z):
    return 1.0, 0.0


def _dirichlet_coeff(sign, n, Z):
    return (1.0 if sign == "-" else -1.0), 0.0


def green_z_neumann(z, zp, t, L, kappa, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesValue:
    """Insulated-wall kernel: all image weights equal +1."""
    cfg = SlabConfig(L=L, kappa=kappa, lam=0.0)
    _check_point(z, zp, t, cfg)
    return _image_sum(z, zp, t, cfg, policy, _unit_coeff)


def green_z_dirichlet(z, zp, t, L, kappa, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesValue:
    """Fixed-temperature kernel: Z_- images +1, Z_+ images -1."""
    cfg = SlabConfig.dirichlet(L=L, kappa=kappa)
    _check_point(z, zp, t, cfg)
    return _image_sum(z, zp, t, cfg, policy, _dirichlet_coeff)


def green_z(
    z: float,
    zp: float,
    t: float,
    cfg: SlabConfig,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> SeriesValue:
    """Axial Green's function of the Robin slab.

    Parameters
    ----------
    z, zp : float
        Observation and source heights, both in ``[0, L]``.
    t : float
        Elapsed time, ``t > 0``.
    cfg : SlabConfig
    policy : TruncationPolicy

    Returns
    -------
    SeriesValue
        ``terms_used`` is the largest ``|n|`` summed and ``remainder_bound``
        a majorant of the discarded images (times ``policy.safety``).

    Raises
    ------
    DomainError
        Point outside the slab or ``t <= 0``.
    ConvergenceError
        Tolerance not reachable within ``policy.n_max`` rings.
    PrecisionLossError
        Binomial cancellation inside a weight exceeds ``abs_tol``.
    """
    if cfg.is_dirichlet:
        return green_z_dirichlet(z, zp, t, cfg.L, cfg.kappa, policy)
    if cfg.is_neumann:
        return green_z_neumann(z, zp, t, cfg.L, cfg.kappa, policy)
    _check_point(z, zp, t, cfg)

    def coeff(sign, n, Z):
        return _p_with_error(sign, n, Z, cfg.lam, t, cfg.kappa)

    return _image_sum(z, zp, t, cfg, policy, coeff)


def green_3d(x, y, z, xp, yp, zp, t, cfg: SlabConfig, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Full kernel: transverse Gaussian ``e^{-R^2/4 kappa t} / (4 pi kappa t)`` times :func:`green_z`."""
    axial = green_z(z, zp, t, cfg, policy).value
    r2 = (x - xp) ** 2 + (y - yp) ** 2
    return math.exp(-r2 / (4.0 * cfg.kappa * t)) / (4.0 * math.pi * cfg.kappa * t) * axial


def green_halfspace(z: float, zp: float, t: float, lam: float, kappa: float) -> float:
    """Closed-form axial kernel of the Robin half space ``z >= 0``.

    The surface-exchange term ``2 lt sqrt(pi) e^{lt^2 + lam Z+} erfc(u + lt)``
    is rewritten as ``2 lt sqrt(pi) erfcx(u + lt) e^{-u^2}`` with
    ``u = Z+ / (2 sqrt(kappa t))``, which cannot overflow.
    """
    if z < 0.0 or zp < 0.0:
        raise DomainError("half-space coordinates must be >= 0")
    if not t > 0.0:
        raise DomainError(f"t must be positive, got {t!r}")
    if lam < 0.0:
        raise DomainError(f"lambda must be >= 0, got {lam!r}")
    four_kt = 4.0 * kappa * t
    zm, zpl = z - zp, z + zp
    val = math.exp(-zm * zm / four_kt) + math.exp(-zpl * zpl / four_kt)
    if lam > 0.0:
        lam_t = lam * math.sqrt(kappa * t)
        u = zpl / math.sqrt(four_kt)
        val -= 2.0 * lam_t * math.sqrt(math.pi) * erfcx(u + lam_t) * math.exp(-u * u)
    return val / math.sqrt(math.pi * four_kt)
