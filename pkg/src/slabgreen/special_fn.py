"""Error-function kernels: erfc, erfcx, the derivative family F_k and beta_k.

``F_k(x) = (1/k!) d^k/dx^k [exp(x^2) erfc(x)]`` obeys the three-term recurrence
``F_k = (2/k) (F_{k-2} + x F_{k-1})``.  For ``x > 0`` the sequence is the
*minimal* solution of that recurrence, so running it forward loses roughly
``log10(2 x^2)`` digits per step.  The forward direction is therefore used only
where the loss is provably small (``x < 0`` or ``x * sqrt(k + 1) <= 2``); the
remaining range is evaluated backward through the continued-fraction ratios
``F_k / F_{k-1}`` (Miller's method) and normalized by ``erfcx(x)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    BetaOverflowError,
    CapacityError,
    DomainError,
    PrecisionLossError,
)

__all__ = [
    "K_MAX",
    "BINOMIAL_M_MAX",
    "FSequence",
    "erfc",
    "erfcx",
    "f_k",
    "beta_k",
    "beta_sequence",
    "binomial",
]

K_MAX = 128
BINOMIAL_M_MAX = 64

SQRT_PI = math.sqrt(math.pi)
_TWO_OVER_SQRT_PI = 2.0 / SQRT_PI
_EPS = 2.0**-52

# erfcx switches from exp(x^2) * erfc(x) to the continued fraction here.
_CF_THRESHOLD = 10.0
# forward recurrence is used while x * sqrt(K + 1) stays below this.
_FORWARD_LIMIT = 2.0
_MILLER_N_CAP = 200_000


def _check_finite(x, name="x"):
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")


def erfc(x: float) -> float:
    """Complementary error function (libm, ~1 ulp)."""
    _check_finite(x)
    return math.erfc(x)


def _exp_square(x):
    """exp(x*x) with x*x carried as an exact hi+lo pair (Dekker split)."""
    hi = x * x
    c = 134217729.0 * x
    xh = c - (c - x)
    xl = x - xh
    lo = ((xh * xh - hi) + 2.0 * xh * xl) + xl * xl
    return math.exp(hi) * (1.0 + lo)


def _erfcx_cf(x):
    # erfcx(x) = 1 / (sqrt(pi) (x + (1/2)/(x + (2/2)/(x + (3/2)/(x + ...)))))
    depth = 8 + int(600.0 / (x * x))
    t = x
    for n in range(depth, 0, -1):
        t = x + 0.5 * n / t
    # divide twice so the result may underflow gracefully near x ~ 1e308
    return (1.0 / t) / SQRT_PI


def erfcx(x: float) -> float:
    """Scaled complementary error function ``exp(x**2) * erfc(x)``.

    Never formed as a bare product for large ``x``; for ``x >= 10`` a
    continued fraction is evaluated directly, so the result is finite for
    every representable ``x >= 0``.  Negative arguments use the reflection
    ``2 exp(x**2) - erfcx(-x)``, which overflows below ``x ~ -26.6`` and is
    reported as :class:`BetaOverflowError`.
    """
    _check_finite(x)
    if x < 0.0:
        try:
            return 2.0 * _exp_square(x) - erfcx(-x)
        except OverflowError:
            raise BetaOverflowError(f"erfcx({x!r}) overflows double precision") from None
    if x < 0.5:
        return math.exp(x * x) * math.erfc(x)
    if x < _CF_THRESHOLD:
        return _exp_square(x) * math.erfc(x)
    return _erfcx_cf(x)


@dataclass(frozen=True)
class FSequence:
    """Values ``F_0(x) ... F_K(x)`` at a single argument."""

    x: float
    values: tuple[float, ...]

    @property
    def K(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, k):
        return self.values[k]

    def __len__(self):
        return len(self.values)


def _ratios(kmax, x, n_start):
    """r_k = F_k / F_{k-1} for k = 1..kmax by backward recursion from n_start."""
    r = 0.0
    out = [0.0] * (kmax + 1)
    for k in range(n_start + 1, 1, -1):
        r = 1.0 / (0.5 * k * r - x)
        if k - 1 <= kmax:
            out[k - 1] = r
    return out


def _miller_start(kmax, x):
    root = math.sqrt(2.0 * (kmax + 1)) + 25.0 / x
    return max(kmax + 20, int(0.5 * root * root) + 10)


def _converged_ratios(kmax, x):
    n = _miller_start(kmax, x)
    r = _ratios(kmax, x, n)
    while True:
        n2 = n + max(20, n // 2)
        r2 = _ratios(kmax, x, n2)
        worst = max(abs(a - b) / abs(b) for a, b in zip(r[1:], r2[1:]))
        if worst <= 8.0 * _EPS:
            return r2
        if n2 > _MILLER_N_CAP:
            raise PrecisionLossError(
                f"backward recurrence for F_k({x!r}) did not settle by N={n2} "
                f"(ratio drift {worst:.2e})"
            )
        n, r = 2 * n2, _ratios(kmax, x, 2 * n2)


def _use_forward(kmax, x):
    return x <= 0.0 or x * math.sqrt(kmax + 1) <= _FORWARD_LIMIT


def _scaled_sequence(kmax, x, c):
    """Return ``[c**(k+1) * F_k(x) for k in 0..kmax]`` without forming c**k."""
    f0 = erfcx(x)
    w = [c * f0]
    if kmax == 0:
        return w
    if _use_forward(kmax, x):
        w.append(c * c * (2.0 * x * f0 - _TWO_OVER_SQRT_PI))
        c2, cx = c * c, c * x
        for k in range(2, kmax + 1):
            w.append((2.0 / k) * (c2 * w[k - 2] + cx * w[k - 1]))
    else:
        r = _converged_ratios(kmax, x)
        for k in range(1, kmax + 1):
            w.append(w[k - 1] * (c * r[k]))
    return w


def f_k(k: int, x: float, k_max: int = K_MAX) -> FSequence:
    """All orders ``F_0(x) .. F_k(x)`` of the erfcx derivative family.

    Parameters
    ----------
    k : int
        Highest order requested, ``0 <= k <= k_max``.
    x : float
        Finite real argument.
    k_max : int
        Capacity cap (default 128).

    Returns
    -------
    FSequence
        ``values[0] == erfcx(x)``; ``sign(values[j]) == (-1)**j``.
    """
    if k < 0:
        raise DomainError(f"order must be nonnegative, got {k}")
    if k > k_max:
        raise CapacityError(f"order {k} exceeds K_max={k_max}")
    _check_finite(x)
    return FSequence(x=x, values=tuple(_scaled_sequence(k, x, 1.0)))


def beta_sequence(kmax: int, z: float, lam: float, t: float, kappa: float) -> list[float]:
    """``[beta_0, ..., beta_kmax]`` at image distance ``z`` (see :func:`beta_k`)."""
    if kmax > K_MAX:
        raise CapacityError(f"order {kmax} exceeds K_max={K_MAX}")
    if not t > 0.0:
        raise DomainError(f"t must be positive, got {t!r}")
    if not kappa > 0.0:
        raise DomainError(f"kappa must be positive, got {kappa!r}")
    if lam < 0.0 or z < 0.0:
        raise DomainError("beta_k needs z >= 0 and lambda >= 0")
    if lam == 0.0:
        return [0.0] * (kmax + 1)
    root = math.sqrt(kappa * t)
    lam_t = lam * root
    x = z / (2.0 * root) + lam_t
    _check_finite(x, "scaled argument")
    seq = _scaled_sequence(kmax, x, 2.0 * lam_t)
    out = [SQRT_PI * v for v in seq]
    if not all(math.isfinite(v) for v in out):
        raise BetaOverflowError(
            f"beta_k overflow at z={z!r}, lambda_tilde={lam_t!r}, kmax={kmax}"
        )
    return out


def beta_k(k: int, z: float, lam: float, t: float, kappa: float) -> float:
    """Weighted derivative ``sqrt(pi) (2 lt)^(k+1) F_k(z / (2 sqrt(kappa t)) + lt)``.

    ``lt = lam * sqrt(kappa * t)``.  The power is folded into the recurrence,
    so the result stays finite whenever the product is, even when
    ``(2 lt)**(k+1)`` alone would overflow.
    """
    if k < 0:
        raise DomainError(f"order must be nonnegative, got {k}")
    return beta_sequence(k, z, lam, t, kappa)[k]


@lru_cache(maxsize=None)
def _comb(m, j):
    return math.comb(m, j)


def binomial(m: int, j: int, cap: int = BINOMIAL_M_MAX) -> int:
    """Exact binomial coefficient C(m, j) for ``0 <= j <= m <= cap`` (default 64)."""
    if m < 0 or j < 0 or j > m:
        raise DomainError(f"binomial({m}, {j}) undefined: need 0 <= j <= m")
    if m > cap:
        raise CapacityError(f"binomial row {m} exceeds cap {cap}")
    return _comb(m, j)
