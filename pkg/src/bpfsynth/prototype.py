"""Chebyshev lowpass prototype element values and ripple conversions."""

from __future__ import annotations

import math
import sys
import warnings
from dataclasses import dataclass

from scipy.optimize import bisect

from .errors import DomainError, NoSolutionError, UnvalidatedDesignWarning

MAX_VALIDATED_ORDER = 20

# Search bracket for ripple inversion, in dB.
RIPPLE_BRACKET_DB = (1e-6, 3.0)


@dataclass(frozen=True)
class PrototypeCoefficients:
    """Normalized lowpass g-values ``g[0] .. g[order + 1]``."""

    order: int
    ripple_db: float
    g: tuple[float, ...]

    def __post_init__(self):
        if len(self.g) != self.order + 2:
            raise DomainError("g", self.g, f"length must be order + 2 = {self.order + 2}")
        if self.g[0] != 1.0:
            raise DomainError("g[0]", self.g[0], "source termination must be exactly 1")
        if any(v <= 0 for v in self.g):
            raise DomainError("g", self.g, "all values must be strictly positive")

    @property
    def validated(self) -> bool:
        return self.order <= MAX_VALIDATED_ORDER


def chebyshev_g_values(order: int, ripple_db: float) -> PrototypeCoefficients:
    """Element values of an equal-ripple lowpass prototype.

    Orders above ``MAX_VALIDATED_ORDER`` are still evaluated but emit an
    :class:`UnvalidatedDesignWarning`.
    """
    if not isinstance(order, int) or order < 1:
        raise DomainError("order", order, "must be an integer >= 1")
    if not ripple_db > 0:
        raise DomainError("ripple_db", ripple_db, "must be > 0")
    if order > MAX_VALIDATED_ORDER:
        warnings.warn(
            f"order {order} exceeds validated range 1..{MAX_VALIDATED_ORDER}",
            UnvalidatedDesignWarning,
            stacklevel=2,
        )

    n = order
    beta = math.log(1.0 / math.tanh(ripple_db / 17.37))
    gamma = math.sinh(beta / (2 * n))
    a = [math.sin((2 * k - 1) * math.pi / (2 * n)) for k in range(1, n + 1)]
    b = [gamma**2 + math.sin(k * math.pi / n) ** 2 for k in range(1, n + 1)]

    g = [1.0, 2.0 * a[0] / gamma]
    for k in range(2, n + 1):
        g.append(4.0 * a[k - 2] * a[k - 1] / (b[k - 2] * g[k - 1]))
    g.append(1.0 if n % 2 else 1.0 / math.tanh(beta / 4.0) ** 2)
    return PrototypeCoefficients(order=n, ripple_db=float(ripple_db), g=tuple(g))


def ripple_from_return_loss(rl_db: float) -> float:
    """Passband ripple (dB) equivalent to a minimum in-band return loss (dB)."""
    if not rl_db > 0:
        raise DomainError("rl_db", rl_db, "must be > 0")
    return -10.0 * math.log10(1.0 - 10.0 ** (-rl_db / 10.0))


def return_loss_from_ripple(ripple_db: float) -> float:
    if not ripple_db > 0:
        raise DomainError("ripple_db", ripple_db, "must be > 0")
    return -10.0 * math.log10(1.0 - 10.0 ** (-ripple_db / 10.0))


def fit_ripple_to_g1(order: int, g1_target: float) -> float:
    """Ripple (dB) whose prototype has ``g[1] == g1_target``.

    g1 rises monotonically with ripple, so plain bisection over
    ``RIPPLE_BRACKET_DB`` always converges when the target is bracketed.
    """
    if not isinstance(order, int) or order < 1:
        raise DomainError("order", order, "must be an integer >= 1")
    if not g1_target > 0:
        raise DomainError("g1_target", g1_target, "must be > 0")

    def residual(ripple):
        return chebyshev_g_values(order, ripple).g[1] - g1_target

    lo, hi = RIPPLE_BRACKET_DB
    r_lo, r_hi = residual(lo), residual(hi)
    if r_lo == 0:
        return lo
    if r_hi == 0:
        return hi
    if r_lo > 0 or r_hi < 0:
        raise NoSolutionError(
            f"g1={g1_target!r} unreachable for order {order}: ripple bracket "
            f"[{lo}, {hi}] dB spans g1 in [{r_lo + g1_target:.6g}, {r_hi + g1_target:.6g}]"
        )
    return bisect(residual, lo, hi, xtol=1e-15, rtol=4 * sys.float_info.epsilon, maxiter=200)
