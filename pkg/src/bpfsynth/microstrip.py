"""Quasi-static microstrip design and U-folded half-wave resonator geometry.

Uses the zero-thickness Hammerstad closed forms. Metal thickness and
conductivity are carried on the substrate record for reporting only.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

from scipy.optimize import bisect

from .errors import DomainError, NoSolutionError

C0 = 299_792_458.0
ETA0 = 120.0 * math.pi

# Width search range as W/h.
WIDTH_RATIO_BRACKET = (0.05, 20.0)


@dataclass(frozen=True)
class SubstrateSpec:
    eps_r: float
    h_m: float
    tan_delta: float = 0.0
    t_metal_m: float = 35e-6
    sigma_s_per_m: float = 5.8e7

    def __post_init__(self):
        if not self.eps_r >= 1:
            raise DomainError("eps_r", self.eps_r, "must be >= 1")
        for name in ("h_m", "t_metal_m", "sigma_s_per_m"):
            if not getattr(self, name) > 0:
                raise DomainError(name, getattr(self, name), "must be > 0")
        if not self.tan_delta >= 0:
            raise DomainError("tan_delta", self.tan_delta, "must be >= 0")

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class MicrostripLine:
    w_m: float
    z0_ohm: float
    eps_eff: float
    f_hz: float
    lambda_g_m: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class UShapeGeometry:
    total_length_m: float
    base_len_m: float
    arm_len_m: float
    trace_width_m: float
    bbox: tuple[float, float]  # (width, height)

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["bbox"] = list(self.bbox)
        return d


def effective_permittivity(u: float, eps_r: float) -> float:
    q = (1.0 + 12.0 / u) ** -0.5
    if u < 1:
        q += 0.04 * (1.0 - u) ** 2
    return (eps_r + 1.0) / 2.0 + (eps_r - 1.0) / 2.0 * q


def analyze_microstrip(w_m: float, sub: SubstrateSpec) -> tuple[float, float]:
    """Return ``(z0_ohm, eps_eff)`` for a trace of width ``w_m``."""
    if not w_m > 0:
        raise DomainError("w_m", w_m, "must be > 0")
    u = w_m / sub.h_m
    eps_eff = effective_permittivity(u, sub.eps_r)
    if u <= 1:
        z0 = 60.0 / math.sqrt(eps_eff) * math.log(8.0 / u + u / 4.0)
    else:
        z0 = ETA0 / math.sqrt(eps_eff) / (u + 1.393 + 0.667 * math.log(u + 1.444))
    return z0, eps_eff


def guided_wavelength(f_hz: float, eps_eff: float) -> float:
    if not f_hz > 0:
        raise DomainError("f_hz", f_hz, "must be > 0")
    if not eps_eff >= 1:
        raise DomainError("eps_eff", eps_eff, "must be >= 1")
    return C0 / (f_hz * math.sqrt(eps_eff))


def synthesize_width(z0_target: float, sub: SubstrateSpec, f_hz: float = 1.4e9) -> MicrostripLine:
    """Trace width giving ``z0_target``, with its guided wavelength at ``f_hz``.

    Z0 falls monotonically with width, so the width is bisected over
    ``WIDTH_RATIO_BRACKET`` to sub-nanometre resolution.
    """
    if not z0_target > 0:
        raise DomainError("z0_target", z0_target, "must be > 0")
    lo, hi = (r * sub.h_m for r in WIDTH_RATIO_BRACKET)
    z_hi_width, z_lo_width = analyze_microstrip(hi, sub)[0], analyze_microstrip(lo, sub)[0]
    if not z_hi_width <= z0_target <= z_lo_width:
        raise NoSolutionError(
            f"Z0={z0_target} ohm not achievable: range is [{z_hi_width:.4g}, {z_lo_width:.4g}] ohm "
            f"for W/h in {list(WIDTH_RATIO_BRACKET)}"
        )
    w = bisect(lambda w: analyze_microstrip(w, sub)[0] - z0_target, lo, hi, xtol=1e-13, rtol=4 * sys.float_info.epsilon, maxiter=200)
    z0, eps_eff = analyze_microstrip(w, sub)
    return MicrostripLine(w_m=w, z0_ohm=z0, eps_eff=eps_eff, f_hz=f_hz, lambda_g_m=guided_wavelength(f_hz, eps_eff))


def u_fold_geometry(line: MicrostripLine, f0: float, base_fraction: float = 1 / 3) -> UShapeGeometry:
    """Fold a half-wave line at ``f0`` into a U with two equal arms.

    Lengths are along the centerline. The bounding box adds one trace width
    to the base span (half a width outside each arm) and half a width below
    the base centerline to the arm length.
    """
    if not 0 < base_fraction < 1:
        raise DomainError("base_fraction", base_fraction, "must satisfy 0 < base_fraction < 1")
    total = guided_wavelength(f0, line.eps_eff) / 2.0
    base = base_fraction * total
    arm = (total - base) / 2.0
    w = line.w_m
    return UShapeGeometry(
        total_length_m=total,
        base_len_m=base,
        arm_len_m=arm,
        trace_width_m=w,
        bbox=(base + w, arm + w / 2.0),
    )


def electrical_size(bbox: tuple[float, float], lambda_g: float) -> tuple[float, float]:
    width, height = bbox
    if not (width > 0 and height > 0):
        raise DomainError("bbox", bbox, "both dimensions must be > 0")
    if not lambda_g > 0:
        raise DomainError("lambda_g", lambda_g, "must be > 0")
    return width / lambda_g, height / lambda_g
