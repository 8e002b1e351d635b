"""Design configuration: a JSON object in SI units, validated up front.

Example::

    {
      "filter": {"f0_hz": 1.4e9, "fbw": 0.034, "z0_ohm": 50, "order": 2,
                 "g1": 0.6648, "topology": "dual_band"},
      "substrate": {"eps_r": 10.7, "h_m": 1.27e-3, "tan_delta": 0.0023},
      "sweep": {"f_start_hz": 1.2e9, "f_stop_hz": 1.6e9, "n_points": 4001},
      "outputs": {"report_json": "out/report.json", "touchstone": "out/dual.s2p"}
    }

The passband ripple is given by exactly one of ``ripple_db``,
``return_loss_db`` or ``g1`` (ripple fitted so the prototype reproduces
that first element value).
"""

from __future__ import annotations

import copy
import json
import math
import os
from dataclasses import dataclass, field
from typing import Any

from .errors import DomainError, NoSolutionError, ValidationError
from .microstrip import SubstrateSpec
from .netsim import Spacing, SweepGrid
from .prototype import fit_ripple_to_g1, return_loss_from_ripple, ripple_from_return_loss
from .synthesis import CouplingModel, FilterSpec, Topology

RIPPLE_KEYS = ("ripple_db", "return_loss_db", "g1")

_SCHEMA: dict[str, dict[str, tuple]] = {
    "filter": {
        "f0_hz": (float,),
        "fbw": (float,),
        "z0_ohm": (float,),
        "order": (int,),
        "ripple_db": (float,),
        "return_loss_db": (float,),
        "g1": (float,),
        "topology": (str,),
        "q_unloaded": (float, type(None)),
        "coupling_model": (str,),
    },
    "substrate": {
        "eps_r": (float,),
        "h_m": (float,),
        "tan_delta": (float,),
        "t_metal_m": (float,),
        "sigma_s_per_m": (float,),
    },
    "sweep": {"f_start_hz": (float,), "f_stop_hz": (float,), "n_points": (int,), "spacing": (str,)},
    "metrics": {"rl_threshold_db": (float,)},
    "geometry": {"line_z0_ohm": (float,), "base_fraction": (float,)},
    "outputs": {"report_json": (str,), "touchstone": (str,), "csv": (str,)},
}
_REQUIRED = {"filter": ("f0_hz", "fbw", "z0_ohm", "order")}

DEFAULT_SUBSTRATE = {"eps_r": 10.7, "h_m": 1.27e-3, "tan_delta": 0.0023, "t_metal_m": 35e-6, "sigma_s_per_m": 5.8e7}
DEFAULT_POINTS = 4001


@dataclass(frozen=True)
class DesignConfig:
    filter: FilterSpec
    ripple_source: str
    ripple_input: float
    substrate: SubstrateSpec
    grid: SweepGrid
    rl_threshold_db: float
    line_z0_ohm: float = 50.0
    base_fraction: float = 1 / 3
    outputs: dict[str, str] = field(default_factory=dict)
    raw: dict[str, Any] = field(default_factory=dict, compare=False)


def _check_types(raw: dict) -> None:
    if not isinstance(raw, dict):
        raise ValidationError("<root>", "configuration must be a JSON object")
    unknown = sorted(set(raw) - set(_SCHEMA))
    if unknown:
        raise ValidationError(", ".join(unknown), "unknown section(s)")
    for section, body in raw.items():
        if not isinstance(body, dict):
            raise ValidationError(section, "section must be an object")
        allowed = _SCHEMA[section]
        unknown = sorted(set(body) - set(allowed))
        if unknown:
            raise ValidationError(", ".join(f"{section}.{k}" for k in unknown), "unknown key(s)")
        for key, value in body.items():
            types = allowed[key]
            ok = isinstance(value, types) and not isinstance(value, bool)
            if float in types and isinstance(value, int) and not isinstance(value, bool):
                ok = True
            if not ok:
                names = "/".join("null" if t is type(None) else t.__name__ for t in types)
                raise ValidationError(f"{section}.{key}", f"expected {names}, got {value!r}")
            if isinstance(value, float) and not math.isfinite(value):
                raise ValidationError(f"{section}.{key}", "must be finite")
    for section, keys in _REQUIRED.items():
        for key in keys:
            if key not in raw.get(section, {}):
                raise ValidationError(f"{section}.{key}", "required key missing")


def _default_threshold(ripple_db: float) -> float:
    # Ripple-level return loss floored to 0.1 dB; the equal-ripple maxima
    # then sit strictly inside the band instead of tangent to the threshold.
    return math.floor(10.0 * return_loss_from_ripple(ripple_db) - 1e-9) / 10.0


def parse_config(raw: dict) -> DesignConfig:
    """Validate a configuration mapping and resolve the ripple specification."""
    raw = copy.deepcopy(raw)
    _check_types(raw)
    filt = raw["filter"]
    given = [k for k in RIPPLE_KEYS if k in filt]
    if len(given) != 1:
        raise ValidationError("filter." + "|".join(RIPPLE_KEYS), f"give exactly one, got {given or 'none'}")
    source = given[0]

    def build(section, fn):
        try:
            return fn()
        except DomainError as exc:
            raise ValidationError(f"{section}.{exc.param}", str(exc)) from exc
        except ValueError as exc:
            raise ValidationError(section, str(exc)) from exc

    # placeholder ripple: everything else is checked before any ripple fit
    def make_filter(ripple):
        return FilterSpec(
            f0_hz=float(filt["f0_hz"]),
            fbw=float(filt["fbw"]),
            z0_ohm=float(filt["z0_ohm"]),
            order=filt["order"],
            ripple_db=ripple,
            topology=Topology(filt.get("topology", Topology.SINGLE_BAND.value)),
            q_unloaded=None if filt.get("q_unloaded") is None else float(filt["q_unloaded"]),
            coupling_model=CouplingModel(filt.get("coupling_model", CouplingModel.IDEAL_INVERTER.value)),
        )

    spec = build("filter", lambda: make_filter(1.0))
    value = float(filt[source])
    if not value > 0:
        raise ValidationError(f"filter.{source}", f"must be > 0, got {value!r}")

    substrate = build("substrate", lambda: SubstrateSpec(**{k: float(v) for k, v in {**DEFAULT_SUBSTRATE, **raw.get("substrate", {})}.items()}))
    sw = raw.get("sweep", {})
    grid = build(
        "sweep",
        lambda: SweepGrid(
            f_start=float(sw.get("f_start_hz", spec.f0_hz * 6 / 7)),
            f_stop=float(sw.get("f_stop_hz", spec.f0_hz * 8 / 7)),
            n_points=sw.get("n_points", DEFAULT_POINTS),
            spacing=Spacing(sw.get("spacing", Spacing.LINEAR.value)),
        ),
    )
    geom = raw.get("geometry", {})
    line_z0 = float(geom.get("line_z0_ohm", 50.0))
    if not line_z0 > 0:
        raise ValidationError("geometry.line_z0_ohm", "must be > 0")
    base_fraction = float(geom.get("base_fraction", 1 / 3))
    if not 0 < base_fraction < 1:
        raise ValidationError("geometry.base_fraction", "must satisfy 0 < base_fraction < 1")
    threshold = raw.get("metrics", {}).get("rl_threshold_db")
    if threshold is not None and not threshold > 0:
        raise ValidationError("metrics.rl_threshold_db", "must be > 0")
    outputs = dict(raw.get("outputs", {}))
    for key, path in outputs.items():
        if not path:
            raise ValidationError(f"outputs.{key}", "path must be non-empty")

    if source == "ripple_db":
        ripple = value
    elif source == "return_loss_db":
        ripple = ripple_from_return_loss(value)
    else:
        try:
            ripple = fit_ripple_to_g1(spec.order, value)
        except NoSolutionError as exc:
            raise ValidationError("filter.g1", str(exc)) from exc
    spec = make_filter(ripple)

    return DesignConfig(
        filter=spec,
        ripple_source=source,
        ripple_input=value,
        substrate=substrate,
        grid=grid,
        rl_threshold_db=float(threshold) if threshold is not None else _default_threshold(ripple),
        line_z0_ohm=line_z0,
        base_fraction=base_fraction,
        outputs=outputs,
        raw=raw,
    )


def load_config(path: str | os.PathLike) -> DesignConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(str(path), f"invalid JSON: {exc}") from exc
    return parse_config(raw)
